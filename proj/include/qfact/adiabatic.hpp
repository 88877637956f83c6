#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qfact/coeff.hpp"
#include "qfact/errors.hpp"
#include "qfact/ising.hpp"
#include "qfact/solve.hpp"

namespace qfact {

/// Linear interpolation schedule s(t) = t/T over dimensionless time.
struct AnnealSchedule {
    double total_time = 1.0;
    std::uint32_t steps = 1;
};

struct EvolveResult {
    std::vector<std::complex<double>> state;
    double success_probability = 0.0;
    double norm_error = 0.0;
    std::uint32_t steps = 0;
};

namespace detail {

constexpr std::uint32_t kMaxEvolveSpins = 14;
constexpr std::uint32_t kMaxGapSpins = 12;

/// Diagonal of the problem Hamiltonian in the computational basis. Bit k of
/// the index gives spin k: 0 -> +1, 1 -> -1. The offset is not part of the
/// dynamics.
inline std::vector<double> problem_diagonal(const IsingModel& m) {
    const std::uint32_t n = m.n_spins;
    std::vector<double> diag(std::size_t(1) << n, 0.0);
    std::vector<double> h(n);
    for (std::uint32_t i = 0; i < n; ++i) h[i] = rat_to_double(m.h[i]);
    for (std::uint64_t b = 0; b < diag.size(); ++b) {
        double e = 0;
        for (std::uint32_t i = 0; i < n; ++i) e += (b >> i) & 1 ? -h[i] : h[i];
        diag[b] = e;
    }
    for (const auto& [k, v] : m.J) {
        const double w = rat_to_double(v);
        const std::uint64_t mask = (1ull << k.first) | (1ull << k.second);
        for (std::uint64_t b = 0; b < diag.size(); ++b) {
            int par = __builtin_popcountll(b & mask) & 1;
            diag[b] += par ? -w : w;  // aligned spins iff an even bit count
        }
    }
    return diag;
}

// exp(i phi sigma_x) applied on every qubit: the propagator of -H_B for
// duration phi.
inline void apply_transverse(std::vector<std::complex<double>>& psi, std::uint32_t n, double phi) {
    const std::complex<double> c(std::cos(phi), 0.0), is(0.0, std::sin(phi));
    for (std::uint32_t k = 0; k < n; ++k) {
        const std::uint64_t bit = 1ull << k;
        for (std::uint64_t b = 0; b < psi.size(); ++b) {
            if (b & bit) continue;
            const auto lo = psi[b], hi = psi[b | bit];
            psi[b] = c * lo + is * hi;
            psi[b | bit] = is * lo + c * hi;
        }
    }
}

inline void apply_problem_phase(std::vector<std::complex<double>>& psi,
                                const std::vector<double>& diag, double theta) {
    for (std::uint64_t b = 0; b < psi.size(); ++b)
        psi[b] *= std::complex<double>(std::cos(theta * diag[b]), -std::sin(theta * diag[b]));
}

}  // namespace detail

inline std::vector<std::uint64_t> ground_basis_states(const IsingModel& m) {
    ExactResult ex = solve_exact(m);
    std::vector<std::uint64_t> out;
    out.reserve(ex.ground_spins.size());
    for (const auto& spins : ex.ground_spins) {
        std::uint64_t b = 0;
        for (std::uint32_t k = 0; k < m.n_spins; ++k)
            if (spins[k] < 0) b |= 1ull << k;
        out.push_back(b);
    }
    return out;
}

/// Integrate the interpolation from the transverse-field ground state (the
/// uniform superposition) to the problem Hamiltonian. Each step freezes the
/// Hamiltonian at its midpoint and applies a fourth-order unitary splitting,
/// so the norm is conserved to rounding.
inline EvolveResult evolve(const IsingModel& m, const AnnealSchedule& sched) {
    if (m.n_spins > detail::kMaxEvolveSpins)
        throw TooLargeError("state-vector evolution limited to " +
                            std::to_string(detail::kMaxEvolveSpins) + " spins");
    if (sched.steps < 1) throw InternalError("schedule needs at least one step");

    const std::uint32_t n = m.n_spins;
    const std::uint64_t dim = 1ull << n;
    std::vector<std::complex<double>> psi(dim, std::complex<double>(1.0 / std::sqrt(double(dim)), 0.0));

    EvolveResult res;
    res.steps = sched.steps;

    if (sched.total_time > 0) {
        const std::vector<double> diag = detail::problem_diagonal(m);
        const double dt = sched.total_time / sched.steps;
        // Suzuki composition of three symmetric splittings.
        const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
        const double w0 = 1.0 - 2.0 * w1;
        const double weights[3] = {w1, w0, w1};
        for (std::uint32_t step = 0; step < sched.steps; ++step) {
            const double s_mid = (step + 0.5) / sched.steps;
            const double a = 1.0 - s_mid, b = s_mid;
            for (double w : weights) {
                const double h = w * dt;
                detail::apply_transverse(psi, n, 0.5 * a * h);
                detail::apply_problem_phase(psi, diag, b * h);
                detail::apply_transverse(psi, n, 0.5 * a * h);
            }
        }
    }

    double norm2 = 0;
    for (const auto& amp : psi) norm2 += std::norm(amp);
    res.norm_error = std::abs(std::sqrt(norm2) - 1.0);
    if (res.norm_error > 1e-9)
        throw NonUnitaryDriftError("state norm drifted by " + std::to_string(res.norm_error));

    double success = 0;
    for (auto b : ground_basis_states(m)) success += std::norm(psi[b]);
    res.success_probability = success;
    res.state = std::move(psi);
    return res;
}

/// Doubles the step count until the success probability moves by less than
/// `tol` when the step is halved.
inline EvolveResult evolve_auto(const IsingModel& m, double total_time, double tol = 1e-6,
                                std::uint32_t initial_steps = 64,
                                std::uint32_t max_steps = 1u << 22) {
    AnnealSchedule sched{total_time, initial_steps};
    EvolveResult prev = evolve(m, sched);
    while (sched.steps <= max_steps / 2) {
        sched.steps *= 2;
        EvolveResult next = evolve(m, sched);
        if (std::abs(next.success_probability - prev.success_probability) < tol) return next;
        prev = std::move(next);
    }
    throw InternalError("step doubling did not converge");
}

// ---------------------------------------------------------------------------
// Spectral gap diagnostics.
// ---------------------------------------------------------------------------

inline double instantaneous_gap(const IsingModel& m, double s) {
    if (m.n_spins > detail::kMaxGapSpins)
        throw TooLargeError("dense diagonalization limited to " +
                            std::to_string(detail::kMaxGapSpins) + " spins");
    const std::uint64_t dim = 1ull << m.n_spins;
    const std::vector<double> diag = detail::problem_diagonal(m);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
        H(b, b) = s * diag[b];
        for (std::uint32_t k = 0; k < m.n_spins; ++k) H(b, b ^ (1ull << k)) = -(1.0 - s);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return ev[1] - ev[0];
}

inline std::vector<std::pair<double, double>> gap_series(const IsingModel& m,
                                                         std::uint32_t resolution) {
    if (resolution < 2) throw InternalError("gap sweep needs at least two samples");
    std::vector<std::pair<double, double>> out;
    out.reserve(resolution);
    for (std::uint32_t i = 0; i < resolution; ++i) {
        const double s = double(i) / (resolution - 1);
        out.emplace_back(s, instantaneous_gap(m, s));
    }
    return out;
}

struct MinGapResult {
    double gap = 0;
    double s = 0;
};

inline MinGapResult min_gap(const IsingModel& m, std::uint32_t resolution = 101) {
    MinGapResult best{0, 0};
    bool first = true;
    for (const auto& [s, gap] : gap_series(m, resolution)) {
        if (first || gap < best.gap) {
            best = {gap, s};
            first = false;
        }
    }
    return best;
}

inline std::string anneal_csv(const std::vector<std::pair<double, double>>& series) {
    std::ostringstream out;
    out << "T,success_probability\n";
    for (const auto& [t, p] : series) out << t << "," << p << "\n";
    return out.str();
}

inline std::string gap_csv(const std::vector<std::pair<double, double>>& series) {
    std::ostringstream out;
    out << "s,gap\n";
    for (const auto& [s, g] : series) out << s << "," << g << "\n";
    return out.str();
}

}  // namespace qfact
