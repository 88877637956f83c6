#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <thread>
#include <vector>

#include "qfact/coeff.hpp"
#include "qfact/errors.hpp"
#include "qfact/ising.hpp"

namespace qfact {

namespace detail {

// Integer view of a model: value = scaled / denom. Solvers compare energies
// exactly in the scaled domain.
struct CompiledIsing {
    std::uint32_t n = 0;
    std::vector<std::int64_t> h;
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> adj;
    std::int64_t offset = 0;
    Int denom = 1;

    Rat to_rat(std::int64_t scaled) const { return Rat(Int(scaled), denom); }
};

inline CompiledIsing compile_ising(const IsingModel& m) {
    CompiledIsing c;
    c.n = m.n_spins;
    Int denom = 1;
    auto fold_denom = [&](const Rat& r) {
        Int d = rat_den(r);
        if (denom % d != 0) denom = denom / boost::multiprecision::gcd(denom, d) * d;
    };
    for (const auto& x : m.h) fold_denom(x);
    for (const auto& [k, v] : m.J) fold_denom(v);
    fold_denom(m.offset);
    c.denom = denom;

    Int budget = 0;
    auto scaled = [&](const Rat& r) {
        Int v = rat_num(r) * (denom / rat_den(r));
        budget += abs(v);
        return v;
    };
    std::vector<Int> h_big;
    h_big.reserve(m.n_spins);
    for (const auto& x : m.h) h_big.push_back(scaled(x));
    std::map<std::pair<std::uint32_t, std::uint32_t>, Int> j_big;
    for (const auto& [k, v] : m.J) j_big.emplace(k, scaled(v));
    Int off_big = scaled(m.offset);

    if (budget > Int(std::numeric_limits<std::int64_t>::max() / 8))
        throw TooLargeError("model parameters exceed the solver's integer range");

    c.h.reserve(m.n_spins);
    for (const auto& v : h_big) c.h.push_back(static_cast<std::int64_t>(v));
    c.adj.assign(m.n_spins, {});
    for (const auto& [k, v] : j_big) {
        auto w = static_cast<std::int64_t>(v);
        c.adj[k.first].emplace_back(k.second, w);
        c.adj[k.second].emplace_back(k.first, w);
    }
    c.offset = static_cast<std::int64_t>(off_big);
    return c;
}

// splitmix64; used to derive independent per-restart generators.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact ground states by enumeration.
// ---------------------------------------------------------------------------

struct ExactResult {
    Rat ground_energy;  // offset included
    std::vector<std::vector<int>> ground_spins;
};

/// Gray-code sweep over all 2^n spin vectors; returns the exact minimum and
/// the complete set of minimizers.
inline ExactResult solve_exact(const IsingModel& m, std::uint32_t limit = 26) {
    if (m.n_spins > limit)
        throw TooLargeError("exact enumeration limited to " + std::to_string(limit) + " spins");
    auto c = detail::compile_ising(m);
    const std::uint32_t n = c.n;

    std::vector<int> spins(n, 1);
    std::vector<std::int64_t> field = c.h;  // h_i + sum_j J_ij s_j
    std::int64_t energy = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        energy += c.h[i];
        for (const auto& [j, w] : c.adj[i])
            if (j > i) energy += w;
        for (const auto& [j, w] : c.adj[i]) field[i] += w;  // all spins start at +1
    }

    std::int64_t best = energy;
    std::vector<std::vector<int>> arg{spins};

    const std::uint64_t total = n >= 64 ? 0 : (1ull << n);
    for (std::uint64_t k = 1; k < total; ++k) {
        const std::uint32_t f = static_cast<std::uint32_t>(__builtin_ctzll(k));
        energy -= 2 * std::int64_t(spins[f]) * field[f];
        spins[f] = -spins[f];
        const std::int64_t delta = 2 * spins[f];
        for (const auto& [j, w] : c.adj[f]) field[j] += w * delta;
        if (energy < best) {
            best = energy;
            arg.clear();
            arg.push_back(spins);
        } else if (energy == best) {
            arg.push_back(spins);
        }
    }

    ExactResult r;
    r.ground_energy = c.to_rat(best + c.offset);
    std::sort(arg.begin(), arg.end());
    r.ground_spins = std::move(arg);
    return r;
}

// ---------------------------------------------------------------------------
// Simulated annealing.
// ---------------------------------------------------------------------------

struct SaParams {
    std::uint64_t samples = 1000;  // independent restarts
    std::uint32_t sweeps = 1000;
    double t_hot = 0;   // 0: use the model's largest |parameter|
    double t_cold = 0.1;
    std::uint64_t seed = 0;
    std::uint32_t threads = 1;
};

struct SampleRecord {
    std::vector<int> spins;
    Rat energy;  // offset included
    std::uint64_t count = 0;
};

struct SampleSet {
    std::vector<SampleRecord> records;  // ascending energy, then spins
    std::uint64_t samples = 0;
    SaParams params;

    const SampleRecord& best() const {
        if (records.empty()) throw InternalError("empty sample set");
        return records.front();
    }
};

/// Metropolis single-spin-flip annealer with a geometric temperature ladder.
/// Every restart runs from its own counter-derived generator, so results are
/// identical no matter how restarts are scheduled across threads.
inline SampleSet sample_sa(const IsingModel& m, const SaParams& params) {
    if (params.samples < 1) throw InternalError("sample count must be >= 1");
    auto c = detail::compile_ising(m);
    const std::uint32_t n = c.n;

    SaParams effective = params;
    if (effective.t_hot <= 0) {
        effective.t_hot = rat_to_double(m.max_abs_parameter());
        if (effective.t_hot <= 0) effective.t_hot = 1.0;
    }
    if (effective.t_cold <= 0) effective.t_cold = 0.1;

    const double denom_d = static_cast<double>(c.denom);
    std::vector<double> inv_t(effective.sweeps);
    if (effective.sweeps == 1) {
        inv_t[0] = 1.0 / (effective.t_hot * denom_d);
    } else {
        const double ratio = effective.t_cold / effective.t_hot;
        for (std::uint32_t s = 0; s < effective.sweeps; ++s) {
            double frac = double(s) / double(effective.sweeps - 1);
            inv_t[s] = 1.0 / (effective.t_hot * std::pow(ratio, frac) * denom_d);
        }
    }

    using Key = std::vector<int>;
    std::map<Key, std::uint64_t> tally;

    auto run_restart = [&](std::uint64_t r, std::vector<int>& spins,
                           std::vector<std::int64_t>& field) {
        detail::Rng rng(detail::mix64(effective.seed ^ detail::mix64(r + 1)));
        for (std::uint32_t i = 0; i < n; ++i) spins[i] = (rng.next() & 1) ? -1 : 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            field[i] = c.h[i];
            for (const auto& [j, w] : c.adj[i]) field[i] += spins[j] > 0 ? w : -w;
        }
        for (std::uint32_t s = 0; s < effective.sweeps; ++s) {
            const double beta = inv_t[s];
            for (std::uint32_t i = 0; i < n; ++i) {
                const std::int64_t delta = -2 * std::int64_t(spins[i]) * field[i];
                if (delta > 0) {
                    const double arg = double(delta) * beta;
                    if (arg > 44.0) continue;  // acceptance below the rng resolution
                    if (rng.uniform() >= std::exp(-arg)) continue;
                }
                spins[i] = -spins[i];
                const std::int64_t step = 2 * spins[i];
                for (const auto& [j, w] : c.adj[i]) field[j] += w * step;
            }
        }
    };

    const std::uint32_t threads = std::max<std::uint32_t>(1, effective.threads);
    if (threads == 1) {
        std::vector<int> spins(n);
        std::vector<std::int64_t> field(n);
        for (std::uint64_t r = 0; r < effective.samples; ++r) {
            run_restart(r, spins, field);
            ++tally[spins];
        }
    } else {
        std::vector<std::map<Key, std::uint64_t>> partial(threads);
        std::vector<std::thread> pool;
        for (std::uint32_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                std::vector<int> spins(n);
                std::vector<std::int64_t> field(n);
                for (std::uint64_t r = t; r < effective.samples; r += threads) {
                    run_restart(r, spins, field);
                    ++partial[t][spins];
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& p : partial)
            for (auto& [k, v] : p) tally[k] += v;
    }

    SampleSet out;
    out.samples = effective.samples;
    out.params = effective;
    out.records.reserve(tally.size());
    for (auto& [spins, count] : tally) {
        SampleRecord rec;
        rec.spins = spins;
        rec.energy = m.energy(spins, true);
        rec.count = count;
        out.records.push_back(std::move(rec));
    }
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const SampleRecord& a, const SampleRecord& b) {
                         if (a.energy != b.energy) return a.energy < b.energy;
                         return a.spins < b.spins;
                     });
    return out;
}

}  // namespace qfact
