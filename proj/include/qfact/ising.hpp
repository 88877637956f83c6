#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qfact/coeff.hpp"
#include "qfact/encode.hpp"
#include "qfact/errors.hpp"
#include "qfact/polynomial.hpp"

namespace qfact {

/// Ising Hamiltonian over spins in {-1,+1}: sum h_i s_i + sum J_ij s_i s_j
/// (+ offset). Spin k corresponds to variable id k+1 under bit = (1 - s)/2.
struct IsingModel {
    std::uint32_t n_spins = 0;
    std::vector<Rat> h;                                  // size n_spins
    std::map<std::pair<std::uint32_t, std::uint32_t>, Rat> J;  // keys i<j, 0-based
    Rat offset;

    void add_coupling(std::uint32_t i, std::uint32_t j, const Rat& v) {
        if (i == j) throw InternalError("self-coupling");
        if (i > j) std::swap(i, j);
        auto [it, inserted] = J.try_emplace({i, j}, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) J.erase(it);
        }
    }

    Rat coupling(std::uint32_t i, std::uint32_t j) const {
        if (i > j) std::swap(i, j);
        auto it = J.find({i, j});
        return it == J.end() ? Rat(0) : it->second;
    }

    Rat energy(const std::vector<int>& spins, bool include_offset = true) const {
        if (spins.size() != n_spins)
            throw LengthMismatchError("spin vector length " + std::to_string(spins.size()) +
                                      " != " + std::to_string(n_spins));
        Rat e = include_offset ? offset : Rat(0);
        for (std::uint32_t i = 0; i < n_spins; ++i)
            if (spins[i] > 0)
                e += h[i];
            else
                e -= h[i];
        for (const auto& [key, v] : J) e += spins[key.first] * spins[key.second] > 0 ? v : -v;
        return e;
    }

    Rat max_abs_parameter() const {
        Rat best = 0;
        for (const auto& x : h)
            if (abs(x) > best) best = abs(x);
        for (const auto& [k, v] : J)
            if (abs(v) > best) best = abs(v);
        return best;
    }

    std::size_t coupling_count() const { return J.size(); }
};

/// Substitute x = (1 - s)/2 into a quadratic binary polynomial and scale the
/// result. Terms reference variable ids 1..n_vars.
inline IsingModel spin_model_from_binary(const Poly& poly, std::uint32_t n_vars,
                                         const Rat& scale) {
    if (poly.degree() > 2) throw DegreeTooHighError("Ising conversion needs degree <= 2");
    if (poly.max_var() > n_vars) throw InternalError("polynomial references unknown variables");

    IsingModel m;
    m.n_spins = n_vars;
    m.h.assign(n_vars, Rat(0));
    for (const auto& [key, c] : poly.terms()) {
        if (key.empty()) {
            m.offset += c;
        } else if (key.size() == 1) {
            const Rat half = c / 2;
            m.offset += half;
            m.h[key[0] - 1] -= half;
        } else {
            const Rat quarter = c / 4;
            m.offset += quarter;
            m.h[key[0] - 1] -= quarter;
            m.h[key[1] - 1] -= quarter;
            m.add_coupling(key[0] - 1, key[1] - 1, quarter);
        }
    }
    if (scale != 1) {
        for (auto& x : m.h) x *= scale;
        for (auto& [k, v] : m.J) v *= scale;
        m.offset *= scale;
    }
    for (auto it = m.J.begin(); it != m.J.end();) {
        if (it->second == 0)
            it = m.J.erase(it);
        else
            ++it;
    }
    return m;
}

/// Conversion used by the pipeline. The two methods fix different scales of
/// the raw substitution (see the bundled tables in reference.hpp): the direct
/// method halves it, the table method doubles it. Both land on the
/// half-integer lattice and keep the zero-cost states at energy zero.
inline IsingModel to_ising(const CostFunction& cf) {
    const Rat scale = cf.method == Method::direct ? Rat(1, 2) : Rat(2);
    IsingModel m =
        spin_model_from_binary(cf.poly, static_cast<std::uint32_t>(cf.registry.size()), scale);
    for (const auto& x : m.h)
        if (!is_half_integer(x)) throw InternalError("field left the half-integer lattice");
    for (const auto& [k, v] : m.J)
        if (!is_half_integer(v)) throw InternalError("coupling left the half-integer lattice");
    if (!is_half_integer(m.offset)) throw InternalError("offset left the half-integer lattice");
    return m;
}

inline std::vector<int> bits_to_spins(const std::vector<int>& bits, std::uint32_t n_vars) {
    std::vector<int> spins(n_vars);
    for (std::uint32_t v = 1; v <= n_vars; ++v) {
        if (v >= bits.size() || bits[v] < 0)
            throw MissingVariableError("assignment misses variable " + std::to_string(v));
        spins[v - 1] = bits[v] ? -1 : 1;
    }
    return spins;
}

inline std::vector<int> spins_to_bits(const std::vector<int>& spins) {
    std::vector<int> bits(spins.size() + 1, -1);
    for (std::size_t k = 0; k < spins.size(); ++k) bits[k + 1] = spins[k] < 0 ? 1 : 0;
    return bits;
}

/// Plain coupler list: `0 j value` for fields, `i j value` for couplings,
/// ids 1-based, exact decimal values.
inline std::string to_coupler_list(const IsingModel& m) {
    std::ostringstream out;
    out << "# n_spins " << m.n_spins << "\n";
    out << "# offset " << rat_to_string(m.offset) << "\n";
    for (std::uint32_t i = 0; i < m.n_spins; ++i)
        if (m.h[i] != 0) out << "0 " << (i + 1) << " " << rat_to_string(m.h[i]) << "\n";
    for (const auto& [k, v] : m.J)
        out << (k.first + 1) << " " << (k.second + 1) << " " << rat_to_string(v) << "\n";
    return out.str();
}

}  // namespace qfact
