#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qfact/encode.hpp"
#include "qfact/polynomial.hpp"
#include "qfact/registry.hpp"

namespace qfact {

/// Records which product each ancilla replaces and the accumulated penalty
/// weight (sum of 2|a| over the reduced terms routed through it).
struct SubstitutionLedger {
    struct Entry {
        VarId a = 0, b = 0;
        VarId ancilla = 0;
        Rat penalty_weight;
    };
    std::vector<Entry> entries;

    std::optional<VarId> find(VarId a, VarId b) const {
        VarId lo = std::min(a, b), hi = std::max(a, b);
        for (const auto& e : entries)
            if (e.a == lo && e.b == hi) return e.ancilla;
        return std::nullopt;
    }
    Entry& entry_for(VarId ancilla) {
        for (auto& e : entries)
            if (e.ancilla == ancilla) return e;
        throw InternalError("no ledger entry for ancilla");
    }
    bool empty() const { return entries.empty(); }
};

struct QuadratizeResult {
    CostFunction cf;
    SubstitutionLedger ledger;
};

namespace detail {

// min(x_a x_b ...) carries over to the ancilla form through the penalty
// w*(x_a x_b - 2 x_a t - 2 x_b t + 3 t), which is 0 when t = x_a x_b and
// >= w otherwise.
inline void add_penalty(Poly& poly, VarId a, VarId b, VarId t, const Rat& w) {
    poly.add_term({a, b}, w);
    poly.add_term({a, t}, -2 * w);
    poly.add_term({b, t}, -2 * w);
    poly.add_term({t}, 3 * w);
}

struct VarRole {
    VarKind kind;
    std::uint32_t index;
};

}  // namespace detail

/// Table-method reduction. Every product p_i*q_j inside a cubic or quartic
/// term is replaced by its ancilla t_ij; among the candidate products of a
/// term the one with the smallest (i, j) is substituted first, and a quartic
/// p_i p_k q_j q_l therefore becomes t_(i,j) * t_(k,l) with i<k, j<l.
/// Ancilla ids are assigned row by row over i with the j direction
/// alternating, which matches the worked examples shipped as presets.
inline QuadratizeResult quadratize_table(const CostFunction& cf) {
    QuadratizeResult out;
    out.cf = cf;
    if (cf.poly.degree() <= 2) return out;
    if (cf.poly.degree() > 4) throw DegreeTooHighError("table cost should be at most quartic");

    std::vector<detail::VarRole> role(cf.registry.size() + 1, {VarKind::ancilla, 0});
    std::vector<std::vector<VarId>> p_by_index, q_by_index;
    std::uint32_t max_pi = 0, max_qj = 0;
    for (const auto& e : cf.registry.entries()) {
        role[e.id] = {e.kind, e.index};
        if (e.kind == VarKind::factor_p) max_pi = std::max(max_pi, e.index);
        if (e.kind == VarKind::factor_q) max_qj = std::max(max_qj, e.index);
    }
    std::vector<VarId> p_var(max_pi + 1, 0), q_var(max_qj + 1, 0);
    for (const auto& e : cf.registry.entries()) {
        if (e.kind == VarKind::factor_p) p_var[e.index] = e.id;
        if (e.kind == VarKind::factor_q) q_var[e.index] = e.id;
    }

    // Reduces one term, calling use(pi, qj) for every substitution step.
    auto reduce_term = [&](const TermKey& key, auto&& use) {
        TermKey cur = key;
        // substituted ancillas (and the dry pass placeholder 0) fall outside
        // the original registry and never form a new product pair
        auto is_role = [&](VarId v, VarKind k) { return v < role.size() && role[v].kind == k; };
        while (cur.size() >= 3) {
            std::optional<std::pair<std::uint32_t, std::uint32_t>> best;
            for (VarId v : cur) {
                if (!is_role(v, VarKind::factor_p)) continue;
                for (VarId w : cur) {
                    if (!is_role(w, VarKind::factor_q)) continue;
                    std::pair<std::uint32_t, std::uint32_t> cand{role[v].index, role[w].index};
                    if (!best || cand < *best) best = cand;
                }
            }
            if (!best)
                throw InternalError("higher-order table term without a p*q product");
            VarId pv = p_var[best->first], qv = q_var[best->second];
            VarId t = use(best->first, best->second, pv, qv);
            cur.erase(std::remove(cur.begin(), cur.end(), pv), cur.end());
            cur.erase(std::remove(cur.begin(), cur.end(), qv), cur.end());
            cur.push_back(t);
            std::sort(cur.begin(), cur.end());
        }
        return cur;
    };

    // Dry pass: find which products the rule actually touches.
    std::vector<std::vector<char>> used(max_pi + 1, std::vector<char>(max_qj + 1, 0));
    for (const auto& [key, c] : cf.poly.terms()) {
        if (key.size() < 3) continue;
        reduce_term(key, [&](std::uint32_t i, std::uint32_t j, VarId, VarId) {
            used[i][j] = 1;
            return VarId(0);  // placeholder; ids are not needed in the dry pass
        });
    }

    // Allocate ancillas in the preset order: i ascending, j alternating.
    std::vector<std::vector<VarId>> anc(max_pi + 1, std::vector<VarId>(max_qj + 1, 0));
    std::uint32_t anc_no = 0;
    for (std::uint32_t i = 1; i <= max_pi; ++i) {
        bool ascending = (i % 2 == 1);
        for (std::uint32_t step = 1; step <= max_qj; ++step) {
            std::uint32_t j = ascending ? step : max_qj + 1 - step;
            if (!used[i][j]) continue;
            ++anc_no;
            VarId t = out.cf.registry.add_ancilla(p_var[i], q_var[j], anc_no,
                                                  "t" + std::to_string(anc_no));
            anc[i][j] = t;
            out.ledger.entries.push_back({p_var[i], q_var[j], t, Rat(0)});
        }
    }

    // Real pass.
    Poly reduced;
    for (const auto& [key, c] : cf.poly.terms()) {
        if (key.size() < 3) {
            reduced.add_term(key, c);
            continue;
        }
        Rat w = 2 * (c < 0 ? Rat(-c) : c);
        TermKey final_key = reduce_term(key, [&](std::uint32_t i, std::uint32_t j, VarId pv, VarId qv) {
            VarId t = anc[i][j];
            detail::add_penalty(reduced, pv, qv, t, w);
            out.ledger.entry_for(t).penalty_weight += w;
            return t;
        });
        reduced.add_term(final_key, c);
    }
    out.cf.poly = std::move(reduced);
    return out;
}

/// General reduction for polynomials of degree <= 4: repeatedly substitute the
/// pair occurring in the most cubic/quartic terms (ties broken toward the
/// smallest id pair).
inline QuadratizeResult quadratize_greedy(const CostFunction& cf) {
    QuadratizeResult out;
    out.cf = cf;
    if (cf.poly.degree() <= 2) return out;
    if (cf.poly.degree() > 4)
        throw DegreeTooHighError("cannot reduce terms of degree above 4");

    Poly work = cf.poly;
    while (true) {
        std::map<std::pair<VarId, VarId>, std::size_t> freq;
        for (const auto& [key, c] : work.terms()) {
            if (key.size() < 3) continue;
            for (std::size_t x = 0; x < key.size(); ++x)
                for (std::size_t y = x + 1; y < key.size(); ++y) freq[{key[x], key[y]}]++;
        }
        if (freq.empty()) break;

        std::pair<VarId, VarId> best_pair{0, 0};
        std::size_t best_count = 0;
        for (const auto& [pair, count] : freq) {
            if (count > best_count) {
                best_count = count;
                best_pair = pair;
            }
        }
        auto [a, b] = best_pair;

        VarId t;
        if (auto existing = out.ledger.find(a, b)) {
            t = *existing;
        } else {
            std::uint32_t anc_no = 0;
            for (const auto& e : out.cf.registry.entries())
                if (e.kind == VarKind::ancilla) ++anc_no;
            t = out.cf.registry.add_ancilla(a, b, anc_no + 1, "t" + std::to_string(anc_no + 1));
            out.ledger.entries.push_back({a, b, t, Rat(0)});
        }

        std::vector<std::pair<TermKey, Rat>> hits;
        for (const auto& [key, c] : work.terms()) {
            if (key.size() < 3) continue;
            if (std::binary_search(key.begin(), key.end(), a) &&
                std::binary_search(key.begin(), key.end(), b))
                hits.emplace_back(key, c);
        }
        for (const auto& [key, c] : hits) {
            work.add_term(key, -c);
            TermKey replaced;
            for (VarId v : key)
                if (v != a && v != b) replaced.push_back(v);
            replaced.push_back(t);
            work.add_term(replaced, c);
            Rat w = 2 * (c < 0 ? Rat(-c) : c);
            detail::add_penalty(work, a, b, t, w);
            out.ledger.entry_for(t).penalty_weight += w;
        }
    }
    out.cf.poly = std::move(work);
    return out;
}

inline QuadratizeResult quadratize(const CostFunction& cf) {
    return cf.method == Method::table ? quadratize_table(cf) : quadratize_greedy(cf);
}

/// Fill ancilla values (t = x_a * x_b) into a partial assignment. Entries are
/// processed in creation order so chained ancillas resolve.
inline void extend_with_ancillas(const VariableRegistry& registry, std::vector<int>& bits) {
    bits.resize(registry.size() + 1, -1);
    for (const auto& e : registry.entries()) {
        if (e.kind != VarKind::ancilla) continue;
        if (bits[e.pair_a] < 0 || bits[e.pair_b] < 0)
            throw MissingVariableError("ancilla pair value missing");
        bits[e.id] = bits[e.pair_a] & bits[e.pair_b];
    }
}

// ---------------------------------------------------------------------------
// Exhaustive reduction check.
// ---------------------------------------------------------------------------

struct ReductionReport {
    bool pass = false;
    Rat min_original;
    Rat min_reduced;
    std::vector<int> counterexample;  // reduced-side assignment, empty when pass
    std::string message;
};

/// Enumerates both polynomials (combined variable count <= 24) and confirms
/// the reduction preserves the minimum, that reduced minimizers keep every
/// ancilla consistent, and that their projections are exactly the original
/// minimizers.
inline ReductionReport verify_reduction(const CostFunction& original, const CostFunction& reduced,
                                        const SubstitutionLedger& ledger) {
    const std::size_t n_orig = original.registry.size();
    const std::size_t n_red = reduced.registry.size();
    if (n_red > 24) throw TooLargeError("verify_reduction handles at most 24 variables");
    if (n_red < n_orig) throw InternalError("reduced polynomial has fewer variables than original");

    ReductionReport rep;

    std::vector<int> bits(n_red + 1, 0);
    auto eval = [&](const Poly& poly) { return poly.evaluate(bits); };

    // Original minimum and minimizer set.
    std::vector<std::uint64_t> argmin_orig;
    Rat min_orig;
    for (std::uint64_t m = 0; m < (1ull << n_orig); ++m) {
        for (std::size_t v = 0; v < n_orig; ++v) bits[v + 1] = (m >> v) & 1;
        Rat val = eval(original.poly);
        if (argmin_orig.empty() || val < min_orig) {
            min_orig = val;
            argmin_orig.assign(1, m);
        } else if (val == min_orig) {
            argmin_orig.push_back(m);
        }
    }

    std::vector<std::uint64_t> argmin_red;
    Rat min_red;
    for (std::uint64_t m = 0; m < (1ull << n_red); ++m) {
        for (std::size_t v = 0; v < n_red; ++v) bits[v + 1] = (m >> v) & 1;
        Rat val = eval(reduced.poly);
        if (argmin_red.empty() || val < min_red) {
            min_red = val;
            argmin_red.assign(1, m);
        } else if (val == min_red) {
            argmin_red.push_back(m);
        }
    }

    rep.min_original = min_orig;
    rep.min_reduced = min_red;

    auto fail = [&](std::uint64_t m, const std::string& why) {
        rep.pass = false;
        rep.message = why;
        rep.counterexample.assign(n_red + 1, 0);
        for (std::size_t v = 0; v < n_red; ++v) rep.counterexample[v + 1] = (m >> v) & 1;
        return rep;
    };

    if (min_orig != min_red) return fail(argmin_red.front(), "minimum value changed");

    const std::uint64_t proj_mask = n_orig == 64 ? ~0ull : (1ull << n_orig) - 1;
    std::vector<std::uint64_t> projections;
    for (std::uint64_t m : argmin_red) {
        for (const auto& e : ledger.entries) {
            int ta = (m >> (e.a - 1)) & 1;
            int tb = (m >> (e.b - 1)) & 1;
            int tv = (m >> (e.ancilla - 1)) & 1;
            if (tv != (ta & tb)) return fail(m, "minimizer with inconsistent ancilla");
        }
        projections.push_back(m & proj_mask);
    }
    std::sort(projections.begin(), projections.end());
    projections.erase(std::unique(projections.begin(), projections.end()), projections.end());
    if (projections != argmin_orig)
        return fail(argmin_red.front(), "projected minimizers differ from the original set");

    rep.pass = true;
    return rep;
}

// ---------------------------------------------------------------------------
// Direct-method qubit accounting (needs the reduction, hence lives here).
// ---------------------------------------------------------------------------

inline QubitBreakdown estimate_qubits_direct(const Int& n, std::uint32_t l1, std::uint32_t l2,
                                             bool fixed_leading = false) {
    detail::check_factor_input(n, l1, l2);
    const std::uint32_t unknowns =
        (l1 - 1 - (fixed_leading ? 1 : 0)) + (l2 - 1 - (fixed_leading ? 1 : 0));
    QubitBreakdown qb;
    if (unknowns <= 24) {
        auto red = quadratize(encode_direct(n, l1, l2, fixed_leading));
        qb.factor_bits = unknowns;
        qb.ancillas = red.cf.registry.size() - unknowns;
        return qb;
    }
    qb.factor_bits = unknowns;
    qb.ancillas = std::uint64_t(l1) * (l1 - 1) / 2 + std::uint64_t(l2) * (l2 - 1) / 2;
    qb.from_formula = true;
    return qb;
}

inline QubitBreakdown estimate_qubits(const Int& n, Method method, std::uint32_t l1,
                                      std::uint32_t l2, const TableLayout* layout = nullptr) {
    return method == Method::table ? estimate_qubits_table(n, l1, l2, layout)
                                   : estimate_qubits_direct(n, l1, l2);
}

}  // namespace qfact
