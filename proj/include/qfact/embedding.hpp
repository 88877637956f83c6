#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qfact/chimera.hpp"
#include "qfact/coeff.hpp"
#include "qfact/errors.hpp"
#include "qfact/ising.hpp"
#include "qfact/solve.hpp"

namespace qfact {

/// Minor embedding: one chain of physical qubits per logical spin.
struct Embedding {
    std::vector<std::vector<std::uint32_t>> chains;  // indexed by logical spin, sorted

    std::size_t num_logical() const { return chains.size(); }

    std::size_t max_chain_size() const {
        std::size_t best = 0;
        for (const auto& c : chains) best = std::max(best, c.size());
        return best;
    }

    std::vector<std::uint32_t> used_qubits() const {
        std::vector<std::uint32_t> all;
        for (const auto& c : chains) all.insert(all.end(), c.begin(), c.end());
        std::sort(all.begin(), all.end());
        return all;
    }
};

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> logical_edges(const IsingModel& m) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(m.J.size());
    for (const auto& [k, v] : m.J) out.push_back(k);
    return out;
}

/// Validity per the minor-embedding definition: chains nonempty, pairwise
/// disjoint, each inducing a connected subgraph, and every logical edge
/// carried by at least one physical edge.
inline bool check_embedding(const IsingModel& model, const ChimeraGraph& hw, const Embedding& emb,
                            std::string* why = nullptr) {
    auto complain = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (emb.chains.size() != model.n_spins) return complain("chain count != logical spin count");

    std::set<std::uint32_t> seen;
    for (std::size_t v = 0; v < emb.chains.size(); ++v) {
        const auto& chain = emb.chains[v];
        if (chain.empty()) return complain("empty chain for spin " + std::to_string(v));
        for (auto q : chain) {
            if (q >= hw.num_nodes()) return complain("chain qubit outside the hardware graph");
            if (!seen.insert(q).second) return complain("chains overlap at qubit " + std::to_string(q));
        }
        // connectivity of the induced subgraph
        std::set<std::uint32_t> inside(chain.begin(), chain.end());
        std::deque<std::uint32_t> queue{chain.front()};
        std::set<std::uint32_t> reached{chain.front()};
        while (!queue.empty()) {
            auto q = queue.front();
            queue.pop_front();
            for (auto nb : hw.adj[q]) {
                if (inside.count(nb) && !reached.count(nb)) {
                    reached.insert(nb);
                    queue.push_back(nb);
                }
            }
        }
        if (reached.size() != chain.size())
            return complain("chain for spin " + std::to_string(v) + " is not connected");
    }

    for (const auto& [i, j] : logical_edges(model)) {
        bool carried = false;
        for (auto a : emb.chains[i]) {
            for (auto b : emb.chains[j]) {
                if (hw.adjacent(a, b)) {
                    carried = true;
                    break;
                }
            }
            if (carried) break;
        }
        if (!carried)
            return complain("logical edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") has no physical carrier");
    }
    return true;
}

// ---------------------------------------------------------------------------
// Group embedding: every logical spin becomes a 4-qubit chain laid out so all
// chain pairs touch, giving complete logical connectivity. Spins are split
// into ceil(n/t) groups of t wires; group a runs a horizontal arm through
// cells (a, 0..a) and a vertical arm through cells (a..2, a).
// ---------------------------------------------------------------------------

inline Embedding embed_grouped(const IsingModel& model, const ChimeraGraph& hw) {
    if (model.n_spins == 0) throw TooLargeError("nothing to embed");
    const std::uint32_t t = hw.t;
    const std::uint32_t groups = (model.n_spins + t - 1) / t;
    if (groups > 3)
        throw TooLargeError("group embedding fits at most " + std::to_string(3 * t) +
                            " spins on this hardware; use the heuristic embedder");
    if (hw.m < 3 || hw.n < groups)
        throw TooLargeError("hardware grid too small for the group embedding");

    Embedding emb;
    emb.chains.resize(model.n_spins);
    for (std::uint32_t v = 0; v < model.n_spins; ++v) {
        const std::uint32_t a = v / t, k = v % t;
        auto& chain = emb.chains[v];
        for (std::uint32_t j = 0; j <= a; ++j) chain.push_back(hw.node(a, j, 1, k));
        for (std::uint32_t i = a; i < 3; ++i) chain.push_back(hw.node(i, a, 0, k));
        std::sort(chain.begin(), chain.end());
    }
    std::string why;
    if (!check_embedding(model, hw, emb, &why)) throw InternalError("group embedding invalid: " + why);
    return emb;
}

// ---------------------------------------------------------------------------
// Randomized chain-growth heuristic with restarts. Each new chain is grown
// from a root minimizing the total free-path distance to the chains of its
// already-embedded neighbors; ties and orderings are resolved by the seeded
// generator. Falls back to a deterministic complete-graph layout when the
// random growth exhausts its restarts.
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<Embedding> grow_once(const IsingModel& model, const ChimeraGraph& hw,
                                          Rng& rng) {
    const std::uint32_t n = model.n_spins;
    const std::uint32_t V = hw.num_nodes();
    if (V == 0) return std::nullopt;

    std::vector<std::vector<std::uint32_t>> nbrs(n);
    for (const auto& [k, v] : model.J) {
        nbrs[k.first].push_back(k.second);
        nbrs[k.second].push_back(k.first);
    }

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint64_t> jitter(n);
    for (auto& x : jitter) x = rng.next();
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (nbrs[a].size() != nbrs[b].size()) return nbrs[a].size() > nbrs[b].size();
        return jitter[a] < jitter[b];
    });

    constexpr std::uint32_t kFree = ~0u;
    std::vector<std::uint32_t> owner(V, kFree);
    Embedding emb;
    emb.chains.resize(n);

    std::vector<std::uint32_t> dist(V), parent(V);
    std::vector<std::uint64_t> total(V);
    std::vector<char> feasible(V);

    for (std::uint32_t v : order) {
        std::vector<std::uint32_t> anchored;
        for (auto u : nbrs[v])
            if (!emb.chains[u].empty()) anchored.push_back(u);

        if (anchored.empty()) {
            std::vector<std::uint32_t> free;
            for (std::uint32_t q = 0; q < V; ++q)
                if (owner[q] == kFree) free.push_back(q);
            if (free.empty()) return std::nullopt;
            std::uint32_t q = free[rng.next() % free.size()];
            owner[q] = v;
            emb.chains[v] = {q};
            continue;
        }

        std::fill(total.begin(), total.end(), 0);
        std::fill(feasible.begin(), feasible.end(), 1);
        std::vector<std::vector<std::uint32_t>> parents(anchored.size());

        for (std::size_t ui = 0; ui < anchored.size(); ++ui) {
            std::fill(dist.begin(), dist.end(), kFree);
            std::fill(parent.begin(), parent.end(), kFree);
            std::deque<std::uint32_t> queue;
            for (auto cq : emb.chains[anchored[ui]]) {
                for (auto nb : hw.adj[cq]) {
                    if (owner[nb] == kFree && dist[nb] == kFree) {
                        dist[nb] = 1;
                        queue.push_back(nb);
                    }
                }
            }
            while (!queue.empty()) {
                auto q = queue.front();
                queue.pop_front();
                for (auto nb : hw.adj[q]) {
                    if (owner[nb] == kFree && dist[nb] == kFree) {
                        dist[nb] = dist[q] + 1;
                        parent[nb] = q;
                        queue.push_back(nb);
                    }
                }
            }
            for (std::uint32_t q = 0; q < V; ++q) {
                if (owner[q] != kFree) continue;
                if (dist[q] == kFree)
                    feasible[q] = 0;
                else
                    total[q] += dist[q];
            }
            parents[ui] = parent;
        }

        std::uint64_t best = ~0ull;
        std::vector<std::uint32_t> roots;
        for (std::uint32_t q = 0; q < V; ++q) {
            if (owner[q] != kFree || !feasible[q]) continue;
            if (total[q] < best) {
                best = total[q];
                roots.assign(1, q);
            } else if (total[q] == best) {
                roots.push_back(q);
            }
        }
        if (roots.empty()) return std::nullopt;
        std::uint32_t root = roots[rng.next() % roots.size()];

        std::set<std::uint32_t> chain{root};
        for (std::size_t ui = 0; ui < anchored.size(); ++ui) {
            // parents[ui] was computed before earlier paths were claimed, but
            // every path qubit joins this same chain, so reuse is harmless.
            std::uint32_t q = root;
            while (parents[ui][q] != kFree) {
                q = parents[ui][q];
                chain.insert(q);
            }
        }
        for (auto q : chain) owner[q] = v;
        emb.chains[v].assign(chain.begin(), chain.end());
    }

    std::string why;
    if (!check_embedding(model, hw, emb, &why)) return std::nullopt;
    return emb;
}

/// Complete-graph layout: group a's chains run a horizontal arm over cells
/// (a, 0..a) and a vertical arm over cells (a..g-1, a); any two chains meet
/// in exactly one cell.
inline std::optional<Embedding> clique_fallback(const IsingModel& model, const ChimeraGraph& hw) {
    const std::uint32_t t = hw.t;
    if (t == 0 || model.n_spins == 0) return std::nullopt;
    const std::uint32_t groups = (model.n_spins + t - 1) / t;
    if (hw.m < groups || hw.n < groups) return std::nullopt;
    Embedding emb;
    emb.chains.resize(model.n_spins);
    for (std::uint32_t v = 0; v < model.n_spins; ++v) {
        const std::uint32_t a = v / t, k = v % t;
        auto& chain = emb.chains[v];
        for (std::uint32_t j = 0; j <= a; ++j) chain.push_back(hw.node(a, j, 1, k));
        for (std::uint32_t i = a; i < groups; ++i) chain.push_back(hw.node(i, a, 0, k));
        std::sort(chain.begin(), chain.end());
        chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
    }
    std::string why;
    if (!check_embedding(model, hw, emb, &why)) return std::nullopt;
    return emb;
}

}  // namespace detail

inline Embedding embed_heuristic(const IsingModel& model, const ChimeraGraph& hw,
                                 std::uint64_t seed, std::uint32_t max_restarts = 32) {
    for (std::uint32_t r = 0; r < max_restarts; ++r) {
        detail::Rng rng(detail::mix64(seed ^ detail::mix64(0x10c0ffeeull + r)));
        if (auto emb = detail::grow_once(model, hw, rng)) return *emb;
    }
    if (auto emb = detail::clique_fallback(model, hw)) return *emb;
    throw NoEmbeddingFoundError("no embedding found after " + std::to_string(max_restarts) +
                                " restarts");
}

// ---------------------------------------------------------------------------
// Parameter setting and sample recovery.
// ---------------------------------------------------------------------------

struct ParameterOptions {
    // Place each logical coupling on its lowest carrying edge (default) or
    // split it equally across all carriers.
    bool split_couplings = false;
};

/// Physical model over the full hardware index space: chain fields sum to the
/// logical field, intra-chain edges get minus the largest absolute logical
/// parameter, and each logical coupling rides one carrying edge unchanged.
inline IsingModel set_parameters(const IsingModel& model, const ChimeraGraph& hw,
                                 const Embedding& emb, const ParameterOptions& opts = {}) {
    std::string why;
    if (!check_embedding(model, hw, emb, &why)) throw InvalidEmbeddingError(why);

    IsingModel phys;
    phys.n_spins = hw.num_nodes();
    phys.h.assign(phys.n_spins, Rat(0));
    phys.offset = model.offset;

    const Rat strength = model.max_abs_parameter();

    for (std::uint32_t v = 0; v < model.n_spins; ++v) {
        const auto& chain = emb.chains[v];
        const Rat share = model.h[v] / Rat(Int(chain.size()));
        for (auto q : chain) phys.h[q] += share;
        for (std::size_t x = 0; x < chain.size(); ++x)
            for (std::size_t y = x + 1; y < chain.size(); ++y)
                if (hw.adjacent(chain[x], chain[y]))
                    phys.add_coupling(chain[x], chain[y], -strength);
    }

    for (const auto& [key, value] : model.J) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> carriers;
        for (auto a : emb.chains[key.first])
            for (auto b : emb.chains[key.second])
                if (hw.adjacent(a, b))
                    carriers.emplace_back(std::min(a, b), std::max(a, b));
        std::sort(carriers.begin(), carriers.end());
        if (carriers.empty()) throw InvalidEmbeddingError("logical edge lost its carrier");
        if (opts.split_couplings) {
            const Rat share = value / Rat(Int(carriers.size()));
            for (const auto& [a, b] : carriers) phys.add_coupling(a, b, share);
        } else {
            phys.add_coupling(carriers.front().first, carriers.front().second, value);
        }
    }
    return phys;
}

/// Physical model restricted to the listed qubits (compact relabeling).
/// Parameters on other qubits must be zero.
inline IsingModel restrict_to_support(const IsingModel& phys,
                                      const std::vector<std::uint32_t>& support) {
    std::map<std::uint32_t, std::uint32_t> index;
    for (std::uint32_t k = 0; k < support.size(); ++k) index[support[k]] = k;
    IsingModel sub;
    sub.n_spins = static_cast<std::uint32_t>(support.size());
    sub.h.assign(sub.n_spins, Rat(0));
    sub.offset = phys.offset;
    for (std::uint32_t q = 0; q < phys.n_spins; ++q) {
        auto it = index.find(q);
        if (it != index.end())
            sub.h[it->second] = phys.h[q];
        else if (phys.h[q] != 0)
            throw InternalError("field on a qubit outside the support");
    }
    for (const auto& [key, v] : phys.J) {
        auto a = index.find(key.first), b = index.find(key.second);
        if (a == index.end() || b == index.end())
            throw InternalError("coupling outside the support");
        sub.add_coupling(a->second, b->second, v);
    }
    return sub;
}

/// Expand a support-indexed sample back to the full qubit space; qubits
/// outside the support read +1.
inline std::vector<int> expand_from_support(const std::vector<int>& sub_spins,
                                            const std::vector<std::uint32_t>& support,
                                            std::uint32_t n_physical) {
    std::vector<int> spins(n_physical, 1);
    for (std::uint32_t k = 0; k < support.size(); ++k) spins[support[k]] = sub_spins[k];
    return spins;
}

/// Majority vote per chain; exact ties resolve to +1. Returns the logical
/// sample and the number of broken chains.
inline std::pair<std::vector<int>, std::uint32_t> unembed(const std::vector<int>& physical,
                                                          const Embedding& emb) {
    std::vector<int> logical(emb.chains.size());
    std::uint32_t breaks = 0;
    for (std::size_t v = 0; v < emb.chains.size(); ++v) {
        int sum = 0;
        bool agree = true;
        for (auto q : emb.chains[v]) {
            if (q >= physical.size()) throw LengthMismatchError("sample does not cover chain qubit");
            sum += physical[q];
            if (physical[q] != physical[emb.chains[v].front()]) agree = false;
        }
        logical[v] = sum >= 0 ? 1 : -1;
        if (!agree) ++breaks;
    }
    return {logical, breaks};
}

}  // namespace qfact
