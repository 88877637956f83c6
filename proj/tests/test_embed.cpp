#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "qfact/chimera.hpp"
#include "qfact/embedding.hpp"
#include "qfact/encode.hpp"
#include "qfact/ising.hpp"
#include "qfact/quadratize.hpp"
#include "qfact/solve.hpp"
#include "test_util.hpp"

using namespace qfact;
using test_util::Gen;

namespace {
IsingModel model_15() { return to_ising(quadratize(encode_direct(15, 2, 3)).cf); }
IsingModel model_143() { return to_ising(quadratize(encode_table(build_block_system(143, 4, 4))).cf); }

// exhaustive ground set of a physical model restricted to its support
std::pair<Rat, std::vector<std::vector<int>>> ground_over_support(
    const IsingModel& phys, const std::vector<std::uint32_t>& support) {
    REQUIRE(support.size() <= 24);
    std::vector<int> spins(phys.n_spins, 1);
    Rat best;
    std::vector<std::vector<int>> args;
    const std::uint64_t total = 1ull << support.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t k = 0; k < support.size(); ++k)
            spins[support[k]] = (mask >> k) & 1 ? -1 : 1;
        Rat e = phys.energy(spins, true);
        if (args.empty() || e < best) {
            best = e;
            args.assign(1, spins);
        } else if (e == best) {
            args.push_back(spins);
        }
    }
    return {best, args};
}
}  // namespace

TEST_CASE("chimera graph shapes") {
    ChimeraGraph one = build_chimera(1, 1, 4);
    CHECK(one.num_nodes() == 8);
    CHECK(one.num_edges() == 16);

    ChimeraGraph full = build_chimera(16, 16, 4);
    CHECK(full.num_nodes() == 2048);
    std::size_t max_deg = 0;
    for (const auto& list : full.adj) max_deg = std::max(max_deg, list.size());
    CHECK(max_deg == 6);  // t + 2

    ChimeraGraph two = build_chimera(2, 1, 4);
    CHECK(two.num_nodes() == 16);
    CHECK(two.num_edges() == 36);
}

TEST_CASE("grouped embedding of the 143 model") {
    ChimeraGraph hw = build_chimera(16, 16, 4);
    IsingModel m = model_143();
    Embedding emb = embed_grouped(m, hw);

    REQUIRE(emb.chains.size() == 12);
    for (const auto& chain : emb.chains) CHECK(chain.size() == 4);

    std::string why;
    CHECK(check_embedding(m, hw, emb, &why));

    // complete logical connectivity: all 66 pairs share a physical edge
    for (std::uint32_t i = 0; i < 12; ++i) {
        for (std::uint32_t j = i + 1; j < 12; ++j) {
            bool touch = false;
            for (auto a : emb.chains[i])
                for (auto b : emb.chains[j]) touch |= hw.adjacent(a, b);
            CHECK(touch);
        }
    }
}

TEST_CASE("grouped embedding at smaller scales") {
    ChimeraGraph hw = build_chimera(16, 16, 4);
    IsingModel m15 = model_15();
    Embedding emb = embed_grouped(m15, hw);
    REQUIRE(emb.chains.size() == 4);
    for (const auto& chain : emb.chains) CHECK(chain.size() == 4);
    CHECK(check_embedding(m15, hw, emb));

    IsingModel single;
    single.n_spins = 1;
    single.h = {Rat(6)};
    Embedding one = embed_grouped(single, hw);
    REQUIRE(one.chains.size() == 1);
    CHECK(one.chains[0].size() == 4);

    IsingModel big;
    big.n_spins = 13;
    big.h.assign(13, Rat(1));
    CHECK_THROWS_AS(embed_grouped(big, hw), TooLargeError);
}

TEST_CASE("heuristic embedding on a single cell") {
    ChimeraGraph cell = build_chimera(1, 1, 4);
    IsingModel m = model_15();
    Embedding emb = embed_heuristic(m, cell, 1);
    CHECK(check_embedding(m, cell, emb));
    CHECK(emb.max_chain_size() <= 2);
}

TEST_CASE("heuristic embedding fails on an empty graph") {
    ChimeraGraph empty = build_chimera(0, 0, 4);
    IsingModel m = model_15();
    CHECK_THROWS_AS(embed_heuristic(m, empty, 1, 4), NoEmbeddingFoundError);
}

TEST_CASE("heuristic embedding covers the dense 59-variable model") {
    IsingModel m = to_ising(quadratize(encode_table(build_block_system(59989, 8, 8))).cf);
    REQUIRE(m.n_spins == 59);
    ChimeraGraph hw = build_chimera(16, 16, 4);
    Embedding emb = embed_heuristic(m, hw, 1);
    std::string why;
    CHECK(check_embedding(m, hw, emb, &why));
    // a fixed seed reproduces the same embedding
    Embedding again = embed_heuristic(m, hw, 1);
    CHECK(emb.chains == again.chains);
}

TEST_CASE("heuristic embedding handles random sparse models") {
    Gen gen(37);
    ChimeraGraph hw = build_chimera(4, 4, 4);
    for (int trial = 0; trial < 8; ++trial) {
        IsingModel m;
        m.n_spins = 6 + std::uint32_t(gen.next(6));
        m.h.assign(m.n_spins, Rat(1));
        for (std::uint32_t i = 0; i < m.n_spins; ++i)
            for (std::uint32_t j = i + 1; j < m.n_spins; ++j)
                if (gen.next(3) == 0) m.add_coupling(i, j, gen.coeff(-5, 5));
        Embedding emb = embed_heuristic(m, hw, trial);
        std::string why;
        CHECK(check_embedding(m, hw, emb, &why));
    }
}

TEST_CASE("parameter setting splits fields and pins chain couplings") {
    ChimeraGraph hw = build_chimera(16, 16, 4);
    IsingModel m = model_143();
    Embedding emb = embed_grouped(m, hw);
    IsingModel phys = set_parameters(m, hw, emb);

    CHECK(m.max_abs_parameter() == 148);

    for (std::uint32_t v = 0; v < m.n_spins; ++v) {
        Rat sum = 0;
        for (auto q : emb.chains[v]) {
            CHECK(phys.h[q] == m.h[v] / 4);
            sum += phys.h[q];
        }
        CHECK(sum == m.h[v]);
        // intra-chain couplers all get the strong ferromagnetic value
        for (auto a : emb.chains[v])
            for (auto b : emb.chains[v])
                if (a < b && hw.adjacent(a, b)) CHECK(phys.coupling(a, b) == -148);
    }

    // every logical coupling appears exactly once at full strength
    Rat logical_total = 0, physical_total = 0;
    for (const auto& [k, v] : m.J) logical_total += v;
    std::set<std::pair<std::uint32_t, std::uint32_t>> intra;
    for (std::uint32_t v = 0; v < m.n_spins; ++v)
        for (auto a : emb.chains[v])
            for (auto b : emb.chains[v])
                if (a < b && hw.adjacent(a, b)) intra.insert({a, b});
    for (const auto& [k, v] : phys.J)
        if (!intra.count(k)) physical_total += v;
    CHECK(logical_total == physical_total);
}

TEST_CASE("parameter setting for the 15 model uses its largest parameter") {
    ChimeraGraph hw = build_chimera(16, 16, 4);
    IsingModel m = model_15();
    CHECK(m.max_abs_parameter() == 80);
    Embedding emb = embed_grouped(m, hw);
    IsingModel phys = set_parameters(m, hw, emb);
    for (auto a : emb.chains[0])
        for (auto b : emb.chains[0])
            if (a < b && hw.adjacent(a, b)) CHECK(phys.coupling(a, b) == -80);
}

TEST_CASE("field split on a single-variable model") {
    ChimeraGraph hw = build_chimera(3, 3, 4);
    IsingModel m;
    m.n_spins = 1;
    m.h = {Rat(6)};
    Embedding emb = embed_grouped(m, hw);
    IsingModel phys = set_parameters(m, hw, emb);
    for (auto q : emb.chains[0]) CHECK(phys.h[q] == Rat(3, 2));
}

TEST_CASE("couplings can be split across all carriers") {
    ChimeraGraph hw = build_chimera(16, 16, 4);
    IsingModel m = model_15();
    Embedding emb = embed_grouped(m, hw);
    ParameterOptions opts;
    opts.split_couplings = true;
    IsingModel phys = set_parameters(m, hw, emb, opts);
    for (const auto& [key, value] : m.J) {
        Rat total = 0;
        for (auto a : emb.chains[key.first])
            for (auto b : emb.chains[key.second])
                if (hw.adjacent(a, b)) total += phys.coupling(a, b);
        CHECK(total == value);
    }
}

TEST_CASE("support restriction keeps energies and ground states") {
    ChimeraGraph hw = build_chimera(3, 3, 4);
    IsingModel m = model_15();
    Embedding emb = embed_grouped(m, hw);
    IsingModel phys = set_parameters(m, hw, emb);
    auto support = emb.used_qubits();
    IsingModel sub = restrict_to_support(phys, support);
    CHECK(sub.n_spins == support.size());

    ExactResult ex = solve_exact(sub, 26);
    for (const auto& s : ex.ground_spins) {
        auto full = expand_from_support(s, support, phys.n_spins);
        CHECK(phys.energy(full, true) == ex.ground_energy);
        auto [logical, breaks] = unembed(full, emb);
        CHECK(breaks == 0);
        CHECK(m.energy(logical, true) == 0);
    }
}

TEST_CASE("unembedding majority vote and tie rule") {
    Embedding emb;
    emb.chains = {{0, 1, 2, 3}};
    std::vector<int> sample{1, 1, 1, 1};
    auto [spins_a, breaks_a] = unembed(sample, emb);
    CHECK(spins_a == std::vector<int>{1});
    CHECK(breaks_a == 0);

    sample = {1, 1, -1, 1};
    auto [spins_b, breaks_b] = unembed(sample, emb);
    CHECK(spins_b == std::vector<int>{1});
    CHECK(breaks_b == 1);

    sample = {1, 1, -1, -1};
    auto [spins_c, breaks_c] = unembed(sample, emb);
    CHECK(spins_c == std::vector<int>{1});
    CHECK(breaks_c == 1);
}

TEST_CASE("physical ground states are chain-intact and recover the logical set") {
    // small instances embedded on hardware with at most 24 active qubits
    std::vector<IsingModel> models;
    models.push_back(model_15());
    models.push_back(to_ising(quadratize(encode_direct(21, 2, 3)).cf));
    models.push_back(to_ising(quadratize(encode_direct(9, 2, 2)).cf));

    for (std::size_t idx = 0; idx < models.size(); ++idx) {
        const IsingModel& m = models[idx];
        ChimeraGraph hw = build_chimera(2, 1, 4);
        Embedding emb = embed_heuristic(m, hw, 11 + idx);
        REQUIRE(check_embedding(m, hw, emb));
        IsingModel phys = set_parameters(m, hw, emb);

        ExactResult logical = solve_exact(m);
        std::set<std::vector<int>> logical_set(logical.ground_spins.begin(),
                                               logical.ground_spins.end());

        auto [phys_best, phys_args] = ground_over_support(phys, emb.used_qubits());
        std::set<std::vector<int>> projected;
        for (const auto& sample : phys_args) {
            auto [spins, breaks] = unembed(sample, emb);
            CHECK(breaks == 0);
            projected.insert(spins);
        }
        CHECK(projected == logical_set);
    }
}

TEST_CASE("validity checker rejects broken embeddings") {
    ChimeraGraph hw = build_chimera(2, 2, 4);
    IsingModel m = model_15();
    Embedding emb = embed_heuristic(m, hw, 3);
    REQUIRE(check_embedding(m, hw, emb));

    Embedding overlapping = emb;
    overlapping.chains[1] = overlapping.chains[0];
    CHECK_FALSE(check_embedding(m, hw, overlapping));

    Embedding disconnected = emb;
    disconnected.chains[0] = {0, 15};  // opposite shores, no edge on (2,2,4)? ensure non-adjacent
    if (hw.adjacent(0, 15)) disconnected.chains[0] = {0, 9};
    CHECK_FALSE(check_embedding(m, hw, disconnected));

    CHECK_THROWS_AS(set_parameters(m, hw, overlapping), InvalidEmbeddingError);
}
