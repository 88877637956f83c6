#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "qfact/encode.hpp"
#include "qfact/ising.hpp"
#include "qfact/quadratize.hpp"
#include "qfact/reference.hpp"
#include "test_util.hpp"

using namespace qfact;
using test_util::bits_from_mask;
using test_util::value_table;

namespace {
IsingModel model_15() { return to_ising(quadratize(encode_direct(15, 2, 3)).cf); }
CostFunction reduced_143() { return quadratize(encode_table(build_block_system(143, 4, 4))).cf; }
}  // namespace

TEST_CASE("15 conversion reproduces the reference fields and couplings") {
    IsingModel m = model_15();
    IsingModel ref = reference::ising_15();
    CHECK(m.h == ref.h);
    CHECK(m.J == ref.J);
    CHECK(m.offset == ref.offset);
}

TEST_CASE("143 conversion reproduces the reference tables") {
    IsingModel m = to_ising(reduced_143());
    CHECK(m.h == reference::ising_143_fields());

    std::map<std::pair<std::uint32_t, std::uint32_t>, Rat> expected;
    for (const auto& [pair, v] : reference::ising_143_couplings())
        expected[{pair.first - 1, pair.second - 1}] = v;
    CHECK(m.J == expected);
    CHECK(m.h[0] == Rat(261, 2));  // half-integer entries survive exactly
}

TEST_CASE("single-variable conversion identity") {
    Poly p = Poly::variable(1) * Rat(6);
    IsingModel m = spin_model_from_binary(p, 1, 1);
    CHECK(m.h == std::vector<Rat>{Rat(-3)});
    CHECK(m.offset == 3);
    CHECK(m.J.empty());
}

TEST_CASE("degree above two cannot convert") {
    CostFunction cf = encode_direct(15, 2, 3);
    CHECK_THROWS_AS(to_ising(cf), DegreeTooHighError);
}

TEST_CASE("energy evaluation on the 15 model") {
    IsingModel m = model_15();
    CHECK(m.energy({1, 1, 1, 1}, true) == 98);
    CHECK(m.energy({-1, 1, -1, 1}, true) == 0);

    const Rat with = m.energy({1, -1, 1, -1}, true);
    const Rat without = m.energy({1, -1, 1, -1}, false);
    CHECK(with - without == m.offset);

    CHECK_THROWS_AS(m.energy({1, 1, 1}, true), LengthMismatchError);
}

TEST_CASE("scale relation between cost and energy, both methods") {
    // direct: 2 * E(s) == f(x);  table: E(s) == 2 * f(x)
    {
        CostFunction cf = quadratize(encode_direct(15, 2, 3)).cf;
        IsingModel m = to_ising(cf);
        auto values = value_table(cf.poly, 4);
        for (std::uint64_t mask = 0; mask < 16; ++mask) {
            std::vector<int> spins(4);
            for (int k = 0; k < 4; ++k) spins[k] = (mask >> k) & 1 ? -1 : 1;
            CHECK(2 * m.energy(spins, true) == values[mask]);
        }
    }
    {
        CostFunction cf = reduced_143();
        IsingModel m = to_ising(cf);
        auto values = value_table(cf.poly, 12);
        for (std::uint64_t mask = 0; mask < 4096; ++mask) {
            std::vector<int> spins(12);
            for (int k = 0; k < 12; ++k) spins[k] = (mask >> k) & 1 ? -1 : 1;
            CHECK(m.energy(spins, true) == 2 * values[mask]);
        }
    }
}

TEST_CASE("ground states of cost and model are in bijection") {
    CostFunction cf = quadratize(encode_direct(21, 2, 3)).cf;
    IsingModel m = to_ising(cf);
    const std::uint32_t n = std::uint32_t(cf.registry.size());
    auto values = value_table(cf.poly, n);

    Rat best_model;
    std::int64_t best_cost = *std::min_element(values.begin(), values.end());
    std::vector<std::uint64_t> cost_masks, model_masks;
    bool first = true;
    for (std::uint64_t mask = 0; mask < values.size(); ++mask) {
        std::vector<int> spins(n);
        for (std::uint32_t k = 0; k < n; ++k) spins[k] = (mask >> k) & 1 ? -1 : 1;
        Rat e = m.energy(spins, true);
        if (first || e < best_model) {
            best_model = e;
            model_masks.clear();
            first = false;
        }
        if (e == best_model) model_masks.push_back(mask);
        if (values[mask] == best_cost) cost_masks.push_back(mask);
    }
    CHECK(cost_masks == model_masks);
}

TEST_CASE("the 143 model is invariant under the p/q swap") {
    IsingModel m = to_ising(reduced_143());
    // p1<->q1, p2<->q2, carries fixed, t1/t3 fixed, t2<->t4 (0-based)
    const std::vector<std::uint32_t> perm{2, 3, 0, 1, 4, 5, 6, 7, 8, 11, 10, 9};
    for (std::uint32_t i = 0; i < 12; ++i) CHECK(m.h[i] == m.h[perm[i]]);
    for (const auto& [key, v] : m.J) CHECK(m.coupling(perm[key.first], perm[key.second]) == v);
}

TEST_CASE("pipeline models stay on the half-integer lattice") {
    for (auto n : {15, 21, 35}) {
        IsingModel m = to_ising(quadratize(encode_direct(n, 2, 3 + (n > 15))).cf);
        for (const auto& x : m.h) CHECK(is_half_integer(x));
        for (const auto& [k, v] : m.J) CHECK(is_half_integer(v));
        CHECK(is_half_integer(m.offset));
    }
}

TEST_CASE("coupler list uses zero for the field rows") {
    IsingModel m = to_ising(reduced_143());
    const std::string text = to_coupler_list(m);
    CHECK(text.find("0 1 130.5") != std::string::npos);
    CHECK(text.find("0 9 -137") != std::string::npos);
    CHECK(text.find("1 3 79") != std::string::npos);
    CHECK(text.find("9 11 1") != std::string::npos);
}
