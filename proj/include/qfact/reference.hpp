#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qfact/ising.hpp"
#include "qfact/polynomial.hpp"

// Hand-checked parameter tables for the bundled instances (15 direct,
// 143 table). The CLI --golden mode and the test suite compare pipeline
// output against these.
namespace qfact::reference {

inline Poly poly_15_cubic() {
    Poly p;
    p.add_term({1, 2, 3}, 128);
    p.add_term({1, 2}, -56);
    p.add_term({1, 3}, -48);
    p.add_term({2, 3}, 16);
    p.add_term({1}, -52);
    p.add_term({2}, -52);
    p.add_term({3}, -96);
    p.add_term({}, 196);
    return p;
}

inline Poly poly_15_reduced() {
    Poly p;
    p.add_term({1, 2}, 200);
    p.add_term({1, 3}, -48);
    p.add_term({1, 4}, -512);
    p.add_term({2, 3}, 16);
    p.add_term({2, 4}, -512);
    p.add_term({3, 4}, 128);
    p.add_term({1}, -52);
    p.add_term({2}, -52);
    p.add_term({3}, -96);
    p.add_term({4}, 768);
    p.add_term({}, 196);
    return p;
}

inline IsingModel ising_15() {
    IsingModel m;
    m.n_spins = 4;
    m.h = {Rat(58), Rat(50), Rat(12), Rat(-80)};
    m.add_coupling(0, 1, 25);
    m.add_coupling(0, 2, -6);
    m.add_coupling(0, 3, -64);
    m.add_coupling(1, 2, 2);
    m.add_coupling(1, 3, -64);
    m.add_coupling(2, 3, 16);
    m.offset = 149;
    return m;
}

// Variable order for the 143 instance: p1 p2 q1 q2 c1 c2 c3 c4 t1 t2 t3 t4.
inline Poly poly_143_reduced() {
    Poly p;
    // linear
    p.add_term({5}, 43);
    p.add_term({6}, 120);
    p.add_term({7}, 5);
    p.add_term({8}, 44);
    p.add_term({1}, 3);
    p.add_term({2}, -11);
    p.add_term({3}, 3);
    p.add_term({4}, -11);
    p.add_term({9}, 444);
    p.add_term({10}, 252);
    p.add_term({11}, 372);
    p.add_term({12}, 252);
    // carry-carry
    p.add_term({5, 6}, 68);
    p.add_term({5, 7}, -8);
    p.add_term({5, 8}, -16);
    p.add_term({6, 7}, -16);
    p.add_term({6, 8}, -32);
    p.add_term({7, 8}, 68);
    // carry-p
    p.add_term({1, 5}, -4);
    p.add_term({2, 5}, -16);
    p.add_term({1, 6}, -8);
    p.add_term({2, 6}, -32);
    p.add_term({1, 7}, -16);
    p.add_term({2, 7}, 2);
    p.add_term({1, 8}, -32);
    p.add_term({2, 8}, 4);
    // carry-q
    p.add_term({3, 5}, -4);
    p.add_term({4, 5}, -16);
    p.add_term({3, 6}, -8);
    p.add_term({4, 6}, -32);
    p.add_term({3, 7}, -16);
    p.add_term({4, 7}, 2);
    p.add_term({3, 8}, -32);
    p.add_term({4, 8}, 4);
    // carry-ancilla
    p.add_term({5, 9}, -16);
    p.add_term({5, 10}, 2);
    p.add_term({6, 9}, -32);
    p.add_term({5, 11}, 4);
    p.add_term({6, 10}, 4);
    p.add_term({5, 12}, 2);
    p.add_term({6, 11}, 8);
    p.add_term({7, 10}, -8);
    p.add_term({6, 12}, 4);
    p.add_term({7, 11}, -16);
    p.add_term({8, 10}, -16);
    p.add_term({7, 12}, -8);
    p.add_term({8, 11}, -32);
    p.add_term({8, 12}, -16);
    // factor-factor
    p.add_term({1, 2}, 4);
    p.add_term({1, 3}, 158);
    p.add_term({1, 4}, 95);
    p.add_term({2, 3}, 95);
    p.add_term({2, 4}, 142);
    p.add_term({3, 4}, 4);
    // factor-ancilla
    p.add_term({1, 9}, -296);
    p.add_term({1, 10}, -168);
    p.add_term({2, 9}, 12);
    p.add_term({2, 10}, 12);
    p.add_term({2, 11}, -248);
    p.add_term({2, 12}, -168);
    p.add_term({3, 9}, -296);
    p.add_term({4, 9}, 12);
    p.add_term({4, 10}, -168);
    p.add_term({3, 12}, -168);
    p.add_term({4, 11}, -248);
    p.add_term({4, 12}, 12);
    // ancilla-ancilla and constant
    p.add_term({9, 11}, 2);
    p.add_term({}, 14);
    return p;
}

inline std::vector<Rat> ising_143_fields() {
    return {Rat(261, 2), Rat(215, 2), Rat(261, 2), Rat(215, 2), Rat(-41), Rat(-82),
            Rat(3),      Rat(6),      Rat(-137),   Rat(-81),    Rat(-107), Rat(-81)};
}

/// Nonzero couplings, 1-based ids.
inline std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, Rat>> ising_143_couplings() {
    using P = std::pair<std::uint32_t, std::uint32_t>;
    std::vector<std::pair<P, Rat>> j;
    auto add = [&](std::uint32_t a, std::uint32_t b, Rat v) { j.push_back({{a, b}, std::move(v)}); };
    add(1, 2, 2);
    add(1, 3, 79);
    add(1, 4, Rat(95, 2));
    add(1, 5, -2);
    add(1, 6, -4);
    add(1, 7, -8);
    add(1, 8, -16);
    add(1, 9, -148);
    add(1, 10, -84);
    add(2, 3, Rat(95, 2));
    add(2, 4, 71);
    add(2, 5, -8);
    add(2, 6, -16);
    add(2, 7, 1);
    add(2, 8, 2);
    add(2, 9, 6);
    add(2, 10, 6);
    add(2, 11, -124);
    add(2, 12, -84);
    add(3, 4, 2);
    add(3, 5, -2);
    add(3, 6, -4);
    add(3, 7, -8);
    add(3, 8, -16);
    add(3, 9, -148);
    add(3, 12, -84);
    add(4, 5, -8);
    add(4, 6, -16);
    add(4, 7, 1);
    add(4, 8, 2);
    add(4, 9, 6);
    add(4, 10, -84);
    add(4, 11, -124);
    add(4, 12, 6);
    add(5, 6, 34);
    add(5, 7, -4);
    add(5, 8, -8);
    add(5, 9, -8);
    add(5, 10, 1);
    add(5, 11, 2);
    add(5, 12, 1);
    add(6, 7, -8);
    add(6, 8, -16);
    add(6, 9, -16);
    add(6, 10, 2);
    add(6, 11, 4);
    add(6, 12, 2);
    add(7, 8, 34);
    add(7, 10, -4);
    add(7, 11, -8);
    add(7, 12, -4);
    add(8, 10, -8);
    add(8, 11, -16);
    add(8, 12, -8);
    add(9, 11, 1);
    return j;
}

}  // namespace qfact::reference
