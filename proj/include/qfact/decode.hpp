#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qfact/coeff.hpp"
#include "qfact/encode.hpp"
#include "qfact/ising.hpp"
#include "qfact/solve.hpp"

namespace qfact {

struct FactorReading {
    Int p, q;
    std::vector<int> carries;      // carry register bits in index order
    bool ancilla_consistent = true;
    bool valid = false;            // p*q == n with p, q > 1

    std::string label() const {
        if (!valid) return "invalid";
        return "(" + p.str() + "," + q.str() + ")";
    }
};

/// Read factors out of a 0/1 assignment indexed by variable id. Invalid
/// readings are flagged, never rejected.
inline FactorReading decode_bits(const std::vector<int>& bits, const CostFunction& cf) {
    FactorReading r;
    r.p = 1;
    r.q = 1;
    const bool fixed_leading = cf.method == Method::table || cf.fixed_leading;
    if (fixed_leading) {
        r.p += pow2_int(cf.l1 - 1);
        r.q += pow2_int(cf.l2 - 1);
    }
    for (const auto& e : cf.registry.entries()) {
        if (e.id >= bits.size() || bits[e.id] < 0)
            throw MissingVariableError("assignment misses variable " + std::to_string(e.id));
        const int bit = bits[e.id];
        switch (e.kind) {
            case VarKind::factor_p:
                if (bit) r.p += pow2_int(e.index);
                break;
            case VarKind::factor_q:
                if (bit) r.q += pow2_int(e.index);
                break;
            case VarKind::carry: r.carries.push_back(bit); break;
            case VarKind::ancilla:
                if (bit != (bits[e.pair_a] & bits[e.pair_b])) r.ancilla_consistent = false;
                break;
        }
    }
    r.valid = r.p > 1 && r.q > 1 && r.p * r.q == cf.n;
    return r;
}

inline FactorReading decode_spins(const std::vector<int>& spins, const CostFunction& cf) {
    return decode_bits(spins_to_bits(spins), cf);
}

// ---------------------------------------------------------------------------
// Solution histograms.
// ---------------------------------------------------------------------------

struct HistogramEntry {
    std::string label;  // "(p,q)" or "invalid"
    Int p, q;
    bool valid = false;
    Rat energy;
    std::uint64_t count = 0;
    Rat rate;  // count / samples, exact
};

/// Aggregate a sample set by decoded reading and energy, lowest energy first.
/// The same (p, q) at different energies stays as separate entries.
inline std::vector<HistogramEntry> make_histogram(const SampleSet& ss, const CostFunction& cf) {
    std::vector<HistogramEntry> out;
    for (const auto& rec : ss.records) {
        FactorReading reading = decode_spins(rec.spins, cf);
        bool merged = false;
        for (auto& e : out) {
            if (e.energy == rec.energy && e.label == reading.label()) {
                e.count += rec.count;
                merged = true;
                break;
            }
        }
        if (!merged) {
            HistogramEntry e;
            e.label = reading.label();
            e.p = reading.p;
            e.q = reading.q;
            e.valid = reading.valid;
            e.energy = rec.energy;
            e.count = rec.count;
            out.push_back(std::move(e));
        }
    }
    for (auto& e : out) e.rate = Rat(Int(e.count), Int(ss.samples));
    // Records arrive energy-sorted; merging keeps that order.
    return out;
}

inline std::string histogram_csv(const std::vector<HistogramEntry>& hist) {
    std::ostringstream out;
    out << "energy,p,q,count,rate\n";
    for (const auto& e : hist) {
        out << rat_to_string(e.energy) << "," << e.p.str() << "," << e.q.str() << "," << e.count
            << "," << rat_to_double(e.rate) << "\n";
    }
    return out.str();
}

}  // namespace qfact
