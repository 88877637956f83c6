#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfact/coeff.hpp"
#include "qfact/decode.hpp"
#include "qfact/embedding.hpp"
#include "qfact/encode.hpp"
#include "qfact/errors.hpp"
#include "qfact/ising.hpp"
#include "qfact/registry.hpp"
#include "qfact/solve.hpp"

namespace qfact {

using nlohmann::json;

namespace detail {
inline std::int64_t to_json_int(const Int& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw InternalError("value too large for the JSON encoding");
    return static_cast<std::int64_t>(v);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Ising model: numerators over one shared power-of-two denominator.
// ---------------------------------------------------------------------------

inline json ising_to_json(const IsingModel& m) {
    Int denom = 1;
    auto fold = [&](const Rat& r) {
        Int d = rat_den(r);
        if (denom % d != 0) denom = denom / boost::multiprecision::gcd(denom, d) * d;
    };
    for (const auto& x : m.h) fold(x);
    for (const auto& [k, v] : m.J) fold(v);
    fold(m.offset);
    if (denom < 2) denom = 2;

    auto num = [&](const Rat& r) { return detail::to_json_int(rat_num(r) * (denom / rat_den(r))); };

    json j;
    j["n_spins"] = m.n_spins;
    j["denominator"] = detail::to_json_int(denom);
    json h = json::array();
    for (const auto& x : m.h) h.push_back(num(x));
    j["h"] = h;
    json couplings = json::array();
    for (const auto& [k, v] : m.J)
        couplings.push_back({k.first + 1, k.second + 1, num(v)});
    j["J"] = couplings;
    j["offset_numerator"] = num(m.offset);
    return j;
}

inline IsingModel ising_from_json(const json& j) {
    IsingModel m;
    m.n_spins = j.at("n_spins").get<std::uint32_t>();
    const Int denom = Int(j.at("denominator").get<std::int64_t>());
    if (denom <= 0) throw Error(ErrorKind::invalid_input, "denominator must be positive");
    m.h.reserve(m.n_spins);
    for (const auto& x : j.at("h")) m.h.emplace_back(Int(x.get<std::int64_t>()), denom);
    if (m.h.size() != m.n_spins)
        throw Error(ErrorKind::invalid_input, "field vector length != n_spins");
    for (const auto& entry : j.at("J")) {
        const std::uint32_t a = entry.at(0).get<std::uint32_t>();
        const std::uint32_t b = entry.at(1).get<std::uint32_t>();
        if (a < 1 || b < 1 || a > m.n_spins || b > m.n_spins || a == b)
            throw Error(ErrorKind::invalid_input, "bad coupling ids");
        m.add_coupling(a - 1, b - 1, Rat(Int(entry.at(2).get<std::int64_t>()), denom));
    }
    m.offset = Rat(Int(j.at("offset_numerator").get<std::int64_t>()), denom);
    return m;
}

// ---------------------------------------------------------------------------
// Registry and block system.
// ---------------------------------------------------------------------------

inline json registry_to_json(const VariableRegistry& reg) {
    json entries = json::array();
    for (const auto& e : reg.entries()) {
        json item;
        item["id"] = e.id;
        item["kind"] = var_kind_name(e.kind);
        item["index"] = e.index;
        item["name"] = e.name;
        if (e.kind == VarKind::ancilla) item["pair"] = {e.pair_a, e.pair_b};
        entries.push_back(item);
    }
    return json{{"variables", entries}};
}

inline json block_system_to_json(const BlockSystem& bs) {
    auto var_name = [&](VarId v) { return bs.registry.entry(v).name; };
    json columns = json::array();
    for (const auto& col : bs.columns) {
        json entries = json::array();
        for (const auto& e : col.entries) {
            switch (e.kind) {
                case ColumnEntry::Kind::one: entries.push_back("1"); break;
                case ColumnEntry::Kind::p_bit:
                case ColumnEntry::Kind::q_bit:
                case ColumnEntry::Kind::carry_in: entries.push_back(var_name(e.a)); break;
                case ColumnEntry::Kind::product:
                    entries.push_back(var_name(e.a) + "*" + var_name(e.b));
                    break;
            }
        }
        columns.push_back({{"power", col.power}, {"entries", entries}});
    }
    json blocks = json::array();
    for (const auto& b : bs.blocks) {
        json carries = json::array();
        for (VarId c : b.carries) carries.push_back(var_name(c));
        blocks.push_back({{"lo", b.lo},
                          {"width", b.width},
                          {"target", detail::to_json_int(b.target)},
                          {"carries", carries}});
    }
    json j;
    j["n"] = bs.n.str();
    j["l1"] = bs.l1;
    j["l2"] = bs.l2;
    j["columns"] = columns;
    j["blocks"] = blocks;
    j["carry_count"] = bs.carry_count();
    return j;
}

// ---------------------------------------------------------------------------
// Embeddings: logical id (1-based) -> chain.
// ---------------------------------------------------------------------------

// {"<logical id>": [physical qubit ids], ...}, ids 1-based
inline json embedding_to_json(const Embedding& emb) {
    json chains = json::object();
    for (std::size_t v = 0; v < emb.chains.size(); ++v) {
        json qubits = json::array();
        for (auto q : emb.chains[v]) qubits.push_back(q);
        chains[std::to_string(v + 1)] = qubits;
    }
    return chains;
}

inline Embedding embedding_from_json(const json& j) {
    Embedding emb;
    emb.chains.resize(j.size());
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::size_t v = std::stoull(it.key());
        if (v < 1 || v > emb.chains.size())
            throw Error(ErrorKind::invalid_input, "bad logical id in embedding");
        for (const auto& q : it.value()) emb.chains[v - 1].push_back(q.get<std::uint32_t>());
        std::sort(emb.chains[v - 1].begin(), emb.chains[v - 1].end());
    }
    return emb;
}

// ---------------------------------------------------------------------------
// Histograms and sample sets.
// ---------------------------------------------------------------------------

inline json histogram_to_json(const std::vector<HistogramEntry>& hist, std::uint64_t samples) {
    json entries = json::array();
    for (const auto& e : hist) {
        json item;
        item["label"] = e.label;
        item["p"] = e.p.str();
        item["q"] = e.q.str();
        item["valid"] = e.valid;
        item["energy"] = rat_to_string(e.energy);
        item["count"] = e.count;
        item["rate"] = rat_num(e.rate).str() + "/" + rat_den(e.rate).str();
        entries.push_back(item);
    }
    return json{{"samples", samples}, {"entries", entries}};
}

inline json sample_set_to_json(const SampleSet& ss) {
    json records = json::array();
    for (const auto& rec : ss.records) {
        std::string spins;
        spins.reserve(rec.spins.size());
        for (int s : rec.spins) spins.push_back(s > 0 ? '+' : '-');
        records.push_back({{"spins", spins},
                           {"energy", rat_to_string(rec.energy)},
                           {"count", rec.count}});
    }
    json j;
    j["samples"] = ss.samples;
    j["sweeps"] = ss.params.sweeps;
    j["seed"] = ss.params.seed;
    j["t_hot"] = ss.params.t_hot;
    j["t_cold"] = ss.params.t_cold;
    j["records"] = records;
    return j;
}

}  // namespace qfact
