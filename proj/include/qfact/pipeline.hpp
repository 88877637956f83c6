#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qfact/adiabatic.hpp"
#include "qfact/chimera.hpp"
#include "qfact/decode.hpp"
#include "qfact/embedding.hpp"
#include "qfact/encode.hpp"
#include "qfact/io.hpp"
#include "qfact/ising.hpp"
#include "qfact/quadratize.hpp"
#include "qfact/reference.hpp"
#include "qfact/solve.hpp"

namespace qfact {

enum class SolverKind { none, exact, sa, adiabatic };
enum class EmbedKind { none, grouped, heuristic };

struct RunConfig {
    Int n;
    Method method = Method::table;
    std::optional<std::uint32_t> l1, l2;
    std::optional<std::vector<std::uint32_t>> block_widths;
    std::optional<SolverKind> solver;  // default: none with --emit, else exact/sa by size
    EmbedKind embed = EmbedKind::none;
    std::uint32_t chimera_m = 16, chimera_n = 16, chimera_t = 4;
    std::uint64_t samples = 10000;
    std::uint32_t sweeps = 1000;
    double t_hot = 0;    // 0: largest |parameter|
    double t_cold = 0.1;
    std::uint64_t seed = 0;
    std::uint32_t threads = 1;
    std::uint32_t sa_retries = 1;
    double anneal_time = 100;
    std::vector<double> anneal_ladder;
    std::uint32_t gap_resolution = 0;
    std::set<std::string> emit;  // qubo | ising | blocks | embedding | histogram | all
    bool fixed_leading = false;  // direct method only
    std::uint32_t exact_limit = 26;
    bool estimate_only = false;
};

struct Artifact {
    std::string name;
    std::string content;
};

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> log;
    std::vector<FactorReading> readings;
    QubitBreakdown qubits;
    std::vector<Artifact> artifacts;
    std::optional<double> success_probability;
    std::uint32_t l1 = 0, l2 = 0;
};

/// Map a physical sample set back to logical spins, re-scoring against the
/// logical model. Returns the total number of broken chains seen.
inline std::pair<SampleSet, std::uint64_t> unembed_samples(const SampleSet& phys,
                                                           const Embedding& emb,
                                                           const IsingModel& logical) {
    std::map<std::vector<int>, std::uint64_t> tally;
    std::uint64_t breaks = 0;
    for (const auto& rec : phys.records) {
        auto [spins, b] = unembed(rec.spins, emb);
        breaks += b * rec.count;
        tally[spins] += rec.count;
    }
    SampleSet out;
    out.samples = phys.samples;
    out.params = phys.params;
    for (auto& [spins, count] : tally) {
        SampleRecord rec;
        rec.spins = spins;
        rec.energy = logical.energy(spins, true);
        rec.count = count;
        out.records.push_back(std::move(rec));
    }
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const SampleRecord& a, const SampleRecord& b) {
                         if (a.energy != b.energy) return a.energy < b.energy;
                         return a.spins < b.spins;
                     });
    return {out, breaks};
}

namespace detail {

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> length_candidates(const RunConfig& cfg) {
    if (cfg.l1 && cfg.l2) return {{*cfg.l1, *cfg.l2}};
    if (cfg.l1 || cfg.l2)
        throw Error(ErrorKind::invalid_input, "give both factor lengths or neither");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    const std::uint32_t bits = bit_length(cfg.n);
    for (std::uint32_t sum : {bits, bits + 1}) {
        if (sum < 4) continue;
        for (std::uint32_t lo = sum / 2; lo >= 2; --lo) out.emplace_back(sum - lo, lo);
    }
    return out;
}

inline QubitBreakdown breakdown_from_registry(const VariableRegistry& reg) {
    QubitBreakdown qb;
    for (const auto& e : reg.entries()) {
        switch (e.kind) {
            case VarKind::factor_p:
            case VarKind::factor_q: ++qb.factor_bits; break;
            case VarKind::carry: ++qb.carry_bits; break;
            case VarKind::ancilla: ++qb.ancillas; break;
        }
    }
    return qb;
}

inline std::string carries_string(const FactorReading& r) {
    std::string s = "(";
    for (std::size_t i = 0; i < r.carries.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(r.carries[i]);
    }
    return s + ")";
}

inline std::string reading_line(const FactorReading& r) {
    std::string line = "p = " + r.p.str() + "  q = " + r.q.str();
    if (!r.carries.empty()) line += "  carries = " + carries_string(r);
    if (!r.ancilla_consistent) line += "  [inconsistent ancillas]";
    return line;
}

}  // namespace detail

inline bool emit_wants(const RunConfig& cfg, const std::string& what) {
    return cfg.emit.count(what) > 0 || cfg.emit.count("all") > 0;
}

inline RunOutcome run_pipeline(const RunConfig& cfg) {
    RunOutcome out;
    auto log = [&](const std::string& s) { out.log.push_back(s); };

    log("n = " + cfg.n.str());
    log(std::string("method = ") + method_name(cfg.method));

    if (cfg.estimate_only) {
        const std::uint32_t bits = bit_length(cfg.n);
        const std::uint32_t l1 = cfg.l1.value_or((bits + 1) / 2);
        const std::uint32_t l2 = cfg.l2.value_or(bits / 2);
        std::optional<TableLayout> layout;
        if (cfg.block_widths) layout = TableLayout{*cfg.block_widths, std::nullopt};
        out.qubits = estimate_qubits(cfg.n, cfg.method, l1, l2, layout ? &*layout : nullptr);
        out.l1 = l1;
        out.l2 = l2;
        log("lengths l1 = " + std::to_string(l1) + "  l2 = " + std::to_string(l2));
        log("qubits = " + std::to_string(out.qubits.total()) + " (factor bits " +
            std::to_string(out.qubits.factor_bits) + ", carries " +
            std::to_string(out.qubits.carry_bits) + ", ancillas " +
            std::to_string(out.qubits.ancillas) +
            (out.qubits.from_formula ? ", by size formula)" : ")"));
        return out;
    }

    const auto candidates = detail::length_candidates(cfg);
    bool reported = false;

    for (std::size_t ci = 0; ci < candidates.size() && !reported; ++ci) {
        const auto [l1, l2] = candidates[ci];
        const bool last_candidate = ci + 1 == candidates.size();
        std::optional<BlockSystem> bs;
        CostFunction raw;
        if (cfg.method == Method::table) {
            if (cfg.block_widths)
                bs = build_block_system(cfg.n, l1, l2, TableLayout{*cfg.block_widths, std::nullopt});
            else
                bs = build_block_system(cfg.n, l1, l2);
            raw = encode_table(*bs);
        } else {
            raw = encode_direct(cfg.n, l1, l2, cfg.fixed_leading);
        }
        QuadratizeResult reduced = quadratize(raw);
        IsingModel model = to_ising(reduced.cf);

        const SolverKind solver = cfg.solver.value_or(
            !cfg.emit.empty() ? SolverKind::none
                              : (model.n_spins <= cfg.exact_limit ? SolverKind::exact
                                                                  : SolverKind::sa));

        // Optional embedding.
        std::optional<ChimeraGraph> hw;
        std::optional<Embedding> emb;
        std::optional<IsingModel> phys;
        if (cfg.embed != EmbedKind::none) {
            hw = build_chimera(cfg.chimera_m, cfg.chimera_n, cfg.chimera_t);
            emb = cfg.embed == EmbedKind::grouped ? embed_grouped(model, *hw)
                                                  : embed_heuristic(model, *hw, cfg.seed);
            phys = set_parameters(model, *hw, *emb);
        }

        std::vector<FactorReading> readings;
        std::optional<SampleSet> logical_samples;
        std::optional<Rat> best_energy;
        std::optional<double> success_prob;
        std::vector<std::string> solver_notes;

        auto consider = [&](const std::vector<int>& logical_spins) {
            const Rat e = model.energy(logical_spins, true);
            if (!best_energy || e < *best_energy) best_energy = e;
            if (e != 0) return;
            FactorReading r = decode_spins(logical_spins, reduced.cf);
            if (!r.valid) return;
            for (const auto& seen : readings)
                if (seen.p == r.p && seen.q == r.q) return;
            readings.push_back(std::move(r));
        };

        switch (solver) {
            case SolverKind::none: break;
            case SolverKind::exact: {
                if (emb) {
                    // enumerate over the chain qubits only; everything else is free
                    const auto support = emb->used_qubits();
                    ExactResult ex = solve_exact(restrict_to_support(*phys, support),
                                                 cfg.exact_limit);
                    for (const auto& sub : ex.ground_spins) {
                        auto full = expand_from_support(sub, support, phys->n_spins);
                        consider(unembed(full, *emb).first);
                    }
                } else {
                    ExactResult ex = solve_exact(model, cfg.exact_limit);
                    for (const auto& spins : ex.ground_spins) consider(spins);
                }
                break;
            }
            case SolverKind::sa: {
                const IsingModel& target = phys ? *phys : model;
                SaParams params;
                params.samples = cfg.samples;
                params.sweeps = cfg.sweeps;
                params.t_hot = cfg.t_hot;
                params.t_cold = cfg.t_cold;
                params.threads = cfg.threads;
                for (std::uint32_t retry = 0; retry < std::max<std::uint32_t>(1, cfg.sa_retries);
                     ++retry) {
                    params.seed = cfg.seed + retry;
                    SampleSet ss = sample_sa(target, params);
                    std::uint64_t breaks = 0;
                    if (emb) std::tie(ss, breaks) = unembed_samples(ss, *emb, model);
                    for (const auto& rec : ss.records) consider(rec.spins);
                    logical_samples = std::move(ss);
                    if (emb) solver_notes.push_back("chain breaks = " + std::to_string(breaks));
                    if (!readings.empty()) {
                        solver_notes.push_back("sa: zero-energy state found with seed " +
                                               std::to_string(params.seed));
                        break;
                    }
                }
                break;
            }
            case SolverKind::adiabatic: {
                if (emb)
                    throw Error(ErrorKind::invalid_input,
                                "the adiabatic solver runs on the logical model only");
                if (model.n_spins > detail::kMaxEvolveSpins)
                    throw TooLargeError("adiabatic solver limited to " +
                                        std::to_string(detail::kMaxEvolveSpins) + " spins");
                EvolveResult res = evolve_auto(model, cfg.anneal_time);
                success_prob = res.success_probability;
                ExactResult ex = solve_exact(model, cfg.exact_limit);
                for (const auto& spins : ex.ground_spins) consider(spins);
                break;
            }
        }

        const bool success = solver == SolverKind::none || !readings.empty();
        if (!success && !last_candidate) continue;  // try the next length pair

        // Report this candidate.
        out.l1 = l1;
        out.l2 = l2;
        out.qubits = detail::breakdown_from_registry(reduced.cf.registry);
        out.readings = readings;
        out.success_probability = success_prob;
        log("lengths l1 = " + std::to_string(l1) + "  l2 = " + std::to_string(l2));
        log("qubits = " + std::to_string(out.qubits.total()) + " (factor bits " +
            std::to_string(out.qubits.factor_bits) + ", carries " +
            std::to_string(out.qubits.carry_bits) + ", ancillas " +
            std::to_string(out.qubits.ancillas) + ")");
        if (emb)
            log("embedding: " + std::string(cfg.embed == EmbedKind::grouped ? "grouped" : "heuristic") +
                ", chains = " + std::to_string(emb->num_logical()) +
                ", max chain = " + std::to_string(emb->max_chain_size()) +
                ", chain strength = -" + rat_to_string(model.max_abs_parameter()));
        switch (solver) {
            case SolverKind::none: log("solver = none (emit only)"); break;
            case SolverKind::exact: log("solver = exact"); break;
            case SolverKind::sa: log("solver = sa"); break;
            case SolverKind::adiabatic: log("solver = adiabatic"); break;
        }
        for (const auto& note : solver_notes) log(note);
        if (best_energy) log("best energy = " + rat_to_string(*best_energy));
        if (success_prob) log("success probability = " + std::to_string(*success_prob));
        for (const auto& r : readings) log(detail::reading_line(r));
        if (solver != SolverKind::none && readings.empty()) log("no valid factorization found");

        // Artifacts.
        if (emit_wants(cfg, "qubo")) {
            out.artifacts.push_back({"qubo.txt", reduced.cf.poly.canonical_text()});
            out.artifacts.push_back({"registry.json", registry_to_json(reduced.cf.registry).dump(2) + "\n"});
        }
        if (emit_wants(cfg, "ising")) {
            out.artifacts.push_back({"ising.json", ising_to_json(model).dump(2) + "\n"});
            out.artifacts.push_back({"ising_couplers.txt", to_coupler_list(model)});
        }
        if (emit_wants(cfg, "blocks") && bs)
            out.artifacts.push_back({"blocks.json", block_system_to_json(*bs).dump(2) + "\n"});
        if (emit_wants(cfg, "embedding") && emb) {
            out.artifacts.push_back({"embedding.json", embedding_to_json(*emb).dump(2) + "\n"});
            out.artifacts.push_back({"physical.json", ising_to_json(*phys).dump(2) + "\n"});
        }
        if (emit_wants(cfg, "histogram")) {
            SampleSet for_hist;
            if (logical_samples) {
                for_hist = *logical_samples;
            } else if (solver == SolverKind::exact || solver == SolverKind::adiabatic) {
                ExactResult ex = solve_exact(model, cfg.exact_limit);
                for (const auto& spins : ex.ground_spins) {
                    SampleRecord rec;
                    rec.spins = spins;
                    rec.energy = ex.ground_energy;
                    rec.count = 1;
                    for_hist.records.push_back(std::move(rec));
                }
                for_hist.samples = ex.ground_spins.size();
            }
            if (for_hist.samples > 0) {
                auto hist = make_histogram(for_hist, reduced.cf);
                out.artifacts.push_back({"histogram.csv", histogram_csv(hist)});
                out.artifacts.push_back(
                    {"histogram.json", histogram_to_json(hist, for_hist.samples).dump(2) + "\n"});
                out.artifacts.push_back({"samples.json", sample_set_to_json(for_hist).dump(2) + "\n"});
            }
        }
        if (!cfg.anneal_ladder.empty()) {
            std::vector<std::pair<double, double>> series;
            for (double t : cfg.anneal_ladder)
                series.emplace_back(t, evolve_auto(model, t).success_probability);
            out.artifacts.push_back({"anneal.csv", anneal_csv(series)});
        }
        if (cfg.gap_resolution >= 2)
            out.artifacts.push_back({"gap.csv", gap_csv(gap_series(model, cfg.gap_resolution))});

        out.exit_code = success ? 0 : 4;
        reported = true;
    }

    if (!reported) {
        log("no valid factorization found for any candidate lengths");
        out.exit_code = 4;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Built-in table comparisons (the CLI --golden mode).
// ---------------------------------------------------------------------------

inline bool run_golden_checks(std::vector<std::string>& lines) {
    bool all_ok = true;
    auto check = [&](const std::string& name, bool ok) {
        lines.push_back(std::string(ok ? "[PASS] " : "[FAIL] ") + name);
        all_ok = all_ok && ok;
    };

    CostFunction direct15 = encode_direct(15, 2, 3);
    check("direct 15 cubic cost", direct15.poly == reference::poly_15_cubic());

    QuadratizeResult red15 = quadratize(direct15);
    check("direct 15 reduced cost", red15.cf.poly == reference::poly_15_reduced());

    IsingModel m15 = to_ising(red15.cf);
    IsingModel ref15 = reference::ising_15();
    check("direct 15 fields/couplings/offset",
          m15.h == ref15.h && m15.J == ref15.J && m15.offset == ref15.offset);

    BlockSystem bs143 = build_block_system(143, 4, 4);
    bool blocks_ok = bs143.blocks.size() == 3 && bs143.blocks[0].target == 3 &&
                     bs143.blocks[1].target == 1 && bs143.blocks[2].target == 4 &&
                     bs143.blocks[0].carries.size() == 2 && bs143.blocks[1].carries.size() == 2 &&
                     bs143.blocks[2].carries.empty();
    check("table 143 blocks and carries", blocks_ok);

    QuadratizeResult red143 = quadratize(encode_table(bs143));
    check("table 143 reduced cost", red143.cf.poly == reference::poly_143_reduced());

    IsingModel m143 = to_ising(red143.cf);
    bool ising_ok = m143.h == reference::ising_143_fields();
    std::map<std::pair<std::uint32_t, std::uint32_t>, Rat> expected_j;
    for (const auto& [pair, value] : reference::ising_143_couplings())
        expected_j[{pair.first - 1, pair.second - 1}] = value;
    ising_ok = ising_ok && m143.J == expected_j;
    check("table 143 fields/couplings", ising_ok);

    return all_ok;
}

}  // namespace qfact
