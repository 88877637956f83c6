#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qfact/pipeline.hpp"

namespace {

int write_artifacts(const qfact::RunOutcome& outcome, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (outcome.artifacts.empty()) return 0;
    fs::create_directories(out_dir);
    for (const auto& a : outcome.artifacts) {
        const fs::path path = fs::path(out_dir) / a.name;
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot write " << path.string() << "\n";
            return 5;
        }
        file << a.content;
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qfact: encode integer factorization as Ising models, embed them on a "
        "simulated Chimera graph, and solve by enumeration, annealing, or "
        "Schrodinger evolution"};

    std::string n_str;
    std::string method = "table";
    std::string solver;
    std::string embed = "none";
    std::string emit;
    std::string out_dir = ".";
    std::uint32_t l1 = 0, l2 = 0;
    std::vector<std::uint32_t> widths;
    std::vector<std::uint32_t> chimera{16, 16, 4};
    std::uint64_t samples = 10000;
    std::uint32_t sweeps = 1000;
    std::uint64_t seed = 0;
    std::uint32_t threads = 1;
    std::uint32_t retries = 1;
    double t_hot = 0, t_cold = 0.1;
    double anneal_time = 100;
    std::vector<double> ladder;
    std::uint32_t gap_resolution = 0;
    bool fixed_leading = false;
    bool estimate_only = false;
    bool golden = false;

    app.add_option("-n,--n", n_str, "integer to factor (decimal)");
    app.add_option("--method", method, "encoding method: direct | table")
        ->check(CLI::IsMember({"direct", "table"}));
    app.add_option("--l1", l1, "bit length of p");
    app.add_option("--l2", l2, "bit length of q");
    app.add_option("--block-widths", widths, "table column widths, low block first");
    app.add_option("--solver", solver, "exact | sa | adiabatic | none")
        ->check(CLI::IsMember({"exact", "sa", "adiabatic", "none"}));
    app.add_option("--embed", embed, "none | grouped | heuristic")
        ->check(CLI::IsMember({"none", "grouped", "heuristic"}));
    app.add_option("--chimera", chimera, "hardware grid M N T")->expected(3);
    app.add_option("-S,--samples", samples, "annealing samples per run");
    app.add_option("--sweeps", sweeps, "annealing sweeps per sample");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads for annealing restarts");
    app.add_option("--retries", retries, "reseeded annealing retries");
    app.add_option("--t-hot", t_hot, "start temperature (0 = largest |parameter|)");
    app.add_option("--t-cold", t_cold, "final temperature");
    app.add_option("--anneal-time", anneal_time, "total evolution time T");
    app.add_option("--anneal-ladder", ladder, "emit anneal.csv for these T values");
    app.add_option("--gap-resolution", gap_resolution, "emit gap.csv sampled at this many s values");
    app.add_option("--emit", emit, "comma list of qubo,ising,blocks,embedding,histogram,all");
    app.add_option("-o,--out", out_dir, "artifact output directory");
    app.add_flag("--fixed-leading", fixed_leading, "fix the leading factor bits (direct method)");
    app.add_flag("--estimate-only", estimate_only, "report the qubit count and stop");
    app.add_flag("--golden", golden, "check the built-in reference tables and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (golden) {
            std::vector<std::string> lines;
            const bool ok = qfact::run_golden_checks(lines);
            for (const auto& line : lines) std::cout << line << "\n";
            return ok ? 0 : 5;
        }
        if (n_str.empty()) {
            std::cerr << "error: --n is required (or use --golden)\n";
            return 2;
        }

        qfact::RunConfig cfg;
        cfg.n = qfact::Int(n_str);
        cfg.method = method == "direct" ? qfact::Method::direct : qfact::Method::table;
        if (l1 > 0) cfg.l1 = l1;
        if (l2 > 0) cfg.l2 = l2;
        if (!widths.empty()) cfg.block_widths = widths;
        if (!solver.empty()) {
            if (solver == "exact") cfg.solver = qfact::SolverKind::exact;
            if (solver == "sa") cfg.solver = qfact::SolverKind::sa;
            if (solver == "adiabatic") cfg.solver = qfact::SolverKind::adiabatic;
            if (solver == "none") cfg.solver = qfact::SolverKind::none;
        }
        cfg.embed = embed == "grouped"     ? qfact::EmbedKind::grouped
                    : embed == "heuristic" ? qfact::EmbedKind::heuristic
                                           : qfact::EmbedKind::none;
        cfg.chimera_m = chimera[0];
        cfg.chimera_n = chimera[1];
        cfg.chimera_t = chimera[2];
        cfg.samples = samples;
        cfg.sweeps = sweeps;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.sa_retries = retries;
        cfg.t_hot = t_hot;
        cfg.t_cold = t_cold;
        cfg.anneal_time = anneal_time;
        cfg.anneal_ladder = ladder;
        cfg.gap_resolution = gap_resolution;
        cfg.fixed_leading = fixed_leading;
        cfg.estimate_only = estimate_only;
        if (!emit.empty()) {
            std::stringstream ss(emit);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) cfg.emit.insert(item);
        }

        qfact::RunOutcome outcome = qfact::run_pipeline(cfg);
        for (const auto& line : outcome.log) std::cout << line << "\n";
        if (int rc = write_artifacts(outcome, out_dir)) return rc;
        return outcome.exit_code;
    } catch (const qfact::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
