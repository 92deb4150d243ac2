// Command-line driver: analyze a single .loop file or run the benchmark
// harness over a directory of .loop files with .expected.json goldens.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "loopterm/bench.hpp"
#include "loopterm/loopspec.hpp"
#include "loopterm/oracle.hpp"
#include "loopterm/report.hpp"

using namespace loopterm;

namespace {

void print_report(const Report& rep, bool json) {
    if (json) {
        std::cout << rep.to_json().dump(2) << "\n";
        return;
    }
    std::cout << rep.name << ": " << rep.verdict << "\n";
    for (const std::string& m : rep.w) std::cout << "  member: " << m << "\n";
    if (rep.verdict != "terminates") std::cout << "  problematic: " << rep.r_bad << "\n";
    std::cout << "  precondition: " << rep.precondition << "\n";
    std::cout << "  depth " << rep.depth << ", fixpoint iters " << rep.gfp_iters << ", "
              << rep.ms << " ms\n";
}

void print_trace(const LoopSpec& spec, const Config& cfg) {
    Rel r = spec.to_rel();
    Verdict v = prove_termination(r, cfg);
    for (std::size_t i = 0; i < v.levels.size(); ++i) {
        const LevelInfo& l = v.levels[i];
        std::cout << "level " << i + 1 << ":\n";
        for (const WfRel& m : l.w_delta.members) std::cout << "  new member: " << m.str() << "\n";
        std::cout << "  analyzed: " << l.r_part.str() << "\n";
        std::cout << "  residue:  " << l.r_bad_full.str() << "\n";
        if (!(l.r_bad == l.r_bad_full))
            std::cout << "  settled:  reduced to " << l.r_bad.str() << "\n";
        std::cout << "  fixpoint iterations: " << l.gfp_iters << "\n";
    }
}

int run_bench(const std::string& dir, const Config& cfg, bool json) {
    std::vector<BenchRow> rows = bench(dir, cfg);
    bool all_pass = true;
    nlohmann::json out = nlohmann::json::array();
    for (const BenchRow& row : rows) {
        all_pass &= row.pass;
        if (json) {
            nlohmann::json j = row.report.to_json();
            j["pass"] = row.pass;
            j["detail"] = row.detail;
            out.push_back(std::move(j));
        } else {
            std::cout << (row.pass ? "PASS" : "FAIL") << "  " << row.name << "  "
                      << row.report.verdict;
            if (!row.detail.empty()) std::cout << "  (" << row.detail << ")";
            std::cout << "\n";
        }
    }
    if (json) std::cout << out.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Termination and conditional-termination analyzer for integer linear loops"};

    std::string input;
    std::string mode = "both";
    Config cfg;
    bool json = false, trace = false, do_bench = false, oracle = false;
    OracleConfig oc;

    app.add_option("input", input, "a .loop file, or a directory with --bench")->required();
    app.add_option("--mode", mode, "terminate|precondition|both")
        ->check(CLI::IsMember({"terminate", "precondition", "both"}));
    app.add_option("--max-depth", cfg.max_depth, "recursion depth cap");
    app.add_option("--seed-level", cfg.seed_level, "predicate seed chain length");
    app.add_option("--z-iters", cfg.z_iters, "recurrent-set iteration cap");
    app.add_option("--fixpoint-iters", cfg.fixpoint_iters, "abstract fixpoint iteration cap");
    app.add_option("--dnf-cap", cfg.dnf_cap, "disjunct count cap");
    app.add_flag("--json", json, "machine-readable output");
    app.add_flag("--trace", trace, "print per-level analysis details");
    app.add_flag("--bench", do_bench, "treat input as a benchmark directory");
    app.add_flag("--oracle", oracle, "also run the bounded concrete oracle");
    app.add_option("--oracle-box", oc.box, "oracle initial-state box radius");
    app.add_option("--oracle-steps", oc.steps, "oracle step budget");

    CLI11_PARSE(app, argc, argv);
    g_dnf_cap = cfg.dnf_cap;

    try {
        if (do_bench || std::filesystem::is_directory(input)) return run_bench(input, cfg, json);

        LoopSpec spec =
            parse_loop(read_file(input), std::filesystem::path(input).stem().string());
        Mode m = mode == "terminate" ? Mode::Terminate
                                     : (mode == "precondition" ? Mode::PreconditionOnly : Mode::Both);
        if (trace) print_trace(spec, cfg);
        Report rep = run_analysis(spec, cfg, m);
        print_report(rep, json);
        if (oracle) {
            int cycles = 0, term = 0, budget = 0;
            for (const auto& [s, res] : oracle_simulate(spec.to_rel(), oc)) {
                if (res.kind == RunKind::Cycle) ++cycles;
                else if (res.kind == RunKind::Terminated) ++term;
                else ++budget;
            }
            std::cout << "oracle: " << term << " terminated, " << cycles << " cycles, " << budget
                      << " budget\n";
        }
        return rep.verdict == "unknown" ? 1 : 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
