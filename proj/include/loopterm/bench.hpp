#pragma once

// Benchmark harness: run every .loop file of a directory, compare the
// verdict and (by mutual entailment) the precondition against the
// .expected.json sidecar.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopterm/logic.hpp"
#include "loopterm/loopspec.hpp"
#include "loopterm/report.hpp"

namespace loopterm {

struct BenchRow {
    std::string name;
    bool pass = false;
    bool golden_found = false;
    std::string detail;
    Report report;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline BenchRow bench_one(const std::filesystem::path& loop_file, const Config& cfg = {}) {
    BenchRow row;
    row.name = loop_file.stem().string();
    LoopSpec spec = parse_loop(read_file(loop_file), row.name);
    row.report = run_analysis(spec, cfg);

    std::filesystem::path golden = loop_file;
    golden.replace_extension(".expected.json");
    if (!std::filesystem::exists(golden)) {
        row.pass = true;
        row.detail = "no golden";
        return row;
    }
    row.golden_found = true;
    nlohmann::json j = nlohmann::json::parse(read_file(golden));

    std::vector<std::string> problems;
    if (j.contains("verdict") && j["verdict"].get<std::string>() != row.report.verdict)
        problems.push_back("verdict: expected " + j["verdict"].get<std::string>() + ", got " +
                           row.report.verdict);
    if (j.contains("precondition")) {
        Dnf want = parse_formula(j["precondition"].get<std::string>(), spec.vars);
        if (!dnf_equiv(want, row.report.precondition_dnf))
            problems.push_back("precondition: expected " + want.str() + ", got " +
                               row.report.precondition);
    }
    row.pass = problems.empty();
    for (std::size_t i = 0; i < problems.size(); ++i)
        row.detail += (i ? "; " : "") + problems[i];
    return row;
}

inline std::vector<BenchRow> bench(const std::filesystem::path& dir, const Config& cfg = {}) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::exists(dir))
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.path().extension() == ".loop") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<BenchRow> rows;
    for (const auto& f : files) rows.push_back(bench_one(f, cfg));
    return rows;
}

}  // namespace loopterm
