#pragma once

// Analysis report assembly and deterministic JSON rendering.

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopterm/analyzer.hpp"
#include "loopterm/condterm.hpp"
#include "loopterm/loopspec.hpp"

namespace loopterm {

enum class Mode : std::uint8_t { Terminate, PreconditionOnly, Both };

struct Report {
    std::string name;
    std::string verdict;  // terminates | conditional | unknown
    std::vector<std::string> w;
    std::string r_bad;
    std::string precondition;
    std::vector<std::vector<std::string>> precondition_atoms;
    Dnf precondition_dnf;
    int depth = 0;
    int gfp_iters = 0;
    int z_iters = 0;
    int v_iters = 0;
    bool z_converged = false;
    bool v_converged = false;
    long ms = 0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["verdict"] = verdict;
        j["W"] = w;
        j["r_bad"] = r_bad;
        j["precondition"] = precondition;
        j["precondition_atoms"] = precondition_atoms;
        j["stats"] = {{"depth", depth},
                      {"gfp_iters", gfp_iters},
                      {"z_iters", z_iters},
                      {"v_iters", v_iters},
                      {"ms", ms}};
        return j;
    }
};

inline Report run_analysis(const LoopSpec& spec, const Config& cfg = {}, Mode mode = Mode::Both) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.name = spec.name;
    try {
        Rel r = spec.to_rel();
        Verdict v = prove_termination(r, cfg);
        for (const WfRel& m : v.w.members) rep.w.push_back(m.str());
        rep.r_bad = v.r_bad.str();
        rep.depth = v.depth();
        rep.gfp_iters = v.gfp_iters_total();
        if (v.terminates()) {
            rep.verdict = "terminates";
            rep.precondition = "true";
            rep.precondition_dnf = Dnf::truth();
            rep.precondition_atoms = {{}};
        } else if (mode == Mode::Terminate) {
            rep.verdict = "unknown";
            rep.precondition = "false";
            rep.precondition_dnf = Dnf::falsity();
        } else {
            Precondition pc = synth_precondition(r, v, cfg);
            rep.z_iters = pc.z_iters_used;
            rep.v_iters = pc.v_iters_used;
            rep.z_converged = pc.z_converged;
            rep.v_converged = pc.v_converged;
            rep.precondition_dnf = pc.p.body;
            rep.precondition = pc.p.body.str();
            rep.verdict = pc.p.body.is_false() ? "unknown" : "conditional";
            for (const Conj& d : pc.p.body.disjuncts) {
                std::vector<std::string> atoms;
                for (const Atom& a : d.atoms) atoms.push_back(a.str());
                rep.precondition_atoms.push_back(std::move(atoms));
            }
        }
    } catch (const std::exception&) {
        rep.verdict = "unknown";
        rep.precondition = "false";
        rep.precondition_dnf = Dnf::falsity();
    }
    auto t1 = std::chrono::steady_clock::now();
    rep.ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return rep;
}

}  // namespace loopterm
