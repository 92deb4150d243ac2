#pragma once

// Bounded concrete simulation over integer boxes, used as the
// independent validation oracle: classifies every initial state as
// terminated, cycling, or out of budget.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "loopterm/lincons.hpp"
#include "loopterm/rel.hpp"

namespace loopterm {

struct OracleConfig {
    long box = 4;    // initial states drawn from [-box, box]^n
    int steps = 200; // per-run step budget
};

enum class RunKind : std::uint8_t { Terminated, Cycle, Budget };

struct RunResult {
    RunKind kind = RunKind::Terminated;
    int steps = 0;
};

using State = std::map<VarId, Int>;

namespace detail {

/// Evaluation box: wide enough that any one-step image of the initial
/// box stays representable (coefficient/constant magnitudes widen it).
inline Int widened_radius(const Rel& r, long box) {
    Int maxc = 1, maxk = 0;
    for (const Conj& c : r.body.disjuncts)
        for (const Atom& a : c.atoms) {
            for (const auto& [v, k] : a.expr.coeffs())
                if (abs(k) > maxc) maxc = abs(k);
            if (abs(a.expr.constant()) > maxk) maxk = abs(a.expr.constant());
        }
    return maxc * Int(box) + maxk;
}

/// All successors of `state` under one path, by substituting the current
/// state, solving single-variable equalities exactly, and enumerating
/// any remaining primed variables over the widened box.
inline void path_successors(const Conj& rho, const State& state, const std::vector<VarId>& vars,
                            const Int& wide, std::vector<State>& out, bool& overflow) {
    // residual constraints over primed variables only
    std::vector<Atom> residual;
    for (const Atom& a : rho.atoms) {
        LinExpr e(a.expr.constant());
        for (const auto& [v, k] : a.expr.coeffs()) {
            if (v.primed)
                e.add_term(v, k);
            else
                e.set_constant(e.constant() + k * state.at(v));
        }
        Atom ra{std::move(e), a.op};
        if (ra.trivially_false()) return;
        if (!ra.trivially_true()) residual.push_back(std::move(ra));
    }

    State assign;  // values for primed variables
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < residual.size(); ++i) {
            const Atom& a = residual[i];
            if (a.op != AtomOp::Eq || a.expr.coeffs().size() != 1) continue;
            const auto& [v, k] = *a.expr.coeffs().begin();
            if (!mpz_divisible_p(a.expr.constant().get_mpz_t(), k.get_mpz_t())) return;
            Int val = -a.expr.constant() / k;
            assign[v] = val;
            std::vector<Atom> next;
            for (std::size_t j = 0; j < residual.size(); ++j) {
                if (j == i) continue;
                LinExpr e = residual[j].expr;
                Int kv = e.coeff(v);
                if (kv != 0) {
                    e.set_coeff(v, Int(0));
                    e.set_constant(e.constant() + kv * val);
                }
                Atom ra{std::move(e), residual[j].op};
                if (ra.trivially_false()) return;
                if (!ra.trivially_true()) next.push_back(std::move(ra));
            }
            residual = std::move(next);
            changed = true;
            break;
        }
    }

    // variables still free after propagation
    std::set<VarId> freevars;
    for (const VarId& v : vars) {
        VarId pv = v.with_primed(true);
        if (!assign.count(pv)) freevars.insert(pv);
    }
    for (const Atom& a : residual)
        for (const auto& [v, k] : a.expr.coeffs())
            if (!assign.count(v)) freevars.insert(v);

    std::vector<VarId> fv(freevars.begin(), freevars.end());
    std::vector<Int> vals(fv.size());
    auto emit = [&] {
        State full = assign;
        for (std::size_t i = 0; i < fv.size(); ++i) full[fv[i]] = vals[i];
        for (const Atom& a : residual)
            if (!a.holds(full)) return;
        State succ;
        bool over = false;
        for (const VarId& v : vars) {
            Int val = full.at(v.with_primed(true));
            if (abs(val) > wide) over = true;
            succ[v] = std::move(val);
        }
        if (over)
            overflow = true;
        else
            out.push_back(std::move(succ));
    };
    if (fv.empty()) {
        emit();
        return;
    }
    // nondeterministic path: brute-force over the widened box
    std::vector<std::size_t> idx(fv.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == fv.size()) {
            emit();
            return;
        }
        for (Int v = -wide; v <= wide; v += 1) {
            vals[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
}

}  // namespace detail

inline std::vector<State> successors(const Rel& r, const State& state, const Int& wide,
                                     bool& overflow) {
    std::vector<State> out;
    for (const Conj& rho : r.body.disjuncts)
        detail::path_successors(rho, state, r.vars, wide, out, overflow);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Depth-first exploration from one initial state. A repeated state on
/// the current path is a cycle; exceeding the step budget (or leaving
/// the widened box) is a budget verdict, never evidence either way.
inline RunResult classify(const Rel& r, const State& s0, const OracleConfig& oc) {
    Int wide = detail::widened_radius(r, oc.box);
    std::set<State> on_path;
    RunResult result{RunKind::Terminated, 0};
    std::function<RunKind(const State&, int)> dfs = [&](const State& s, int depth) -> RunKind {
        if (depth >= oc.steps) return RunKind::Budget;
        if (depth > result.steps) result.steps = depth;
        bool overflow = false;
        std::vector<State> succ = successors(r, s, wide, overflow);
        if (overflow) return RunKind::Budget;
        if (succ.empty()) return RunKind::Terminated;
        on_path.insert(s);
        RunKind agg = RunKind::Terminated;
        for (const State& t : succ) {
            RunKind k = on_path.count(t) ? RunKind::Cycle : dfs(t, depth + 1);
            if (k == RunKind::Cycle) {
                agg = RunKind::Cycle;
                break;
            }
            if (k == RunKind::Budget) agg = RunKind::Budget;
        }
        on_path.erase(s);
        return agg;
    };
    result.kind = dfs(s0, 0);
    return result;
}

/// Classification for every initial state of the box.
inline std::map<State, RunResult> oracle_simulate(const Rel& r, const OracleConfig& oc) {
    std::map<State, RunResult> out;
    std::vector<VarId> vars = r.vars;
    State point;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == vars.size()) {
            out[point] = classify(r, point, oc);
            return;
        }
        for (long v = -oc.box; v <= oc.box; ++v) {
            point[vars[i]] = Int(v);
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace loopterm
