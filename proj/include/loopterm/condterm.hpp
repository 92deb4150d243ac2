#pragma once

// Precondition synthesis from the problematic part of the relation:
// Z overapproximates the states starting an infinite problematic trace,
// V the states that can reach Z, and P = not-V is a sound termination
// precondition (every run from P is finite).

#include <vector>

#include "loopterm/absdom.hpp"
#include "loopterm/analyzer.hpp"
#include "loopterm/lincons.hpp"
#include "loopterm/logic.hpp"
#include "loopterm/rel.hpp"

namespace loopterm {

struct Precondition {
    StateSet z;
    StateSet v;
    StateSet p;
    int z_iters_used = 0;
    int v_iters_used = 0;
    bool z_converged = false;
    bool v_converged = false;
};

/// Descending concrete chain X_{i+1} = X_i meet pre(r_bad, X_i), stopped
/// at stabilization or the iteration cap. Always an overapproximation of
/// the recurrent states of r_bad.
inline StateSet approx_Z(const Rel& r_bad, int max_iters, int* iters_used = nullptr,
                         bool* converged = nullptr) {
    StateSet x = StateSet::truth(r_bad.vars);
    if (iters_used) *iters_used = 0;
    if (converged) *converged = false;
    try {
        for (int i = 0; i < max_iters; ++i) {
            if (iters_used) *iters_used = i + 1;
            StateSet next{x.vars, simplify_dnf(dnf_meet(x.body, pre(r_bad, x).body))};
            if (dnf_entails(x.body, next.body)) {  // descending chain: next subset x always
                if (converged) *converged = true;
                return next;
            }
            x = std::move(next);
        }
    } catch (const DnfBlowup&) {
        // keep the last sound iterate
    }
    return x;
}

namespace detail {

/// Atoms over unprimed variables only, harvested from a relation body.
inline void add_state_atoms(PredSet& p, const Dnf& phi) {
    for (const Conj& c : phi.disjuncts)
        for (const Atom& a : c.atoms)
            if (!a.expr.mentions_primed()) p.add(a);
}

}  // namespace detail

/// State-level predicate seed for the V iteration: atoms of z, atoms of a
/// short concrete pre-chain of z under r, and the unprimed atoms of the
/// per-level problematic relations from the termination analysis.
inline PredSet seed_v_predicates(const StateSet& z, const Rel& r,
                                 const std::vector<LevelInfo>& levels, int chain_depth) {
    PredSet p;
    p.add_all(z.body);
    for (const LevelInfo& l : levels) detail::add_state_atoms(p, l.r_bad.body);
    try {
        StateSet y = z;
        for (int i = 0; i < chain_depth; ++i) {
            y = StateSet{z.vars, simplify_dnf(dnf_join(z.body, pre(r, y).body))};
            p.add_all(y.body);
        }
    } catch (const DnfBlowup&) {
        // partial chain still yields a usable seed
    }
    return p;
}

namespace detail {

/// Variables the relation never changes; their bounds are invariant
/// along every trace, so discovered bounds make durable predicates.
inline std::vector<VarId> unchanged_vars(const Rel& r) {
    std::vector<VarId> out;
    for (const VarId& v : r.vars) {
        LinExpr d;
        d.add_term(v.with_primed(true), Int(1));
        d.add_term(v, Int(-1));
        Conj frame{{Atom::eq(d)}};
        bool fixed = true;
        for (const Conj& rho : r.body.disjuncts)
            if (!conj_entails(rho, frame)) {
                fixed = false;
                break;
            }
        if (fixed && !r.body.disjuncts.empty()) out.push_back(v);
    }
    return out;
}

/// Interval bounds of each listed variable inside a conjunction,
/// discovered by projection. Feeding these back as predicates keeps
/// implied bounds that no single atom of the conjunction states.
inline void add_interval_preds(PredSet& p, const Conj& c, const std::vector<VarId>& vars) {
    std::set<VarId> support;
    for (const Atom& a : c.atoms)
        for (const auto& [v, k] : a.expr.coeffs()) support.insert(v);
    for (const VarId& keep : vars) {
        std::set<VarId> elim = support;
        elim.erase(keep);
        for (const Atom& a : project(c, elim).atoms)
            if (!a.expr.is_constant()) p.add(a);
    }
}

}  // namespace detail

/// Ascending abstract chain B_0 = alpha(z), B_{k+1} = B_0 join
/// alpha(pre(r, B_k)); overapproximates the states that can reach z.
inline StateSet approx_V(const StateSet& z, const Rel& r, const PredSet& p, int max_iters,
                         int* iters_used = nullptr, bool* converged = nullptr) {
    if (iters_used) *iters_used = 0;
    if (converged) *converged = false;
    if (z.body.is_false()) {
        if (converged) *converged = true;
        return z;
    }
    PredSet preds = p;
    std::vector<VarId> fixed = detail::unchanged_vars(r);
    Dnf b0 = alpha(z.body, preds);
    Dnf b = b0;
    try {
        for (int i = 0; i < max_iters; ++i) {
            if (iters_used) *iters_used = i + 1;
            Dnf exact = pre(r, StateSet{z.vars, b}).body;
            if (!fixed.empty())
                for (const Conj& c : exact.disjuncts) detail::add_interval_preds(preds, c, fixed);
            Dnf step = alpha(exact, preds);
            Dnf next = dnf_join(b0, step);
            if (dnf_entails_disjunctwise(next, b)) {
                if (converged) *converged = true;
                return StateSet{z.vars, simplify_dnf(b)};
            }
            b = dnf_join(b, next);
        }
    } catch (const DnfBlowup&) {
        // fall through with the last sound iterate
    }
    return StateSet{z.vars, simplify_dnf(b)};
}

/// Full chain: Z from the problematic part, V from Z under the whole
/// relation (trace-partitioned on W), P as the integer complement of V.
inline Precondition synth_precondition(const Rel& r, const Verdict& verdict, const Config& cfg,
                                       int v_seed_chain = 3) {
    Precondition out;
    out.z = approx_Z(verdict.r_bad, cfg.z_iters, &out.z_iters_used, &out.z_converged);
    Rel rp = partition_traces(r, verdict.w);
    PredSet p = seed_v_predicates(out.z, rp, verdict.levels, v_seed_chain);
    out.v = approx_V(out.z, rp, p, cfg.fixpoint_iters, &out.v_iters_used, &out.v_converged);
    out.p = StateSet{r.vars, negate_dnf(out.v.body)};
    return out;
}

}  // namespace loopterm
