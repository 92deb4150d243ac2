#pragma once

// Predicate abstraction with trace partitioning. Computes a sound
// underapproximation G of the greatest fixpoint that certifies the
// proven-terminating part of the relation, as the complement of an
// abstract least-fixpoint overapproximation.

#include <algorithm>
#include <vector>

#include "loopterm/lincons.hpp"
#include "loopterm/logic.hpp"
#include "loopterm/ranking.hpp"
#include "loopterm/rel.hpp"

namespace loopterm {

/// Negation-closed finite predicate set. Equality atoms are stored as
/// their two >= halves so positive combinations stay complement-closed.
struct PredSet {
    std::vector<Atom> preds;

    void add(const Atom& a) {
        if (a.expr.is_constant()) return;
        if (a.op == AtomOp::Eq) {
            add(Atom::geq(a.expr));
            add(Atom::geq(-a.expr));
            return;
        }
        insert(a);
        insert(Atom::geq(-a.expr - LinExpr(Int(1))));  // integer negation
    }

    void add_all(const Dnf& phi) {
        for (const Conj& c : phi.disjuncts)
            for (const Atom& a : c.atoms) add(a);
    }

    std::size_t size() const { return preds.size(); }

private:
    void insert(Atom a) {
        auto it = std::lower_bound(preds.begin(), preds.end(), a);
        if (it == preds.end() || *it != a) preds.insert(it, std::move(a));
    }
};

/// Best abstraction of phi: per disjunct, the conjunction of every
/// predicate it entails. Always a superset of phi as a point set.
inline Dnf alpha(const Dnf& phi, const PredSet& p) {
    Dnf out;
    for (const Conj& d : phi.disjuncts) {
        Conj t = tighten(d);
        auto witness = detail::tight_sat_point(t);
        if (!witness) continue;
        Conj a;
        for (const Atom& pr : p.preds) {
            if (detail::refuted_at(*witness, pr)) continue;
            if (entails(t, pr)) a.atoms.push_back(pr);
        }
        a.dedup();
        out.disjuncts.push_back(std::move(a));
    }
    out.normalize();
    return prune_dnf(std::move(out));
}

/// Split every path on decrease vs non-decrease of each W member.
/// Point-equivalent to r; pure precision aid, so blow-up returns r.
inline Rel partition_traces(const Rel& r, const DwfSet& w) {
    if (w.empty()) return r;
    try {
        Dnf cur = r.body;
        for (const WfRel& m : w.members) {
            Atom dec = m.decrease();
            Atom inc = Atom::geq(-dec.expr - LinExpr(Int(1)));
            Dnf next;
            for (const Conj& rho : cur.disjuncts) {
                Conj a = rho & Conj{{dec}};
                Conj b = rho & Conj{{inc}};
                if (is_sat(a)) next.disjuncts.push_back(std::move(a));
                if (is_sat(b)) next.disjuncts.push_back(std::move(b));
            }
            next.normalize();
            cur = std::move(next);
        }
        return Rel{r.vars, std::move(cur)};
    } catch (const DnfBlowup&) {
        return r;
    }
}

/// Predicates for the current W: atoms of W and of not-W, plus the atoms
/// of the first `level` elements of the backward chain
///   X_0 = not-W,  X_{i+1} = not-W union X_i o r^-1
/// computed concretely on the (partitioned) relation.
inline PredSet seed_predicates(const DwfSet& w, const Rel& r, int level) {
    PredSet p;
    p.add_all(negate_dwf(w, r.vars).body);
    p.add_all(dwf_to_rel(w, r.vars).body);
    if (level <= 0) return p;
    try {
        PredSet ext = p;
        Rel not_w = negate_dwf(w, r.vars);
        Rel rinv = inverse(r);
        Rel x = not_w;
        for (int i = 0; i < level; ++i) {
            x = Rel{r.vars, dnf_join(not_w.body, compose(x, rinv).body)};
            ext.add_all(simplify_dnf(x.body));
        }
        return ext;
    } catch (const DnfBlowup&) {
        return p;  // level-0 seed is always available
    }
}

/// Underapproximation of the set of pairs all of whose extensions stay in
/// W, via the dual abstract iteration
///   A_0 = alpha(not-W),  A_{k+1} = A_0 union alpha(A_k o r^-1)
/// followed by complement. Any failure degrades to G = false, which the
/// driver reads as no progress.
inline Rel compute_G(const Rel& r, const DwfSet& w, const PredSet& p, int max_iters,
                     int* iters_used = nullptr) {
    if (iters_used) *iters_used = 0;
    if (w.empty()) return Rel::falsity(r.vars);
    try {
        Rel rinv = inverse(r);
        Dnf a0 = alpha(negate_dwf(w, r.vars).body, p);
        Dnf a = a0;
        for (int i = 0; i < max_iters; ++i) {
            if (iters_used) *iters_used = i + 1;
            Dnf step = alpha(compose(Rel{r.vars, a}, rinv).body, p);
            Dnf next = dnf_join(a0, step);
            if (dnf_entails_disjunctwise(next, a)) {
                return Rel{r.vars, negate_dnf(a)};
            }
            a = dnf_join(a, next);
        }
        return Rel::falsity(r.vars);  // not stabilized
    } catch (const DnfBlowup&) {
        return Rel::falsity(r.vars);
    }
}

}  // namespace loopterm
