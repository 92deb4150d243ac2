#pragma once

// Decision procedures over the DNF kernel: satisfiability and entailment
// through the exact simplex (rational relaxation, sharpened by integer
// tightening of equality-substituted atoms), Fourier-Motzkin projection,
// simplification and complementation.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "loopterm/lincons.hpp"
#include "loopterm/simplex.hpp"

namespace loopterm {

namespace detail {

inline std::vector<VarId> conj_vars(const Conj& c) {
    std::set<VarId> vs;
    for (const Atom& a : c.atoms)
        for (const auto& [v, k] : a.expr.coeffs()) vs.insert(v);
    return {vs.begin(), vs.end()};
}

inline std::vector<LpRow> conj_rows(const Conj& c, const std::vector<VarId>& vars) {
    std::map<VarId, std::size_t> idx;
    for (std::size_t i = 0; i < vars.size(); ++i) idx[vars[i]] = i;
    std::vector<LpRow> rows;
    rows.reserve(c.atoms.size());
    for (const Atom& a : c.atoms) {
        LpRow r;
        r.coeffs.assign(vars.size(), Rat(0));
        for (const auto& [v, k] : a.expr.coeffs()) r.coeffs[idx.at(v)] = Rat(k);
        r.rhs = Rat(-a.expr.constant());
        r.kind = a.op == AtomOp::Geq ? RowKind::Geq : RowKind::Eq;
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Rewrite `a` modulo the equality `eq` (eq.expr = 0) so that `pivot`
/// no longer occurs; equivalent over the points satisfying `eq`.
inline Atom substitute_eq(const Atom& a, const Atom& eq, const VarId& pivot) {
    Int c = eq.expr.coeff(pivot);
    Int k = a.expr.coeff(pivot);
    if (k == 0) return a;
    Int cabs = abs(c);
    Int s = c > 0 ? 1 : -1;
    LinExpr e = a.expr * cabs - eq.expr * (k * s);
    return a.op == AtomOp::Geq ? Atom::geq(std::move(e)) : Atom::eq(std::move(e));
}

}  // namespace detail

/// Equality-substitution normal form with integer tightening: every
/// equality eliminates its pivot variable from all other atoms, and the
/// rewritten inequalities are gcd-tightened. Equivalent over the
/// integers; sharper than the raw rational relaxation.
inline Conj tighten(const Conj& c) {
    std::vector<Atom> atoms = c.atoms;
    std::vector<Atom> done;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        Atom cur = atoms[i];
        if (cur.trivially_false()) return Conj::falsity();
        if (cur.trivially_true()) continue;
        if (cur.op != AtomOp::Eq || cur.expr.is_constant()) continue;
        // pivot: variable of least absolute coefficient, ties by order
        VarId pivot = cur.expr.coeffs().begin()->first;
        Int best = abs(cur.expr.coeffs().begin()->second);
        for (const auto& [v, k] : cur.expr.coeffs())
            if (abs(k) < best) {
                best = abs(k);
                pivot = v;
            }
        for (std::size_t j = 0; j < atoms.size(); ++j)
            if (j != i) atoms[j] = detail::substitute_eq(atoms[j], cur, pivot);
        for (Atom& d : done) d = detail::substitute_eq(d, cur, pivot);
        done.push_back(cur);
        atoms[i] = Atom::truth();
    }
    Conj out;
    for (Atom& a : done) out.atoms.push_back(std::move(a));
    for (Atom& a : atoms)
        if (!a.trivially_true()) {
            if (a.trivially_false()) return Conj::falsity();
            out.atoms.push_back(std::move(a));
        }
    out.dedup();
    return out;
}

/// Satisfiability of a conjunction; false is sound for the integers.
/// Memoized: identical conjunctions recur heavily across fixpoint rounds.
inline bool is_sat(const Conj& c) {
    static std::map<Conj, bool> cache;
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
    Conj t = tighten(c);
    bool result;
    if (t.trivially_false()) result = false;
    else if (t.atoms.empty()) result = true;
    else result = Simplex::solve(detail::conj_rows(t, detail::conj_vars(t))).feasible;
    if (cache.size() >= 65536) cache.clear();
    cache.emplace(c, result);
    return result;
}

namespace detail {

/// Rational witness of an already tightened conjunction; variables the
/// conjunction does not mention are implicitly zero.
inline std::optional<std::map<VarId, Rat>> tight_sat_point(const Conj& t) {
    std::map<VarId, Rat> p;
    if (t.trivially_false()) return std::nullopt;
    if (t.atoms.empty()) return p;
    auto vars = conj_vars(t);
    LpOutcome out = Simplex::solve(conj_rows(t, vars));
    if (!out.feasible) return std::nullopt;
    for (std::size_t i = 0; i < vars.size() && i < out.point.size(); ++i) p[vars[i]] = out.point[i];
    return p;
}

inline Rat eval_expr(const LinExpr& e, const std::map<VarId, Rat>& p) {
    Rat v{e.constant()};
    for (const auto& [var, k] : e.coeffs()) {
        auto it = p.find(var);
        if (it != p.end()) v += Rat(k) * it->second;
    }
    return v;
}

/// The witness lands in the integer negation of `a`, certifying
/// non-entailment without an LP; a margin under one unit is left to
/// the full check.
inline bool refuted_at(const std::map<VarId, Rat>& p, const Atom& a) {
    Rat v = eval_expr(a.expr, p);
    if (a.op == AtomOp::Geq) return v <= Rat(-1);
    return v <= Rat(-1) || v >= Rat(1);
}

}  // namespace detail

inline bool entails(const Conj& c, const Atom& a) {
    if (a.trivially_true()) return true;
    for (const Conj& n : negate_atom(a).disjuncts)
        if (is_sat(c & n)) return false;
    return true;
}

/// c1 subseteq c2 as point sets.
inline bool conj_entails(const Conj& c1, const Conj& c2) {
    for (const Atom& a : c2.atoms)
        if (!entails(c1, a)) return false;
    return true;
}

/// Exact minimum of `obj` over the conjunction (nullopt when the
/// conjunction is unsatisfiable or the objective unbounded below).
inline std::optional<Rat> minimize(const Conj& c, const LinExpr& obj) {
    Conj t = tighten(c);
    if (t.trivially_false()) return std::nullopt;
    std::set<VarId> vs;
    for (const auto& [v, k] : obj.coeffs()) vs.insert(v);
    for (const VarId& v : detail::conj_vars(t)) vs.insert(v);
    std::vector<VarId> vars(vs.begin(), vs.end());
    std::map<VarId, std::size_t> idx;
    for (std::size_t i = 0; i < vars.size(); ++i) idx[vars[i]] = i;
    std::vector<Rat> objective(vars.size(), Rat(0));
    for (const auto& [v, k] : obj.coeffs()) objective[idx.at(v)] = Rat(k);
    auto out = Simplex::solve(detail::conj_rows(t, vars), objective);
    if (!out.feasible || out.unbounded) return std::nullopt;
    return out.objective + Rat(obj.constant());
}

/// Entailment between two canonical atoms without an LP. Farkas for a
/// single constraint: only parallel atoms entail one another, and
/// primitive coefficient vectors force a unit multiplier.
inline bool atom_entails(const Atom& a, const Atom& b) {
    if (b.trivially_true() || a.trivially_false()) return true;
    if (b.trivially_false() || a.trivially_true()) return false;
    const auto& va = a.expr.coeffs();
    const auto& vb = b.expr.coeffs();
    if (va.size() != vb.size()) return false;
    auto parallel = [&](int s) {
        auto it = va.begin();
        auto jt = vb.begin();
        for (; it != va.end(); ++it, ++jt)
            if (it->first != jt->first || it->second * s != jt->second) return false;
        return true;
    };
    int s = parallel(1) ? 1 : (parallel(-1) ? -1 : 0);
    if (s == 0) return false;
    if (a.op == AtomOp::Geq)
        return b.op == AtomOp::Geq && s == 1 && b.expr.constant() >= a.expr.constant();
    if (b.op == AtomOp::Geq) return b.expr.constant() >= s * a.expr.constant();
    return b.expr.constant() == s * a.expr.constant();
}

/// Drop atoms that another single atom of the same conjunction entails.
inline Conj drop_pairwise_redundant(const Conj& c) {
    std::vector<Atom> kept;
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
        const Atom& a = c.atoms[i];
        bool redundant = a.trivially_true();
        for (std::size_t j = 0; !redundant && j < c.atoms.size(); ++j) {
            if (i == j) continue;
            // keep the later of two equivalent atoms
            if (j > i && atom_entails(a, c.atoms[j])) continue;
            if (atom_entails(c.atoms[j], a)) redundant = true;
        }
        if (!redundant) kept.push_back(a);
    }
    return Conj{std::move(kept)};
}

/// Fourier-Motzkin elimination (rational, with equality substitution
/// first); sound overapproximation of the integer projection.
inline Conj project(const Conj& c, const std::set<VarId>& eliminate) {
    Conj cur = tighten(c);
    if (cur.trivially_false()) return Conj::falsity();
    for (const VarId& v : eliminate) {
        // equality substitution if possible
        const Atom* eq = nullptr;
        for (const Atom& a : cur.atoms)
            if (a.op == AtomOp::Eq && a.expr.coeff(v) != 0) {
                eq = &a;
                break;
            }
        if (eq) {
            Atom eqa = *eq;
            Conj next;
            for (const Atom& a : cur.atoms) {
                if (&a == eq || a == eqa) continue;
                next.atoms.push_back(detail::substitute_eq(a, eqa, v));
            }
            next.dedup();
            cur = std::move(next);
        } else {
            std::vector<Atom> lower, upper, rest;
            for (const Atom& a : cur.atoms) {
                Int k = a.expr.coeff(v);
                if (k > 0)
                    lower.push_back(a);
                else if (k < 0)
                    upper.push_back(a);
                else
                    rest.push_back(a);
            }
            for (const Atom& l : lower)
                for (const Atom& u : upper) {
                    Int lc = l.expr.coeff(v), uc = u.expr.coeff(v);
                    rest.push_back(Atom::geq(l.expr * (-uc) + u.expr * lc));
                }
            cur = Conj{std::move(rest)};
        }
        if (cur.trivially_false()) return Conj::falsity();
        cur = drop_pairwise_redundant(cur);
    }
    return cur;
}

/// Remove every atom entailed by the remainder of its conjunction.
inline Conj simplify_conj(const Conj& c) {
    Conj cur = tighten(c);
    if (cur.trivially_false()) return Conj::falsity();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < cur.atoms.size(); ++i) {
            Conj rest;
            for (std::size_t j = 0; j < cur.atoms.size(); ++j)
                if (j != i) rest.atoms.push_back(cur.atoms[j]);
            if (entails(rest, cur.atoms[i])) {
                cur = std::move(rest);
                changed = true;
                break;
            }
        }
    }
    return cur;
}

/// Drop unsat disjuncts, intra-conjunct redundancy, and disjuncts
/// subsumed by another disjunct.
inline Dnf simplify_dnf(const Dnf& phi) {
    std::vector<Conj> ds;
    for (const Conj& c : phi.disjuncts) {
        if (!is_sat(c)) continue;
        ds.push_back(simplify_conj(c));
    }
    std::vector<bool> dead(ds.size(), false);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = 0; j < ds.size(); ++j) {
            if (i == j || dead[j] || dead[i]) continue;
            if (conj_entails(ds[i], ds[j])) {
                if (conj_entails(ds[j], ds[i]) && j > i)
                    dead[j] = true;  // equivalent: keep the earlier
                else
                    dead[i] = true;  // ds[i] subseteq ds[j]
            }
        }
    }
    Dnf out;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!dead[i]) out.disjuncts.push_back(std::move(ds[i]));
    out.normalize();
    return out;
}

/// Subsumption-only pruning (cheap pass used inside products).
inline Dnf prune_dnf(Dnf phi) {
    std::vector<Conj> ds;
    for (Conj& c : phi.disjuncts)
        if (is_sat(c)) ds.push_back(std::move(c));
    std::vector<bool> dead(ds.size(), false);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.size() && !dead[i]; ++j) {
            if (i == j || dead[j]) continue;
            if (!conj_entails(ds[i], ds[j])) continue;
            if (j > i && conj_entails(ds[j], ds[i])) continue;  // equivalent: keep i
            dead[i] = true;
        }
    Dnf out;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!dead[i]) out.disjuncts.push_back(std::move(ds[i]));
    out.normalize();
    return out;
}

inline Dnf dnf_meet(const Dnf& a, const Dnf& b) {
    Dnf out;
    for (const Conj& ca : a.disjuncts)
        for (const Conj& cb : b.disjuncts) {
            Conj c = ca & cb;
            if (!c.trivially_false()) out.disjuncts.push_back(std::move(c));
        }
    out.normalize();
    return prune_dnf(std::move(out));
}

inline Dnf dnf_join(const Dnf& a, const Dnf& b) {
    Dnf out = a;
    for (const Conj& c : b.disjuncts) out.disjuncts.push_back(c);
    out.normalize();
    return prune_dnf(std::move(out));
}

/// Integer complement.
inline Dnf negate_dnf(const Dnf& phi) {
    Dnf acc = Dnf::truth();
    for (const Conj& c : phi.disjuncts) {
        Dnf neg;  // complement of one conjunction
        for (const Atom& a : c.atoms)
            for (const Conj& n : negate_atom(a).disjuncts) neg.disjuncts.push_back(n);
        neg.normalize();
        acc = dnf_meet(acc, neg);
        if (acc.is_false()) return acc;
    }
    return simplify_dnf(acc);
}

/// a subseteq b over the integers, exact: a minus b must be empty.
/// Subtracts one disjunct of b at a time from the satisfiable residue of a,
/// which avoids materializing the full complement of b.
inline bool dnf_entails(const Dnf& a, const Dnf& b) {
    std::vector<Conj> pieces;
    for (const Conj& d : a.disjuncts)
        if (is_sat(d)) pieces.push_back(tighten(d));
    for (const Conj& g : b.disjuncts) {
        if (pieces.empty()) return true;
        Dnf not_g = negate_dnf(Dnf{{g}});
        std::vector<Conj> next;
        for (const Conj& c : pieces) {
            if (!is_sat(c & g)) {  // disjoint: subtraction is a no-op
                next.push_back(c);
                continue;
            }
            for (const Conj& n : not_g.disjuncts) {
                Conj piece = c & n;
                if (is_sat(piece)) next.push_back(tighten(piece));
            }
        }
        pieces = std::move(next);
    }
    return pieces.empty();
}

inline bool dnf_equiv(const Dnf& a, const Dnf& b) { return dnf_entails(a, b) && dnf_entails(b, a); }

/// Weaker, cheaper check: every disjunct subsumed by some disjunct of b.
inline bool dnf_entails_disjunctwise(const Dnf& a, const Dnf& b) {
    for (const Conj& d : a.disjuncts) {
        bool covered = false;
        for (const Conj& e : b.disjuncts)
            if (conj_entails(d, e)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

}  // namespace loopterm
