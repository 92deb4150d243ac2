#pragma once

// Linear ranking function synthesis and the disjunctively well-founded
// candidate set W. A member with function f denotes the relation
// {f(x) >= 0, f(x') <= f(x) - 1}, well founded over the integers.

#include <optional>
#include <set>
#include <vector>

#include "loopterm/lincons.hpp"
#include "loopterm/logic.hpp"
#include "loopterm/rel.hpp"
#include "loopterm/simplex.hpp"

namespace loopterm {

enum class RfOrigin : std::uint8_t { Synthesized, PotentialBound };

namespace detail {

inline LinExpr prime_expr(const LinExpr& e) {
    LinExpr r = e.rename([](const VarId& v) { return v.with_primed(true); });
    r.set_constant(Int(0));  // f(x') compares variable parts; constants cancel
    return r;
}

/// Scale-normalize a ranking function: gcd-reduced variable part with the
/// constant floored. Preserves both the bound set and integer decrease.
inline LinExpr normalize_rf(const LinExpr& e) { return Atom::geq(e).expr; }

}  // namespace detail

struct WfRel {
    LinExpr f;
    RfOrigin origin = RfOrigin::PotentialBound;

    Atom bound() const { return Atom::geq(f); }
    Atom decrease() const {
        LinExpr var_part = f;
        var_part.set_constant(Int(0));
        return Atom::geq(var_part - detail::prime_expr(f) - LinExpr(Int(1)));
    }
    Conj to_conj() const { return Conj{{bound(), decrease()}}; }

    friend auto operator<=>(const WfRel&, const WfRel&) = default;

    std::string str() const { return to_conj().str(); }
};

struct DwfSet {
    std::vector<WfRel> members;

    bool empty() const { return members.empty(); }
    std::size_t size() const { return members.size(); }

    /// Insert unless a member with the same normalized f exists.
    bool add(WfRel w) {
        w.f = detail::normalize_rf(w.f);
        for (const WfRel& m : members)
            if (m.f == w.f) return false;
        members.push_back(std::move(w));
        return true;
    }

    friend auto operator<=>(const DwfSet&, const DwfSet&) = default;
};

/// Union of the member relations (false when W is empty).
inline Rel dwf_to_rel(const DwfSet& w, std::vector<VarId> vars) {
    Dnf body;
    for (const WfRel& m : w.members) body.disjuncts.push_back(m.to_conj());
    body.normalize();
    return Rel{std::move(vars), prune_dnf(std::move(body))};
}

/// Integer complement of the union: conjunction over members of
/// (f <= -1) or (f(x') >= f(x)), distributed into DNF.
inline Rel negate_dwf(const DwfSet& w, std::vector<VarId> vars) {
    Dnf acc = Dnf::truth();
    for (const WfRel& m : w.members) {
        Dnf alt;
        for (const Conj& n : negate_atom(m.bound()).disjuncts) alt.disjuncts.push_back(n);
        for (const Conj& n : negate_atom(m.decrease()).disjuncts) alt.disjuncts.push_back(n);
        alt.normalize();
        acc = dnf_meet(acc, alt);
    }
    return Rel{std::move(vars), std::move(acc)};
}

/// Complete (over the rationals) linear ranking function search for one
/// conjunctive path, by Farkas' lemma: both entailments
///   rho |= f(x) >= 0        rho |= f(x) - f(x') - 1 >= 0
/// are encoded as one feasibility LP over the multipliers and f's
/// coefficients. Equality atoms get free-signed multipliers.
inline std::optional<LinExpr> synth_lrf(const Conj& rho_in) {
    Conj rho = tighten(rho_in);
    if (rho.trivially_false() || rho.atoms.empty()) return std::nullopt;

    std::vector<VarId> allv = detail::conj_vars(rho);
    std::vector<VarId> unprimed;
    for (const VarId& v : allv)
        if (!v.primed) unprimed.push_back(v);
    if (unprimed.empty()) return std::nullopt;

    const std::size_t n = unprimed.size();
    const std::size_t k = rho.atoms.size();
    // unknowns: [c_1..c_n | lambda_1..lambda_k | mu_1..mu_k]
    const std::size_t nvar = n + 2 * k;
    auto cidx = [&](std::size_t i) { return i; };
    auto lidx = [&](std::size_t i) { return n + i; };
    auto midx = [&](std::size_t i) { return n + k + i; };
    std::map<VarId, std::size_t> upos;
    for (std::size_t i = 0; i < n; ++i) upos[unprimed[i]] = i;

    std::vector<LpRow> rows;
    auto blank = [&] {
        LpRow r;
        r.coeffs.assign(nvar, Rat(0));
        r.rhs = Rat(0);
        r.kind = RowKind::Eq;
        return r;
    };
    for (const VarId& y : allv) {
        LpRow r1 = blank();  // sum_i lambda_i a_i[y] = [y unprimed] c_y
        LpRow r2 = blank();  // sum_i mu_i a_i[y] = c_y or -c_base(y')
        for (std::size_t i = 0; i < k; ++i) {
            Rat a(rho.atoms[i].expr.coeff(y));
            r1.coeffs[lidx(i)] = a;
            r2.coeffs[midx(i)] = a;
        }
        if (!y.primed) {
            r1.coeffs[cidx(upos.at(y))] = Rat(-1);
            r2.coeffs[cidx(upos.at(y))] = Rat(-1);
        } else if (auto it = upos.find(y.with_primed(false)); it != upos.end()) {
            r2.coeffs[cidx(it->second)] = Rat(1);
        }
        rows.push_back(std::move(r1));
        rows.push_back(std::move(r2));
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (rho.atoms[i].op == AtomOp::Eq) continue;  // free-signed multiplier
        LpRow rl = blank(), rm = blank();
        rl.kind = rm.kind = RowKind::Geq;
        rl.coeffs[lidx(i)] = Rat(1);
        rm.coeffs[midx(i)] = Rat(1);
        rows.push_back(std::move(rl));
        rows.push_back(std::move(rm));
    }
    {
        // constant side of the decrease entailment: -1 - sum mu_i b_i >= 0
        LpRow rc = blank();
        rc.kind = RowKind::Geq;
        for (std::size_t i = 0; i < k; ++i) rc.coeffs[midx(i)] = Rat(-rho.atoms[i].expr.constant());
        rc.rhs = Rat(1);
        rows.push_back(std::move(rc));
    }

    LpOutcome out = Simplex::solve(rows);
    if (!out.feasible) return std::nullopt;

    // clear denominators of f's coefficients
    Int lcm = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Rat c = out.point[cidx(i)];
        c.canonicalize();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    LinExpr f;
    for (std::size_t i = 0; i < n; ++i) {
        Rat c = out.point[cidx(i)] * Rat(lcm);
        c.canonicalize();
        f.add_term(unprimed[i], c.get_num());
    }
    if (f.coeffs().empty()) return std::nullopt;

    // sharpest valid constant: f >= 0 with -floor(min of the variable part)
    auto lo = minimize(rho, f);
    if (!lo.has_value()) return std::nullopt;
    Int floor_lo;
    mpz_fdiv_q(floor_lo.get_mpz_t(), lo->get_num().get_mpz_t(), lo->get_den().get_mpz_t());
    f.set_constant(-floor_lo);
    f = detail::normalize_rf(f);

    // independent validity check through the LP entailment engine
    WfRel w{f, RfOrigin::Synthesized};
    if (!entails(rho, w.bound()) || !entails(rho, w.decrease())) return std::nullopt;
    return f;
}

/// Lower bounds of the guard region: f for every atom f >= 0 of the path
/// projected onto the unprimed variables.
inline std::vector<LinExpr> potential_rfs(const Conj& rho) {
    std::set<VarId> primed;
    for (const VarId& v : detail::conj_vars(rho))
        if (v.primed) primed.insert(v);
    Conj guard = project(rho, primed);
    std::vector<LinExpr> out;
    for (const Atom& a : guard.atoms) {
        if (a.expr.is_constant()) continue;
        if (a.op == AtomOp::Geq) {
            out.push_back(a.expr);
        } else {
            // an equality bounds both directions
            out.push_back(a.expr);
            out.push_back(-a.expr);
        }
    }
    return out;
}

/// One analysis round of candidate growth: per satisfiable path, the
/// synthesized ranking function if one exists, otherwise every potential
/// bound. Members already in `w` are skipped.
inline DwfSet find_dwf_candidate(const Rel& r, const DwfSet& w) {
    DwfSet delta;
    DwfSet seen = w;
    for (const Conj& rho : r.body.disjuncts) {
        if (!is_sat(rho)) continue;
        if (auto f = synth_lrf(rho)) {
            if (seen.add(WfRel{*f, RfOrigin::Synthesized}))
                delta.add(WfRel{*f, RfOrigin::Synthesized});
            continue;
        }
        for (LinExpr& f : potential_rfs(rho))
            if (seen.add(WfRel{f, RfOrigin::PotentialBound}))
                delta.add(WfRel{std::move(f), RfOrigin::PotentialBound});
    }
    return delta;
}

}  // namespace loopterm
