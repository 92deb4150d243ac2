#pragma once

// Relation algebra over DNF-represented transition relations:
// composition, inverse, pre/post images and set operations.

#include <set>
#include <string>
#include <vector>

#include "loopterm/lincons.hpp"
#include "loopterm/logic.hpp"

namespace loopterm {

/// Transition relation: a Dnf over vars and their primed copies.
struct Rel {
    std::vector<VarId> vars;
    Dnf body;

    static Rel falsity(std::vector<VarId> vs) { return Rel{std::move(vs), Dnf::falsity()}; }
    static Rel truth(std::vector<VarId> vs) { return Rel{std::move(vs), Dnf::truth()}; }

    bool is_false() const { return body.is_false(); }

    friend auto operator<=>(const Rel&, const Rel&) = default;

    std::string str() const { return body.str(); }
};

/// Set of states: a Dnf over unprimed variables only.
struct StateSet {
    std::vector<VarId> vars;
    Dnf body;

    static StateSet falsity(std::vector<VarId> vs) { return StateSet{std::move(vs), Dnf::falsity()}; }
    static StateSet truth(std::vector<VarId> vs) { return StateSet{std::move(vs), Dnf::truth()}; }

    friend auto operator<=>(const StateSet&, const StateSet&) = default;

    std::string str() const { return body.str(); }
};

namespace detail {

/// Deterministic middle-variable name for composition.
inline VarId middle_var(const VarId& v) { return VarId{v.name + "#m", false}; }

}  // namespace detail

/// Swap primed and unprimed variables.
inline Rel inverse(const Rel& r) {
    return Rel{r.vars, r.body.rename([](const VarId& v) { return v.with_primed(!v.primed); })};
}

/// compose(r1, r2) = {(s, s'') | exists m. r1(s, m) and r2(m, s'')}.
inline Rel compose(const Rel& r1, const Rel& r2) {
    std::set<VarId> mids;
    for (const VarId& v : r1.vars) mids.insert(detail::middle_var(v));
    Dnf a = r1.body.rename(
        [](const VarId& v) { return v.primed ? detail::middle_var(v.with_primed(false)) : v; });
    Dnf b = r2.body.rename(
        [](const VarId& v) { return v.primed ? v : detail::middle_var(v); });
    Dnf out;
    for (const Conj& ca : a.disjuncts)
        for (const Conj& cb : b.disjuncts) {
            Conj c = project(ca & cb, mids);
            if (!c.trivially_false() && is_sat(c)) out.disjuncts.push_back(std::move(c));
        }
    out.normalize();
    return Rel{r1.vars, prune_dnf(std::move(out))};
}

/// pre(r, s) = states with an r-successor in s.
inline StateSet pre(const Rel& r, const StateSet& s) {
    std::set<VarId> primed;
    for (const VarId& v : r.vars) primed.insert(v.with_primed(true));
    Dnf target = s.body.rename([](const VarId& v) { return v.with_primed(true); });
    Dnf out;
    for (const Conj& cr : r.body.disjuncts)
        for (const Conj& cs : target.disjuncts) {
            Conj c = project(cr & cs, primed);
            if (!c.trivially_false() && is_sat(c)) out.disjuncts.push_back(std::move(c));
        }
    out.normalize();
    return StateSet{s.vars, prune_dnf(std::move(out))};
}

/// post(r, s) = states with an r-predecessor in s.
inline StateSet post(const Rel& r, const StateSet& s) { return pre(inverse(r), s); }

inline Rel meet(const Rel& a, const Rel& b) { return Rel{a.vars, dnf_meet(a.body, b.body)}; }
inline Rel join(const Rel& a, const Rel& b) { return Rel{a.vars, dnf_join(a.body, b.body)}; }

/// Set difference via integer-exact complement, so {meet(r, g), minus(r, g)}
/// is a genuine partition of r's integer points. Subtracts one disjunct of
/// b at a time and drops unsatisfiable pieces early, which stays tractable
/// where negating all of b at once would blow up.
inline Rel minus(const Rel& a, const Rel& b) {
    std::vector<Conj> pieces;
    for (const Conj& d : a.body.disjuncts)
        if (is_sat(d)) pieces.push_back(d);
    for (const Conj& g : b.body.disjuncts) {
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
        if (pieces.empty()) break;
    }
    Dnf body{std::move(pieces)};
    body.normalize();
    return Rel{a.vars, prune_dnf(std::move(body))};
}

}  // namespace loopterm
