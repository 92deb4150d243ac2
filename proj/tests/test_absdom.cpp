#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "loopterm/absdom.hpp"

using namespace loopterm;
using namespace tt;

namespace {

bool has_pred(const PredSet& p, const Atom& a) {
    for (const Atom& q : p.preds)
        if (q == a) return true;
    return false;
}

}  // namespace

TEST_CASE("seed_predicates closure at level 0") {
    std::vector<VarId> vars{V("x"), V("y")};
    DwfSet w;
    w.add(WfRel{expr({{"x", 1}}, -1)});  // {x >= 1, x' <= x - 1}
    Rel r{vars, Dnf{{conj({geq0({{"x", 1}}, -1), eq0({{"x'", 1}, {"x", -1}, {"y", -1}})})}}};
    PredSet p = seed_predicates(w, r, 0);
    CHECK(has_pred(p, geq0({{"x", 1}}, -1)));           // x >= 1
    CHECK(has_pred(p, geq0({{"x", -1}})));              // x <= 0
    CHECK(has_pred(p, geq0({{"x", 1}, {"x'", -1}}, -1)));  // x' <= x - 1
    CHECK(has_pred(p, geq0({{"x'", 1}, {"x", -1}})));      // x' >= x

    // level-1 seed is a superset
    PredSet p1 = seed_predicates(w, r, 1);
    for (const Atom& a : p.preds) CHECK(has_pred(p1, a));
}

TEST_CASE("alpha") {
    PredSet p;
    p.add(geq0({{"x", 1}}, -1));
    p.add(geq0({{"y", 1}}));
    CHECK(alpha(Dnf::falsity(), p).is_false());

    Dnf phi{{conj({geq0({{"x", 1}}, -2), geq0({{"y", 1}})})}};
    Dnf a = alpha(phi, p);
    CHECK(dnf_equiv(a, Dnf{{conj({geq0({{"x", 1}}, -1), geq0({{"y", 1}})})}}));

    // nothing entailed: top
    Dnf loose{{conj({geq0({{"x", -1}, {"y", 1}})})}};
    CHECK(alpha(loose, p).is_true());

    // soundness: phi subseteq alpha(phi) pointwise
    forall_points({V("x"), V("y")}, 4, [&](const std::map<VarId, Int>& pt) {
        if (phi.holds(pt)) CHECK(a.holds(pt));
    });
}

TEST_CASE("partition_traces") {
    std::vector<VarId> vars{V("x")};
    Rel r{vars, Dnf{{conj({geq0({{"x", 1}}), eq0({{"x'", 1}, {"x", 2}}, -10)})}}};
    CHECK(partition_traces(r, DwfSet{}) == r);

    DwfSet w;
    w.add(WfRel{expr({{"x", 1}})});
    Rel rp = partition_traces(r, w);
    CHECK(rp.body.disjuncts.size() == 2);  // increasing and decreasing halves
    std::vector<VarId> pv{V("x"), V("x'")};
    forall_points(pv, 12, [&](const std::map<VarId, Int>& p) {
        CHECK(rp.body.holds(p) == r.body.holds(p));
    });

    // split atom entailed by the path: one half survives
    Rel down{vars, Dnf{{conj({geq0({{"x", 1}}, -1), eq0({{"x'", 1}, {"x", -1}}, 1)})}}};
    CHECK(partition_traces(down, w).body.disjuncts.size() == 1);
}

TEST_CASE("compute_G: empty candidate proves nothing") {
    std::vector<VarId> vars{V("x")};
    Rel r{vars, Dnf{{conj({geq0({{"x", 1}}), eq0({{"x'", 1}, {"x", -1}}, 1)})}}};
    Rel g = compute_G(r, DwfSet{}, PredSet{}, 64);
    CHECK(g.is_false());
}

TEST_CASE("compute_G: descending-then-stuck single path") {
    // R = {x>=1, x'=x+y, y'=y-1}, W = {x'<x, x>=1}
    // residue must be the y >= 0 part
    std::vector<VarId> vars{V("x"), V("y")};
    Rel r{vars, Dnf{{conj({geq0({{"x", 1}}, -1), eq0({{"x'", 1}, {"x", -1}, {"y", -1}}),
                           eq0({{"y'", 1}, {"y", -1}}, 1)})}}};
    DwfSet w;
    w.add(WfRel{expr({{"x", 1}}, -1)});
    Rel rp = partition_traces(r, w);
    PredSet p = seed_predicates(w, rp, 1);
    Rel g = compute_G(rp, w, p, 64);
    Rel r_bad{vars, simplify_dnf(minus(rp, g).body)};
    Dnf expect{{conj({geq0({{"x", 1}}, -1), eq0({{"x'", 1}, {"x", -1}, {"y", -1}}),
                      eq0({{"y'", 1}, {"y", -1}}, 1), geq0({{"y", 1}})})}};
    CHECK(dnf_equiv(r_bad.body, expect));
}

TEST_CASE("compute_G: the motivating first round") {
    std::vector<VarId> vars{V("x"), V("y"), V("z")};
    Rel r{vars, Dnf{{conj({geq0({{"x", 1}}, -1), eq0({{"x'", 1}, {"x", -1}, {"y", -1}}),
                           eq0({{"y'", 1}, {"y", -1}, {"z", -1}}), eq0({{"z'", 1}, {"z", -1}})})}}};
    DwfSet w;
    w.add(WfRel{expr({{"x", 1}}, -1)});
    Rel rp = partition_traces(r, w);
    PredSet p = seed_predicates(w, rp, 1);
    Rel g = compute_G(rp, w, p, 64);
    Rel r_bad{vars, simplify_dnf(minus(rp, g).body)};

    std::vector<Atom> updates{eq0({{"x'", 1}, {"x", -1}, {"y", -1}}),
                              eq0({{"y'", 1}, {"y", -1}, {"z", -1}}),
                              eq0({{"z'", 1}, {"z", -1}})};
    auto with = [&](std::vector<Atom> extra) {
        for (const Atom& u : updates) extra.push_back(u);
        return Conj{std::move(extra)};
    };
    // derived residue: survivors {x+y>=1, y<0} and the stuck phase {x>=1, y>=0}
    Dnf expect{{with({geq0({{"x", 1}, {"y", 1}}, -1), geq0({{"y", -1}}, -1)}),
                with({geq0({{"x", 1}}, -1), geq0({{"y", 1}})})}};
    CHECK(dnf_equiv(r_bad.body, expect));

    // the stuck phase is fully retained and nothing spills outside the input
    CHECK(dnf_entails(Dnf{{with({geq0({{"x", 1}}, -1), geq0({{"y", 1}})})}}, r_bad.body));
    CHECK(dnf_entails(r_bad.body, rp.body));
}
