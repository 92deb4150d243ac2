#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "loopterm/logic.hpp"

using namespace loopterm;
using namespace tt;

TEST_CASE("is_sat basics") {
    CHECK_FALSE(is_sat(conj({geq0({{"x", 1}}, -1), geq0({{"x", -1}})})));
    CHECK(is_sat(Conj::truth()));
    // {x >= 0, x' = -2x + 10, x' <= x - 1}: witness x = 4
    Conj c = conj({geq0({{"x", 1}}), eq0({{"x'", 1}, {"x", 2}}, -10),
                   geq0({{"x", 1}, {"x'", -1}}, -1)});
    CHECK(is_sat(c));
}

TEST_CASE("tightening detects integer-only contradictions") {
    // x' = -2x + 10, x' >= x, x' <= x has only the rational solution x = 10/3
    Conj c = conj({eq0({{"x'", 1}, {"x", 2}}, -10), geq0({{"x'", 1}, {"x", -1}}),
                   geq0({{"x", 1}, {"x'", -1}})});
    CHECK_FALSE(is_sat(c));
}

TEST_CASE("entails") {
    CHECK(entails(conj({geq0({{"x", 1}}, -2)}), geq0({{"x", 1}}, -1)));
    CHECK(entails(conj({geq0({{"x", 1}}, -1), geq0({{"y", 1}})}), geq0({{"x", 1}, {"y", 1}}, -1)));
    CHECK_FALSE(entails(conj({geq0({{"x", 1}})}), geq0({{"x", 1}}, -1)));
}

TEST_CASE("project: substitution of a defined variable") {
    // project({x >= 1, x' = x + y, y <= -1}, {x'}) -> {x >= 1, y <= -1}
    Conj c = conj({geq0({{"x", 1}}, -1), eq0({{"x'", 1}, {"x", -1}, {"y", -1}}),
                   geq0({{"y", -1}}, -1)});
    Conj p = project(c, {V("x'")});
    CHECK(conj_entails(p, conj({geq0({{"x", 1}}, -1), geq0({{"y", -1}}, -1)})));
    CHECK(conj_entails(conj({geq0({{"x", 1}}, -1), geq0({{"y", -1}}, -1)}), p));
}

TEST_CASE("project: guard bound extraction") {
    // project({x >= 1, x' = x + y, y' = y + z, z' = z}, primed) -> {x >= 1}
    Conj c = conj({geq0({{"x", 1}}, -1), eq0({{"x'", 1}, {"x", -1}, {"y", -1}}),
                   eq0({{"y'", 1}, {"y", -1}, {"z", -1}}), eq0({{"z'", 1}, {"z", -1}})});
    Conj p = project(c, {V("x'"), V("y'"), V("z'")});
    CHECK(p == conj({geq0({{"x", 1}}, -1)}));
}

TEST_CASE("project: scaled equality kept exact") {
    // project({x <= y - 1, 2y' = y}, {y'}) -> {x <= y - 1}
    Conj c = conj({geq0({{"y", 1}, {"x", -1}}, -1), eq0({{"y'", 2}, {"y", -1}})});
    Conj p = project(c, {V("y'")});
    CHECK(p == conj({geq0({{"y", 1}, {"x", -1}}, -1)}));

    // brute-force extension soundness on a box
    std::vector<VarId> uv{V("x"), V("y")};
    forall_points(uv, 4, [&](const std::map<VarId, Int>& pt) {
        for (long yp = -4; yp <= 4; ++yp) {
            auto full = pt;
            full[V("y'")] = Int(yp);
            if (c.holds(full)) CHECK(p.holds(pt));
        }
    });
}

TEST_CASE("simplify_dnf") {
    // {x>=1, x>=0} -> {x>=1}
    Dnf a = dnf({conj({geq0({{"x", 1}}, -1), geq0({{"x", 1}})})});
    CHECK(simplify_dnf(a) == dnf({conj({geq0({{"x", 1}}, -1)})}));

    // {x>=1,x<=0} or {y>=0} -> {y>=0}
    Dnf b = dnf({conj({geq0({{"x", 1}}, -1), geq0({{"x", -1}})}), conj({geq0({{"y", 1}})})});
    CHECK(simplify_dnf(b) == dnf({conj({geq0({{"y", 1}})})}));

    // {x>=1} or {x>=2} -> {x>=1}
    Dnf c = dnf({conj({geq0({{"x", 1}}, -1)}), conj({geq0({{"x", 1}}, -2)})});
    CHECK(simplify_dnf(c) == dnf({conj({geq0({{"x", 1}}, -1)})}));
}

TEST_CASE("negate_dnf basics") {
    CHECK(negate_dnf(Dnf::falsity()).is_true());
    CHECK(negate_dnf(Dnf::truth()).is_false());

    // not({y=0, x<=-1}) -> y>=1 or y<=-1 or x>=0
    Dnf v = dnf({conj({eq0({{"y", 1}}), geq0({{"x", -1}}, -1)})});
    Dnf p = negate_dnf(v);
    Dnf expect = dnf({conj({geq0({{"y", 1}}, -1)}), conj({geq0({{"y", -1}}, -1)}),
                      conj({geq0({{"x", 1}})})});
    CHECK(dnf_equiv(p, expect));
}

TEST_CASE("negate_dnf point-complement on boxes") {
    std::vector<VarId> vars{V("x"), V("y")};
    std::vector<Dnf> samples = {
        dnf({conj({geq0({{"x", 1}, {"y", -2}}, 1)}), conj({eq0({{"y", 1}}, -1), geq0({{"x", -1}})})}),
        dnf({conj({geq0({{"x", 2}, {"y", 3}}, -2), geq0({{"x", -1}}, 3)})}),
        Dnf::falsity(),
    };
    for (const Dnf& phi : samples) {
        Dnf n = negate_dnf(phi);
        forall_points(vars, 5, [&](const std::map<VarId, Int>& p) {
            CHECK(phi.holds(p) != n.holds(p));
        });
        // double negation is point-equivalent
        Dnf nn = negate_dnf(n);
        forall_points(vars, 5, [&](const std::map<VarId, Int>& p) {
            CHECK(phi.holds(p) == nn.holds(p));
        });
    }
}

TEST_CASE("dnf entailment and equivalence") {
    Dnf a = dnf({conj({geq0({{"x", 1}}, -2)})});
    Dnf b = dnf({conj({geq0({{"x", 1}}, -1)})});
    CHECK(dnf_entails(a, b));
    CHECK_FALSE(dnf_entails(b, a));
    // split cover: {x>=1} or {x<=0} == true
    Dnf split = dnf({conj({geq0({{"x", 1}}, -1)}), conj({geq0({{"x", -1}})})});
    CHECK(dnf_equiv(split, Dnf::truth()));
}

TEST_CASE("minimize") {
    Conj c = conj({geq0({{"x", 1}}, -3), geq0({{"x", -1}}, 7)});  // 3 <= x <= 7
    auto lo = minimize(c, expr({{"x", 1}}));
    REQUIRE(lo.has_value());
    CHECK(*lo == Rat(3));
    CHECK_FALSE(minimize(c, expr({{"y", 1}})).has_value());  // unbounded
}
