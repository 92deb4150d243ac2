#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "loopterm/lincons.hpp"

using namespace loopterm;
using namespace tt;

TEST_CASE("normalize_atom: strict shift and integer tightening") {
    // x > 0  ->  x - 1 >= 0
    Atom a = normalize_atom(expr({{"x", 1}}), CmpOp::Gt, expr({}));
    CHECK(a == geq0({{"x", 1}}, -1));

    // 2x >= 3  ->  x - 2 >= 0
    Atom b = normalize_atom(expr({{"x", 2}}), CmpOp::Geq, expr({}, 3));
    CHECK(b == geq0({{"x", 1}}, -2));

    // 2x = 3  ->  false
    Atom c = normalize_atom(expr({{"x", 2}}), CmpOp::Eq, expr({}, 3));
    CHECK(c.trivially_false());
}

TEST_CASE("normalize_atom: surface operators") {
    CHECK(normalize_atom(expr({{"x", 1}}), CmpOp::Lt, expr({{"y", 1}})) ==
          geq0({{"y", 1}, {"x", -1}}, -1));
    CHECK(normalize_atom(expr({{"x", 1}}), CmpOp::Leq, expr({}, 5)) == geq0({{"x", -1}}, 5));
    CHECK(normalize_atom(expr({{"x", 2}}), CmpOp::Eq, expr({{"y", 4}})) ==
          eq0({{"x", 1}, {"y", -2}}));
}

TEST_CASE("negate_atom") {
    // not(x + y >= 0) -> x + y <= -1
    Dnf n = negate_atom(geq0({{"x", 1}, {"y", 1}}));
    REQUIRE(n.disjuncts.size() == 1);
    CHECK(n.disjuncts[0].atoms[0] == geq0({{"x", -1}, {"y", -1}}, -1));

    // not(x >= 1) -> x <= 0
    Dnf m = negate_atom(geq0({{"x", 1}}, -1));
    CHECK(m.disjuncts[0].atoms[0] == geq0({{"x", -1}}, 0));

    // not(y = 0) -> y >= 1 or y <= -1
    Dnf e = negate_atom(eq0({{"y", 1}}));
    REQUIRE(e.disjuncts.size() == 2);
}

TEST_CASE("atom point semantics after normalization") {
    std::vector<VarId> vars{V("x"), V("y")};
    Atom a = normalize_atom(expr({{"x", 2}, {"y", 3}}), CmpOp::Gt, expr({}, 4));
    forall_points(vars, 5, [&](const std::map<VarId, Int>& p) {
        bool raw = 2 * p.at(V("x")) + 3 * p.at(V("y")) > 4;
        CHECK(a.holds(p) == raw);
    });
}

TEST_CASE("rendering is deterministic") {
    Conj c = conj({geq0({{"x", 1}, {"y", 2}}, -1), eq0({{"z", 1}})});
    CHECK(c.str() == "x + 2*y - 1 >= 0 && z = 0");
    CHECK(Dnf::falsity().str() == "false");
    CHECK(Dnf::truth().str() == "true");
}

TEST_CASE("dnf cap raises a recoverable error") {
    std::size_t saved = g_dnf_cap;
    g_dnf_cap = 3;
    Dnf d;
    bool blew = false;
    try {
        for (long i = 0; i < 10; ++i) d.add(conj({geq0({{"x", 1}}, -i)}));
    } catch (const DnfBlowup& b) {
        blew = true;
        CHECK(b.size > 3);
    }
    g_dnf_cap = saved;
    CHECK(blew);
}
