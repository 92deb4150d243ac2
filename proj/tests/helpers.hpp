#pragma once

// Shared test utilities: terse constraint builders and integer-box
// enumeration used as the independent oracle.

#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "loopterm/lincons.hpp"

namespace tt {

using namespace loopterm;

inline VarId V(std::string name) {
    bool primed = !name.empty() && name.back() == '\'';
    if (primed) name.pop_back();
    return VarId{std::move(name), primed};
}

/// expr({{"x",1},{"y'",-2}}, 3) == x - 2*y' + 3
inline LinExpr expr(std::initializer_list<std::pair<const char*, long>> terms, long constant = 0) {
    LinExpr e{Int(constant)};
    for (const auto& [n, c] : terms) e.add_term(V(n), Int(c));
    return e;
}

inline Atom geq0(std::initializer_list<std::pair<const char*, long>> terms, long constant = 0) {
    return Atom::geq(expr(terms, constant));
}
inline Atom eq0(std::initializer_list<std::pair<const char*, long>> terms, long constant = 0) {
    return Atom::eq(expr(terms, constant));
}

inline Conj conj(std::vector<Atom> atoms) { return Conj{std::move(atoms)}; }
inline Dnf dnf(std::vector<Conj> cs) { return Dnf{std::move(cs)}; }

/// Enumerate all integer points of [-radius, radius]^vars.
inline void forall_points(const std::vector<VarId>& vars, long radius,
                          const std::function<void(const std::map<VarId, Int>&)>& fn) {
    std::map<VarId, Int> point;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == vars.size()) {
            fn(point);
            return;
        }
        for (long v = -radius; v <= radius; ++v) {
            point[vars[i]] = Int(v);
            rec(i + 1);
        }
    };
    rec(0);
}

}  // namespace tt
