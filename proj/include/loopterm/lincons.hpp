#pragma once

// Integer linear constraints in canonical form: atoms are `t >= 0` or
// `t = 0` with gcd-reduced integer coefficients, conjunctions are atom
// sets, formulas are disjunctions of conjunctions (DNF).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace loopterm {

using Int = mpz_class;
using Rat = mpq_class;

inline std::strong_ordering int_cmp(const Int& a, const Int& b) {
    int c = cmp(a, b);
    return c < 0   ? std::strong_ordering::less
           : c > 0 ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
}

/// A loop variable, possibly the primed (post-state) copy.
struct VarId {
    std::string name;
    bool primed = false;

    friend auto operator<=>(const VarId&, const VarId&) = default;

    VarId with_primed(bool p) const { return VarId{name, p}; }
    std::string str() const { return primed ? name + "'" : name; }
};

/// Sparse integer linear expression a0 + a1*x1 + ... + an*xn.
class LinExpr {
public:
    LinExpr() = default;
    explicit LinExpr(Int constant) : constant_(std::move(constant)) {}

    static LinExpr var(const VarId& v, Int coeff = 1) {
        LinExpr e;
        e.set_coeff(v, std::move(coeff));
        return e;
    }

    const Int& constant() const { return constant_; }
    void set_constant(Int c) { constant_ = std::move(c); }

    const std::map<VarId, Int>& coeffs() const { return coeffs_; }

    Int coeff(const VarId& v) const {
        auto it = coeffs_.find(v);
        return it == coeffs_.end() ? Int(0) : it->second;
    }

    void set_coeff(const VarId& v, Int c) {
        if (c == 0)
            coeffs_.erase(v);
        else
            coeffs_[v] = std::move(c);
    }

    void add_term(const VarId& v, const Int& c) { set_coeff(v, coeff(v) + c); }

    bool is_constant() const { return coeffs_.empty(); }

    LinExpr& operator+=(const LinExpr& o) {
        for (const auto& [v, c] : o.coeffs_) add_term(v, c);
        constant_ += o.constant_;
        return *this;
    }
    LinExpr& operator-=(const LinExpr& o) {
        for (const auto& [v, c] : o.coeffs_) add_term(v, -c);
        constant_ -= o.constant_;
        return *this;
    }
    LinExpr& operator*=(const Int& k) {
        if (k == 0) {
            coeffs_.clear();
            constant_ = 0;
            return *this;
        }
        for (auto& [v, c] : coeffs_) c *= k;
        constant_ *= k;
        return *this;
    }
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, const Int& k) { return a *= k; }
    LinExpr operator-() const {
        LinExpr r = *this;
        r *= Int(-1);
        return r;
    }

    /// gcd of the variable coefficients (0 when there are none).
    Int var_gcd() const {
        Int g = 0;
        for (const auto& [v, c] : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        return g;
    }

    /// Substitute every variable through `f` (used for priming/renaming).
    template <typename F>
    LinExpr rename(F&& f) const {
        LinExpr r(constant_);
        for (const auto& [v, c] : coeffs_) r.add_term(f(v), c);
        return r;
    }

    Int eval(const std::map<VarId, Int>& point) const {
        Int r = constant_;
        for (const auto& [v, c] : coeffs_) {
            auto it = point.find(v);
            if (it == point.end()) throw std::runtime_error("eval: unbound variable " + v.str());
            r += c * it->second;
        }
        return r;
    }

    bool mentions_primed() const {
        for (const auto& [v, c] : coeffs_)
            if (v.primed) return true;
        return false;
    }

    // mpz_class lacks <=>, so the ordering is spelled out
    friend std::strong_ordering operator<=>(const LinExpr& a, const LinExpr& b) {
        auto it = a.coeffs_.begin();
        auto jt = b.coeffs_.begin();
        for (; it != a.coeffs_.end() && jt != b.coeffs_.end(); ++it, ++jt) {
            if (auto c = it->first <=> jt->first; c != 0) return c;
            if (auto c = int_cmp(it->second, jt->second); c != 0) return c;
        }
        if (it != a.coeffs_.end()) return std::strong_ordering::greater;
        if (jt != b.coeffs_.end()) return std::strong_ordering::less;
        return int_cmp(a.constant_, b.constant_);
    }
    friend bool operator==(const LinExpr& a, const LinExpr& b) { return (a <=> b) == 0; }

    std::string str() const {
        if (coeffs_.empty()) return constant_.get_str();
        std::ostringstream os;
        bool first = true;
        for (const auto& [v, c] : coeffs_) {
            if (first) {
                if (c == -1)
                    os << "-";
                else if (c != 1)
                    os << c.get_str() << "*";
                first = false;
            } else {
                os << (c > 0 ? " + " : " - ");
                Int a = abs(c);
                if (a != 1) os << a.get_str() << "*";
            }
            os << v.str();
        }
        if (constant_ > 0)
            os << " + " << constant_.get_str();
        else if (constant_ < 0)
            os << " - " << Int(abs(constant_)).get_str();
        return os.str();
    }

private:
    std::map<VarId, Int> coeffs_;
    Int constant_ = 0;
};

enum class AtomOp : std::uint8_t { Geq, Eq };  // expr >= 0 | expr = 0

/// Canonical atom. Constructed through Atom::geq / Atom::eq which apply
/// gcd reduction and integer tightening.
struct Atom {
    LinExpr expr;
    AtomOp op = AtomOp::Geq;

    /// Canonical `e >= 0`. The constant is floored toward the feasible
    /// side after dividing out the gcd of the variable coefficients.
    static Atom geq(LinExpr e) {
        Int g = e.var_gcd();
        if (g > 1) {
            LinExpr r;
            for (const auto& [v, c] : e.coeffs()) r.set_coeff(v, c / g);
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), e.constant().get_mpz_t(), g.get_mpz_t());
            r.set_constant(q);
            e = std::move(r);
        }
        return Atom{std::move(e), AtomOp::Geq};
    }

    /// Canonical `e = 0`; infeasible parity collapses to the false atom.
    static Atom eq(LinExpr e) {
        Int g = e.var_gcd();
        if (g == 0) return e.constant() == 0 ? truth() : falsity();
        if (g > 1) {
            if (!mpz_divisible_p(e.constant().get_mpz_t(), g.get_mpz_t())) return falsity();
            LinExpr r;
            for (const auto& [v, c] : e.coeffs()) r.set_coeff(v, c / g);
            r.set_constant(e.constant() / g);
            e = std::move(r);
        }
        // deterministic sign: first coefficient positive
        if (e.coeffs().begin()->second < 0) e = -e;
        return Atom{std::move(e), AtomOp::Eq};
    }

    static Atom falsity() { return Atom{LinExpr(Int(-1)), AtomOp::Geq}; }
    static Atom truth() { return Atom{LinExpr(Int(0)), AtomOp::Geq}; }

    bool trivially_true() const { return expr.is_constant() && (op == AtomOp::Geq ? expr.constant() >= 0 : expr.constant() == 0); }
    bool trivially_false() const { return expr.is_constant() && (op == AtomOp::Geq ? expr.constant() < 0 : expr.constant() != 0); }

    bool holds(const std::map<VarId, Int>& point) const {
        Int v = expr.eval(point);
        return op == AtomOp::Geq ? v >= 0 : v == 0;
    }

    template <typename F>
    Atom rename(F&& f) const {
        // re-canonicalize: renaming can change the leading coefficient sign
        return op == AtomOp::Geq ? geq(expr.rename(f)) : eq(expr.rename(f));
    }

    friend auto operator<=>(const Atom&, const Atom&) = default;

    std::string str() const { return expr.str() + (op == AtomOp::Geq ? " >= 0" : " = 0"); }
};

/// Normalize a surface constraint `lhs op rhs` with op in {=,<=,>=,<,>}.
enum class CmpOp : std::uint8_t { Eq, Leq, Geq, Lt, Gt };

inline Atom normalize_atom(const LinExpr& lhs, CmpOp op, const LinExpr& rhs) {
    switch (op) {
        case CmpOp::Eq: return Atom::eq(lhs - rhs);
        case CmpOp::Geq: return Atom::geq(lhs - rhs);
        case CmpOp::Leq: return Atom::geq(rhs - lhs);
        case CmpOp::Gt: return Atom::geq(lhs - rhs - LinExpr(Int(1)));
        case CmpOp::Lt: return Atom::geq(rhs - lhs - LinExpr(Int(1)));
    }
    throw std::logic_error("normalize_atom: bad op");
}

/// Conjunction of atoms; empty means true.
struct Conj {
    std::vector<Atom> atoms;

    Conj() = default;
    explicit Conj(std::vector<Atom> as) : atoms(std::move(as)) { dedup(); }

    static Conj truth() { return Conj{}; }
    static Conj falsity() { return Conj{{Atom::falsity()}}; }

    void add(Atom a) {
        if (a.trivially_true()) return;
        atoms.push_back(std::move(a));
        dedup();
    }

    void dedup() {
        std::erase_if(atoms, [](const Atom& a) { return a.trivially_true(); });
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    }

    bool trivially_false() const {
        return std::any_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.trivially_false(); });
    }

    bool holds(const std::map<VarId, Int>& point) const {
        return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.holds(point); });
    }

    template <typename F>
    Conj rename(F&& f) const {
        Conj r;
        r.atoms.reserve(atoms.size());
        for (const Atom& a : atoms) r.atoms.push_back(a.rename(f));
        r.dedup();
        return r;
    }

    friend Conj operator&(const Conj& a, const Conj& b) {
        Conj r = a;
        for (const Atom& at : b.atoms) r.atoms.push_back(at);
        r.dedup();
        return r;
    }

    friend auto operator<=>(const Conj&, const Conj&) = default;

    std::string str() const {
        if (atoms.empty()) return "true";
        std::string s;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (i) s += " && ";
            s += atoms[i].str();
        }
        return s;
    }
};

/// Thrown when a DNF operation exceeds the configured disjunct cap.
struct DnfBlowup : std::runtime_error {
    std::size_t size;
    explicit DnfBlowup(std::size_t n)
        : std::runtime_error("DNF disjunct cap exceeded (" + std::to_string(n) + ")"), size(n) {}
};

inline std::size_t g_dnf_cap = 512;  // configurable via CLI

/// Disjunction of conjunctions; empty means false.
struct Dnf {
    std::vector<Conj> disjuncts;

    Dnf() = default;
    explicit Dnf(std::vector<Conj> ds) : disjuncts(std::move(ds)) { normalize(); }
    static Dnf falsity() { return Dnf{}; }
    static Dnf truth() { return Dnf{{Conj::truth()}}; }
    static Dnf of(Conj c) { return Dnf{{std::move(c)}}; }

    bool is_false() const { return disjuncts.empty(); }
    bool is_true() const {
        return std::any_of(disjuncts.begin(), disjuncts.end(), [](const Conj& c) { return c.atoms.empty(); });
    }

    void add(Conj c) {
        if (c.trivially_false()) return;
        disjuncts.push_back(std::move(c));
        normalize();
    }

    void normalize() {
        std::erase_if(disjuncts, [](const Conj& c) { return c.trivially_false(); });
        std::sort(disjuncts.begin(), disjuncts.end());
        disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
        if (disjuncts.size() > g_dnf_cap) throw DnfBlowup(disjuncts.size());
    }

    bool holds(const std::map<VarId, Int>& point) const {
        return std::any_of(disjuncts.begin(), disjuncts.end(), [&](const Conj& c) { return c.holds(point); });
    }

    template <typename F>
    Dnf rename(F&& f) const {
        Dnf r;
        r.disjuncts.reserve(disjuncts.size());
        for (const Conj& c : disjuncts) r.disjuncts.push_back(c.rename(f));
        r.normalize();
        return r;
    }

    friend auto operator<=>(const Dnf&, const Dnf&) = default;

    std::string str() const {
        if (disjuncts.empty()) return "false";
        std::string s;
        for (std::size_t i = 0; i < disjuncts.size(); ++i) {
            if (i) s += " || ";
            s += disjuncts.size() > 1 ? "(" + disjuncts[i].str() + ")" : disjuncts[i].str();
        }
        return s;
    }
};

/// Integer complement of one canonical atom.
inline Dnf negate_atom(const Atom& a) {
    if (a.op == AtomOp::Geq) {
        // not(t >= 0)  <=>  -t-1 >= 0
        return Dnf::of(Conj{{Atom::geq(-a.expr - LinExpr(Int(1)))}});
    }
    // not(t = 0)  <=>  t-1 >= 0  \/  -t-1 >= 0
    Dnf r;
    r.add(Conj{{Atom::geq(a.expr - LinExpr(Int(1)))}});
    r.add(Conj{{Atom::geq(-a.expr - LinExpr(Int(1)))}});
    return r;
}

}  // namespace loopterm
