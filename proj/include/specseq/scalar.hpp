#ifndef SPECSEQ_SCALAR_HPP
#define SPECSEQ_SCALAR_HPP

#include <map>
#include <string>
#include <utility>

#include "specseq/polygcd.hpp"
#include "specseq/polynomial.hpp"

namespace specseq {

namespace detail {

// split a monomial into its plain-PARAM part and the rest (STATE vars and
// bound square-root symbols)
inline std::pair<Monomial, Monomial> split_core(const Monomial& m, const VariableTable& t) {
    std::vector<Monomial::Entry> plain, core;
    for (const auto& [v, e] : m.entries()) {
        if (!t.is_state(v) && !t.binding(v))
            plain.push_back({v, e});
        else
            core.push_back({v, e});
    }
    return {Monomial(std::move(plain)), Monomial(std::move(core))};
}

// components of p grouped by STATE/bound part; each value is a plain-PARAM poly
inline std::map<Monomial, Polynomial, GrlexBefore> core_decompose(const Polynomial& p) {
    std::map<Monomial, Polynomial, GrlexBefore> out;
    for (const auto& [m, c] : p.terms()) {
        auto [plain, core] = split_core(m, *p.table());
        auto [it, fresh] = out.try_emplace(core, Polynomial(p.table()));
        it->second += Polynomial(p.table(), {{plain, c}});
    }
    return out;
}

inline bool has_bound_symbol(const Polynomial& p) {
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.entries())
            if (p.table()->binding(v)) return true;
    return false;
}

inline int first_bound_symbol(const Polynomial& p) {
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.entries())
            if (p.table()->binding(v)) return v;
    return -1;
}

// p = p0 + s*p1 with both parts free of s (exponents of bound symbols are < 2)
inline std::pair<Polynomial, Polynomial> split_by_symbol(const Polynomial& p, int s) {
    Polynomial p0(p.table()), p1(p.table());
    for (const auto& [m, c] : p.terms()) {
        unsigned e = m.exponent(s);
        if (e == 0)
            p0 += Polynomial(p.table(), {{m, c}});
        else
            p1 += Polynomial(p.table(), {{m.divide_exact(Monomial::var(s, e)), c}});
    }
    return {p0, p1};
}

}  // namespace detail

/* Quotient num/den where den is a nonzero polynomial in unbound PARAM
   variables only.  Canonical form: den is gcd-reduced against num, free of
   bound square-root symbols and monic under graded-lex. */
class PolyFraction {
  public:
    PolyFraction() = default;
    explicit PolyFraction(Polynomial num)
        : num_(std::move(num)), den_(Polynomial::constant(num_.table(), GaussianRational(1))) {
        normalize();
    }
    PolyFraction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (num_.table() != den_.table()) throw variable_table_mismatch();
        normalize();
    }

    static PolyFraction zero(const TablePtr& t) { return PolyFraction(Polynomial(t)); }
    static PolyFraction one(const TablePtr& t) {
        return PolyFraction(Polynomial::constant(t, GaussianRational(1)));
    }
    static PolyFraction constant(const TablePtr& t, const GaussianRational& c) {
        return PolyFraction(Polynomial::constant(t, c));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const TablePtr& table() const { return num_.table(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }
    bool den_is_one() const {
        return den_.is_constant() && !den_.is_zero() && den_.constant_value().is_one();
    }

    bool param_only() const { return num_.param_only(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    GaussianRational constant_value() const {
        return num_.constant_value() / den_.constant_value();
    }

    PolyFraction operator-() const { return raw(-num_, den_); }
    PolyFraction operator+(const PolyFraction& o) const {
        if (den_ == o.den_) return PolyFraction(num_ + o.num_, den_);
        return PolyFraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    PolyFraction operator-(const PolyFraction& o) const { return *this + (-o); }
    PolyFraction operator*(const PolyFraction& o) const {
        return PolyFraction(num_ * o.num_, den_ * o.den_);
    }
    PolyFraction& operator+=(const PolyFraction& o) { return *this = *this + o; }
    PolyFraction& operator-=(const PolyFraction& o) { return *this = *this - o; }
    PolyFraction& operator*=(const PolyFraction& o) { return *this = *this * o; }

    /* Multiplicative inverse; defined when the numerator is PARAM-only. */
    PolyFraction inverse() const {
        if (num_.is_zero()) throw division_by_zero();
        if (!num_.param_only())
            throw error("cannot invert a fraction with STATE variables in the numerator");
        return PolyFraction(den_, num_);
    }
    PolyFraction operator/(const PolyFraction& o) const { return *this * o.inverse(); }

    PolyFraction scale(const GaussianRational& c) const { return raw(num_.scale(c), den_); }

    bool operator==(const PolyFraction& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const PolyFraction& o) const { return !(*this == o); }

    PolyFraction substitute_params(const std::map<int, BigRational>& values) const {
        return PolyFraction(num_.substitute_params(values), den_.substitute_params(values));
    }

    PolyFraction derivative(int var) const { return raw(num_.derivative(var), den_); }

    PolyFraction pow(unsigned e) const {
        PolyFraction r = one(table());
        PolyFraction base = *this;
        while (e) {
            if (e & 1) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    /* Substitute fractions for STATE variables; PARAMs carry over by name. */
    PolyFraction substitute_states(const std::map<int, PolyFraction>& images,
                                   const TablePtr& target) const {
        PolyFraction out = zero(target);
        for (const auto& [m, c] : num_.terms()) {
            PolyFraction term = constant(target, c);
            for (const auto& [v, e] : m.entries()) {
                if (table()->is_state(v)) {
                    auto it = images.find(v);
                    if (it == images.end()) throw missing_image(table()->name(v));
                    term *= it->second.pow(e);
                } else {
                    auto idx = target->try_index_of(table()->name(v));
                    if (!idx) throw missing_image(table()->name(v));
                    term *= PolyFraction(Polynomial::variable(target, *idx, e));
                }
            }
            out += term;
        }
        if (den_is_one()) return out;
        // transport the PARAM-only denominator by name
        Polynomial den_t = den_.substitute(std::map<int, Polynomial>{}, target);
        return out / PolyFraction(den_t);
    }

    std::string str() const {
        if (den_is_one()) return num_.str();
        std::string n = num_.str();
        if (num_.term_count() > 1) n = "(" + n + ")";
        std::string d = den_.str();
        if (den_.term_count() > 1) d = "(" + d + ")";
        return n + "/" + d;
    }

  private:
    // private fast path: parts already known canonical relative to each other
    static PolyFraction raw(Polynomial num, Polynomial den) {
        PolyFraction f;
        f.num_ = std::move(num);
        f.den_ = std::move(den);
        if (f.num_.is_zero())
            f.den_ = Polynomial::constant(f.num_.table(), GaussianRational(1));
        return f;
    }

    void normalize() {
        if (den_.is_zero()) throw division_by_zero();
        if (!den_.param_only())
            throw error("fraction denominator must be free of STATE variables");
        if (num_.is_zero()) {
            den_ = Polynomial::constant(num_.table(), GaussianRational(1));
            return;
        }
        // clear bound square-root symbols out of the denominator
        while (detail::has_bound_symbol(den_)) {
            int s = detail::first_bound_symbol(den_);
            auto [d0, d1] = detail::split_by_symbol(den_, s);
            Polynomial conj = d0 - Polynomial::variable(den_.table(), s) * d1;
            num_ *= conj;
            den_ *= conj;
        }
        // gcd-reduce: common factor of the denominator and every component
        // of the numerator over the plain-PARAM subring
        Polynomial g = den_;
        for (const auto& [core, comp] : detail::core_decompose(num_)) {
            g = poly_gcd(g, comp);
            if (g.is_constant()) break;
        }
        if (!g.is_constant()) {
            num_ = poly_divexact(num_, g);
            den_ = poly_divexact(den_, g);
        }
        GaussianRational lc = den_.leading_term().second;
        if (!lc.is_one()) {
            GaussianRational inv = lc.inverse();
            num_ = num_.scale(inv);
            den_ = den_.scale(inv);
        }
    }

    Polynomial num_, den_;
};

/* Element of the coefficient field: a fraction of PARAM-only polynomials
   (degenerating to a Gaussian rational when no parameters occur). */
class Scalar {
  public:
    Scalar() = default;
    explicit Scalar(PolyFraction f) : f_(std::move(f)) {
        if (!f_.param_only())
            throw error("Scalar must be a fraction of PARAM-only polynomials");
    }
    Scalar(Polynomial num, Polynomial den) : Scalar(PolyFraction(std::move(num), std::move(den))) {}
    explicit Scalar(Polynomial num) : Scalar(PolyFraction(std::move(num))) {}

    static Scalar zero(const TablePtr& t) { return Scalar(PolyFraction::zero(t)); }
    static Scalar one(const TablePtr& t) { return Scalar(PolyFraction::one(t)); }
    static Scalar of(const TablePtr& t, const GaussianRational& c) {
        return Scalar(PolyFraction::constant(t, c));
    }
    static Scalar of(const TablePtr& t, const BigRational& c) {
        return of(t, GaussianRational(c));
    }
    static Scalar of(const TablePtr& t, long n, long d = 1) {
        return of(t, GaussianRational(BigRational(n, d)));
    }

    const PolyFraction& fraction() const { return f_; }
    const Polynomial& num() const { return f_.num(); }
    const Polynomial& den() const { return f_.den(); }
    const TablePtr& table() const { return f_.table(); }

    bool is_zero() const { return f_.is_zero(); }
    bool is_one() const { return f_.is_one(); }
    bool is_constant() const { return f_.is_constant(); }
    bool den_is_one() const { return f_.den_is_one(); }
    GaussianRational constant_value() const { return f_.constant_value(); }

    Scalar operator-() const { return Scalar(-f_); }
    Scalar operator+(const Scalar& o) const { return Scalar(f_ + o.f_); }
    Scalar operator-(const Scalar& o) const { return Scalar(f_ - o.f_); }
    Scalar operator*(const Scalar& o) const { return Scalar(f_ * o.f_); }
    Scalar operator/(const Scalar& o) const { return Scalar(f_ / o.f_); }
    Scalar inverse() const { return Scalar(f_.inverse()); }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const { return f_ == o.f_; }
    bool operator!=(const Scalar& o) const { return f_ != o.f_; }

    Scalar substitute_params(const std::map<int, BigRational>& values) const {
        return Scalar(f_.substitute_params(values));
    }

    std::string str() const { return f_.str(); }

  private:
    PolyFraction f_;
};

inline PolyFraction operator*(const Scalar& s, const PolyFraction& f) {
    return f * s.fraction();
}
inline PolyFraction operator*(const Scalar& s, const Polynomial& p) {
    return PolyFraction(p) * s.fraction();
}

}  // namespace specseq

#endif
