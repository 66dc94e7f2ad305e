#ifndef SPECSEQ_POLYGCD_HPP
#define SPECSEQ_POLYGCD_HPP

#include <set>
#include <vector>

#include "specseq/polynomial.hpp"

namespace specseq {

/* Exact division of multivariate polynomials; throws when not divisible. */
inline Polynomial poly_divexact(const Polynomial& p, const Polynomial& d) {
    if (d.is_zero()) throw division_by_zero();
    Polynomial rem = p, quot(p.table());
    const auto& [dm, dc] = d.leading_term();
    while (!rem.is_zero()) {
        const auto& [rm, rc] = rem.leading_term();
        if (!dm.divides(rm)) throw error("polynomial division is not exact");
        Monomial qm = rm.divide_exact(dm);
        GaussianRational qc = rc / dc;
        Polynomial t(p.table(), {{qm, qc}});
        quot += t;
        rem -= t * d;
    }
    return quot;
}

inline Polynomial make_monic(const Polynomial& p) {
    if (p.is_zero()) return p;
    return p.scale(p.leading_term().second.inverse());
}

namespace detail {

inline std::set<int> poly_vars(const Polynomial& p) {
    std::set<int> vars;
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.entries()) vars.insert(v);
    return vars;
}

inline void check_unbound(const Polynomial& p) {
    for (int v : poly_vars(p))
        if (p.table()->binding(v))
            throw error("gcd is not defined over bound square-root symbols");
}

inline unsigned degree_in(const Polynomial& p, int v) {
    unsigned d = 0;
    for (const auto& [m, c] : p.terms()) d = std::max(d, m.exponent(v));
    return d;
}

// dense coefficient list in one variable, index = power
inline std::vector<Polynomial> coeffs_in(const Polynomial& p, int v) {
    std::vector<Polynomial> out(degree_in(p, v) + 1, Polynomial(p.table()));
    for (const auto& [m, c] : p.terms()) {
        unsigned e = m.exponent(v);
        Monomial rest = e ? m.divide_exact(Monomial::var(v, e)) : m;
        out[e] += Polynomial(p.table(), {{rest, c}});
    }
    return out;
}

inline Polynomial from_coeffs(const TablePtr& t, int v, const std::vector<Polynomial>& cs) {
    Polynomial out(t);
    for (std::size_t e = 0; e < cs.size(); ++e)
        if (!cs[e].is_zero()) out += cs[e] * Polynomial::variable(t, v, static_cast<unsigned>(e));
    return out;
}

}  // namespace detail

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

inline Polynomial content_in(const Polynomial& p, int v) {
    Polynomial g(p.table());
    for (const auto& c : coeffs_in(p, v))
        if (!c.is_zero()) g = poly_gcd(g, c);
    return g;
}

// pseudo-remainder of f by g in the variable v
inline Polynomial prem(const Polynomial& f, const Polynomial& g, int v) {
    unsigned df = degree_in(f, v), dg = degree_in(g, v);
    if (df < dg) return f;
    auto gc = coeffs_in(g, v);
    Polynomial lg = gc.back();
    Polynomial r = f;
    while (!r.is_zero()) {
        unsigned dr = degree_in(r, v);
        if (dr < dg) break;
        auto rc = coeffs_in(r, v);
        Polynomial lr = rc.back();
        // r <- lg*r - lr*v^(dr-dg)*g
        r = lg * r - lr * Polynomial::variable(f.table(), v, dr - dg) * g;
        if (degree_in(r, v) >= dr && !r.is_zero())
            throw error("pseudo-division failed to reduce degree");
    }
    return r;
}

}  // namespace detail

/* Multivariate gcd over Q(i) coefficients via primitive pseudo-remainder
   sequences; result is monic in graded-lex.  Inputs must be free of bound
   square-root symbols. */
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    detail::check_unbound(a);
    detail::check_unbound(b);
    if (a.is_zero()) return make_monic(b);
    if (b.is_zero()) return make_monic(a);
    std::set<int> vars = detail::poly_vars(a);
    for (int v : detail::poly_vars(b)) vars.insert(v);
    if (vars.empty()) return Polynomial::constant(a.table(), GaussianRational(1));
    int v = *vars.begin();

    Polynomial ca = detail::content_in(a, v), cb = detail::content_in(b, v);
    Polynomial f = poly_divexact(a, ca), g = poly_divexact(b, cb);
    Polynomial cont = poly_gcd(ca, cb);

    if (detail::degree_in(f, v) < detail::degree_in(g, v)) std::swap(f, g);
    while (true) {
        Polynomial r = detail::prem(f, g, v);
        if (r.is_zero()) break;
        Polynomial cr = detail::content_in(r, v);
        f = g;
        g = poly_divexact(r, cr);
    }
    Polynomial gc = detail::content_in(g, v);
    return make_monic(cont * poly_divexact(g, gc));
}

inline Polynomial poly_lcm(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial(a.table());
    return make_monic(poly_divexact(a * b, poly_gcd(a, b)));
}

}  // namespace specseq

#endif
