#ifndef SPECSEQ_HAMILTONIAN_HPP
#define SPECSEQ_HAMILTONIAN_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "specseq/linalg.hpp"
#include "specseq/vectorfield.hpp"

namespace specseq {

/* Canonical coordinates (q_1..q_n, p_1..p_n): the first n STATE variables
   are positions, the last n momenta.  J = [[0, I], [-I, 0]]. */
struct CanonicalChart {
    TablePtr table;
    int n = 0;

    CanonicalChart() = default;
    CanonicalChart(TablePtr t, int dof) : table(std::move(t)), n(dof) {
        if (table->state_count() != 2 * n)
            throw error("canonical chart needs exactly 2n STATE variables");
    }

    int q_index(int j) const { return table->state_indices()[j]; }
    int p_index(int j) const { return table->state_indices()[n + j]; }
};

/* {H,K} = <J H_x, K_x> = sum_j dH/dp_j dK/dq_j - dH/dq_j dK/dp_j. */
inline PolyFraction poisson_bracket(const PolyFraction& h, const PolyFraction& k,
                                    const CanonicalChart& chart) {
    if (h.table() != chart.table || k.table() != chart.table) throw chart_mismatch();
    PolyFraction out = PolyFraction::zero(chart.table);
    for (int j = 0; j < chart.n; ++j) {
        int q = chart.q_index(j), p = chart.p_index(j);
        out += h.derivative(p) * k.derivative(q) - h.derivative(q) * k.derivative(p);
    }
    return out;
}

inline Polynomial poisson_bracket(const Polynomial& h, const Polynomial& k,
                                  const CanonicalChart& chart) {
    if (h.table() != chart.table || k.table() != chart.table) throw chart_mismatch();
    Polynomial out(chart.table);
    for (int j = 0; j < chart.n; ++j) {
        int q = chart.q_index(j), p = chart.p_index(j);
        out += h.derivative(p) * k.derivative(q) - h.derivative(q) * k.derivative(p);
    }
    return out;
}

/* Hamilton's field x' = J H_x: components (dH/dp_j ; -dH/dq_j). */
inline PolyVectorField ham_vector_field(const Polynomial& h, const CanonicalChart& chart) {
    if (h.table() != chart.table) throw chart_mismatch();
    std::vector<Polynomial> comps;
    for (int j = 0; j < chart.n; ++j) comps.push_back(h.derivative(chart.p_index(j)));
    for (int j = 0; j < chart.n; ++j) comps.push_back(-h.derivative(chart.q_index(j)));
    return PolyVectorField(chart.table, std::move(comps));
}

/* F = J H_x for some H iff -J dF/dx is symmetric (ambient space is
   contractible, so closedness of the 1-form suffices). */
inline bool is_hamiltonian_field(const PolyVectorField& f) {
    int m = f.size();
    if (m % 2) throw odd_dimension();
    int n = m / 2;
    auto jac = jacobian(f);
    // S = -J dF/dx: top rows are -(rows n..2n-1), bottom rows are (rows 0..n-1)
    auto s_entry = [&](int i, int k) -> Polynomial {
        return i < n ? -jac[n + i][k] : jac[i - n][k];
    };
    for (int i = 0; i < m; ++i)
        for (int k = i + 1; k < m; ++k)
            if (s_entry(i, k) != s_entry(k, i)) return false;
    return true;
}

/* The diagonalizing chart z_j = sqrt(A_j) q_j + i p_j for the oscillator
   H0 = 1/2|p|^2 + 1/2 sum A_j q_j^2.  Both tables must carry any square-root
   symbols needed (bound to the radicand), shared by name. */
class ComplexChart {
  public:
    /* sqrt_values[j]: the scalar sqrt(A_j), expressed over the real table. */
    ComplexChart(CanonicalChart real, TablePtr complex_table, std::vector<Scalar> sqrt_real)
        : real_(std::move(real)), ctable_(std::move(complex_table)) {
        if (static_cast<int>(sqrt_real.size()) != real_.n)
            throw error("need one square root per degree of freedom");
        for (const auto& s : sqrt_real) {
            if (s.is_zero()) throw chart_failure("complex chart needs every A_j nonzero");
            sqrt_real_.push_back(s);
            // transport sqrt(A_j) to the complex table by name
            Polynomial num = s.num().substitute(std::map<int, Polynomial>{}, ctable_);
            Polynomial den = s.den().substitute(std::map<int, Polynomial>{}, ctable_);
            sqrt_cplx_.push_back(Scalar(num, den));
        }
        if (ctable_->state_count() != 2 * real_.n)
            throw error("complex table needs 2n STATE variables (z_1..z_n, zb_1..zb_n)");
    }

    const CanonicalChart& real_chart() const { return real_; }
    const TablePtr& complex_table() const { return ctable_; }
    int n() const { return real_.n; }
    int z_index(int j) const { return ctable_->state_indices()[j]; }
    int zb_index(int j) const { return ctable_->state_indices()[n() + j]; }
    const Scalar& sqrt_real(int j) const { return sqrt_real_[j]; }
    const Scalar& sqrt_cplx(int j) const { return sqrt_cplx_[j]; }

    /* q_j = (z_j + zb_j) / (2 sqrt(A_j)),  p_j = -i/2 (z_j - zb_j). */
    PolyFraction to_complex(const PolyFraction& p) const {
        if (p.table() != real_.table) throw chart_mismatch();
        std::map<int, PolyFraction> images;
        for (int j = 0; j < n(); ++j) {
            PolyFraction z(Polynomial::variable(ctable_, z_index(j)));
            PolyFraction zb(Polynomial::variable(ctable_, zb_index(j)));
            Scalar half_inv = (sqrt_cplx_[j] + sqrt_cplx_[j]).inverse();
            images[real_.q_index(j)] = half_inv * (z + zb);
            images[real_.p_index(j)] =
                (z - zb).scale(GaussianRational(BigRational(0), BigRational(-1, 2)));
        }
        return p.substitute_states(images, ctable_);
    }
    PolyFraction to_complex(const Polynomial& p) const { return to_complex(PolyFraction(p)); }

    /* z_j = sqrt(A_j) q_j + i p_j,  zb_j = sqrt(A_j) q_j - i p_j. */
    PolyFraction from_complex(const PolyFraction& p) const {
        if (p.table() != ctable_) throw chart_mismatch();
        std::map<int, PolyFraction> images;
        for (int j = 0; j < n(); ++j) {
            PolyFraction q(Polynomial::variable(real_.table, real_.q_index(j)));
            PolyFraction pp(Polynomial::variable(real_.table, real_.p_index(j)));
            PolyFraction aq = sqrt_real_[j] * q.num();
            images[z_index(j)] = aq + pp.scale(GaussianRational::i());
            images[zb_index(j)] = aq - pp.scale(GaussianRational::i());
        }
        return p.substitute_states(images, real_.table);
    }

    /* [m] = sum_j (J_j - I_j) sqrt(A_j) for a complex-chart monomial. */
    Scalar weight(const Monomial& m) const {
        Scalar w = Scalar::zero(ctable_);
        for (const auto& [v, e] : m.entries()) {
            if (!ctable_->is_state(v)) continue;
            bool matched = false;
            for (int j = 0; j < n(); ++j) {
                if (v == z_index(j)) {
                    w -= Scalar::of(ctable_, static_cast<long>(e)) * sqrt_cplx_[j];
                    matched = true;
                } else if (v == zb_index(j)) {
                    w += Scalar::of(ctable_, static_cast<long>(e)) * sqrt_cplx_[j];
                    matched = true;
                }
            }
            if (!matched) throw not_in_complex_chart();
        }
        return w;
    }

    /* {f,g} in complex coordinates: 2i sum_j sqrt(A_j)
       (df/dz_j dg/dzb_j - df/dzb_j dg/dz_j). */
    PolyFraction poisson(const PolyFraction& f, const PolyFraction& g) const {
        if (f.table() != ctable_ || g.table() != ctable_) throw chart_mismatch();
        PolyFraction out = PolyFraction::zero(ctable_);
        for (int j = 0; j < n(); ++j) {
            int z = z_index(j), zb = zb_index(j);
            PolyFraction t = f.derivative(z) * g.derivative(zb) - f.derivative(zb) * g.derivative(z);
            out += sqrt_cplx_[j] * t.scale(GaussianRational(BigRational(0), BigRational(2)));
        }
        return out;
    }

    /* Solve {H0, P} = target by dividing each monomial by i[m]; throws
       zero_weight_monomial naming the obstruction.  The result is verified
       against the diagonal action before returning. */
    PolyFraction ad_h0_solve(const PolyFraction& target) const {
        if (target.table() != ctable_) throw chart_mismatch();
        PolyFraction out = PolyFraction::zero(ctable_);
        for (const auto& [core, comp] : detail::core_decompose(target.num())) {
            Monomial state_part = state_restrict(core);
            Scalar w = weight(state_part);
            if (w.is_zero()) throw zero_weight_monomial(mono_str(state_part));
            Scalar inv_iw = (Scalar::of(ctable_, GaussianRational::i()) * w).inverse();
            PolyFraction piece(comp * Polynomial(ctable_, {{core, GaussianRational(1)}}),
                               target.den());
            out += Scalar(inv_iw) * piece;
        }
        // diagonal action check: {H0, out} must reproduce the target
        PolyFraction check = PolyFraction::zero(ctable_);
        for (const auto& [core, comp] : detail::core_decompose(out.num())) {
            Scalar iw = Scalar::of(ctable_, GaussianRational::i()) * weight(state_restrict(core));
            check += iw * PolyFraction(comp * Polynomial(ctable_, {{core, GaussianRational(1)}}),
                                       out.den());
        }
        if (check != target) throw error("ad(H0) solve failed verification");
        return out;
    }

  private:
    Monomial state_restrict(const Monomial& m) const {
        std::vector<Monomial::Entry> st;
        for (const auto& [v, e] : m.entries())
            if (ctable_->is_state(v)) st.push_back({v, e});
        return Monomial(std::move(st));
    }
    std::string mono_str(const Monomial& m) const {
        return Polynomial(ctable_, {{m, GaussianRational(1)}}).str();
    }

    CanonicalChart real_;
    TablePtr ctable_;
    std::vector<Scalar> sqrt_real_, sqrt_cplx_;
};

/* K = 1/2 <x, Bx> with B = -J A^{-1} J for H = 1/2 <x, Ax>; {H,K} = 0. */
inline PolyFraction quadratic_companion(const PolyFraction& h, const CanonicalChart& chart) {
    auto states = chart.table->state_indices();
    int m = static_cast<int>(states.size());
    // Hessian: constant matrix of second partials
    ExactMatrix hess(m, m, chart.table);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            PolyFraction dd = h.derivative(states[i]).derivative(states[j]);
            if (!dd.num().is_constant() || !dd.num().param_only())
                throw error("quadratic_companion needs a quadratic Hamiltonian");
            hess.at(i, j) = Scalar(dd.num(), dd.den());
        }
    auto a_inv = try_inverse(hess);
    if (!a_inv) throw singular_hessian();
    // B = -J A^{-1} J with J = [[0, I], [-I, 0]]
    int n = m / 2;
    ExactMatrix j(m, m, chart.table);
    for (int k = 0; k < n; ++k) {
        j.at(k, n + k) = Scalar::one(chart.table);
        j.at(n + k, k) = -Scalar::one(chart.table);
    }
    ExactMatrix b = (j * *a_inv * j).scale(-Scalar::one(chart.table));
    PolyFraction k = PolyFraction::zero(chart.table);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            if (b.at(r, c).is_zero()) continue;
            Polynomial xx = Polynomial::variable(chart.table, states[r]) *
                            Polynomial::variable(chart.table, states[c]);
            k += (b.at(r, c) * Scalar::of(chart.table, 1, 2)) * PolyFraction(xx);
        }
    if (!poisson_bracket(h, k, chart).is_zero())
        throw error("companion integral failed the bracket check");
    return k;
}

/* ---- Gaussian-rational root finding for exact eigenvalue extraction ---- */

namespace detail {

struct GaussianInt {
    mpz_class re, im;
    mpz_class norm() const { return re * re + im * im; }
    bool is_zero() const { return re == 0 && im == 0; }
    GaussianInt operator*(const GaussianInt& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
};

// exact division in Z[i]; nullopt when not divisible
inline std::optional<GaussianInt> gauss_divexact(const GaussianInt& a, const GaussianInt& d) {
    mpz_class n = d.norm();
    if (n == 0) return std::nullopt;
    mpz_class re = a.re * d.re + a.im * d.im;
    mpz_class im = a.im * d.re - a.re * d.im;
    if (!mpz_divisible_p(re.get_mpz_t(), n.get_mpz_t()) ||
        !mpz_divisible_p(im.get_mpz_t(), n.get_mpz_t()))
        return std::nullopt;
    return GaussianInt{re / n, im / n};
}

inline std::vector<mpz_class> integer_divisors(mpz_class n) {
    if (n < 0) n = -n;
    std::vector<mpz_class> out;
    if (n == 0) return out;
    mpz_class d = 1;
    const long limit = 2000000;
    for (; d * d <= n; ++d) {
        if (d > limit) throw error("integer too large to enumerate divisors");
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    }
    return out;
}

// all Gaussian-integer divisors of g, up to sign/unit duplicates included
inline std::vector<GaussianInt> gaussian_divisors(const GaussianInt& g) {
    std::vector<GaussianInt> out;
    for (const mpz_class& d : integer_divisors(g.norm())) {
        mpz_class x = 0;
        for (; x * x * 2 <= d; ++x) {
            mpz_class y2 = d - x * x, y;
            mpz_sqrt(y.get_mpz_t(), y2.get_mpz_t());
            if (y * y != y2) continue;
            for (const auto& cand : {GaussianInt{x, y}, GaussianInt{x, -y}, GaussianInt{y, x},
                                     GaussianInt{-y, x}}) {
                if (cand.is_zero()) continue;
                if (gauss_divexact(g, cand)) out.push_back(cand);
            }
        }
    }
    return out;
}

inline GaussianRational horner(const std::vector<GaussianRational>& asc, const GaussianRational& x) {
    GaussianRational v;
    for (auto it = asc.rbegin(); it != asc.rend(); ++it) v = v * x + *it;
    return v;
}

}  // namespace detail

/* All roots in Q(i) of a polynomial with Gaussian-rational coefficients
   (ascending order).  With require_all, throws irrational_spectrum if the
   polynomial does not split over Q(i); otherwise returns the roots found. */
inline std::vector<GaussianRational> gaussian_roots(std::vector<GaussianRational> asc,
                                                    bool require_all = true) {
    while (!asc.empty() && asc.back().is_zero()) asc.pop_back();
    if (asc.size() <= 1) return {};
    std::vector<GaussianRational> roots;
    while (asc.size() > 1) {
        // strip zero roots
        if (asc.front().is_zero()) {
            roots.push_back(GaussianRational());
            asc.erase(asc.begin());
            continue;
        }
        // clear denominators -> Gaussian integer coefficients
        mpz_class lcm = 1;
        for (const auto& c : asc) {
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re().denominator().get_mpz_t());
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.im().denominator().get_mpz_t());
        }
        detail::GaussianInt a0{mpz_class(asc.front().re().numerator() * lcm /
                                         asc.front().re().denominator()),
                               mpz_class(asc.front().im().numerator() * lcm /
                                         asc.front().im().denominator())};
        detail::GaussianInt an{mpz_class(asc.back().re().numerator() * lcm /
                                         asc.back().re().denominator()),
                               mpz_class(asc.back().im().numerator() * lcm /
                                         asc.back().im().denominator())};
        bool found = false;
        for (const auto& p : detail::gaussian_divisors(a0)) {
            if (found) break;
            for (const auto& q : detail::gaussian_divisors(an)) {
                GaussianRational root(
                    BigRational(mpq_class(p.re, q.norm())) * BigRational(q.re) +
                        BigRational(mpq_class(p.im, q.norm())) * BigRational(q.im),
                    BigRational(mpq_class(p.im, q.norm())) * BigRational(q.re) -
                        BigRational(mpq_class(p.re, q.norm())) * BigRational(q.im));
                if (detail::horner(asc, root).is_zero()) {
                    roots.push_back(root);
                    // synthetic division by (x - root)
                    std::vector<GaussianRational> quo(asc.size() - 1);
                    GaussianRational carry;
                    for (std::size_t k = asc.size(); k-- > 1;) {
                        carry = asc[k] + carry * root;
                        quo[k - 1] = carry;
                    }
                    asc = std::move(quo);
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            if (require_all) throw irrational_spectrum();
            break;
        }
    }
    return roots;
}

struct EigenPair {
    Polynomial vector;  // degree-1 polynomial in the STATE variables
    GaussianRational value;
};

struct Eigenframe {
    std::vector<EigenPair> pairs;
    Scalar determinant;  // of the eigenvector matrix (Assumption check)
};

/* Simultaneous eigresponse of ad(H0) on linear polynomials: 2n eigenvectors
   v with {H0, v} = e v.  Requires numeric (parameter-free) coefficients so
   the spectrum can be extracted exactly over Q(i). */
inline Eigenframe eigenframe(const Polynomial& h0, const CanonicalChart& chart) {
    auto states = chart.table->state_indices();
    int m = static_cast<int>(states.size());
    ExactMatrix ad(m, m, chart.table);
    for (int col = 0; col < m; ++col) {
        Polynomial img = poisson_bracket(h0, Polynomial::variable(chart.table, states[col]), chart);
        for (const auto& [mono, coeff] : img.state_coefficients()) {
            if (coeff.is_zero()) continue;
            if (!coeff.is_constant())
                throw error("eigenframe needs numeric parameters; specialize first");
            bool placed = false;
            for (int row = 0; row < m; ++row)
                if (mono == Monomial::var(states[row])) {
                    ad.at(row, col) = Scalar::of(chart.table, coeff.constant_value());
                    placed = true;
                }
            if (!placed) throw error("ad(H0) does not preserve linear polynomials");
        }
    }
    ScalarVec cp = char_poly(ad);
    std::vector<GaussianRational> asc(cp.size());
    for (std::size_t k = 0; k < cp.size(); ++k) {
        if (!cp[k].is_constant()) throw error("eigenframe needs numeric parameters");
        asc[cp.size() - 1 - k] = cp[k].constant_value();
    }
    std::vector<GaussianRational> roots = gaussian_roots(asc);

    Eigenframe frame{{}, Scalar::zero(chart.table)};
    ExactMatrix vec_matrix(m, m, chart.table);
    int next = 0;
    std::vector<GaussianRational> seen;
    for (const auto& lambda : roots) {
        bool dup = false;
        for (const auto& s : seen) dup = dup || s == lambda;
        if (dup) continue;
        seen.push_back(lambda);
        ExactMatrix shifted = ad;
        for (int i = 0; i < m; ++i) shifted.at(i, i) -= Scalar::of(chart.table, lambda);
        SubspaceBasis ker = nullspace(shifted);
        for (const auto& v : ker.vectors()) {
            if (next >= m) throw error("too many eigenvectors");
            Polynomial poly(chart.table);
            for (int k = 0; k < m; ++k) {
                if (v[k].is_zero()) continue;
                poly += Polynomial::variable(chart.table, states[k])
                            .scale(v[k].constant_value());
                vec_matrix.at(k, next) = v[k];
            }
            // Darboux condition, verified by a direct bracket
            Polynomial check = poisson_bracket(h0, poly, chart) - poly.scale(lambda);
            if (!check.is_zero()) throw error("eigenvector failed the bracket check");
            frame.pairs.push_back({poly, lambda});
            ++next;
        }
    }
    if (next != m) throw irrational_spectrum();
    frame.determinant = determinant(vec_matrix);
    return frame;
}

}  // namespace specseq

#endif
