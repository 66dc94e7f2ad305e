#ifndef SPECSEQ_POLYNOMIAL_HPP
#define SPECSEQ_POLYNOMIAL_HPP

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specseq/monomial.hpp"
#include "specseq/rational.hpp"
#include "specseq/variables.hpp"

namespace specseq {

/* Sparse multivariate polynomial with Gaussian-rational coefficients.
   Terms are kept in descending graded-lex order with no zero coefficients;
   even powers of bound square-root symbols are rewritten to their radicands. */
class Polynomial {
  public:
    using Term = std::pair<Monomial, GaussianRational>;

    Polynomial() = default;
    explicit Polynomial(TablePtr table) : table_(std::move(table)) {}
    Polynomial(TablePtr table, std::vector<Term> terms)
        : table_(std::move(table)), terms_(std::move(terms)) {
        normalize();
    }

    static Polynomial constant(TablePtr table, const GaussianRational& c) {
        Polynomial p(table);
        if (!c.is_zero()) p.terms_.push_back({Monomial(), c});
        return p;
    }
    static Polynomial variable(TablePtr table, int index, unsigned exp = 1) {
        Polynomial p(std::move(table));
        p.terms_.push_back({Monomial::var(index, exp), GaussianRational(1)});
        p.normalize();
        return p;
    }
    static Polynomial variable(const TablePtr& table, const std::string& name, unsigned exp = 1) {
        return variable(table, table->index_of(name), exp);
    }

    const TablePtr& table() const { return table_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
    GaussianRational constant_value() const {
        if (terms_.empty()) return GaussianRational();
        if (!is_constant()) throw error("polynomial is not constant");
        return terms_[0].second;
    }

    const Term& leading_term() const {
        if (terms_.empty()) throw error("zero polynomial has no leading term");
        return terms_[0];
    }

    bool param_only() const {
        for (const auto& [m, c] : terms_)
            if (!m.param_only(*table_)) return false;
        return true;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }
    unsigned state_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.state_degree(*table_));
        return d;
    }

    // all terms share one STATE-degree
    bool is_state_homogeneous(unsigned* degree_out = nullptr) const {
        if (terms_.empty()) {
            if (degree_out) *degree_out = 0;
            return true;
        }
        unsigned d = terms_[0].first.state_degree(*table_);
        for (const auto& [m, c] : terms_)
            if (m.state_degree(*table_) != d) return false;
        if (degree_out) *degree_out = d;
        return true;
    }

    Polynomial operator-() const {
        Polynomial r(table_);
        r.terms_.reserve(terms_.size());
        for (const auto& [m, c] : terms_) r.terms_.push_back({m, -c});
        return r;
    }

    Polynomial operator+(const Polynomial& o) const {
        check_table(o);
        Polynomial r(table_);
        auto a = terms_.begin(), b = o.terms_.begin();
        while (a != terms_.end() && b != o.terms_.end()) {
            int cmp = grlex_cmp(a->first, b->first);
            if (cmp < 0)
                r.terms_.push_back(*a++);
            else if (cmp > 0)
                r.terms_.push_back(*b++);
            else {
                GaussianRational c = a->second + b->second;
                if (!c.is_zero()) r.terms_.push_back({a->first, c});
                ++a, ++b;
            }
        }
        r.terms_.insert(r.terms_.end(), a, terms_.end());
        r.terms_.insert(r.terms_.end(), b, o.terms_.end());
        return r;
    }
    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

    Polynomial operator*(const Polynomial& o) const {
        check_table(o);
        std::map<Monomial, GaussianRational, GrlexBefore> acc;
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) {
                Monomial m = ma * mb;
                GaussianRational c = ca * cb;
                reduce_bound(m, c);
                auto [it, fresh] = acc.try_emplace(m, c);
                if (!fresh) it->second += c;
            }
        Polynomial r(table_);
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.push_back({m, c});
        return r;
    }

    Polynomial scale(const GaussianRational& c) const {
        Polynomial r(table_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& [m, k] : terms_) r.terms_.push_back({m, k * c});
        return r;
    }

    Polynomial pow(unsigned e) const {
        Polynomial r = constant(table_, GaussianRational(1));
        Polynomial base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    bool operator==(const Polynomial& o) const {
        return table_ == o.table_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    GaussianRational coefficient(const Monomial& m) const {
        for (const auto& [mm, c] : terms_)
            if (mm == m) return c;
        return GaussianRational();
    }

    /* Formal partial derivative in a STATE variable; PARAMs are constants. */
    Polynomial derivative(int var) const {
        if (!table_->is_state(var)) throw not_a_state_variable(table_->name(var));
        Polynomial r(table_);
        for (const auto& [m, c] : terms_) {
            unsigned e = m.exponent(var);
            if (e == 0) continue;
            Monomial dm = m.divide_exact(Monomial::var(var));
            r.terms_.push_back({dm, c * GaussianRational(BigRational(static_cast<long>(e)))});
        }
        Polynomial out(table_, std::move(r.terms_));
        return out;
    }
    Polynomial derivative(const std::string& name) const {
        return derivative(table_->index_of(name));
    }

    /* Split by total STATE-degree; the components sum back to the input. */
    std::map<unsigned, Polynomial> homogeneous_components() const {
        std::map<unsigned, Polynomial> out;
        for (const auto& [m, c] : terms_) {
            unsigned d = m.state_degree(*table_);
            auto [it, fresh] = out.try_emplace(d, Polynomial(table_));
            it->second.terms_.push_back({m, c});
        }
        for (auto& [d, p] : out) p.normalize();
        return out;
    }

    Polynomial state_homogeneous_part(unsigned degree) const {
        Polynomial r(table_);
        for (const auto& [m, c] : terms_)
            if (m.state_degree(*table_) == degree) r.terms_.push_back({m, c});
        return r;
    }

    /* Substitute polynomials for STATE variables.  Images may live on a
       different table; PARAM variables are carried over by name. */
    Polynomial substitute(const std::map<int, Polynomial>& images, const TablePtr& target) const {
        Polynomial out(target);
        for (const auto& [m, c] : terms_) {
            Polynomial term = Polynomial::constant(target, c);
            for (const auto& [v, e] : m.entries()) {
                if (table_->is_state(v)) {
                    auto it = images.find(v);
                    if (it == images.end()) throw missing_image(table_->name(v));
                    term = term * it->second.pow(e);
                } else {
                    auto idx = target->try_index_of(table_->name(v));
                    if (!idx) throw missing_image(table_->name(v));
                    term = term * Polynomial::variable(target, *idx, e);
                }
            }
            out = out + term;
        }
        return out;
    }
    Polynomial substitute(const std::map<int, Polynomial>& images) const {
        return substitute(images, images.empty() ? table_ : images.begin()->second.table());
    }

    /* Substitute rationals for PARAM variables (unbound ones only). */
    Polynomial substitute_params(const std::map<int, BigRational>& values) const {
        Polynomial out(table_);
        for (const auto& [m, c] : terms_) {
            GaussianRational coeff = c;
            std::vector<Monomial::Entry> keep;
            for (const auto& [v, e] : m.entries()) {
                auto it = values.find(v);
                if (it == values.end()) {
                    keep.push_back({v, e});
                    continue;
                }
                BigRational pw(1);
                for (unsigned k = 0; k < e; ++k) pw *= it->second;
                coeff *= GaussianRational(pw);
            }
            if (!coeff.is_zero()) out.terms_.push_back({Monomial(std::move(keep)), coeff});
        }
        out.normalize();
        return out;
    }

    /* Coefficient of each STATE-monomial, as a PARAM-only polynomial. */
    std::map<Monomial, Polynomial, GrlexBefore> state_coefficients() const {
        std::map<Monomial, Polynomial, GrlexBefore> out;
        for (const auto& [m, c] : terms_) {
            std::vector<Monomial::Entry> st, pa;
            for (const auto& [v, e] : m.entries())
                (table_->is_state(v) ? st : pa).push_back({v, e});
            auto [it, fresh] = out.try_emplace(Monomial(std::move(st)), Polynomial(table_));
            it->second.terms_.push_back({Monomial(std::move(pa)), c});
        }
        for (auto& [m, p] : out) p.normalize();
        return out;
    }

    std::string str() const;

  private:
    void check_table(const Polynomial& o) const {
        if (table_ != o.table_) throw variable_table_mismatch();
    }

    /* a_j^2 -> A_j for bound square-root symbols, cascading. */
    void reduce_bound(Monomial& m, GaussianRational& c) const {
        bool again = true;
        while (again) {
            again = false;
            std::vector<Monomial::Entry> out;
            for (const auto& [v, e] : m.entries()) {
                const auto* b = table_->binding(v);
                if (!b || e < 2) {
                    out.push_back({v, e});
                    continue;
                }
                unsigned half = e / 2, rem = e % 2;
                if (b->is_param()) {
                    out.push_back({b->radicand_param, half});
                    again = true;  // radicand could itself be bound
                } else {
                    BigRational pw(1);
                    for (unsigned k = 0; k < half; ++k) pw *= b->radicand_rational;
                    c *= GaussianRational(pw);
                }
                if (rem) out.push_back({v, rem});
            }
            m = Monomial(std::move(out));
        }
    }

    void normalize() {
        std::map<Monomial, GaussianRational, GrlexBefore> acc;
        for (auto& [m, c] : terms_) {
            Monomial mm = m;
            GaussianRational cc = c;
            reduce_bound(mm, cc);
            auto [it, fresh] = acc.try_emplace(mm, cc);
            if (!fresh) it->second += cc;
        }
        terms_.clear();
        for (auto& [m, c] : acc)
            if (!c.is_zero()) terms_.push_back({m, c});
    }

    TablePtr table_;
    std::vector<Term> terms_;  // descending graded-lex
};

/* Deterministic basis of the degree-d STATE monomials, descending graded-lex. */
inline std::vector<Monomial> monomial_basis(const TablePtr& table, unsigned degree) {
    std::vector<int> states = table->state_indices();
    std::vector<Monomial> out;
    std::vector<Monomial::Entry> cur;
    // enumerate exponent vectors; recursion follows variable order so the
    // list comes out already sorted in descending graded-lex
    auto rec = [&](auto&& self, std::size_t pos, unsigned rem) -> void {
        if (pos + 1 == states.size()) {
            auto entries = cur;
            if (rem) entries.push_back({states[pos], rem});
            out.push_back(Monomial(std::move(entries)));
            return;
        }
        for (int e = static_cast<int>(rem); e >= 0; --e) {
            if (e) cur.push_back({states[pos], static_cast<unsigned>(e)});
            self(self, pos + 1, rem - e);
            if (e) cur.pop_back();
        }
    };
    if (states.empty()) {
        if (degree == 0) out.push_back(Monomial());
        return out;
    }
    rec(rec, 0, degree);
    return out;
}

inline std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    auto mono_str = [&](const Monomial& m) {
        std::string s;
        for (const auto& [v, e] : m.entries()) {
            if (!s.empty()) s += "*";
            s += table_->name(v);
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s;
    };
    auto emit = [&](const BigRational& coeff, bool imag, const Monomial& m) {
        if (coeff.is_zero()) return;
        BigRational a = abs(coeff);
        if (first) {
            if (coeff.sign() < 0) os << "-";
            first = false;
        } else {
            os << (coeff.sign() < 0 ? " - " : " + ");
        }
        std::string ms = mono_str(m);
        std::string head;
        if (!a.is_one() || (!imag && ms.empty())) head = a.str();
        if (imag) {
            if (!head.empty()) head += "*";
            head += "i";
        }
        if (!ms.empty()) {
            if (!head.empty()) head += "*";
            head += ms;
        }
        os << head;
    };
    for (const auto& [m, c] : terms_) {
        emit(c.re(), false, m);
        emit(c.im(), true, m);
    }
    return os.str();
}

}  // namespace specseq

#endif
