#ifndef SPECSEQ_VECTORFIELD_HPP
#define SPECSEQ_VECTORFIELD_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specseq/linalg.hpp"
#include "specseq/polynomial.hpp"

namespace specseq {

/* Column vector of polynomials, one entry per STATE variable.
   F lies in the graded piece L_j when every component is homogeneous of
   STATE-degree j+1. */
class PolyVectorField {
  public:
    PolyVectorField() = default;
    PolyVectorField(TablePtr table, std::vector<Polynomial> comps)
        : table_(std::move(table)), comps_(std::move(comps)) {
        if (static_cast<int>(comps_.size()) != table_->state_count())
            throw error("component count must equal the number of STATE variables");
        for (const auto& c : comps_)
            if (c.table() != table_) throw variable_table_mismatch();
    }

    static PolyVectorField zero(const TablePtr& table) {
        return PolyVectorField(table,
                               std::vector<Polynomial>(table->state_count(), Polynomial(table)));
    }

    const TablePtr& table() const { return table_; }
    int size() const { return static_cast<int>(comps_.size()); }
    const Polynomial& component(int i) const { return comps_[i]; }
    const std::vector<Polynomial>& components() const { return comps_; }

    bool is_zero() const {
        for (const auto& c : comps_)
            if (!c.is_zero()) return false;
        return true;
    }

    PolyVectorField operator+(const PolyVectorField& o) const {
        check(o);
        std::vector<Polynomial> r;
        for (int i = 0; i < size(); ++i) r.push_back(comps_[i] + o.comps_[i]);
        return PolyVectorField(table_, std::move(r));
    }
    PolyVectorField operator-(const PolyVectorField& o) const {
        check(o);
        std::vector<Polynomial> r;
        for (int i = 0; i < size(); ++i) r.push_back(comps_[i] - o.comps_[i]);
        return PolyVectorField(table_, std::move(r));
    }
    PolyVectorField scale(const GaussianRational& c) const {
        std::vector<Polynomial> r;
        for (const auto& p : comps_) r.push_back(p.scale(c));
        return PolyVectorField(table_, std::move(r));
    }

    bool operator==(const PolyVectorField& o) const {
        return table_ == o.table_ && comps_ == o.comps_;
    }

    /* Grading level when homogeneous: all nonzero components share STATE
       degree j+1.  Zero fields have no level. */
    std::optional<int> level() const {
        std::optional<unsigned> deg;
        for (const auto& c : comps_) {
            if (c.is_zero()) continue;
            unsigned d;
            if (!c.is_state_homogeneous(&d)) return std::nullopt;
            if (deg && *deg != d) return std::nullopt;
            deg = d;
        }
        if (!deg) return std::nullopt;
        if (*deg == 0) throw error("vector fields vanish at the origin; degree-0 components are not graded");
        return static_cast<int>(*deg) - 1;
    }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < size(); ++i) {
            if (i) s += ", ";
            s += comps_[i].str();
        }
        return s + "]";
    }

  private:
    void check(const PolyVectorField& o) const {
        if (table_ != o.table_) throw variable_table_mismatch();
    }

    TablePtr table_;
    std::vector<Polynomial> comps_;
};

/* Jacobian matrix dF/dx as polynomials, rows = components, cols = states. */
inline std::vector<std::vector<Polynomial>> jacobian(const PolyVectorField& f) {
    auto states = f.table()->state_indices();
    std::vector<std::vector<Polynomial>> j;
    for (int i = 0; i < f.size(); ++i) {
        std::vector<Polynomial> row;
        for (int v : states) row.push_back(f.component(i).derivative(v));
        j.push_back(std::move(row));
    }
    return j;
}

/* Lie bracket [F,G] = (dG/dx) F - (dF/dx) G. */
inline PolyVectorField lie_bracket(const PolyVectorField& f, const PolyVectorField& g) {
    if (f.table() != g.table()) throw variable_table_mismatch();
    auto jf = jacobian(f), jg = jacobian(g);
    std::vector<Polynomial> out;
    for (int i = 0; i < f.size(); ++i) {
        Polynomial e(f.table());
        for (int k = 0; k < f.size(); ++k)
            e += jg[i][k] * f.component(k) - jf[i][k] * g.component(k);
        out.push_back(std::move(e));
    }
    return PolyVectorField(f.table(), std::move(out));
}

/* (dF/dx) x; Euler's formula says this is r F for F homogeneous of degree r. */
inline PolyVectorField radial_contract(const PolyVectorField& f) {
    auto jf = jacobian(f);
    auto states = f.table()->state_indices();
    std::vector<Polynomial> out;
    for (int i = 0; i < f.size(); ++i) {
        Polynomial e(f.table());
        for (std::size_t k = 0; k < states.size(); ++k)
            e += jf[i][k] * Polynomial::variable(f.table(), states[k]);
        out.push_back(std::move(e));
    }
    return PolyVectorField(f.table(), std::move(out));
}

/* Finite collection of homogeneous pieces F = sum_j F_j, F_j in L_j. */
class GradedVF {
  public:
    GradedVF() = default;
    explicit GradedVF(std::map<int, PolyVectorField> pieces) : pieces_(std::move(pieces)) {
        for (const auto& [j, f] : pieces_) {
            auto lvl = f.level();
            if (!lvl || *lvl != j) throw not_homogeneous();
        }
    }

    const std::map<int, PolyVectorField>& pieces() const { return pieces_; }
    bool has(int j) const { return pieces_.count(j) != 0; }
    const PolyVectorField& piece(int j) const { return pieces_.at(j); }
    int top_level() const { return pieces_.empty() ? -1 : pieces_.rbegin()->first; }

    PolyVectorField assemble(const TablePtr& table) const {
        PolyVectorField sum = PolyVectorField::zero(table);
        for (const auto& [j, f] : pieces_) sum = sum + f;
        return sum;
    }

  private:
    std::map<int, PolyVectorField> pieces_;
};

/* Split an inhomogeneous field into its graded pieces. */
inline GradedVF grade_decompose(const PolyVectorField& f) {
    std::map<int, std::vector<Polynomial>> acc;
    for (int i = 0; i < f.size(); ++i)
        for (const auto& [d, p] : f.component(i).homogeneous_components()) {
            if (d == 0)
                throw error("vector fields vanish at the origin; degree-0 components are not graded");
            auto [it, fresh] = acc.try_emplace(
                static_cast<int>(d) - 1,
                std::vector<Polynomial>(static_cast<std::size_t>(f.size()), Polynomial(f.table())));
            it->second[i] = p;
        }
    std::map<int, PolyVectorField> pieces;
    for (auto& [j, comps] : acc) pieces.emplace(j, PolyVectorField(f.table(), std::move(comps)));
    return GradedVF(std::move(pieces));
}

/* Deterministic basis of L_j: for each component row in order, the degree
   j+1 STATE monomials in descending graded-lex. */
struct VfBasisElement {
    int row;
    Monomial mono;
};

inline std::vector<VfBasisElement> vf_level_basis(const TablePtr& table, int level) {
    std::vector<VfBasisElement> out;
    if (level < 0) return out;
    auto monos = monomial_basis(table, static_cast<unsigned>(level + 1));
    for (int r = 0; r < table->state_count(); ++r)
        for (const auto& m : monos) out.push_back({r, m});
    return out;
}

inline PolyVectorField vf_basis_field(const TablePtr& table, const VfBasisElement& e) {
    std::vector<Polynomial> comps(static_cast<std::size_t>(table->state_count()),
                                  Polynomial(table));
    comps[e.row] = Polynomial(table, {{e.mono, GaussianRational(1)}});
    return PolyVectorField(table, std::move(comps));
}

/* Coordinates of a homogeneous field in the vf_level_basis of its level. */
inline ScalarVec vf_coordinates(const PolyVectorField& f, int level) {
    auto basis = vf_level_basis(f.table(), level);
    ScalarVec coords = vec_zero(f.table(), static_cast<int>(basis.size()));
    auto monos = monomial_basis(f.table(), static_cast<unsigned>(level + 1));
    std::map<Monomial, int, GrlexBefore> pos;
    for (std::size_t k = 0; k < monos.size(); ++k) pos[monos[k]] = static_cast<int>(k);
    for (int r = 0; r < f.size(); ++r) {
        for (const auto& [mono, coeff] : f.component(r).state_coefficients()) {
            if (coeff.is_zero()) continue;
            auto it = pos.find(mono);
            if (it == pos.end()) throw not_homogeneous();
            coords[r * static_cast<int>(monos.size()) + it->second] = Scalar(coeff);
        }
    }
    return coords;
}

inline PolyVectorField vf_from_coordinates(const TablePtr& table, int level, const ScalarVec& v) {
    auto basis = vf_level_basis(table, level);
    if (v.size() != basis.size()) throw dimension_mismatch();
    std::vector<Polynomial> comps(static_cast<std::size_t>(table->state_count()),
                                  Polynomial(table));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (v[k].is_zero()) continue;
        if (!v[k].den_is_one())
            throw error("coordinates with parameter denominators cannot form a Polynomial field");
        comps[basis[k].row] += Polynomial(table, {{basis[k].mono, GaussianRational(1)}}) * v[k].num();
    }
    return PolyVectorField(table, std::move(comps));
}

/* Matrix of ad(F_t)|_{L_j} : L_j -> L_{t+j} on the deterministic bases. */
inline ExactMatrix ad_matrix(const PolyVectorField& f_t, int j) {
    auto lvl = f_t.level();
    if (!lvl) throw not_homogeneous();
    int t = *lvl;
    auto dom = vf_level_basis(f_t.table(), j);
    auto cod = vf_level_basis(f_t.table(), t + j);
    ExactMatrix m(static_cast<int>(cod.size()), static_cast<int>(dom.size()), f_t.table());
    for (std::size_t col = 0; col < dom.size(); ++col) {
        PolyVectorField img = lie_bracket(f_t, vf_basis_field(f_t.table(), dom[col]));
        if (img.is_zero()) continue;
        ScalarVec coords = vf_coordinates(img, t + j);
        for (std::size_t row = 0; row < cod.size(); ++row)
            m.at(static_cast<int>(row), static_cast<int>(col)) = coords[row];
    }
    return m;
}

}  // namespace specseq

#endif
