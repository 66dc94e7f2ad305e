#ifndef SPECSEQ_DRIVERS_HPP
#define SPECSEQ_DRIVERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "specseq/spectral.hpp"
#include "specseq/vectorfield.hpp"

namespace specseq {

/* ---------------- polynomial vector fields ---------------- */

enum class VfMode { BOTTOM, TOP };

struct VfProblem {
    TablePtr table;
    GradedVF field;
    VfMode mode = VfMode::BOTTOM;
    int bound = 6;  // BOTTOM: formal order; TOP: maximum component degree
};

struct VfWitness {
    std::vector<PolyFraction> components;  // the centralizer field
    KernelWitness raw;
};

/* ad(F) as a DECREASING graded map on L_0..L_max. */
inline GradedLinearMap build_vf_bottom_map(const TablePtr& table, const GradedVF& field,
                                           int max_level) {
    std::vector<LevelBasis> levels;
    for (int j = 0; j <= max_level; ++j) {
        LevelBasis b;
        for (const auto& e : vf_level_basis(table, j))
            b.labels.push_back("[" + std::to_string(e.row) + "]" +
                               Polynomial(table, {{e.mono, GaussianRational(1)}}).str());
        levels.push_back(std::move(b));
    }
    GradedLinearMap f(Direction::DECREASING, table, levels, levels);
    for (const auto& [t, piece] : field.pieces())
        for (int j = 0; j <= max_level; ++j) {
            if (t + j > max_level) continue;
            f.set_component(t, j, ad_matrix(piece, j));
        }
    return f;
}

/* ad(F) with the regraded domain M_j = L_{j-p}, an INCREASING graded map. */
inline GradedLinearMap build_vf_top_map(const TablePtr& table, const GradedVF& field,
                                        int max_level) {
    int p = field.top_level();
    std::vector<LevelBasis> dom, cod;
    for (int j = 0; j <= max_level; ++j) {
        LevelBasis bd, bc;
        for (const auto& e : vf_level_basis(table, j - p))
            bd.labels.push_back("[" + std::to_string(e.row) + "]" +
                                Polynomial(table, {{e.mono, GaussianRational(1)}}).str());
        for (const auto& e : vf_level_basis(table, j))
            bc.labels.push_back("[" + std::to_string(e.row) + "]" +
                                Polynomial(table, {{e.mono, GaussianRational(1)}}).str());
        dom.push_back(std::move(bd));
        cod.push_back(std::move(bc));
    }
    GradedLinearMap f(Direction::INCREASING, table, dom, cod);
    for (const auto& [t, piece] : field.pieces())
        for (int j = 0; j <= max_level; ++j) {
            if (j - p < -1) continue;
            if (f.dom_dim(j) == 0) continue;
            // ad(F_t): L_{j-p} -> L_{j-p+t} sits at codomain level j-(p-t)
            f.set_component(p - t, j, ad_matrix(piece, j - p));
        }
    return f;
}

inline std::vector<PolyFraction> vf_render(const TablePtr& table, const LevelVector& lv,
                                           bool regraded, int p) {
    std::vector<PolyFraction> comps(static_cast<std::size_t>(table->state_count()),
                                    PolyFraction::zero(table));
    for (const auto& [lvl, coords] : lv) {
        int vf_level = regraded ? lvl - p : lvl;
        auto basis = vf_level_basis(table, vf_level);
        if (basis.size() != coords.size()) throw dimension_mismatch();
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (coords[k].is_zero()) continue;
            PolyFraction mono(Polynomial(table, {{basis[k].mono, GaussianRational(1)}}));
            comps[basis[k].row] += coords[k] * mono;
        }
    }
    return comps;
}

/* Formal centralizers of F = F_0 + ... with ad(F_0) invertible on L_j, j>=1:
   one truncated witness per basis element of ker ad(F_0)|_{L_0}. */
inline std::vector<VfWitness> vf_bottom_centralizers(const VfProblem& prob) {
    if (prob.mode != VfMode::BOTTOM) throw error("problem is not in BOTTOM mode");
    if (!prob.field.has(0) || prob.field.piece(0).is_zero())
        throw error("BOTTOM mode needs a nonzero F_0");
    GradedLinearMap f = build_vf_bottom_map(prob.table, prob.field, prob.bound);
    for (int j = 1; j <= prob.bound; ++j) {
        ExactMatrix d0 = f.d0_matrix(j);
        if (rank(d0) < d0.rows() || d0.rows() != d0.cols()) throw hypothesis_failure(j);
    }
    std::vector<VfWitness> out;
    SubspaceBasis seeds = nullspace(f.d0_matrix(0));
    for (const auto& lead : seeds.vectors()) {
        KernelWitness w = formal_extend(f, 0, lead, prob.bound);
        out.push_back({vf_render(prob.table, w.element, false, 0), std::move(w)});
    }
    return out;
}

/* Scale so the top piece is exactly (1/(p+1)) [x_i^{p+1}]_i. */
inline GradedVF normalize_top_field(const TablePtr& table, const GradedVF& field) {
    int p = field.top_level();
    if (p <= 0) throw error("TOP mode needs a positive top level");
    const PolyVectorField& top = field.piece(p);
    GaussianRational c;
    auto states = table->state_indices();
    for (std::size_t i = 0; i < states.size(); ++i) {
        GaussianRational ci =
            top.component(static_cast<int>(i))
                .coefficient(Monomial::var(states[i], static_cast<unsigned>(p + 1)));
        if (i == 0) c = ci;
        if (ci.is_zero() || ci != c) throw error("top piece is not a power field");
    }
    PolyVectorField expected = PolyVectorField::zero(table);
    {
        std::vector<Polynomial> comps;
        for (std::size_t i = 0; i < states.size(); ++i)
            comps.push_back(Polynomial::variable(table, states[i], static_cast<unsigned>(p + 1))
                                .scale(c));
        expected = PolyVectorField(table, std::move(comps));
    }
    if (!(expected == top)) throw error("top piece is not a power field");
    GaussianRational unit = GaussianRational(BigRational(1, p + 1)) / c;
    std::map<int, PolyVectorField> scaled;
    for (const auto& [j, piece] : field.pieces()) scaled.emplace(j, piece.scale(unit));
    return GradedVF(std::move(scaled));
}

/* Finite exact centralizers of F = F_0 + ... + F_p with the power top term,
   up to component degree prob.bound. */
inline std::vector<VfWitness> vf_top_centralizers(const VfProblem& prob) {
    if (prob.mode != VfMode::TOP) throw error("problem is not in TOP mode");
    GradedVF field = normalize_top_field(prob.table, prob.field);
    int p = field.top_level();
    int max_hat = (prob.bound - 1) + p;  // component degree d sits at hat level d-1+p
    GradedLinearMap f = build_vf_top_map(prob.table, field, max_hat);
    std::vector<VfWitness> out;
    for (KernelWitness& w : kernel_basis_up_to(f, max_hat)) {
        VfWitness vw{vf_render(prob.table, w.element, true, p), std::move(w)};
        out.push_back(std::move(vw));
    }
    return out;
}

/* ---------------- polynomial solutions of linear ODEs ---------------- */

struct OdeProblem {
    TablePtr table;                  // single STATE variable
    std::vector<Polynomial> coeffs;  // p_0 ... p_n, operator sum p_j y^(j)
    int max_degree = 10;
};

struct OdeTableRow {
    std::string monomial;
    int grade_level;
    std::string image;
    int filtration_level;
};

struct OdeResult {
    int shift;
    std::vector<PolyFraction> solutions;
    std::vector<OdeTableRow> table;
    std::vector<KernelWitness> raw;
};

inline Polynomial ode_apply(const OdeProblem& prob, const Polynomial& q) {
    Polynomial out(prob.table);
    int x = prob.table->state_indices().at(0);
    Polynomial d = q;
    for (std::size_t j = 0; j < prob.coeffs.size(); ++j) {
        if (!prob.coeffs[j].is_zero()) out += prob.coeffs[j] * d;
        d = d.derivative(x);
    }
    return out;
}

inline int ode_shift(const OdeProblem& prob) {
    bool any = false;
    int sh = 0;
    for (std::size_t j = 0; j < prob.coeffs.size(); ++j) {
        if (prob.coeffs[j].is_zero()) continue;
        int s = static_cast<int>(prob.coeffs[j].state_degree()) - static_cast<int>(j);
        sh = any ? std::max(sh, s) : s;
        any = true;
    }
    if (!any) throw error("the zero operator is not an ODE");
    return sh;
}

/* The ODE operator as an INCREASING graded map: x^m has domain grade m+shift
   and codomain grade m. */
inline GradedLinearMap build_ode_map(const OdeProblem& prob) {
    int sh = std::max(ode_shift(prob), 0);
    int x = prob.table->state_indices().at(0);
    int max_level = prob.max_degree + sh;
    std::vector<LevelBasis> dom, cod;
    for (int l = 0; l <= max_level; ++l) {
        LevelBasis bd, bc;
        if (l >= sh) bd.labels.push_back("x^" + std::to_string(l - sh));
        bc.labels.push_back("x^" + std::to_string(l));
        dom.push_back(std::move(bd));
        cod.push_back(std::move(bc));
    }
    GradedLinearMap f(Direction::INCREASING, prob.table, dom, cod);
    std::map<int, std::map<int, GaussianRational>> entries;  // shift -> dom level -> value
    for (int m = 0; m <= prob.max_degree; ++m) {
        Polynomial img = ode_apply(prob, Polynomial::variable(prob.table, x, m));
        for (const auto& [mono, c] : img.terms()) {
            int d = static_cast<int>(mono.exponent(x));
            entries[m + sh - d][m + sh] += c;
        }
    }
    for (const auto& [t, per] : entries)
        for (const auto& [l, c] : per) {
            ExactMatrix cell(1, 1, prob.table);
            cell.at(0, 0) = Scalar::of(prob.table, c);
            f.set_component(t, l, cell);
        }
    return f;
}

inline OdeResult ode_poly_solutions(const OdeProblem& prob) {
    int sh_true = ode_shift(prob);
    int sh = std::max(sh_true, 0);
    int x = prob.table->state_indices().at(0);
    GradedLinearMap f = build_ode_map(prob);
    OdeResult res;
    res.shift = sh_true;
    for (KernelWitness& w : kernel_basis_up_to(f, prob.max_degree + sh)) {
        PolyFraction sol = PolyFraction::zero(prob.table);
        for (const auto& [lvl, coords] : w.element)
            if (!coords.empty() && !coords[0].is_zero())
                sol += coords[0] *
                       PolyFraction(Polynomial::variable(prob.table, x,
                                                         static_cast<unsigned>(lvl - sh)));
        res.solutions.push_back(std::move(sol));
        res.raw.push_back(std::move(w));
    }
    for (int m = 0; m <= prob.max_degree; ++m) {
        Polynomial mono = Polynomial::variable(prob.table, x, static_cast<unsigned>(m));
        Polynomial img = ode_apply(prob, mono);
        res.table.push_back({mono.str(), m + sh, img.str(),
                             img.is_zero() ? 0 : static_cast<int>(img.state_degree())});
    }
    return res;
}

/* ---------------- centralizers of upper-triangular matrices ---------------- */

struct MatrixProblem {
    int n = 0;
    std::vector<std::vector<GaussianRational>> m;  // upper triangular, n x n
    std::vector<GaussianRational> diagonal;        // prescribed m'_0
};

struct MatrixWitness {
    std::vector<std::vector<GaussianRational>> centralizer;
    bool unique = false;
    KernelWitness raw;
};

namespace detail {

inline TablePtr trivial_table() {
    static TablePtr t = std::make_shared<VariableTable>();
    return t;
}

}  // namespace detail

/* ad(m) on the graded algebra of upper-triangular matrices, L_j = j-th
   superdiagonal. */
inline GradedLinearMap build_matrix_map(const MatrixProblem& prob) {
    TablePtr t = detail::trivial_table();
    int n = prob.n;
    std::vector<LevelBasis> levels;
    for (int j = 0; j < n; ++j) {
        LevelBasis b;
        for (int i = 0; i + j < n; ++i)
            b.labels.push_back("E(" + std::to_string(i + 1) + "," + std::to_string(i + j + 1) +
                               ")");
        levels.push_back(std::move(b));
    }
    GradedLinearMap f(Direction::DECREASING, t, levels, levels);
    for (int shift = 0; shift < n; ++shift) {
        bool nonzero = false;
        for (int i = 0; i + shift < n; ++i)
            if (!prob.m[i][i + shift].is_zero()) nonzero = true;
        if (!nonzero) continue;
        for (int j = 0; j + shift < n; ++j) {
            // [m_shift, E_{a,a+j}] = m[a-shift][a] E_{a-shift,a+j}
            //                        - m[a+j][a+j+shift] E_{a,a+j+shift}
            ExactMatrix cell(n - j - shift, n - j, t);
            for (int a = 0; a + j < n; ++a) {
                if (a - shift >= 0)
                    cell.at(a - shift, a) += Scalar::of(t, prob.m[a - shift][a]);
                if (a + j + shift < n)
                    cell.at(a, a) -= Scalar::of(t, prob.m[a + j][a + j + shift]);
            }
            f.set_component(shift, j, cell);
        }
    }
    return f;
}

inline MatrixWitness matrix_centralizer(const MatrixProblem& prob) {
    if (prob.n <= 0 || static_cast<int>(prob.m.size()) != prob.n)
        throw error("matrix problem dimensions are inconsistent");
    for (int i = 0; i < prob.n; ++i)
        for (int j = 0; j < i; ++j)
            if (!prob.m[i][j].is_zero()) throw error("matrix must be upper triangular");
    GradedLinearMap f = build_matrix_map(prob);
    TablePtr t = f.table();
    for (int j = 1; j < prob.n; ++j) {
        ExactMatrix d0 = f.d0_matrix(j);
        if (rank(d0) < d0.rows() || d0.rows() != d0.cols()) throw hypothesis_failure(j);
    }
    ScalarVec lead;
    for (const auto& d : prob.diagonal) lead.push_back(Scalar::of(t, d));
    KernelWitness w = formal_extend(f, 0, lead, prob.n - 1);
    if (!level_vector_is_zero(w.residual)) throw error("matrix centralizer must be exact");
    MatrixWitness out;
    out.centralizer.assign(prob.n, std::vector<GaussianRational>(prob.n, GaussianRational()));
    for (const auto& [j, coords] : w.element)
        for (int i = 0; i + j < prob.n; ++i)
            if (!coords[i].is_zero()) out.centralizer[i][i + j] = coords[i].constant_value();
    // uniqueness: no kernel element vanishes on the whole diagonal
    SubspaceBasis ker = brute_kernel(f, prob.n - 1);
    ExactMatrix diag_block(prob.n, ker.dim(), t);
    for (int k = 0; k < ker.dim(); ++k)
        for (int i = 0; i < prob.n; ++i) diag_block.at(i, k) = ker.vectors()[k][i];
    out.unique = nullspace(diag_block).dim() == 0;
    out.raw = std::move(w);
    return out;
}

}  // namespace specseq

#endif
