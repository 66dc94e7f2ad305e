#ifndef SPECSEQ_LINALG_HPP
#define SPECSEQ_LINALG_HPP

#include <optional>
#include <vector>

#include "specseq/scalar.hpp"

namespace specseq {

using ScalarVec = std::vector<Scalar>;

inline ScalarVec vec_zero(const TablePtr& t, int n) {
    return ScalarVec(static_cast<std::size_t>(n), Scalar::zero(t));
}
inline bool vec_is_zero(const ScalarVec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}
inline ScalarVec vec_add(const ScalarVec& a, const ScalarVec& b) {
    if (a.size() != b.size()) throw dimension_mismatch();
    ScalarVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}
inline ScalarVec vec_sub(const ScalarVec& a, const ScalarVec& b) {
    if (a.size() != b.size()) throw dimension_mismatch();
    ScalarVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}
inline ScalarVec vec_scale(const ScalarVec& a, const Scalar& c) {
    ScalarVec r = a;
    for (auto& x : r) x *= c;
    return r;
}

/* Dense matrix over the exact coefficient field. */
class ExactMatrix {
  public:
    ExactMatrix() = default;
    ExactMatrix(int rows, int cols, const TablePtr& table)
        : rows_(rows), cols_(cols), table_(table),
          a_(static_cast<std::size_t>(rows) * cols, Scalar::zero(table)) {}

    static ExactMatrix identity(int n, const TablePtr& table) {
        ExactMatrix m(n, n, table);
        for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(table);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const TablePtr& table() const { return table_; }

    Scalar& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    ScalarVec apply(const ScalarVec& v) const {
        if (static_cast<int>(v.size()) != cols_) throw dimension_mismatch();
        ScalarVec r = vec_zero(table_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    ExactMatrix operator*(const ExactMatrix& o) const {
        if (cols_ != o.rows_) throw dimension_mismatch();
        ExactMatrix r(rows_, o.cols_, table_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k)
                if (!at(i, k).is_zero())
                    for (int j = 0; j < o.cols_; ++j)
                        if (!o.at(k, j).is_zero()) r.at(i, j) += at(i, k) * o.at(k, j);
        return r;
    }

    ExactMatrix operator-(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_mismatch();
        ExactMatrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }

    ExactMatrix scale(const Scalar& c) const {
        ExactMatrix r = *this;
        for (auto& x : r.a_) x *= c;
        return r;
    }

    bool operator==(const ExactMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

  private:
    int rows_ = 0, cols_ = 0;
    TablePtr table_;
    std::vector<Scalar> a_;
};

namespace detail {

// strip common content of a row: a unit rescaling that keeps entries small
inline void row_reduce_content(std::vector<ScalarVec>& m, int row) {
    ScalarVec& r = m[row];
    if (r.empty()) return;
    const TablePtr& t = r[0].table();
    if (!t) return;
    Polynomial den_lcm(t), num_gcd(t);
    bool any = false;
    for (const auto& x : r) {
        if (x.is_zero()) continue;
        any = true;
        den_lcm = den_lcm.is_zero() ? x.den() : poly_lcm(den_lcm, x.den());
        for (const auto& [core, comp] : core_decompose(x.num())) num_gcd = poly_gcd(num_gcd, comp);
    }
    if (!any) return;
    Scalar factor(den_lcm, num_gcd);
    for (auto& x : r) x *= factor;
}

}  // namespace detail

struct RrefResult {
    std::vector<ScalarVec> rows;  // reduced echelon rows
    std::vector<int> pivot_cols;
    int rank = 0;
};

/* Reduced row echelon form with deterministic pivoting: columns are scanned
   left to right and the first row with a nonzero entry is used.  Rows are
   content-stripped along the way to keep parameter polynomials small. */
inline RrefResult rref(std::vector<ScalarVec> m) {
    RrefResult out;
    if (m.empty()) return out;
    const std::size_t ncols = m[0].size();
    for (auto& r : m)
        if (r.size() != ncols) throw dimension_mismatch();
    std::size_t lead_row = 0;
    for (std::size_t col = 0; col < ncols && lead_row < m.size(); ++col) {
        std::size_t sel = lead_row;
        while (sel < m.size() && m[sel][col].is_zero()) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[lead_row], m[sel]);
        detail::row_reduce_content(m, static_cast<int>(lead_row));
        Scalar inv = m[lead_row][col].inverse();
        for (auto& x : m[lead_row]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == lead_row || m[r][col].is_zero()) continue;
            Scalar f = m[r][col];
            for (std::size_t j = col; j < ncols; ++j)
                if (!m[lead_row][j].is_zero()) m[r][j] -= f * m[lead_row][j];
        }
        out.pivot_cols.push_back(static_cast<int>(col));
        ++lead_row;
    }
    out.rank = static_cast<int>(lead_row);
    m.resize(lead_row);
    out.rows = std::move(m);
    return out;
}

inline std::vector<ScalarVec> matrix_rows(const ExactMatrix& m) {
    std::vector<ScalarVec> rows;
    rows.reserve(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        ScalarVec r;
        r.reserve(m.cols());
        for (int j = 0; j < m.cols(); ++j) r.push_back(m.at(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline int rank(const ExactMatrix& m) { return rref(matrix_rows(m)).rank; }

/* Independent vectors in reduced echelon form spanning a subspace. */
class SubspaceBasis {
  public:
    SubspaceBasis() = default;
    SubspaceBasis(int ambient, const TablePtr& table) : ambient_(ambient), table_(table) {}

    static SubspaceBasis span(int ambient, const TablePtr& table,
                              const std::vector<ScalarVec>& generators) {
        SubspaceBasis s(ambient, table);
        for (const auto& g : generators)
            if (static_cast<int>(g.size()) != ambient) throw dimension_mismatch();
        if (!generators.empty()) {
            RrefResult r = rref(generators);
            s.rows_ = std::move(r.rows);
            s.pivots_ = std::move(r.pivot_cols);
        }
        return s;
    }

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const TablePtr& table() const { return table_; }
    const std::vector<ScalarVec>& vectors() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    /* Canonical coset representative; zero iff v lies in the span. */
    ScalarVec reduce(const ScalarVec& v) const {
        if (static_cast<int>(v.size()) != ambient_) throw dimension_mismatch();
        ScalarVec r = v;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Scalar& c = r[pivots_[k]];
            if (c.is_zero()) continue;
            Scalar f = c;
            for (int j = 0; j < ambient_; ++j)
                if (!rows_[k][j].is_zero()) r[j] -= f * rows_[k][j];
        }
        return r;
    }

    bool contains(const ScalarVec& v) const { return vec_is_zero(reduce(v)); }

    bool same_span(const SubspaceBasis& o) const {
        return ambient_ == o.ambient_ && rows_.size() == o.rows_.size() &&
               [&] {
                   for (const auto& r : o.rows_)
                       if (!contains(r)) return false;
                   return true;
               }();
    }

  private:
    int ambient_ = 0;
    TablePtr table_;
    std::vector<ScalarVec> rows_;
    std::vector<int> pivots_;
};

inline ScalarVec reduce_mod_subspace(const ScalarVec& v, const SubspaceBasis& s) {
    return s.reduce(v);
}

/* Reduced-echelon basis of { v : Mv = 0 }. */
inline SubspaceBasis nullspace(const ExactMatrix& m) {
    RrefResult r = rref(matrix_rows(m));
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : r.pivot_cols) is_pivot[p] = true;
    std::vector<ScalarVec> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        ScalarVec v = vec_zero(m.table(), m.cols());
        v[free] = Scalar::one(m.table());
        for (std::size_t k = 0; k < r.rows.size(); ++k)
            v[r.pivot_cols[k]] = -r.rows[k][free];
        basis.push_back(std::move(v));
    }
    return SubspaceBasis::span(m.cols(), m.table(), basis);
}

/* One solution of Mv = b, deterministic (free variables set to 0 in echelon
   order); nullopt when b is outside the column space. */
inline std::optional<ScalarVec> solve_affine(const ExactMatrix& m, const ScalarVec& b) {
    if (static_cast<int>(b.size()) != m.rows()) throw dimension_mismatch();
    std::vector<ScalarVec> aug = matrix_rows(m);
    for (int i = 0; i < m.rows(); ++i) aug[i].push_back(b[i]);
    RrefResult r = rref(aug);
    ScalarVec x = vec_zero(m.table(), m.cols());
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        if (r.pivot_cols[k] == m.cols()) return std::nullopt;  // row 0 = 1
        x[r.pivot_cols[k]] = r.rows[k][m.cols()];
    }
    return x;
}

/* Column space of M as a subspace of the codomain. */
inline SubspaceBasis column_space(const ExactMatrix& m) {
    std::vector<ScalarVec> cols;
    for (int j = 0; j < m.cols(); ++j) {
        ScalarVec c;
        c.reserve(m.rows());
        for (int i = 0; i < m.rows(); ++i) c.push_back(m.at(i, j));
        cols.push_back(std::move(c));
    }
    return SubspaceBasis::span(m.rows(), m.table(), cols);
}

inline std::optional<ExactMatrix> try_inverse(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw dimension_mismatch();
    int n = m.rows();
    std::vector<ScalarVec> aug = matrix_rows(m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            aug[i].push_back(i == j ? Scalar::one(m.table()) : Scalar::zero(m.table()));
    }
    RrefResult r = rref(aug);
    if (r.rank < n || r.pivot_cols[n - 1] != n - 1) return std::nullopt;
    ExactMatrix inv(n, n, m.table());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = r.rows[i][n + j];
    return inv;
}

/* Characteristic polynomial by Faddeev-LeVerrier: returns coefficients
   c[0..n] of lambda^n + c[1] lambda^(n-1) + ... + c[n] with c[0] = 1. */
inline ScalarVec char_poly(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw dimension_mismatch();
    int n = m.rows();
    ScalarVec c(static_cast<std::size_t>(n) + 1, Scalar::zero(m.table()));
    c[0] = Scalar::one(m.table());
    ExactMatrix b = ExactMatrix::identity(n, m.table());
    for (int k = 1; k <= n; ++k) {
        ExactMatrix a = m * b;
        Scalar tr = Scalar::zero(m.table());
        for (int i = 0; i < n; ++i) tr += a.at(i, i);
        c[k] = -(tr * Scalar::of(m.table(), 1, k));
        b = a;
        for (int i = 0; i < n; ++i) b.at(i, i) += c[k];
    }
    return c;
}

inline Scalar determinant(const ExactMatrix& m) {
    ScalarVec c = char_poly(m);
    Scalar det = c[m.rows()];
    if (m.rows() % 2) det = -det;
    return det;
}

}  // namespace specseq

#endif
