#ifndef SPECSEQ_SPECTRAL_HPP
#define SPECSEQ_SPECTRAL_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specseq/linalg.hpp"

namespace specseq {

enum class Direction { INCREASING, DECREASING };

/* Element of a graded module, stored per level. */
using LevelVector = std::map<int, ScalarVec>;

inline bool level_vector_is_zero(const LevelVector& v) {
    for (const auto& [l, x] : v)
        if (!vec_is_zero(x)) return false;
    return true;
}

struct LevelBasis {
    std::vector<std::string> labels;
    int dim() const { return static_cast<int>(labels.size()); }
};

/* A filtration-preserving map between graded modules, given by finitely many
   components f^(t) shifting the level by t: M_j -> N_{j-t} (INCREASING) or
   M_j -> N_{j+t} (DECREASING).  Levels 0..max_level are materialized; for a
   DECREASING map, images beyond max_level are the formal tail. */
class GradedLinearMap {
  public:
    GradedLinearMap(Direction dir, TablePtr table, std::vector<LevelBasis> dom,
                    std::vector<LevelBasis> cod)
        : dir_(dir), table_(std::move(table)), dom_(std::move(dom)), cod_(std::move(cod)) {
        if (dom_.size() != cod_.size()) throw dimension_mismatch();
    }

    Direction direction() const { return dir_; }
    const TablePtr& table() const { return table_; }
    int max_level() const { return static_cast<int>(dom_.size()) - 1; }
    const LevelBasis& dom(int j) const { return dom_.at(static_cast<std::size_t>(j)); }
    const LevelBasis& cod(int j) const { return cod_.at(static_cast<std::size_t>(j)); }
    int dom_dim(int j) const { return in_range(j) ? dom(j).dim() : 0; }
    int cod_dim(int j) const { return in_range(j) ? cod(j).dim() : 0; }
    bool in_range(int j) const { return j >= 0 && j <= max_level(); }

    int target_level(int j, int shift) const {
        return dir_ == Direction::INCREASING ? j - shift : j + shift;
    }

    /* Register the shift-t component at domain level j.  A nonzero component
       that would map below level 0 violates filtration preservation. */
    void set_component(int shift, int j, ExactMatrix m) {
        if (shift < 0) throw error("component shifts must be non-negative");
        if (!in_range(j)) throw error("domain level out of range");
        int tgt = target_level(j, shift);
        if (m.cols() != dom_dim(j)) throw dimension_mismatch();
        if (tgt < 0) {
            for (int r = 0; r < m.rows(); ++r)
                for (int c = 0; c < m.cols(); ++c)
                    if (!m.at(r, c).is_zero()) throw filtration_violation(dom(j).labels[c]);
            return;
        }
        if (tgt > max_level()) return;  // formal tail of a DECREASING map
        if (m.rows() != cod_dim(tgt)) throw dimension_mismatch();
        comps_[shift][j] = std::move(m);
    }

    const ExactMatrix* component(int shift, int j) const {
        auto it = comps_.find(shift);
        if (it == comps_.end()) return nullptr;
        auto jt = it->second.find(j);
        return jt == it->second.end() ? nullptr : &jt->second;
    }

    std::vector<int> shifts() const {
        std::vector<int> out;
        for (const auto& [t, m] : comps_) out.push_back(t);
        return out;
    }

    /* The shift-0 block at level j (zero matrix when absent). */
    ExactMatrix d0_matrix(int j) const {
        if (const ExactMatrix* m = component(0, j)) return *m;
        return ExactMatrix(cod_dim(target_level(j, 0)), dom_dim(j), table_);
    }

    LevelVector apply(const LevelVector& v) const {
        LevelVector out;
        for (const auto& [j, x] : v) {
            if (vec_is_zero(x)) continue;
            if (static_cast<int>(x.size()) != dom_dim(j)) throw dimension_mismatch();
            for (const auto& [t, per_level] : comps_) {
                auto it = per_level.find(j);
                if (it == per_level.end()) continue;
                int tgt = target_level(j, t);
                if (!in_range(tgt)) continue;
                ScalarVec img = it->second.apply(x);
                if (vec_is_zero(img)) continue;
                auto [slot, fresh] = out.try_emplace(tgt, img);
                if (!fresh) slot->second = vec_add(slot->second, img);
            }
        }
        for (auto it = out.begin(); it != out.end();)
            it = vec_is_zero(it->second) ? out.erase(it) : std::next(it);
        return out;
    }

    ScalarVec level_component(const LevelVector& v, int j) const {
        auto it = v.find(j);
        if (it != v.end()) return it->second;
        return vec_zero(table_, cod_dim(j));
    }

  private:
    Direction dir_;
    TablePtr table_;
    std::vector<LevelBasis> dom_, cod_;
    std::map<int, std::map<int, ExactMatrix>> comps_;
};

/* ---- pages, differentials and the extension algorithm ---- */

struct PageClass {
    int r = 0;      // page index
    int p = 0;      // filtration level of the leading term
    int q = 0;      // 0 = kernel column, 1 = cokernel column
    LevelVector rep;
    SubspaceBasis denom;  // for q = 1: the quotient denominator
};

struct TraceStep {
    int page;
    std::string action;  // "pass" | "corrected" | "obstructed"
    int level;
};

struct Obstruction {
    int page;
    int level;
    ScalarVec reduced;  // nonzero coset representative in E_r^{level,1}
    SubspaceBasis denom;
    std::vector<TraceStep> trace;
};

struct KernelWitness {
    int leading_level = 0;
    LevelVector element;
    LevelVector residual;  // empty for exact witnesses
    bool truncated = false;
    std::vector<TraceStep> trace;
};

/* Adjust the correction found at `level` (legal adjustments add elements of
   ker d0 at that level); identity by default. */
using CorrectionAdjuster = std::function<ScalarVec(int level, const ScalarVec&)>;

namespace detail {

struct BlockSystem {
    std::vector<int> levels;       // unknown levels, ascending
    std::vector<int> offsets;      // column offset per level
    int total_cols = 0;
};

inline BlockSystem block_layout(const GradedLinearMap& f, int lo, int hi) {
    BlockSystem b;
    for (int j = lo; j <= hi; ++j) {
        if (!f.in_range(j)) continue;
        b.levels.push_back(j);
        b.offsets.push_back(b.total_cols);
        b.total_cols += f.dom_dim(j);
    }
    return b;
}

// rows of [f(u)]_row_level as a function of the unknown block
inline ExactMatrix block_row(const GradedLinearMap& f, const BlockSystem& b, int row_level) {
    ExactMatrix m(f.cod_dim(row_level), b.total_cols, f.table());
    for (std::size_t k = 0; k < b.levels.size(); ++k) {
        int j = b.levels[k];
        int shift = f.direction() == Direction::INCREASING ? j - row_level : row_level - j;
        if (shift < 0) continue;
        const ExactMatrix* comp = f.component(shift, j);
        if (!comp) continue;
        for (int r = 0; r < comp->rows(); ++r)
            for (int c = 0; c < comp->cols(); ++c)
                if (!comp->at(r, c).is_zero()) m.at(r, b.offsets[k] + c) = comp->at(r, c);
    }
    return m;
}

inline ExactMatrix stack_rows(const std::vector<ExactMatrix>& blocks, const TablePtr& t,
                              int cols) {
    int rows = 0;
    for (const auto& b : blocks) rows += b.rows();
    ExactMatrix m(rows, cols, t);
    int at = 0;
    for (const auto& b : blocks) {
        for (int r = 0; r < b.rows(); ++r)
            for (int c = 0; c < b.cols(); ++c) m.at(at + r, c) = b.at(r, c);
        at += b.rows();
    }
    return m;
}

}  // namespace detail

/* Denominator of E_r^{s,1}: level-s images of elements one page less deep
   whose own images land at level s — f(Z^{r-1}) + (deeper filtration), read
   off in the graded picture.  r = 0 has no denominator. */
inline SubspaceBasis denominator_subspace(const GradedLinearMap& f, int r, int s) {
    if (r <= 0) return SubspaceBasis(f.cod_dim(s), f.table());
    const bool inc = f.direction() == Direction::INCREASING;
    int lo = inc ? s : s - r + 1;
    int hi = inc ? s + r - 1 : s;
    detail::BlockSystem b = detail::block_layout(f, std::max(lo, 0), hi);
    if (b.total_cols == 0) return SubspaceBasis(f.cod_dim(s), f.table());
    std::vector<ExactMatrix> constraint_blocks;
    for (int j : b.levels) {
        if (j == s) continue;  // rows strictly between s and the far end
        int row_level = j;
        (void)row_level;
    }
    // constraints: [f(u)]_j = 0 for every level strictly between s and the
    // far end of the window (exclusive of s itself)
    for (int j = (inc ? s + 1 : lo); inc ? (j <= hi) : (j < s); ++j)
        constraint_blocks.push_back(detail::block_row(f, b, j));
    ExactMatrix image_row = detail::block_row(f, b, s);
    if (constraint_blocks.empty()) return column_space(image_row);
    ExactMatrix constraints = detail::stack_rows(constraint_blocks, f.table(), b.total_cols);
    SubspaceBasis ker = nullspace(constraints);
    std::vector<ScalarVec> images;
    for (const auto& u : ker.vectors()) images.push_back(image_row.apply(u));
    return SubspaceBasis::span(f.cod_dim(s), f.table(), images);
}

/* E_0 data at level p: bases of both columns and the induced map. */
struct Page0 {
    LevelBasis q0, q1;
    ExactMatrix d0;
};

inline Page0 page0(const GradedLinearMap& f, int p) {
    if (!f.in_range(p)) throw error("level out of range");
    return Page0{f.dom(p), f.cod(p), f.d0_matrix(p)};
}

/* d_r of a q=0 class: the level-(p -+ r) component of f(rep), reduced in the
   page quotient.  Throws invalid_representative when f(rep) is not already
   r levels away. */
inline PageClass differential(const GradedLinearMap& f, const PageClass& cls) {
    if (cls.q != 0) throw error("differential applies to q=0 classes");
    const bool inc = f.direction() == Direction::INCREASING;
    int target = inc ? cls.p - cls.r : cls.p + cls.r;
    LevelVector img = f.apply(cls.rep);
    for (const auto& [j, x] : img) {
        bool inside = inc ? (j > target && j <= cls.p) : (j >= cls.p && j < target);
        if (inside && !vec_is_zero(x)) throw invalid_representative();
    }
    PageClass out;
    out.r = cls.r;
    out.p = target;
    out.q = 1;
    out.denom = denominator_subspace(f, cls.r, target);
    ScalarVec val = f.level_component(img, target);
    out.rep[target] = out.denom.reduce(val);
    return out;
}

namespace detail {

/* Find u supported on the correction window with [f(u)] = val at `target`
   and zero at the levels between; nullopt when the target class is not a
   boundary. */
inline std::optional<LevelVector> correction(const GradedLinearMap& f, int p, int r, int target,
                                             const ScalarVec& val) {
    const bool inc = f.direction() == Direction::INCREASING;
    int lo = inc ? target : p + 1;
    int hi = inc ? p - 1 : target;
    BlockSystem b = block_layout(f, std::max(lo, 0), hi);
    if (b.total_cols == 0) return std::nullopt;
    std::vector<ExactMatrix> rows;
    std::vector<int> row_levels;
    for (int j = (inc ? target + 1 : lo); inc ? (j <= hi) : (j < target); ++j) {
        rows.push_back(block_row(f, b, j));
        row_levels.push_back(j);
    }
    rows.push_back(block_row(f, b, target));
    ExactMatrix sys = stack_rows(rows, f.table(), b.total_cols);
    ScalarVec rhs = vec_zero(f.table(), sys.rows());
    int at = sys.rows() - f.cod_dim(target);
    for (int k = 0; k < f.cod_dim(target); ++k) rhs[at + k] = val[k];
    auto sol = solve_affine(sys, rhs);
    if (!sol) return std::nullopt;
    LevelVector u;
    for (std::size_t k = 0; k < b.levels.size(); ++k) {
        ScalarVec part(sol->begin() + b.offsets[k],
                       sol->begin() + b.offsets[k] + f.dom_dim(b.levels[k]));
        if (!vec_is_zero(part)) u[b.levels[k]] = std::move(part);
    }
    return u;
}

}  // namespace detail

using AdvanceResult = std::variant<PageClass, Obstruction>;

/* One page step: if d_r vanishes, subtract a correction (deterministic
   canonical solve, then the optional kernel adjustment) so f(rep) moves one
   level further; otherwise return the obstruction class. */
inline AdvanceResult advance(const GradedLinearMap& f, const PageClass& cls,
                             const CorrectionAdjuster& adjust = nullptr) {
    const bool inc = f.direction() == Direction::INCREASING;
    int target = inc ? cls.p - cls.r : cls.p + cls.r;
    PageClass next = cls;
    next.r = cls.r + 1;
    if (!f.in_range(target)) return next;  // nothing to kill at this page
    PageClass value = differential(f, cls);
    const ScalarVec& red = value.rep.at(target);
    if (vec_is_zero(red)) {
        ScalarVec val = f.level_component(f.apply(cls.rep), target);
        if (!vec_is_zero(val)) {
            auto u = detail::correction(f, cls.p, cls.r, target, val);
            if (!u) throw error("correction must exist when the page class vanishes");
            if (adjust)
                for (auto& [lvl, comp] : *u) comp = adjust(lvl, comp);
            for (const auto& [lvl, comp] : *u) {
                auto [slot, fresh] = next.rep.try_emplace(lvl, vec_zero(f.table(), f.dom_dim(lvl)));
                slot->second = vec_sub(slot->second, comp);
            }
        }
        return next;
    }
    Obstruction ob;
    ob.page = cls.r;
    ob.level = target;
    ob.reduced = red;
    ob.denom = value.denom;
    return ob;
}

using ExtendResult = std::variant<KernelWitness, Obstruction>;

/* Drive a leading term through the pages.  INCREASING maps terminate by
   level 0 with an exact witness; DECREASING runs stop at `max_steps` with a
   truncated witness whose residual sits beyond the corrected window. */
inline ExtendResult extend_to_kernel(const GradedLinearMap& f, int p, const ScalarVec& leading,
                                     int max_steps = -1,
                                     const CorrectionAdjuster& adjust = nullptr) {
    if (vec_is_zero(leading)) throw error("leading term must be nonzero");
    const bool inc = f.direction() == Direction::INCREASING;
    PageClass cls;
    cls.r = 0;
    cls.p = p;
    cls.q = 0;
    cls.rep[p] = leading;
    int last = inc ? p : (max_steps < 0 ? f.max_level() - p : std::min(max_steps, f.max_level() - p));
    std::vector<TraceStep> trace;
    for (int r = 0; r <= last; ++r) {
        int target = inc ? p - r : p + r;
        ScalarVec before = f.level_component(f.apply(cls.rep), target);
        AdvanceResult step = advance(f, cls, adjust);
        if (std::holds_alternative<Obstruction>(step)) {
            Obstruction ob = std::get<Obstruction>(std::move(step));
            trace.push_back({r, "obstructed", target});
            ob.trace = std::move(trace);
            return ob;
        }
        trace.push_back({r, vec_is_zero(before) ? "pass" : "corrected", target});
        cls = std::get<PageClass>(std::move(step));
    }
    KernelWitness w;
    w.leading_level = p;
    w.element = cls.rep;
    w.residual = f.apply(cls.rep);
    w.truncated = !inc;
    w.trace = std::move(trace);
    if (inc && !level_vector_is_zero(w.residual))
        throw error("increasing-filtration witness must be exact");
    if (!inc) {
        for (const auto& [j, x] : w.residual)
            if (j <= p + last && !vec_is_zero(x))
                throw error("truncated witness has residual inside the corrected window");
        if (level_vector_is_zero(w.residual)) w.truncated = false;
    }
    return w;
}

/* Formal extension under the surjectivity hypothesis on the shift-0 blocks
   (checked level by level, refusing with hypothesis_failure otherwise). */
inline KernelWitness formal_extend(const GradedLinearMap& f, int p, const ScalarVec& leading,
                                   int order, const CorrectionAdjuster& adjust = nullptr) {
    if (f.direction() != Direction::DECREASING)
        throw error("formal extension applies to decreasing filtrations");
    if (vec_is_zero(leading)) throw error("leading term must be nonzero");
    int last = std::min(order, f.max_level());
    for (int l = p + 1; l <= last; ++l) {
        if (f.cod_dim(l) == 0) continue;
        if (rank(f.d0_matrix(l)) < f.cod_dim(l)) throw hypothesis_failure(l);
    }
    KernelWitness w;
    w.leading_level = p;
    w.element[p] = leading;
    std::vector<TraceStep> trace;
    for (int l = p + 1; l <= last; ++l) {
        ScalarVec val = f.level_component(f.apply(w.element), l);
        if (vec_is_zero(val)) {
            trace.push_back({l - p, "pass", l});
            continue;
        }
        auto u = solve_affine(f.d0_matrix(l), val);
        if (!u) throw hypothesis_failure(l);
        ScalarVec adj = adjust ? adjust(l, *u) : *u;
        auto [slot, fresh] = w.element.try_emplace(l, vec_zero(f.table(), f.dom_dim(l)));
        slot->second = vec_sub(slot->second, adj);
        trace.push_back({l - p, "corrected", l});
    }
    w.residual = f.apply(w.element);
    w.truncated = !level_vector_is_zero(w.residual);
    w.trace = std::move(trace);
    for (const auto& [j, x] : w.residual)
        if (j <= last && !vec_is_zero(x)) throw error("formal extension failed below the cutoff");
    return w;
}

/* Track the surviving q=0 subspace of one level through the pages; used by
   kernel_basis_up_to and page_report.  reps[k] extends leadings[k]. */
struct LevelTracker {
    std::vector<ScalarVec> leadings;
    std::vector<LevelVector> reps;
};

inline LevelTracker track_level(const GradedLinearMap& f, int p, int pages,
                                const CorrectionAdjuster& adjust = nullptr) {
    const bool inc = f.direction() == Direction::INCREASING;
    LevelTracker t;
    if (f.dom_dim(p) == 0) return t;
    SubspaceBasis k0 = nullspace(f.d0_matrix(p));
    for (const auto& v : k0.vectors()) {
        t.leadings.push_back(v);
        t.reps.push_back(LevelVector{{p, v}});
    }
    for (int r = 1; r <= pages && !t.leadings.empty(); ++r) {
        int target = inc ? p - r : p + r;
        if (!f.in_range(target)) break;
        SubspaceBasis denom = denominator_subspace(f, r, target);
        // matrix of reduced d_r values, one column per candidate
        ExactMatrix classes(f.cod_dim(target), static_cast<int>(t.leadings.size()), f.table());
        std::vector<ScalarVec> vals;
        for (std::size_t k = 0; k < t.reps.size(); ++k) {
            ScalarVec val = f.level_component(f.apply(t.reps[k]), target);
            vals.push_back(val);
            ScalarVec red = denom.reduce(val);
            for (int i = 0; i < f.cod_dim(target); ++i) classes.at(i, static_cast<int>(k)) = red[i];
        }
        SubspaceBasis combos = nullspace(classes);
        LevelTracker next;
        for (const auto& lambda : combos.vectors()) {
            ScalarVec lead = vec_zero(f.table(), f.dom_dim(p));
            LevelVector rep;
            for (std::size_t k = 0; k < t.reps.size(); ++k) {
                if (lambda[k].is_zero()) continue;
                lead = vec_add(lead, vec_scale(t.leadings[k], lambda[k]));
                for (const auto& [lvl, comp] : t.reps[k]) {
                    auto [slot, fresh] = rep.try_emplace(lvl, vec_zero(f.table(), f.dom_dim(lvl)));
                    slot->second = vec_add(slot->second, vec_scale(comp, lambda[k]));
                }
            }
            if (vec_is_zero(lead)) continue;
            // correct the surviving representative one level further
            ScalarVec val = f.level_component(f.apply(rep), target);
            if (!vec_is_zero(val)) {
                auto u = detail::correction(f, p, r, target, val);
                if (!u) throw error("correction must exist for a vanishing page class");
                if (adjust)
                    for (auto& [lvl, comp] : *u) comp = adjust(lvl, comp);
                for (const auto& [lvl, comp] : *u) {
                    auto [slot, fresh] = rep.try_emplace(lvl, vec_zero(f.table(), f.dom_dim(lvl)));
                    slot->second = vec_sub(slot->second, comp);
                }
            }
            next.leadings.push_back(std::move(lead));
            next.reps.push_back(std::move(rep));
        }
        t = std::move(next);
    }
    return t;
}

/* All kernel witnesses with leading level <= D (independent leading terms).
   INCREASING: exact witnesses; DECREASING: truncated at level D. */
inline std::vector<KernelWitness> kernel_basis_up_to(const GradedLinearMap& f, int D,
                                                     const CorrectionAdjuster& adjust = nullptr) {
    const bool inc = f.direction() == Direction::INCREASING;
    std::vector<KernelWitness> out;
    for (int p = 0; p <= std::min(D, f.max_level()); ++p) {
        int pages = inc ? p : D - p;
        LevelTracker t = track_level(f, p, pages, adjust);
        for (std::size_t k = 0; k < t.reps.size(); ++k) {
            KernelWitness w;
            w.leading_level = p;
            w.element = t.reps[k];
            w.residual = f.apply(t.reps[k]);
            w.truncated = !level_vector_is_zero(w.residual);
            if (inc && w.truncated) throw error("increasing witness must be exact");
            out.push_back(std::move(w));
        }
    }
    return out;
}

/* Oracle: nullspace of the single assembled matrix of f on levels 0..D. */
inline SubspaceBasis brute_kernel(const GradedLinearMap& f, int D) {
    D = std::min(D, f.max_level());
    detail::BlockSystem b = detail::block_layout(f, 0, D);
    std::vector<ExactMatrix> rows;
    for (int j = 0; j <= D; ++j) rows.push_back(detail::block_row(f, b, j));
    ExactMatrix m = detail::stack_rows(rows, f.table(), b.total_cols);
    return nullspace(m);
}

/* Coordinates of a LevelVector in the stacked 0..D layout of brute_kernel. */
inline ScalarVec stack_coordinates(const GradedLinearMap& f, const LevelVector& v, int D) {
    detail::BlockSystem b = detail::block_layout(f, 0, std::min(D, f.max_level()));
    ScalarVec out = vec_zero(f.table(), b.total_cols);
    for (const auto& [j, x] : v) {
        bool found = false;
        for (std::size_t k = 0; k < b.levels.size(); ++k)
            if (b.levels[k] == j) {
                for (std::size_t c = 0; c < x.size(); ++c) out[b.offsets[k] + c] = x[c];
                found = true;
            }
        if (!found && !vec_is_zero(x)) throw error("level vector escapes the stacked window");
    }
    return out;
}

/* Dimensions and differential targets of one page over a level range. */
struct PageEntry {
    int p;
    int dim_q0;
    int dim_q1;
    int d_target;
};

struct PageReport {
    int r;
    std::vector<PageEntry> entries;
};

inline PageReport page_report(const GradedLinearMap& f, int r, int p_min, int p_max) {
    PageReport rep;
    rep.r = r;
    for (int p = std::max(p_min, 0); p <= std::min(p_max, f.max_level()); ++p) {
        PageEntry e;
        e.p = p;
        e.d_target = f.direction() == Direction::INCREASING ? p - r : p + r;
        if (r == 0) {
            e.dim_q0 = f.dom_dim(p);
            e.dim_q1 = f.cod_dim(p);
        } else {
            LevelTracker t = track_level(f, p, r - 1);
            e.dim_q0 = static_cast<int>(t.leadings.size());
            e.dim_q1 = f.cod_dim(p) - denominator_subspace(f, r, p).dim();
        }
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace specseq

#endif
