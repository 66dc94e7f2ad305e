#ifndef SPECSEQ_HAM_DRIVER_HPP
#define SPECSEQ_HAM_DRIVER_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "specseq/hamiltonian.hpp"
#include "specseq/spectral.hpp"

namespace specseq {

/* ---------------- problem setup ---------------- */

struct HamProblem {
    int n = 2;
    TablePtr table;  // real chart: q_1..q_n, p_1..p_n, parameters, sqrt symbols
    CanonicalChart chart;
    Polynomial H;
    int max_degree = 4;
    std::vector<PolyFraction> seeds;    // quadratic seeds; empty = kernel monomials
    std::string analyze_param = "L";    // "" disables the vanishing analysis
};

/* One numeric or symbolic frequency A_j.  Numeric square roots are split as
   r * sqrt(k) with k squarefree so that rationally dependent roots share one
   symbol. */
struct FrequencySpec {
    std::optional<BigRational> numeric;  // nullopt = indeterminate
    std::string param_name;              // used when indeterminate
};

namespace detail {

inline std::string sqrt_symbol_name(const mpz_class& squarefree) {
    return "sqrt_" + squarefree.get_str();
}

// register whatever symbols sqrt(value) needs on a table under construction
inline void declare_sqrt_symbols(VariableTable& t, const FrequencySpec& f) {
    if (!f.numeric) {
        if (!t.try_index_of("sqrt_" + f.param_name)) {
            t.add_param("sqrt_" + f.param_name);
            t.bind_sqrt("sqrt_" + f.param_name, f.param_name);
        }
        return;
    }
    BigRational v = abs(*f.numeric);
    if (v.is_zero()) throw chart_failure("complex chart needs every A_j nonzero");
    mpz_class radicand = v.numerator() * v.denominator();
    auto [s, k] = squarefree_decompose(radicand);
    if (k == 1) return;  // rational square root
    std::string name = sqrt_symbol_name(k);
    if (!t.try_index_of(name)) {
        t.add_param(name);
        t.bind_sqrt(name, BigRational(k));
    }
}

// sqrt(value) as a Scalar over a prepared table
inline Scalar sqrt_scalar(const TablePtr& t, const FrequencySpec& f) {
    if (!f.numeric) return Scalar(Polynomial::variable(t, "sqrt_" + f.param_name));
    BigRational v = *f.numeric;
    bool negative = v.sign() < 0;
    if (negative) v = -v;
    mpz_class radicand = v.numerator() * v.denominator();
    auto [s, k] = squarefree_decompose(radicand);
    // sqrt(num/den) = sqrt(num*den)/den = (s/den) sqrt(k)
    BigRational rat(mpq_class(s, v.denominator()));
    Polynomial num = k == 1 ? Polynomial::constant(t, GaussianRational(rat))
                            : Polynomial::variable(t, sqrt_symbol_name(k)).scale(rat);
    if (negative) num = num.scale(GaussianRational::i());
    return Scalar(num);
}

}  // namespace detail

/* Standard Henon-Heiles setup: H = 1/2|p|^2 + 1/2(A q1^2 + B q2^2)
   + 1/3 q1^3 + L q1 q2^2.  Each binding is a rational or indeterminate;
   same_AB identifies B with A's parameter. */
struct HenonHeilesConfig {
    std::optional<BigRational> A, B, L;  // nullopt = indeterminate
    bool same_AB = false;
    int max_degree = 4;
};

inline HamProblem make_henon_heiles(const HenonHeilesConfig& cfg) {
    auto t = std::make_shared<VariableTable>();
    t->add_state("q1");
    t->add_state("q2");
    t->add_state("p1");
    t->add_state("p2");
    if (!cfg.A) t->add_param("A");
    if (!cfg.B && !cfg.same_AB) t->add_param("B");
    if (!cfg.L) t->add_param("L");
    FrequencySpec fA{cfg.A, "A"};
    FrequencySpec fB = cfg.same_AB ? fA : FrequencySpec{cfg.B, "B"};
    detail::declare_sqrt_symbols(*t, fA);
    detail::declare_sqrt_symbols(*t, fB);
    TablePtr tp = t;

    auto coeff_poly = [&](const std::optional<BigRational>& v, const char* name,
                          bool alias_A) -> Polynomial {
        if (v) return Polynomial::constant(tp, GaussianRational(*v));
        return Polynomial::variable(tp, alias_A ? "A" : name);
    };
    Polynomial A = coeff_poly(cfg.A, "A", false);
    Polynomial B = cfg.same_AB ? A : coeff_poly(cfg.B, "B", false);
    Polynomial L = coeff_poly(cfg.L, "L", false);
    Polynomial q1 = Polynomial::variable(tp, "q1"), q2 = Polynomial::variable(tp, "q2");
    Polynomial p1 = Polynomial::variable(tp, "p1"), p2 = Polynomial::variable(tp, "p2");
    GaussianRational half(BigRational(1, 2)), third(BigRational(1, 3));
    Polynomial H = (p1 * p1 + p2 * p2).scale(half) + (A * q1 * q1 + B * q2 * q2).scale(half) +
                   (q1 * q1 * q1).scale(third) + L * q1 * q2 * q2;

    HamProblem prob;
    prob.n = 2;
    prob.table = tp;
    prob.chart = CanonicalChart(tp, 2);
    prob.H = H;
    prob.max_degree = cfg.max_degree;
    if (cfg.L) prob.analyze_param = "";
    return prob;
}

/* ---------------- the engine around ad(H) ---------------- */

struct HamEngine {
    HamProblem prob;
    std::shared_ptr<ComplexChart> chart;
    std::shared_ptr<GradedLinearMap> map;
    std::vector<std::vector<Monomial>> level_basis;  // complex monomials per level
    std::map<int, PolyFraction> h_complex;           // graded pieces of H, complex chart
};

namespace detail {

inline ScalarVec ham_coords(const HamEngine& eng, const PolyFraction& p, int level) {
    const auto& basis = eng.level_basis.at(static_cast<std::size_t>(level));
    const TablePtr& ct = eng.chart->complex_table();
    ScalarVec out = vec_zero(ct, static_cast<int>(basis.size()));
    std::map<Monomial, int, GrlexBefore> pos;
    for (std::size_t k = 0; k < basis.size(); ++k) pos[basis[k]] = static_cast<int>(k);
    for (const auto& [core, comp] : core_decompose(p.num())) {
        std::vector<Monomial::Entry> st, pa;
        for (const auto& [v, e] : core.entries())
            (ct->is_state(v) ? st : pa).push_back({v, e});
        auto it = pos.find(Monomial(st));
        if (it == pos.end()) throw error("polynomial is not homogeneous of the expected degree");
        out[it->second] += Scalar(comp * Polynomial(ct, {{Monomial(pa), GaussianRational(1)}}),
                                  p.den());
    }
    return out;
}

inline PolyFraction ham_render_complex(const HamEngine& eng, const LevelVector& lv) {
    const TablePtr& ct = eng.chart->complex_table();
    PolyFraction out = PolyFraction::zero(ct);
    for (const auto& [level, coords] : lv) {
        const auto& basis = eng.level_basis.at(static_cast<std::size_t>(level));
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (!coords[k].is_zero())
                out += coords[k] * PolyFraction(Polynomial(ct, {{basis[k], GaussianRational(1)}}));
    }
    return out;
}

inline PolyFraction ham_render_real(const HamEngine& eng, const LevelVector& lv) {
    return eng.chart->from_complex(ham_render_complex(eng, lv));
}

}  // namespace detail

/* Read the oscillator frequencies A_j off the quadratic part, croaking when
   H_0 is not of the form 1/2|p|^2 + 1/2 sum A_j q_j^2. */
inline std::vector<Scalar> oscillator_frequencies(const HamProblem& prob, const Polynomial& h0) {
    const CanonicalChart& ch = prob.chart;
    std::vector<Scalar> out;
    auto coeffs = h0.state_coefficients();
    auto coeff_of = [&](const Monomial& m) {
        auto it = coeffs.find(m);
        return it == coeffs.end() ? Scalar::zero(prob.table) : Scalar(it->second);
    };
    Scalar half = Scalar::of(prob.table, 1, 2);
    unsigned expected = 0;
    for (int j = 0; j < ch.n; ++j) {
        if (coeff_of(Monomial::var(ch.p_index(j), 2)) != half)
            throw chart_failure("quadratic part must carry 1/2 p_j^2");
        Scalar a = coeff_of(Monomial::var(ch.q_index(j), 2)) + coeff_of(Monomial::var(ch.q_index(j), 2));
        if (a.is_zero()) throw chart_failure("complex chart needs every A_j nonzero");
        out.push_back(a);
        expected += 2;
    }
    if (coeffs.size() != expected)
        throw chart_failure("quadratic part must be a diagonal oscillator");
    return out;
}

inline FrequencySpec classify_frequency(const Scalar& a, const TablePtr& t) {
    if (a.is_constant()) {
        GaussianRational v = a.constant_value();
        if (!v.is_real()) throw chart_failure("frequencies must be real or indeterminate");
        return FrequencySpec{v.re(), ""};
    }
    if (a.den_is_one() && a.num().term_count() == 1) {
        const auto& [m, c] = a.num().leading_term();
        if (m.entries().size() == 1 && m.entries()[0].second == 1 && c.is_one())
            return FrequencySpec{std::nullopt, t->name(m.entries()[0].first)};
    }
    throw chart_failure("frequencies must be rationals or plain parameters");
}

inline HamEngine make_ham_engine(const HamProblem& prob) {
    if (prob.max_degree < 2) throw error("degree bound must be at least 2");
    HamEngine eng;
    eng.prob = prob;

    std::map<unsigned, Polynomial> parts = prob.H.homogeneous_components();
    if (parts.count(0) || parts.count(1))
        throw error("Hamiltonians here start with quadratic terms");
    Polynomial h0 = parts.count(2) ? parts.at(2) : Polynomial(prob.table);
    std::vector<Scalar> freqs = oscillator_frequencies(prob, h0);

    // complex table mirrors the parameters (and sqrt bindings) of the real one
    auto ct = std::make_shared<VariableTable>();
    for (int j = 0; j < prob.n; ++j) ct->add_state("z" + std::to_string(j + 1));
    for (int j = 0; j < prob.n; ++j) ct->add_state("zb" + std::to_string(j + 1));
    for (int v = 0; v < prob.table->size(); ++v) {
        if (prob.table->is_state(v)) continue;
        ct->add_param(prob.table->name(v));
    }
    for (int v = 0; v < prob.table->size(); ++v) {
        const auto* b = prob.table->binding(v);
        if (!b) continue;
        if (b->is_param())
            ct->bind_sqrt(prob.table->name(v), prob.table->name(b->radicand_param));
        else
            ct->bind_sqrt(prob.table->name(v), b->radicand_rational);
    }

    std::vector<Scalar> sqrts;
    for (int j = 0; j < prob.n; ++j)
        sqrts.push_back(detail::sqrt_scalar(prob.table, classify_frequency(freqs[j], prob.table)));
    eng.chart = std::make_shared<ComplexChart>(prob.chart, ct, sqrts);

    // sanity: the chart diagonalizes H_0
    {
        PolyFraction h0c = eng.chart->to_complex(h0);
        PolyFraction expect = PolyFraction::zero(ct);
        for (int j = 0; j < prob.n; ++j)
            expect += PolyFraction(Polynomial::variable(ct, eng.chart->z_index(j)) *
                                   Polynomial::variable(ct, eng.chart->zb_index(j)))
                          .scale(GaussianRational(BigRational(1, 2)));
        if (h0c != expect) throw chart_failure("chart failed to diagonalize H_0");
    }

    int max_level = prob.max_degree - 1;
    std::vector<LevelBasis> levels;
    for (int l = 0; l <= max_level; ++l) {
        eng.level_basis.push_back(monomial_basis(ct, static_cast<unsigned>(l) + 2));
        LevelBasis b;
        for (const auto& m : eng.level_basis.back())
            b.labels.push_back(Polynomial(ct, {{m, GaussianRational(1)}}).str());
        levels.push_back(std::move(b));
    }
    eng.map = std::make_shared<GradedLinearMap>(Direction::DECREASING, ct, levels, levels);

    // shift 0: the diagonal action i[m]
    for (int l = 0; l <= max_level; ++l) {
        const auto& basis = eng.level_basis[static_cast<std::size_t>(l)];
        ExactMatrix d(static_cast<int>(basis.size()), static_cast<int>(basis.size()), ct);
        for (std::size_t k = 0; k < basis.size(); ++k)
            d.at(static_cast<int>(k), static_cast<int>(k)) =
                Scalar::of(ct, GaussianRational::i()) * eng.chart->weight(basis[k]);
        eng.map->set_component(0, l, d);
    }
    // higher pieces of H act by the complex Poisson bracket
    for (const auto& [deg, piece] : parts) {
        if (deg <= 2) continue;
        int t = static_cast<int>(deg) - 2;
        PolyFraction pc = eng.chart->to_complex(piece);
        eng.h_complex.emplace(t, pc);
        for (int l = 0; l + t <= max_level; ++l) {
            const auto& dom = eng.level_basis[static_cast<std::size_t>(l)];
            ExactMatrix m(static_cast<int>(eng.level_basis[static_cast<std::size_t>(l + t)].size()),
                          static_cast<int>(dom.size()), ct);
            for (std::size_t k = 0; k < dom.size(); ++k) {
                PolyFraction img = eng.chart->poisson(
                    pc, PolyFraction(Polynomial(ct, {{dom[k], GaussianRational(1)}})));
                ScalarVec coords = detail::ham_coords(eng, img, l + t);
                for (std::size_t r = 0; r < coords.size(); ++r)
                    m.at(static_cast<int>(r), static_cast<int>(k)) = coords[r];
            }
            eng.map->set_component(t, l, m);
        }
    }
    return eng;
}

/* ---------------- the search itself ---------------- */

struct HamSeedOutcome {
    PolyFraction seed;                         // real chart
    PolyFraction d1_value;                     // {H, K_0}, the first differential
    std::map<int, PolyFraction> corrections;   // level -> added correction (real)
    PolyFraction witness;                      // seed + corrections (real)
    bool exact = false;
    std::optional<PolyFraction> residual;      // final obstruction polynomial (real)
    std::optional<int> obstructed_page;        // page obstruction before the bound
    std::optional<PolyFraction> obstruction_class;  // reduced representative (real)
    std::vector<TraceStep> trace;
    std::vector<BigRational> vanishing;        // confirmed roots of the analyze parameter
    std::vector<std::pair<BigRational, PolyFraction>> specialized_integrals;
};

struct HamSearchReport {
    int e1_dim = 0;                       // dim ker ad(H_0) on quadratics
    std::vector<std::string> e1_basis;    // real forms of the kernel monomials
    std::vector<HamSeedOutcome> seeds;
};

/* {H,K} with the bracket convention {H,K} = <J H_x, K_x>. */
inline std::pair<bool, PolyFraction> ham_verify(const Polynomial& h, const PolyFraction& k,
                                                const CanonicalChart& chart) {
    PolyFraction cert = poisson_bracket(PolyFraction(h), k, chart);
    return {cert.is_zero(), cert};
}

namespace detail {

/* The q=0-kernel adjustment: perturb a correction by weight-zero monomials
   so the designated pure-momentum coefficients of its real form vanish
   (Example 3.14 subtracts exactly such an m_2). */
inline ScalarVec kernel_cancel(const HamEngine& eng, int level, const ScalarVec& u) {
    const auto& basis = eng.level_basis.at(static_cast<std::size_t>(level));
    const TablePtr& ct = eng.chart->complex_table();
    std::vector<int> kernel_idx;
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (eng.chart->weight(basis[k]).is_zero()) kernel_idx.push_back(static_cast<int>(k));
    if (kernel_idx.empty()) return u;

    const CanonicalChart& rc = eng.prob.chart;
    std::map<int, Polynomial> kill_q;
    for (int j = 0; j < rc.n; ++j) kill_q[rc.q_index(j)] = Polynomial(rc.table);
    for (int j = 0; j < rc.n; ++j)
        kill_q[rc.p_index(j)] = Polynomial::variable(rc.table, rc.p_index(j));

    std::vector<Monomial> designated;
    std::vector<PolyFraction> kernel_real;
    for (int idx : kernel_idx) {
        PolyFraction r = eng.chart->from_complex(
            PolyFraction(Polynomial(ct, {{basis[idx], GaussianRational(1)}})));
        kernel_real.push_back(r);
        Polynomial momentum = r.num().substitute(kill_q, rc.table);
        if (momentum.is_zero()) throw error("kernel monomial lost its momentum part");
        designated.push_back(momentum.leading_term().first);
    }
    // coefficients of the designated monomials in real(u + sum c_k mu_k) -> 0
    PolyFraction u_real =
        eng.chart->from_complex(ham_render_complex(eng, LevelVector{{level, u}}));
    auto coeff_in = [&](const PolyFraction& p, const Monomial& m) {
        auto cs = p.num().state_coefficients();
        auto it = cs.find(m);
        Scalar s = it == cs.end() ? Scalar::zero(rc.table) : Scalar(it->second);
        return s * Scalar(p.den()).inverse();
    };
    int k = static_cast<int>(kernel_idx.size());
    ExactMatrix sys(k, k, rc.table);
    ScalarVec rhs = vec_zero(rc.table, k);
    for (int r = 0; r < k; ++r) {
        rhs[r] = -coeff_in(u_real, designated[r]);
        for (int c = 0; c < k; ++c) sys.at(r, c) = coeff_in(kernel_real[c], designated[r]);
    }
    auto sol = solve_affine(sys, rhs);
    if (!sol) return u;
    ScalarVec out = u;
    for (int c = 0; c < k; ++c) {
        // the solution lives over the real table; transport it by name
        Scalar coeff((*sol)[c].num().substitute(std::map<int, Polynomial>{}, ct),
                     (*sol)[c].den().substitute(std::map<int, Polynomial>{}, ct));
        out[kernel_idx[c]] += coeff;
    }
    return out;
}

inline Polynomial specialize_poly(const Polynomial& p, int var, const BigRational& v) {
    return p.substitute_params({{var, v}});
}

}  // namespace detail

std::vector<BigRational> rational_vanishing_conditions(const PolyFraction& poly, int param);

inline HamSeedOutcome run_ham_seed(const HamEngine& eng, const PolyFraction& seed,
                                   bool analyze);

/* The full search: extend every seed through the pages up to the degree
   bound, reporting corrections, obstructions and (for an indeterminate
   coupling) the rational parameter values that let the extension close. */
inline HamSearchReport ham_search(const HamProblem& prob) {
    HamEngine eng = make_ham_engine(prob);
    HamSearchReport report;
    SubspaceBasis k0 = nullspace(eng.map->d0_matrix(0));
    report.e1_dim = k0.dim();
    const TablePtr& ct = eng.chart->complex_table();
    for (std::size_t k = 0; k < eng.level_basis[0].size(); ++k)
        if (eng.chart->weight(eng.level_basis[0][k]).is_zero())
            report.e1_basis.push_back(
                eng.chart
                    ->from_complex(
                        PolyFraction(Polynomial(ct, {{eng.level_basis[0][k], GaussianRational(1)}})))
                    .str());

    std::vector<PolyFraction> seeds = prob.seeds;
    if (seeds.empty()) {
        for (std::size_t k = 0; k < eng.level_basis[0].size(); ++k)
            if (eng.chart->weight(eng.level_basis[0][k]).is_zero())
                seeds.push_back(eng.chart->from_complex(
                    PolyFraction(Polynomial(ct, {{eng.level_basis[0][k], GaussianRational(1)}}))));
    }
    for (const auto& s : seeds)
        report.seeds.push_back(run_ham_seed(eng, s, !prob.analyze_param.empty()));
    return report;
}

inline HamSeedOutcome run_ham_seed(const HamEngine& eng, const PolyFraction& seed,
                                   bool analyze) {
    const HamProblem& prob = eng.prob;
    HamSeedOutcome out;
    out.seed = seed;
    {
        PolyFraction d1 = poisson_bracket(PolyFraction(prob.H), seed, prob.chart);
        out.d1_value = PolyFraction(d1.num().state_homogeneous_part(3), d1.den());
    }

    PolyFraction seed_c = eng.chart->to_complex(seed);
    ScalarVec lead = detail::ham_coords(eng, seed_c, 0);
    CorrectionAdjuster adjust = [&eng](int level, const ScalarVec& u) {
        return detail::kernel_cancel(eng, level, u);
    };
    ExtendResult res = extend_to_kernel(*eng.map, 0, lead, prob.max_degree - 2, adjust);

    if (std::holds_alternative<Obstruction>(res)) {
        Obstruction ob = std::get<Obstruction>(std::move(res));
        out.obstructed_page = ob.page;
        out.obstruction_class =
            detail::ham_render_real(eng, LevelVector{{ob.level, ob.reduced}});
        out.trace = ob.trace;
        if (analyze) {
            auto p = prob.table->try_index_of(prob.analyze_param);
            if (p) out.vanishing = rational_vanishing_conditions(*out.obstruction_class, *p);
        }
    } else {
        KernelWitness w = std::get<KernelWitness>(std::move(res));
        out.trace = w.trace;
        for (const auto& [lvl, coords] : w.element) {
            if (lvl == 0) continue;
            out.corrections.emplace(
                lvl, detail::ham_render_real(eng, LevelVector{{lvl, coords}}));
        }
        out.witness = detail::ham_render_real(eng, w.element);
        if (level_vector_is_zero(w.residual)) {
            out.exact = true;
            auto [ok, cert] = ham_verify(prob.H, out.witness, prob.chart);
            if (!ok) throw error("exact witness failed the bracket verification");
        } else {
            out.residual = detail::ham_render_real(eng, w.residual);
            if (analyze) {
                auto p = prob.table->try_index_of(prob.analyze_param);
                if (p) out.vanishing = rational_vanishing_conditions(*out.residual, *p);
            }
        }
    }
    // confirm each vanishing condition by rerunning the specialized problem
    if (!out.vanishing.empty()) {
        auto p = prob.table->index_of(prob.analyze_param);
        for (const BigRational& root : out.vanishing) {
            HamProblem sp = prob;
            sp.H = detail::specialize_poly(prob.H, p, root);
            sp.seeds = {seed.substitute_params({{p, root}})};
            sp.analyze_param = "";
            HamSearchReport rerun = ham_search(sp);
            if (rerun.seeds.size() == 1 && rerun.seeds[0].exact)
                out.specialized_integrals.push_back({root, rerun.seeds[0].witness});
        }
    }
    return out;
}

/* Common rational roots (in the given parameter) of every coefficient of a
   parametric polynomial; candidates come from the gcd of the coefficient
   numerators and each one is confirmed by exact substitution. */
inline std::vector<BigRational> rational_vanishing_conditions(const PolyFraction& poly,
                                                              int param) {
    if (poly.is_zero()) return {};
    const TablePtr& t = poly.table();
    Polynomial g(t);
    for (const auto& [core, comp] : detail::core_decompose(poly.num())) {
        g = poly_gcd(g, comp);
        if (g.is_constant()) break;
    }
    std::vector<BigRational> candidates;
    if (!g.is_constant()) {
        // specialize the other parameters at fixed primes, then read off the
        // rational roots of the resulting univariate polynomial
        const long primes[] = {7, 13, 5, 11, 3};
        for (int attempt = 0; attempt < 2 && candidates.empty(); ++attempt) {
            std::map<int, BigRational> fix;
            int used = attempt ? 1 : 0;
            for (const auto& [m, c] : g.terms())
                for (const auto& [v, e] : m.entries())
                    if (v != param && !fix.count(v))
                        fix[v] = BigRational(primes[(used++) % 5]);
            Polynomial uni = g.substitute_params(fix);
            unsigned deg = 0;
            for (const auto& [m, c] : uni.terms()) deg = std::max(deg, m.exponent(param));
            if (deg == 0) continue;
            std::vector<GaussianRational> asc(deg + 1, GaussianRational());
            for (const auto& [m, c] : uni.terms()) asc[m.exponent(param)] += c;
            for (const auto& r : gaussian_roots(asc, /*require_all=*/false))
                if (r.is_real()) candidates.push_back(r.re());
        }
    }
    std::vector<BigRational> confirmed;
    for (const auto& c : candidates) {
        bool dup = false;
        for (const auto& x : confirmed) dup = dup || x == c;
        if (dup) continue;
        if (poly.substitute_params({{param, c}}).is_zero()) confirmed.push_back(c);
    }
    std::sort(confirmed.begin(), confirmed.end());
    return confirmed;
}

}  // namespace specseq

#endif
