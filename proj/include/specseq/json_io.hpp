#ifndef SPECSEQ_JSON_IO_HPP
#define SPECSEQ_JSON_IO_HPP

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "specseq/drivers.hpp"
#include "specseq/ham_driver.hpp"
#include "specseq/parser.hpp"

namespace specseq {

using Json = nlohmann::ordered_json;

/* ---------------- result serialization ---------------- */

inline Json trace_json(const std::vector<TraceStep>& trace) {
    Json out = Json::array();
    for (const auto& t : trace)
        out.push_back(Json{{"page", t.page}, {"action", t.action}, {"level", t.level}});
    return out;
}

inline Json witness_json(const GradedLinearMap& f, const KernelWitness& w) {
    Json comps = Json::array();
    for (const auto& [lvl, coords] : w.element) {
        Json entries = Json::array();
        for (std::size_t k = 0; k < coords.size(); ++k)
            if (!coords[k].is_zero())
                entries.push_back(Json{{"basis", f.dom(lvl).labels[k]}, {"coeff", coords[k].str()}});
        comps.push_back(Json{{"level", lvl}, {"vector", entries}});
    }
    Json residual = Json::array();
    for (const auto& [lvl, coords] : w.residual) {
        Json entries = Json::array();
        for (std::size_t k = 0; k < coords.size(); ++k)
            if (!coords[k].is_zero())
                entries.push_back(Json{{"basis", f.cod(lvl).labels[k]}, {"coeff", coords[k].str()}});
        if (!entries.empty()) residual.push_back(Json{{"level", lvl}, {"vector", entries}});
    }
    return Json{{"leading_level", w.leading_level},
                {"components", comps},
                {"residual", residual},
                {"truncated", w.truncated},
                {"trace", trace_json(w.trace)}};
}

inline Json vf_result_json(const GradedLinearMap& f, const std::vector<VfWitness>& ws,
                           VfMode mode) {
    Json arr = Json::array();
    for (const auto& w : ws) {
        Json comps = Json::array();
        for (const auto& c : w.components) comps.push_back(c.str());
        arr.push_back(Json{{"field", comps}, {"witness", witness_json(f, w.raw)}});
    }
    return Json{{"kind", "vf"},
                {"mode", mode == VfMode::TOP ? "top" : "bottom"},
                {"centralizers", arr}};
}

inline Json ode_result_json(const OdeResult& r) {
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back(s.str());
    Json table = Json::array();
    for (const auto& row : r.table)
        table.push_back(Json{{"monomial", row.monomial},
                             {"grade_level", row.grade_level},
                             {"image", row.image},
                             {"filtration_level", row.filtration_level}});
    return Json{{"kind", "ode"}, {"shift", r.shift}, {"solutions", sols}, {"table", table}};
}

inline Json matrix_result_json(const MatrixWitness& w) {
    Json rows = Json::array();
    for (const auto& row : w.centralizer) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(e.str());
        rows.push_back(r);
    }
    return Json{{"kind", "matrix"}, {"centralizer", rows}, {"unique", w.unique}};
}

inline Json ham_result_json(const HamSearchReport& rep) {
    Json seeds = Json::array();
    for (const auto& s : rep.seeds) {
        Json corr = Json::array();
        for (const auto& [lvl, c] : s.corrections)
            corr.push_back(Json{{"level", lvl}, {"polynomial", c.str()}});
        Json j{{"seed", s.seed.str()},
               {"d1", s.d1_value.str()},
               {"corrections", corr},
               {"witness", s.witness.str()},
               {"exact", s.exact}};
        if (s.residual) j["obstruction"] = s.residual->str();
        if (s.obstructed_page) j["obstructed_page"] = *s.obstructed_page;
        if (s.obstruction_class) j["obstruction_class"] = s.obstruction_class->str();
        Json vanish = Json::array();
        for (const auto& v : s.vanishing) vanish.push_back(v.str());
        j["vanishing"] = vanish;
        Json ints = Json::array();
        for (const auto& [root, k] : s.specialized_integrals)
            ints.push_back(Json{{"value", root.str()}, {"integral", k.str()}});
        j["specialized_integrals"] = ints;
        j["trace"] = trace_json(s.trace);
        seeds.push_back(std::move(j));
    }
    Json basis = Json::array();
    for (const auto& b : rep.e1_basis) basis.push_back(b);
    return Json{{"kind", "ham"}, {"e1_dim", rep.e1_dim}, {"e1_basis", basis}, {"seeds", seeds}};
}

inline Json page_report_json(const PageReport& rep) {
    Json entries = Json::array();
    for (const auto& e : rep.entries)
        entries.push_back(Json{{"p", e.p},
                               {"dim_q0", e.dim_q0},
                               {"dim_q1", e.dim_q1},
                               {"d_target", e.d_target}});
    return Json{{"kind", "pages"}, {"r", rep.r}, {"entries", entries}};
}

/* ---------------- problem files ---------------- */

struct LoadedProblem {
    std::string kind;
    std::optional<VfProblem> vf;
    std::optional<OdeProblem> ode;
    std::optional<MatrixProblem> matrix;
    std::optional<HamProblem> ham;
    std::optional<PolyFraction> ham_candidate;  // for `verify`
};

inline std::optional<BigRational> parse_binding(const Json& j, const std::string& key,
                                                bool* same_as_A = nullptr) {
    if (same_as_A) *same_as_A = false;
    if (!j.contains(key)) return std::nullopt;
    std::string v = j.at(key).get<std::string>();
    if (v == "indeterminate") return std::nullopt;
    if (v == "=A") {
        if (!same_as_A) throw error("'=A' is only meaningful for B");
        *same_as_A = true;
        return std::nullopt;
    }
    return BigRational::from_string(v);
}

/* Build a ham problem around a custom Hamiltonian: parse once to read the
   oscillator frequencies, then rebuild the table with the square-root
   symbols those frequencies need. */
inline HamProblem make_custom_ham(int n, const std::string& h_text,
                                  const std::vector<std::pair<std::string, std::optional<BigRational>>>& params,
                                  int max_degree, const std::vector<std::string>& seeds,
                                  const std::string& analyze) {
    auto add_states = [&](VariableTable& t) {
        for (int j = 1; j <= n; ++j) t.add_state("q" + std::to_string(j));
        for (int j = 1; j <= n; ++j) t.add_state("p" + std::to_string(j));
    };
    auto first = std::make_shared<VariableTable>();
    add_states(*first);
    for (const auto& [name, val] : params) first->add_param(name);
    TablePtr t1 = first;
    std::map<int, BigRational> numeric;
    for (const auto& [name, val] : params)
        if (val) numeric[t1->index_of(name)] = *val;
    Polynomial h1 = parse_polynomial(h_text, t1).substitute_params(numeric);

    CanonicalChart chart1(t1, n);
    HamProblem tmp;
    tmp.n = n;
    tmp.table = t1;
    tmp.chart = chart1;
    std::vector<Scalar> freqs =
        oscillator_frequencies(tmp, h1.state_homogeneous_part(2));

    auto final_t = std::make_shared<VariableTable>();
    add_states(*final_t);
    for (const auto& [name, val] : params)
        if (!val) final_t->add_param(name);
    for (const auto& f : freqs)
        detail::declare_sqrt_symbols(*final_t, classify_frequency(f, t1));
    TablePtr t2 = final_t;

    std::map<int, Polynomial> state_images;
    for (int idx : t1->state_indices())
        state_images[idx] = Polynomial::variable(t2, t1->name(idx));

    HamProblem prob;
    prob.n = n;
    prob.table = t2;
    prob.chart = CanonicalChart(t2, n);
    prob.H = h1.substitute(state_images, t2);
    prob.max_degree = max_degree;
    for (const auto& s : seeds)
        prob.seeds.push_back(PolyFraction(parse_polynomial(s, t2).substitute_params({})));
    prob.analyze_param = analyze;
    return prob;
}

inline LoadedProblem load_problem(const Json& j) {
    LoadedProblem out;
    out.kind = j.at("kind").get<std::string>();
    if (out.kind == "vf") {
        auto t = std::make_shared<VariableTable>();
        for (const auto& v : j.at("variables")) t->add_state(v.get<std::string>());
        TablePtr tp = t;
        std::vector<Polynomial> comps;
        for (const auto& c : j.at("field")) comps.push_back(parse_polynomial(c.get<std::string>(), tp));
        VfProblem p;
        p.table = tp;
        p.field = grade_decompose(PolyVectorField(tp, comps));
        p.mode = j.value("mode", std::string("bottom")) == "top" ? VfMode::TOP : VfMode::BOTTOM;
        p.bound = j.value("bound", 6);
        out.vf = std::move(p);
    } else if (out.kind == "ode") {
        auto t = std::make_shared<VariableTable>();
        t->add_state("x");
        TablePtr tp = t;
        OdeProblem p;
        p.table = tp;
        for (const auto& c : j.at("coefficients"))
            p.coeffs.push_back(parse_polynomial(c.get<std::string>(), tp));
        p.max_degree = j.value("max_degree", 10);
        out.ode = std::move(p);
    } else if (out.kind == "matrix") {
        MatrixProblem p;
        p.n = j.at("n").get<int>();
        for (const auto& row : j.at("matrix")) {
            std::vector<GaussianRational> r;
            for (const auto& e : row)
                r.push_back(GaussianRational(BigRational::from_string(e.get<std::string>())));
            p.m.push_back(std::move(r));
        }
        for (const auto& e : j.at("diagonal"))
            p.diagonal.push_back(GaussianRational(BigRational::from_string(e.get<std::string>())));
        out.matrix = std::move(p);
    } else if (out.kind == "ham" || out.kind == "verify") {
        HamProblem prob;
        if (j.contains("H")) {
            std::vector<std::pair<std::string, std::optional<BigRational>>> params;
            if (j.contains("parameters"))
                for (const auto& p : j.at("parameters")) {
                    std::string name = p.at("name").get<std::string>();
                    std::optional<BigRational> val;
                    std::string v = p.value("value", std::string("indeterminate"));
                    if (v != "indeterminate") val = BigRational::from_string(v);
                    params.push_back({name, val});
                }
            std::vector<std::string> seeds;
            if (j.contains("seeds"))
                for (const auto& s : j.at("seeds")) seeds.push_back(s.get<std::string>());
            prob = make_custom_ham(j.value("n", 2), j.at("H").get<std::string>(), params,
                                   j.value("max_degree", 4), seeds,
                                   j.value("analyze", std::string("L")));
        } else {
            HenonHeilesConfig cfg;
            cfg.A = parse_binding(j, "A");
            bool same = false;
            cfg.B = parse_binding(j, "B", &same);
            cfg.same_AB = same;
            cfg.L = parse_binding(j, "L");
            cfg.max_degree = j.value("max_degree", 4);
            prob = make_henon_heiles(cfg);
            if (j.contains("seeds"))
                for (const auto& s : j.at("seeds"))
                    prob.seeds.push_back(
                        PolyFraction(parse_polynomial(s.get<std::string>(), prob.table)));
        }
        if (j.contains("candidate"))
            out.ham_candidate =
                PolyFraction(parse_polynomial(j.at("candidate").get<std::string>(), prob.table));
        out.ham = std::move(prob);
    } else {
        throw error("unknown problem kind: " + out.kind);
    }
    return out;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

}  // namespace specseq

#endif
