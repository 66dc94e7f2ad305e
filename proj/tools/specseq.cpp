#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "specseq/json_io.hpp"

using namespace specseq;

namespace {

struct OutputOptions {
    std::string path;    // empty = stdout
    std::string format;  // "json" | "text"
};

void write_out(const OutputOptions& opt, const std::string& text) {
    if (opt.path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(opt.path);
    if (!out) throw error("cannot write " + opt.path);
    out << text << "\n";
}

std::string ode_text(const OdeResult& r) {
    std::ostringstream os;
    os << "shift: " << r.shift << "\n";
    os << "polynomial solutions (" << r.solutions.size() << "):\n";
    for (const auto& s : r.solutions) os << "  " << s.str() << "\n";
    os << "monomial | grade level | f of monomial | filtration level\n";
    for (const auto& row : r.table)
        os << row.monomial << " | " << row.grade_level << " | " << row.image << " | "
           << row.filtration_level << "\n";
    return os.str();
}

std::string ham_text(const HamSearchReport& rep) {
    std::ostringstream os;
    os << "dim E_1^{0,0} = " << rep.e1_dim << "\n";
    for (const auto& b : rep.e1_basis) os << "  generator: " << b << "\n";
    for (const auto& s : rep.seeds) {
        os << "seed K_0 = " << s.seed.str() << "\n";
        os << "  d_1(K_0) = " << s.d1_value.str() << "\n";
        for (const auto& [lvl, c] : s.corrections)
            os << "  K_" << lvl << " = " << c.str() << "\n";
        if (s.exact) {
            os << "  integral: " << s.witness.str() << "\n";
        } else if (s.obstructed_page) {
            os << "  obstructed at page " << *s.obstructed_page << ": "
               << s.obstruction_class->str() << "\n";
        } else if (s.residual) {
            os << "  obstruction: " << s.residual->str() << "\n";
        }
        if (!s.vanishing.empty()) {
            os << "  vanishing conditions:";
            for (const auto& v : s.vanishing) os << " " << v.str();
            os << "\n";
        }
        for (const auto& [root, k] : s.specialized_integrals)
            os << "  at " << root.str() << ": " << k.str() << "\n";
    }
    return os.str();
}

std::string pages_text(const PageReport& rep) {
    std::ostringstream os;
    os << "page r = " << rep.r << "\n";
    os << "p | dim E^{p,0} | dim E^{p,1} | d_r target\n";
    for (const auto& e : rep.entries)
        os << e.p << " | " << e.dim_q0 << " | " << e.dim_q1 << " | " << e.d_target << "\n";
    return os.str();
}

std::string matrix_text(const MatrixWitness& w) {
    std::ostringstream os;
    os << "centralizer (unique: " << (w.unique ? "yes" : "no") << "):\n";
    for (const auto& row : w.centralizer) {
        os << "  [";
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? ", " : "") << row[j].str();
        os << "]\n";
    }
    return os.str();
}

std::string vf_text(const std::vector<VfWitness>& ws) {
    std::ostringstream os;
    os << "centralizers (" << ws.size() << "):\n";
    for (const auto& w : ws) {
        os << "  [";
        for (std::size_t i = 0; i < w.components.size(); ++i)
            os << (i ? ", " : "") << w.components[i].str();
        os << "]" << (w.raw.truncated ? "  (truncated)" : "") << "\n";
    }
    return os.str();
}

int emit(const OutputOptions& opt, const Json& j, const std::string& text) {
    write_out(opt, opt.format == "text" ? text : j.dump(2));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"specseq: kernels of filtered graded linear maps via spectral sequences"};
    app.require_subcommand(1);

    std::string input, output, format = "json";
    std::string a_bind, b_bind, l_bind, mode = "top";
    int max_degree = -1, order = -1, page_r = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "problem file (JSON)");
        cmd->add_option("--output", output, "output path (default stdout)");
        cmd->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* vf = app.add_subcommand("vf", "centralizers of a polynomial vector field");
    add_common(vf);
    vf->add_option("--mode", mode, "bottom|top")->check(CLI::IsMember({"bottom", "top"}));
    vf->add_option("--max-degree", max_degree, "degree bound (top mode)");
    vf->add_option("--order", order, "truncation order (bottom mode)");

    CLI::App* ham = app.add_subcommand("ham", "first integrals of a polynomial Hamiltonian");
    add_common(ham);
    ham->add_option("--A", a_bind, "rational | indeterminate");
    ham->add_option("--B", b_bind, "rational | indeterminate | =A");
    ham->add_option("--L", l_bind, "rational | indeterminate");
    ham->add_option("--max-degree", max_degree, "integral degree bound");

    CLI::App* ode = app.add_subcommand("ode", "polynomial solutions of a linear ODE");
    add_common(ode);
    ode->add_option("--max-degree", max_degree, "solution degree bound");

    CLI::App* mat = app.add_subcommand("matrix", "centralizer of an upper-triangular matrix");
    add_common(mat);

    CLI::App* pages = app.add_subcommand("pages", "dump one page of the spectral sequence");
    add_common(pages);
    pages->add_option("--page", page_r, "page index r");

    CLI::App* verify = app.add_subcommand("verify", "check {H,K} = 0 for a candidate integral");
    add_common(verify);
    verify->add_option("--A", a_bind, "rational | indeterminate");
    verify->add_option("--B", b_bind, "rational | indeterminate | =A");
    verify->add_option("--L", l_bind, "rational | indeterminate");

    CLI11_PARSE(app, argc, argv);
    OutputOptions opt{output, format};

    try {
        Json pj;
        if (!input.empty()) pj = read_json_file(input);

        auto ham_problem_from_flags = [&]() {
            if (!pj.is_null()) {
                if (!a_bind.empty()) pj["A"] = a_bind;
                if (!b_bind.empty()) pj["B"] = b_bind;
                if (!l_bind.empty()) pj["L"] = l_bind;
            } else {
                pj = Json{{"kind", "ham"}};
                pj["A"] = a_bind.empty() ? "indeterminate" : a_bind;
                pj["B"] = b_bind.empty() ? "indeterminate" : b_bind;
                pj["L"] = l_bind.empty() ? "indeterminate" : l_bind;
            }
            if (max_degree > 0) pj["max_degree"] = max_degree;
            return load_problem(pj);
        };

        if (app.got_subcommand(vf)) {
            if (pj.is_null()) throw error("vf needs --input");
            LoadedProblem lp = load_problem(pj);
            VfProblem& prob = *lp.vf;
            if (vf->count("--mode")) prob.mode = mode == "top" ? VfMode::TOP : VfMode::BOTTOM;
            if (max_degree > 0 && prob.mode == VfMode::TOP) prob.bound = max_degree;
            if (order > 0 && prob.mode == VfMode::BOTTOM) prob.bound = order;
            std::vector<VfWitness> ws = prob.mode == VfMode::TOP ? vf_top_centralizers(prob)
                                                                 : vf_bottom_centralizers(prob);
            GradedLinearMap f = prob.mode == VfMode::TOP
                                    ? build_vf_top_map(prob.table,
                                                       normalize_top_field(prob.table, prob.field),
                                                       prob.bound - 1 + prob.field.top_level())
                                    : build_vf_bottom_map(prob.table, prob.field, prob.bound);
            emit(opt, vf_result_json(f, ws, prob.mode), vf_text(ws));
            return ws.empty() ? 2 : 0;
        }
        if (app.got_subcommand(ode)) {
            if (pj.is_null()) throw error("ode needs --input");
            LoadedProblem lp = load_problem(pj);
            if (max_degree > 0) lp.ode->max_degree = max_degree;
            OdeResult r = ode_poly_solutions(*lp.ode);
            emit(opt, ode_result_json(r), ode_text(r));
            return r.solutions.empty() ? 2 : 0;
        }
        if (app.got_subcommand(mat)) {
            if (pj.is_null()) throw error("matrix needs --input");
            LoadedProblem lp = load_problem(pj);
            MatrixWitness w = matrix_centralizer(*lp.matrix);
            emit(opt, matrix_result_json(w), matrix_text(w));
            return 0;
        }
        if (app.got_subcommand(ham)) {
            LoadedProblem lp = ham_problem_from_flags();
            HamSearchReport rep = ham_search(*lp.ham);
            emit(opt, ham_result_json(rep), ham_text(rep));
            bool any = false;
            for (const auto& s : rep.seeds)
                any = any || s.exact || !s.specialized_integrals.empty();
            return any ? 0 : 2;
        }
        if (app.got_subcommand(pages)) {
            if (pj.is_null()) throw error("pages needs --input");
            LoadedProblem lp = load_problem(pj);
            PageReport rep;
            if (lp.vf) {
                VfProblem& prob = *lp.vf;
                if (prob.mode == VfMode::TOP) {
                    GradedVF norm = normalize_top_field(prob.table, prob.field);
                    GradedLinearMap f = build_vf_top_map(prob.table, norm,
                                                         prob.bound - 1 + norm.top_level());
                    rep = page_report(f, page_r, 0, f.max_level());
                } else {
                    GradedLinearMap f = build_vf_bottom_map(prob.table, prob.field, prob.bound);
                    rep = page_report(f, page_r, 0, f.max_level());
                }
            } else if (lp.ode) {
                GradedLinearMap f = build_ode_map(*lp.ode);
                rep = page_report(f, page_r, 0, f.max_level());
            } else if (lp.matrix) {
                GradedLinearMap f = build_matrix_map(*lp.matrix);
                rep = page_report(f, page_r, 0, f.max_level());
            } else if (lp.ham) {
                HamEngine eng = make_ham_engine(*lp.ham);
                rep = page_report(*eng.map, page_r, 0, eng.map->max_level());
            }
            emit(opt, page_report_json(rep), pages_text(rep));
            return 0;
        }
        if (app.got_subcommand(verify)) {
            LoadedProblem lp = ham_problem_from_flags();
            if (!lp.ham_candidate) throw error("verify needs a \"candidate\" in the problem file");
            auto [ok, cert] = ham_verify(lp.ham->H, *lp.ham_candidate, lp.ham->chart);
            Json j{{"kind", "verify"}, {"commutes", ok}, {"certificate", cert.str()}};
            emit(opt, j, std::string(ok ? "commutes" : "does not commute") +
                             "\ncertificate: " + cert.str());
            return ok ? 0 : 2;
        }
    } catch (const CLI::ParseError& e) {
        throw;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
