#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "ncho/confluence.hpp"
#include "ncho/connection.hpp"
#include "ncho/fuchsian.hpp"
#include "ncho/heun.hpp"
#include "ncho/modes.hpp"
#include "ncho/pencil.hpp"

namespace ncho::cli {

namespace {

struct Options {
    std::string out_path;
    std::uint64_t seed = 0;
    int indent = 2;
    std::string problem_path;
    std::optional<double> lambda;
    int grid = 1024;
    std::string method = "trunc";
    std::optional<int> count;
    std::optional<double> tol;
    int index = 0;
    double tmax = 10.0;
    int samples = 101;
    std::vector<double> mu_list{40.0, 160.0, 640.0};
    double omega = 1.0, g = 0.3, Delta = 0.5, eps = 0.0;
};

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::Schema: return kSchema;
        case ErrorKind::Dimension:
        case ErrorKind::ContractViolation:
        case ErrorKind::DegenerateInput: return kContract;
        default: return kSolver;
    }
}

json point_json(const XPoint& x) {
    if (x.inf) return "inf";
    return num(x.z);
}

json spectrum_json(const SpectrumResult& s) {
    json j;
    j["method"] = s.method;
    j["eigenvalues"] = num(s.eigenvalues);
    j["estimates"] = num(s.estimates);
    j["orders"] = s.orders;
    j["status"] = s.status;
    json res = json::array();
    for (bool b : s.resonant) res.push_back(b);
    j["resonant"] = res;
    return j;
}

double require_lambda(const Options& o, const ProblemFile& pf) {
    if (o.lambda) return *o.lambda;
    if (pf.lambda) return *pf.lambda;
    throw SchemaError("/lambda", "this command needs --lambda or a lambda field");
}

json cmd_verify_pencil(const Options& o, const ProblemFile& pf) {
    const auto& pr = pf.problem;
    const auto dec = decompose_pencil(pr);
    const auto rep = verify_pencil_lemma(dec, pr, 1e-9, o.seed);
    json j;
    j["command"] = "verify-pencil";
    j["p"] = pr.p;
    j["mu"] = num(pr.mu);
    j["det_B_zero"] = dec.detB_zero;
    j["poles"] = num(dec.poles);
    j["multiplicity"] = dec.root_multiplicity;
    json checks = json::array();
    int item = 1;
    for (const auto& c : rep.checks) {
        json cj;
        cj["item"] = item++;
        cj["name"] = c.name;
        cj["applicable"] = c.applicable;
        cj["status"] = c.pass ? "PASS" : "FAIL";
        cj["residual"] = num(c.residual);
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["sampled_identity"] = num(rep.sampled_identity);
    j["all_pass"] = rep.all_pass();
    return j;
}

json cmd_positivity(const Options& o, const ProblemFile& pf) {
    const auto r = positivity_margin(pf.problem, o.grid);
    json j;
    j["command"] = "positivity";
    j["margin"] = num(r.margin);
    j["argmin"] = num(r.argmin);
    j["certified"] = num(r.certified);
    j["grid_size"] = r.grid_size;
    j["positive"] = r.margin > 0.0;
    return j;
}

json cmd_standardize(const Options&, const ProblemFile& pf) {
    const auto sf = standardize_p2(pf.problem);
    json j;
    j["command"] = "standardize";
    j["alpha"] = num(sf.alpha);
    j["b1"] = num(sf.b1);
    j["b2"] = num(sf.b2);
    json prob;
    prob["mu"] = num(sf.problem.mu);
    prob["A"] = num(sf.problem.A);
    prob["B"] = num(sf.problem.B);
    prob["C0"] = num(sf.problem.C0);
    prob["W"] = num(sf.problem.W);
    j["problem"] = prob;
    json steps = json::array();
    for (const auto& s : sf.transcript) {
        json sj;
        switch (s.kind) {
            case TranscriptStep::Kind::Mobius:
                sj["kind"] = "mobius";
                sj["a"] = num(s.g.a);
                sj["b"] = num(s.g.b);
                break;
            case TranscriptStep::Kind::Normalize:
                sj["kind"] = "normalize";
                sj["M"] = num(s.M);
                break;
            case TranscriptStep::Kind::Gauge:
                sj["kind"] = "gauge";
                sj["M"] = num(s.M);
                break;
        }
        steps.push_back(sj);
    }
    j["transcript"] = steps;
    j["is_standard"] = is_std_form(sf.problem);
    return j;
}

json cmd_fuchsian(const Options& o, const ProblemFile& pf) {
    const auto& pr = pf.problem;
    const double lambda = require_lambda(o, pf);
    const auto dec = decompose_pencil(pr);
    const auto sys = build_fuchsian(pr, dec, lambda);
    json j;
    j["command"] = "fuchsian";
    j["lambda"] = num(lambda);
    json pts = json::array();
    for (size_t k = 0; k < sys.singular_points.size(); ++k) {
        const auto rep = exponents_at(sys, pr, static_cast<int>(k));
        json pj;
        pj["point"] = num(sys.singular_points[k]);
        pj["residue"] = num(sys.residues[k]);
        pj["exponents"] = num(rep.exponents);
        pj["rank"] = rep.rank_residue;
        pj["kernel_dim"] = rep.kernel_dim;
        pj["rank_ok"] = rep.rank_ok;
        pj["shift_residual"] = num(rep.shift_residual);
        pts.push_back(pj);
    }
    j["singular_points"] = pts;
    const CMatrix formula = residue_at_infinity_formula(pr, dec, lambda);
    json inf;
    inf["residue"] = num(sys.residue_at_infinity);
    inf["eigenvalues"] = num(eigen_general_small(sys.residue_at_infinity));
    inf["formula_residual"] = num((formula - sys.residue_at_infinity).norm());
    j["infinity"] = inf;
    return j;
}

json cmd_heun_params(const Options& o, const ProblemFile& pf) {
    const double lambda = require_lambda(o, pf);
    const auto sf = standardize_p2(pf.problem);
    const auto h = heun_like_parameters(sf.problem, lambda);
    json j;
    j["command"] = "heun-params";
    j["lambda"] = num(lambda);
    j["mu"] = num(h.mu);
    j["alpha"] = num(h.alpha);
    j["kappa0"] = num(h.kappa0);
    j["kappa1"] = num(h.kappa1);
    j["q1"] = num(h.q1);
    j["epsilon"] = h.epsilon ? num(*h.epsilon) : json(nullptr);
    j["q2"] = h.q2 ? num(*h.q2) : json(nullptr);
    j["b1"] = num(h.b1);
    j["b2"] = num(h.b2);
    j["c1"] = num(h.c1);
    j["c2"] = num(h.c2);
    j["c3"] = num(h.c3);
    j["heun_case"] = h.heun_case;
    j["coalescence"] = h.coalescence;
    json scheme = json::array();
    for (const auto& row : h.scheme) {
        json r;
        r["label"] = row.label;
        r["point"] = point_json(row.point);
        r["exponents"] = json::array({num(row.e0), num(row.e1)});
        scheme.push_back(r);
    }
    j["scheme"] = scheme;
    j["fuchs_sum"] = num(h.fuchs_sum);
    return j;
}

json cmd_spectrum(const Options& o, const ProblemFile& pf) {
    const auto& pr = pf.problem;
    const int count = o.count.value_or(5);
    const double tol = o.tol ? *o.tol : pf.tol.value_or(1e-10);
    if (count < 1) throw SchemaError("--count", "count must be at least 1");
    if (o.method != "trunc" && o.method != "connect" && o.method != "both")
        throw SchemaError("--method", "expected trunc, connect or both");
    json j;
    j["command"] = "spectrum";
    std::optional<SpectrumResult> tr, cn;
    if (o.method != "connect") {
        tr = spectrum_truncated(pr, count, tol, pf.M.value_or(64));
        j["truncation"] = spectrum_json(*tr);
    }
    if (o.method != "trunc") {
        cn = spectrum_connection(pr, count, tol);
        j["connection"] = spectrum_json(*cn);
    }
    if (tr && cn) {
        json rows = json::array();
        double worst = 0.0;
        for (size_t k = 0; k < tr->eigenvalues.size(); ++k) {
            const double d = std::abs(tr->eigenvalues[k] - cn->eigenvalues[k]);
            worst = std::max(worst, d);
            json r;
            r["index"] = k;
            r["truncation"] = num(tr->eigenvalues[k]);
            r["connection"] = num(cn->eigenvalues[k]);
            r["difference"] = num(d);
            rows.push_back(r);
        }
        j["agreement"] = rows;
        j["max_difference"] = num(worst);
    }
    return j;
}

std::string cmd_eigenfunction(const Options& o, const ProblemFile& pf) {
    if (o.samples < 1) throw SchemaError("--samples", "samples must be at least 1");
    if (!(o.tmax > 0.0)) throw SchemaError("--tmax", "tmax must be positive");
    std::vector<double> t;
    for (int k = 1; k <= o.samples; ++k) t.push_back(o.tmax * k / o.samples);
    const auto prof = eigenfunction_profile_index(pf.problem, o.index, t);
    std::ostringstream os;
    os << "# lambda=" << format12(prof.lambda) << " index=" << prof.index << " M=" << prof.M
       << " tail_ratio=" << format12(prof.tail_ratio) << " profile_change=" << format12(prof.profile_change) << "\n";
    os << "t";
    for (int c = 0; c < pf.problem.p; ++c) os << ",re_" << c << ",im_" << c;
    os << "\n";
    for (size_t k = 0; k < t.size(); ++k) {
        os << format12(t[k]);
        for (int c = 0; c < pf.problem.p; ++c)
            os << "," << format12(prof.values[k](c).real()) << "," << format12(prof.values[k](c).imag());
        os << "\n";
    }
    return os.str();
}

std::string cmd_confluence(const Options& o) {
    RabiParameters r;
    r.omega = o.omega;
    r.g_coupling = o.g;
    r.Delta = o.Delta;
    r.eps_bias = o.eps;
    const auto rows = confluence_sweep(r, o.mu_list, o.count.value_or(5));
    std::ostringstream os;
    os << "mu,deviation,ratio\n";
    for (size_t k = 0; k < rows.size(); ++k) {
        os << format12(rows[k].mu) << "," << format12(rows[k].deviation) << ",";
        if (k > 0 && rows[k - 1].deviation > 0.0) os << format12(rows[k].deviation / rows[k - 1].deviation);
        os << "\n";
    }
    return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Spectral tools for generalized non-commutative harmonic oscillators", "ncho"};
    app.option_defaults()->always_capture_default();
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--out", o.out_path, "Write output to FILE instead of stdout");
    app.add_option("--seed", o.seed, "Extra seed mixed into the problem hash for sampled checks");
    app.add_option("--json-indent", o.indent, "JSON indentation, -1 for compact");

    auto with_problem = [&](CLI::App* sub) {
        sub->add_option("problem", o.problem_path, "Problem file (JSON), - for stdin")->required();
    };
    auto* verify = app.add_subcommand("verify-pencil", "Partial fraction identities of the pencil");
    with_problem(verify);
    auto* posit = app.add_subcommand("positivity", "Positivity margin of Bz + A + B^dagger conj(z) on the circle");
    with_problem(posit);
    posit->add_option("--grid", o.grid, "Number of sample points on the circle");
    auto* stdf = app.add_subcommand("standardize", "Standard form of a p = 2 problem with its transcript");
    with_problem(stdf);
    auto* fuchs = app.add_subcommand("fuchsian", "Singular points, residues and exponents at lambda");
    with_problem(fuchs);
    fuchs->add_option("--lambda", o.lambda, "Spectral parameter");
    auto* heun = app.add_subcommand("heun-params", "Heun-type parameters of the standardized p = 2 problem");
    with_problem(heun);
    heun->add_option("--lambda", o.lambda, "Spectral parameter");
    auto* spec = app.add_subcommand("spectrum", "Lowest eigenvalues");
    with_problem(spec);
    spec->add_option("--method", o.method, "trunc, connect or both");
    spec->add_option("--count", o.count, "Number of eigenvalues");
    spec->add_option("--tol", o.tol, "Convergence tolerance");
    auto* eigf = app.add_subcommand("eigenfunction", "Radial profile of an eigenfunction as CSV");
    with_problem(eigf);
    eigf->add_option("--index", o.index, "Position in the ascending spectrum");
    eigf->add_option("--tmax", o.tmax, "Largest sample point");
    eigf->add_option("--samples", o.samples, "Number of sample points");
    auto* conf = app.add_subcommand("confluence", "Deviation from the Rabi limit as CSV");
    conf->add_option("--mu-list", o.mu_list, "Comma separated mu values")->delimiter(',');
    conf->add_option("--count", o.count, "Number of eigenvalues");
    conf->add_option("--omega", o.omega, "Oscillator frequency");
    conf->add_option("--g", o.g, "Coupling");
    conf->add_option("--Delta", o.Delta, "Level splitting");
    conf->add_option("--eps", o.eps, "Bias");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        json j;
        j["error"]["kind"] = "UsageError";
        j["error"]["message"] = e.what();
        j["error"]["exit_code"] = static_cast<int>(kSchema);
        out << j.dump(o.indent) + "\n";
        return kSchema;
    }

    std::string text;
    int code = kOk;
    try {
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "confluence") {
            text = cmd_confluence(o);
        } else {
            const ProblemFile pf = parse_problem_file(o.problem_path);
            if (name == "eigenfunction") {
                text = cmd_eigenfunction(o, pf);
            } else {
                json j;
                if (name == "verify-pencil") j = cmd_verify_pencil(o, pf);
                else if (name == "positivity") j = cmd_positivity(o, pf);
                else if (name == "standardize") j = cmd_standardize(o, pf);
                else if (name == "fuchsian") j = cmd_fuchsian(o, pf);
                else if (name == "heun-params") j = cmd_heun_params(o, pf);
                else j = cmd_spectrum(o, pf);
                text = j.dump(o.indent) + "\n";
            }
        }
    } catch (const Error& e) {
        code = exit_code_for(e.kind());
        json j;
        j["error"]["kind"] = kind_name(e.kind());
        j["error"]["message"] = e.what();
        if (const auto* se = dynamic_cast<const SchemaError*>(&e)) j["error"]["path"] = se->path();
        j["error"]["exit_code"] = code;
        text = j.dump(o.indent) + "\n";
    }

    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) {
            err << "cannot write " << o.out_path << "\n";
            return kSchema;
        }
        f << text;
    } else {
        out << text;
    }
    return code;
}

}  // namespace ncho::cli
