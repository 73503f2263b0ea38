// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "elimination.hpp"
#include "instances.hpp"
#include "ncho/confluence.hpp"
#include "ncho/connection.hpp"
#include "ncho/covariance.hpp"
#include "ncho/fuchsian.hpp"
#include "ncho/heun.hpp"
#include "ncho/modes.hpp"
#include "ncho/pencil.hpp"
#include "ncho/truncation.hpp"

using namespace ncho;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    double time_limit = 0.0;  // seconds, 0 for none
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

// Worst value seen against a bound.
struct Gauge {
    double worst = 0.0;
    void see(double v) { worst = std::max(worst, std::isfinite(v) ? v : 1e300); }
};

std::vector<NchoProblem> random_instances() {
    std::mt19937_64 rng(20240611);
    std::vector<NchoProblem> out;
    int k = 0;
    while (out.size() < 200) {
        const int p = 1 + k % 3;
        const bool singular = k % 4 == 3;
        ++k;
        const auto pr = gen::random_problem(rng, p, singular);
        if (!(positivity_margin(pr).margin > 0.0)) continue;
        try {
            decompose_pencil(pr);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::SimplePoleViolation) continue;
            throw;
        }
        out.push_back(pr);
    }
    return out;
}

Outcome criterion1() {
    Gauge g;
    int failed = 0, checks = 0;
    for (const auto& pr : random_instances()) {
        const auto dec = decompose_pencil(pr);
        const auto rep = verify_pencil_lemma(dec, pr);
        for (const auto& c : rep.checks) {
            if (!c.applicable) continue;
            ++checks;
            g.see(c.residual);
            if (!c.pass || !(c.residual < 1e-9)) ++failed;
        }
    }
    return {failed == 0, std::to_string(checks) + " identity checks on 200 instances, worst residual " + sci(g.worst), 30.0};
}

Outcome criterion2() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    Gauge sum, formula, shift;
    int rank_bad = 0, zero_branch = 0, nonzero_branch = 0;
    for (const auto& pr : random_instances()) {
        const auto dec = decompose_pencil(pr);
        (dec.detB_zero ? zero_branch : nonzero_branch)++;
        double rmax = 0.0;
        for (const auto& a : dec.poles) rmax = std::max(rmax, std::abs(a));
        for (int s = 0; s < 5; ++s) {
            const double lambda = u(rng);
            const auto sys = build_fuchsian(pr, dec, lambda);
            CMatrix total = sys.residue_at_infinity;
            for (const auto& R : sys.residues) total += R;
            sum.see(total.norm());
            const CMatrix contour = residue_at_infinity_contour(pr, lambda, 4.0 * rmax + 4.0, 512);
            formula.see((contour - residue_at_infinity_formula(pr, dec, lambda)).norm());
            for (size_t j = 0; j < sys.singular_points.size(); ++j) {
                const auto rep = exponents_at(sys, pr, static_cast<int>(j));
                if (!rep.rank_ok) ++rank_bad;
                shift.see(rep.shift_residual);
            }
        }
    }
    const bool ok = sum.worst < 1e-8 && formula.worst < 1e-8 && shift.worst < 1e-8 && rank_bad == 0 &&
                    zero_branch > 0 && nonzero_branch > 0;
    return {ok,
            "sum rule " + sci(sum.worst) + ", infinity formula vs contour " + sci(formula.worst) + " (det B = 0: " +
                std::to_string(zero_branch) + ", det B != 0: " + std::to_string(nonzero_branch) + "), shift " +
                sci(shift.worst) + ", rank failures " + std::to_string(rank_bad)};
}

NchoProblem scalar_problem() {
    CMatrix A(1, 1), B(1, 1), C(1, 1);
    A << 1.0;
    B << 0.25;
    C << 0.0;
    return make_problem(0.5, A, B, C);
}

Outcome criterion3() {
    const auto pr = scalar_problem();
    const auto tr = spectrum_truncated(pr, 10, 1e-10, 64, 512);
    const ConnectionDeterminant T(pr);
    Gauge trunc, tval, refined;
    for (int m = 0; m < 10; ++m) {
        const double exact = 0.5 * std::sqrt(3.0) * (2.0 * m + 0.5);
        trunc.see(std::abs(tr.eigenvalues[static_cast<size_t>(m)] - exact));
        tval.see(std::abs(T(exact)));
        refined.see(std::abs(refine_eigenvalue(T, tr.eigenvalues[static_cast<size_t>(m)] + 1e-4).lambda - exact));
    }
    const bool ok = trunc.worst < 1e-8 && tval.worst < 1e-6 && refined.worst < 1e-8 && tr.orders.back() <= 512;
    return {ok,
            "truncation " + sci(trunc.worst) + " at M = " + std::to_string(tr.orders.back()) + ", |T| " +
                sci(tval.worst) + ", refined " + sci(refined.worst),
            5.0};
}

Outcome criterion4() {
    Gauge g;
    for (double eta : {0.0, 0.1})
        for (double mu : {0.5, 1.5}) {
            std::vector<double> expect;
            for (int m = 0; m < 8; ++m)
                for (double s : {-1.0, 1.0})
                    expect.push_back(std::sqrt(3.0) * (2.0 * m + mu) + s * 2.0 * eta * std::sqrt(3.0));
            std::sort(expect.begin(), expect.end());
            const auto got = spectrum_truncated(eta_shifted_ncho(2.0, 2.0, eta, mu), 8, 1e-11).eigenvalues;
            for (size_t k = 0; k < 8; ++k) g.see(std::abs(got[k] - expect[k]));
        }
    return {g.worst < 1e-8, "lowest 8 values, 4 parameter sets, worst " + sci(g.worst)};
}

Outcome criterion5() {
    Gauge alpha, params;
    int n = 0;
    for (double beta : {1.2, 1.5, 2.0, 3.0})
        for (double gamma : {1.1, 1.5, 2.5, 4.0})
            for (double eta : {0.0, 0.1, -0.25})
                for (double lambda : {0.7, 2.3, 5.0})
                    for (double mu : {0.5, 1.5}) {
                        const auto sf = standardize_p2(eta_shifted_ncho(beta, gamma, eta, mu));
                        const auto h = heun_like_parameters(sf.problem, lambda);
                        const auto f = example_closed_forms(beta, gamma, eta, lambda, mu);
                        alpha.see(std::abs(h.alpha - 1.0 / std::sqrt(beta * gamma)));
                        // Both h_+ and h_- give a standard form: kappa0 = kappa_pm, kappa1 = kappa_mp, q1 = q_pm.
                        const double plus = std::max({std::abs(h.kappa0 - f.kappa_plus), std::abs(h.kappa1 - f.kappa_minus),
                                                      std::abs(h.q1 - f.q_plus)});
                        const double minus = std::max({std::abs(h.kappa0 - f.kappa_minus),
                                                       std::abs(h.kappa1 - f.kappa_plus), std::abs(h.q1 - f.q_minus)});
                        params.see(std::min(plus, minus));
                        ++n;
                    }
    return {alpha.worst < 1e-12 && params.worst < 1e-10,
            std::to_string(n) + " grid points, alpha " + sci(alpha.worst) + ", kappa/q " + sci(params.worst)};
}

double nearest_gap(const std::vector<cplx>& pts, cplx z) {
    double d = 1e300;
    for (const auto& s : pts)
        if (s != z) d = std::min(d, std::abs(s - z));
    return d;
}

Outcome criterion6() {
    std::vector<NchoProblem> problems;
    for (double eta : {0.05, 0.1}) problems.push_back(standardize_p2(eta_shifted_ncho(2.0, 3.0, eta, 1.5)).problem);
    problems.push_back(standardize_p2(eta_shifted_ncho(1.5, 1.2, 0.2, 0.5)).problem);
    std::mt19937_64 rng(66);
    for (int k = 0; k < 5; ++k) problems.push_back(standardize_p2(gen::random_problem(rng, 2)).problem);

    Gauge expo, fuchs, mono;
    int heun = 0, apparent = 0;
    bool eps_ok = true;
    for (const auto& pr : problems)
        for (double lambda : {0.4, 1.9}) {
            const auto h = heun_like_parameters(pr, lambda);
            const gen::Elimination el{pr, lambda};
            auto P = [&](cplx z) { return el.P(z); };
            auto Q = [&](cplx z) { return el.Q(z); };
            std::vector<cplx> finite;
            for (const auto& row : h.scheme)
                if (!row.point.inf) finite.push_back(row.point.z);
            double rmax = 0.0;
            for (const auto& s : finite) rmax = std::max(rmax, std::abs(s));
            cplx total = 0.0;
            for (const auto& row : h.scheme) {
                std::vector<cplx> got;
                if (row.point.inf) {
                    const double R = 4.0 * rmax + 4.0;
                    const cplx pinf = gen::contour(P, 0.0, R, 512);
                    const cplx qinf = gen::contour([&](cplx z) { return z * Q(z); }, 0.0, R, 512);
                    const cplx b = 1.0 - pinf, disc = std::sqrt(b * b - 4.0 * qinf);
                    got = {0.5 * (-b + disc), 0.5 * (-b - disc)};
                } else {
                    // Q has at most a simple pole, so the indicial roots are 0 and 1 - res P.
                    const double r = 0.3 * nearest_gap(finite, row.point.z);
                    const cplx q0 = gen::contour([&](cplx z) { return (z - row.point.z) * Q(z); }, row.point.z, r);
                    const cplx p0 = gen::contour(P, row.point.z, r);
                    const cplx b = p0 - 1.0, disc = std::sqrt(b * b - 4.0 * q0);
                    got = {0.5 * (-b + disc), 0.5 * (-b - disc)};
                }
                expo.see(multiset_distance(got, {row.e0, row.e1}));
                total += got[0] + got[1];
                if (row.label == "epsilon") eps_ok = eps_ok && multiset_distance(got, {0.0, 2.0}) < 1e-8;
            }
            fuchs.see(std::abs(total - static_cast<double>(h.scheme.size() - 2)));
            if (h.heun_case) ++heun;
            if (h.epsilon) {
                ++apparent;
                const auto ode = scalar_ode(h);
                const double r = 0.4 * nearest_gap(ode.singular_points(), *h.epsilon);
                mono.see((scalar_monodromy(ode, *h.epsilon, r, 48, 40) - Eigen::Matrix2cd::Identity()).norm());
            }
        }
    const bool ok = expo.worst < 1e-8 && fuchs.worst < 1e-9 && mono.worst < 1e-8 && eps_ok && heun > 0 && apparent > 0;
    return {ok, "exponents " + sci(expo.worst) + ", Fuchs relation " + sci(fuchs.worst) + ", monodromy at epsilon " +
                    sci(mono.worst) + " (" + std::to_string(heun) + " Heun, " + std::to_string(apparent) +
                    " with apparent point)"};
}

CMatrix random_unitary(std::mt19937_64& rng, int p) {
    Eigen::HouseholderQR<CMatrix> qr(gen::random_complex(rng, p, p));
    return qr.householderQ() * CMatrix::Identity(p, p);
}

Outcome criterion7() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Gauge spec, poles;
    for (int k = 0; k < 20; ++k) {
        const auto pr = gen::random_problem(rng, 2);
        const cplx b = std::polar(0.5 * u(rng), 2.0 * M_PI * u(rng));
        const Su11Element g{std::polar(std::sqrt(1.0 + std::norm(b)), 2.0 * M_PI * u(rng)), b};
        const CMatrix U = random_unitary(rng, 2);
        const auto moved = transform_problem(g, pr);
        const auto base = spectrum_truncated(pr, 5, 1e-11).eigenvalues;
        const auto after_g = spectrum_truncated(moved, 5, 1e-11).eigenvalues;
        const auto after_u = spectrum_truncated(gauge_problem(U, pr), 5, 1e-11).eigenvalues;
        for (size_t i = 0; i < 5; ++i) {
            spec.see(std::abs(after_g[i] - base[i]));
            spec.see(std::abs(after_u[i] - base[i]));
        }
        const auto d0 = decompose_pencil(pr), d1 = decompose_pencil(moved);
        if (d0.poles.size() != d1.poles.size()) {
            poles.see(1e300);
            continue;
        }
        for (const auto& a : d0.poles) {
            const cplx w = mobius_apply(g, a);
            double best = 1e300;
            for (const auto& c : d1.poles) best = std::min(best, std::abs(c - w) / std::max(1.0, std::abs(w)));
            poles.see(best);
        }
    }
    return {spec.worst < 1e-7 && poles.worst < 1e-8,
            "20 instances, spectra " + sci(spec.worst) + ", poles (relative) " + sci(poles.worst)};
}

// Dense number-basis Rabi Hamiltonian omega n + Delta sigma3 + eps sigma1 + g sigma1 (a + a^dagger).
std::vector<double> rabi_dense(double omega, double g, double Delta, double eps, int N, int count) {
    CMatrix H = CMatrix::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) {
        H(2 * n, 2 * n) = omega * n + Delta;
        H(2 * n + 1, 2 * n + 1) = omega * n - Delta;
        H(2 * n, 2 * n + 1) = H(2 * n + 1, 2 * n) = eps;
        if (n + 1 < N) {
            const double s = g * std::sqrt(n + 1.0);
            H(2 * n, 2 * (n + 1) + 1) = H(2 * (n + 1) + 1, 2 * n) = s;
            H(2 * n + 1, 2 * (n + 1)) = H(2 * (n + 1), 2 * n + 1) = s;
        }
    }
    const RVector e = Eigen::SelfAdjointEigenSolver<CMatrix>(H, Eigen::EigenvaluesOnly).eigenvalues();
    return {e.data(), e.data() + count};
}

Outcome criterion8() {
    const double omega = 1.0, gt = 0.3, Delta = 0.5, eps = 0.0;
    const int count = 5;
    const auto rabi = rabi_dense(omega, gt, Delta, eps, 160, count);
    std::vector<double> dev;
    for (double mu : {40.0, 160.0, 640.0}) {
        CMatrix A = omega * CMatrix::Identity(2, 2);
        CMatrix B = (gt / std::sqrt(mu)) * pauli(1);
        CMatrix C0 = -Delta * pauli(3) - eps * pauli(1) + 0.5 * mu * A;
        const auto e = spectrum_truncated(make_problem(mu, A, B, C0), count, 1e-11).eigenvalues;
        double d = 0.0;
        for (int k = 0; k < count; ++k) d = std::max(d, std::abs(0.5 * e[static_cast<size_t>(k)] - rabi[static_cast<size_t>(k)]));
        dev.push_back(d);
    }
    RabiParameters r;
    r.omega = omega;
    r.g_coupling = gt;
    r.Delta = Delta;
    r.eps_bias = eps;
    const auto rows = confluence_sweep(r, {40.0, 160.0, 640.0}, count);
    double module_gap = 0.0;
    for (size_t i = 0; i < 3; ++i) module_gap = std::max(module_gap, std::abs(rows[i].deviation - dev[i]));
    const double r1 = dev[1] / dev[0], r2 = dev[2] / dev[1];
    const bool ok = dev[0] > dev[1] && dev[1] > dev[2] && r1 >= 0.15 && r1 <= 0.45 && r2 >= 0.15 && r2 <= 0.45 &&
                    module_gap < 1e-9;
    return {ok,
            "deviations " + sci(dev[0]) + ", " + sci(dev[1]) + ", " + sci(dev[2]) + "; ratios " + sci(r1) + ", " +
                sci(r2) + "; sweep vs direct " + sci(module_gap),
            60.0};
}

Outcome criterion9() {
    Gauge g;
    for (double mu : {0.5, 1.5, 3.0}) {
        const CMatrix G = laguerre_gram(13, mu);
        for (int m = 0; m < 13; ++m)
            for (int n = 0; n < 13; ++n) {
                const double expect = m == n ? std::exp(std::lgamma(m + 1.0) + std::lgamma(mu) - std::lgamma(mu + m)) : 0.0;
                g.see(std::abs(G(m, n) - expect));
            }
    }
    return {g.worst < 1e-10, "m, n <= 12, worst entry error " + sci(g.worst)};
}

Outcome criterion10() {
    // A = diag(beta, gamma) and Bz + B^dagger conj(z) = [[0, i x], [-i x, 0]] with x = Re z,
    // so the margin is (beta + gamma)/2 - sqrt(((beta - gamma)/2)^2 + 1).
    auto exact = [](double b, double c) { return 0.5 * (b + c) - std::hypot(0.5 * (b - c), 1.0); };
    int wrong_sign = 0, points = 0;
    Gauge err;
    for (double beta : {0.3, 0.8, 1.0, 1.5, 2.0, 4.0})
        for (double prod : {0.5, 0.9, 0.999, 1.0 - 1e-6, 1.0 + 1e-6, 1.001, 1.1, 2.0, 6.0}) {
            const double gamma = prod / beta;
            const double m = positivity_margin(eta_shifted_ncho(beta, gamma, 0.0, 0.5)).margin;
            if ((m > 0.0) != (prod > 1.0)) ++wrong_sign;
            err.see(std::abs(m - exact(beta, gamma)));
            ++points;
        }
    // Along beta = gamma = t the margin is t - 1: it should fall monotonically to 0.
    bool monotone = true;
    double prev = 1e300;
    for (double t : {3.0, 2.0, 1.5, 1.1, 1.01, 1.001, 1.0 + 1e-6}) {
        const double m = positivity_margin(eta_shifted_ncho(t, t, 0.0, 0.5)).margin;
        monotone = monotone && m < prev && m > 0.0;
        prev = m;
    }
    const bool ok = wrong_sign == 0 && monotone && prev < 1e-5 && err.worst < 1e-9;
    return {ok, std::to_string(points) + " grid points, sign mismatches " + std::to_string(wrong_sign) +
                    ", margin error " + sci(err.worst) + ", margin near the boundary " + sci(prev) +
                    (monotone ? ", monotone" : ", not monotone")};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = "cd '" + std::string(NCHO_FIXTURES) + "' && OPENBLAS_NUM_THREADS=1 '" +
                            std::string(NCHO_CLI) + "' " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Outcome criterion11() {
    const fs::path dir = NCHO_GOLDEN;
    std::ifstream cases(dir / "cases.txt");
    std::string line;
    int total = 0;
    std::vector<std::string> bad;
    while (std::getline(cases, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto a = line.find('|'), b = line.find('|', a + 1);
        const std::string name = line.substr(0, a);
        const int code = std::stoi(line.substr(a + 1, b - a - 1));
        const std::string args = line.substr(b + 1);
        const std::string golden = read_file(dir / (name + ".out"));
        const auto first = run_cli(args), second = run_cli(args);
        ++total;
        if (first.code != code || second.code != code || first.out != golden || second.out != golden ||
            golden.empty())
            bad.push_back(name);
    }
    std::string detail = std::to_string(total) + " cases run twice";
    if (!bad.empty()) {
        detail += ", mismatched:";
        for (const auto& n : bad) detail += " " + n;
    }
    return {bad.empty() && total > 0, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"pencil identities on random instances", criterion1},
        {"Fuchsian residue identities", criterion2},
        {"scalar closed form", criterion3},
        {"eta-shifted family decoupling", criterion4},
        {"Heun parameters against closed forms", criterion5},
        {"exponent schemes and apparent point", criterion6},
        {"SU(1,1) and gauge invariance", criterion7},
        {"confluence to the Rabi model", criterion8},
        {"Laguerre mode orthogonality", criterion9},
        {"positivity on the eta-shifted family", criterion10},
        {"CLI golden outputs", criterion11},
    };
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.time_limit > 0.0 && secs > o.time_limit) {
            o.pass = false;
            o.detail += ", over the " + std::to_string(static_cast<int>(o.time_limit)) + " s budget";
        }
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ["
                  << o.detail << "; " << timing << "]" << std::endl;
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
