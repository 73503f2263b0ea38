#include "ncho/heun.hpp"

#include <cmath>

namespace ncho {

namespace {

struct StdEntries {
    cplx b1, b2, c1, c2, c3;
    CMatrix C;
};

StdEntries read_std(const NchoProblem& pr, cplx lambda) {
    if (pr.p != 2) throw Error(ErrorKind::Dimension, "heun: p must be 2");
    if (!is_std_form(pr, 1e-9)) throw Error(ErrorKind::ContractViolation, "heun: problem is not in standard form");
    StdEntries e;
    e.C = pr.C(lambda);
    e.b1 = pr.B(0, 0);
    e.b2 = pr.B(0, 1);
    e.c1 = e.C(0, 0);
    e.c2 = e.C(0, 1);
    e.c3 = e.C(1, 1);
    return e;
}

cplx inner_alpha(cplx b1, cplx b2, int* branch) {
    const double nb2 = std::norm(b2);
    const cplx disc = std::sqrt(cplx((1.0 - nb2) * (1.0 - nb2) - 4.0 * std::norm(b1)));
    const cplx plus = (-1.0 + nb2 + disc) / (2.0 * b1);
    if (std::abs(plus) < 1.0) {
        *branch = +1;
        return plus;
    }
    *branch = -1;
    return (-1.0 + nb2 - disc) / (2.0 * b1);
}

cplx trace(const CMatrix& m) { return m.trace(); }

void add_term(std::vector<cplx>& poles, std::vector<cplx>& res, cplx s, cplx r) {
    for (size_t i = 0; i < poles.size(); ++i)
        if (poles[i] == s) {
            res[i] += r;
            return;
        }
    poles.push_back(s);
    res.push_back(r);
}

// K(z) / prod (z - s_i) with K a polynomial of degree < number of factors.
void add_rational(std::vector<cplx>& poles, std::vector<cplx>& res, const std::vector<cplx>& s,
                  const std::vector<cplx>& numer) {
    for (size_t i = 0; i < s.size(); ++i) {
        cplx den = 1.0;
        for (size_t l = 0; l < s.size(); ++l)
            if (l != i) den *= s[i] - s[l];
        add_term(poles, res, s[i], poly_eval(numer, s[i]) / den);
    }
}

}  // namespace

HeunParameters heun_like_parameters(const NchoProblem& std_problem, cplx lambda) {
    const auto e = read_std(std_problem, lambda);
    const double mu = std_problem.mu;
    const CMatrix& A = std_problem.A;
    const CMatrix& B = std_problem.B;
    const CMatrix Bd = B.adjoint();

    HeunParameters h;
    h.mu = mu;
    h.lambda = lambda;
    h.b1 = e.b1;
    h.b2 = e.b2;
    h.c1 = e.c1;
    h.c2 = e.c2;
    h.c3 = e.c3;
    h.alpha = inner_alpha(e.b1, e.b2, &h.alpha_branch);
    const cplx a = h.alpha;
    const cplx outer = 1.0 / std::conj(a);

    h.kappa0 = trace(adjugate(Bd) * e.C) / trace(adjugate(A) * Bd);
    h.kappa1 = trace(adjugate(B * a + A + Bd / a) * e.C) / ((a - outer) * trace(adjugate(A) * B));
    h.q1 = determinant(e.C - 0.5 * mu * A) / trace(adjugate(A) * B);

    const double cscale = std::max(1.0, e.C.norm());
    h.heun_case = std::abs(e.b2) <= 1e-12;
    if (!h.heun_case) {
        if (std::abs(e.c3 + 0.5 * mu) <= 1e-12 * cscale) {
            h.coalescence = true;
        } else {
            const cplx c1m = e.c1 - 0.5 * mu, c3m = e.c3 - 0.5 * mu;
            h.epsilon = e.c2 / (e.b2 * (e.c3 + 0.5 * mu));
            h.q2 = (mu * (e.b2 * c1m - e.b1 * e.c2) + e.b2 * (c1m * c3m - std::norm(e.c2))) /
                   (e.b1 * e.b2 * (e.c3 + 0.5 * mu));
        }
    }

    const cplx k0 = h.kappa0, k1 = h.kappa1;
    if (h.heun_case) {
        h.scheme = {{"0", {0.0, false}, 0.0, 1.0 + k0 - 0.5 * mu},
                    {"alpha", {a, false}, 0.0, k1 - 0.5 * mu},
                    {"1/conj(alpha)", {outer, false}, 0.0, -k1 - 0.5 * mu},
                    {"inf", XPoint::infinity(), mu, 1.0 - k0 + 0.5 * mu}};
    } else {
        h.scheme = {{"0", {0.0, false}, 0.0, 1.0 + k0 - 0.5 * mu},
                    {"alpha", {a, false}, 0.0, k1 - 0.5 * mu},
                    {"1/conj(alpha)", {outer, false}, 0.0, -std::conj(k1) - 0.5 * mu}};
        if (h.epsilon) h.scheme.push_back({"epsilon", {*h.epsilon, false}, 0.0, 2.0});
        h.scheme.push_back({"inf", XPoint::infinity(), mu, -std::conj(k0) + 0.5 * mu});
    }
    h.fuchs_sum = 0.0;
    for (const auto& r : h.scheme) h.fuchs_sum += r.e0 + r.e1;
    return h;
}

Heun4 heun_equation_4pt(const NchoProblem& std_problem, cplx lambda) {
    const auto e = read_std(std_problem, lambda);
    if (std::abs(e.b2) > 1e-10)
        throw Error(ErrorKind::WrongBranch, "heun_equation_4pt: b2 != 0, the equation has an apparent singularity");
    const auto h = heun_like_parameters(std_problem, lambda);
    Heun4 out;
    out.alpha = h.alpha;
    out.kappa0 = h.kappa0;
    out.kappa1 = h.kappa1;
    out.q1 = h.q1;
    out.mu = h.mu;
    out.scheme = h.scheme;
    out.fuchs_sum = h.fuchs_sum;
    return out;
}

cplx ScalarOde::P(cplx z) const {
    cplx s = 0.0;
    for (size_t i = 0; i < p_poles.size(); ++i) s += p_res[i] / (z - p_poles[i]);
    return s;
}

cplx ScalarOde::Q(cplx z) const {
    cplx s = 0.0;
    for (size_t i = 0; i < q_poles.size(); ++i) s += q_res[i] / (z - q_poles[i]);
    return s;
}

void ScalarOde::taylor(cplx c, int order, std::vector<cplx>& pt, std::vector<cplx>& qt) const {
    auto expand = [&](const std::vector<cplx>& poles, const std::vector<cplx>& res, std::vector<cplx>& out) {
        out.assign(static_cast<size_t>(order + 1), 0.0);
        for (size_t i = 0; i < poles.size(); ++i) {
            const cplx inv = 1.0 / (poles[i] - c);
            cplx pw = inv;
            for (int n = 0; n <= order; ++n) {
                out[static_cast<size_t>(n)] -= res[i] * pw;
                pw *= inv;
            }
        }
    };
    expand(p_poles, p_res, pt);
    expand(q_poles, q_res, qt);
}

std::vector<cplx> ScalarOde::singular_points() const {
    std::vector<cplx> s = p_poles;
    for (const auto& q : q_poles) {
        bool seen = false;
        for (const auto& x : s) seen = seen || x == q;
        if (!seen) s.push_back(q);
    }
    return s;
}

ScalarOde scalar_ode(const HeunParameters& h) {
    if (h.coalescence) throw Error(ErrorKind::ContractViolation, "scalar_ode: coalescence case has no scalar form");
    const double mu = h.mu;
    const cplx a = h.alpha, k0 = h.kappa0, k1 = h.kappa1;
    ScalarOde ode;
    if (h.heun_case) {
        const cplx ai = 1.0 / a;
        add_term(ode.p_poles, ode.p_res, 0.0, -k0 + 0.5 * mu);
        add_term(ode.p_poles, ode.p_res, a, 1.0 - k1 + 0.5 * mu);
        add_term(ode.p_poles, ode.p_res, ai, 1.0 + k1 + 0.5 * mu);
        add_rational(ode.q_poles, ode.q_res, {0.0, a, ai}, {h.q1, mu * (1.0 - k0 + 0.5 * mu)});
        return ode;
    }
    const cplx outer = 1.0 / std::conj(a);
    const cplx eps = *h.epsilon;
    add_term(ode.p_poles, ode.p_res, 0.0, -k0 + 0.5 * mu);
    add_term(ode.p_poles, ode.p_res, a, 1.0 - k1 + 0.5 * mu);
    add_term(ode.p_poles, ode.p_res, outer, 1.0 + std::conj(k1) + 0.5 * mu);
    add_term(ode.p_poles, ode.p_res, eps, -1.0);
    add_rational(ode.q_poles, ode.q_res, {a, outer}, {mu * (-std::conj(k0) + 0.5 * mu)});
    add_rational(ode.q_poles, ode.q_res, {0.0, a, outer}, {h.q1});
    add_rational(ode.q_poles, ode.q_res, {a, outer, eps}, {*h.q2});
    return ode;
}

ScalarOde scalar_ode(const Heun4& h) {
    HeunParameters hp;
    hp.alpha = h.alpha;
    hp.kappa0 = h.kappa0;
    hp.kappa1 = h.kappa1;
    hp.q1 = h.q1;
    hp.mu = h.mu;
    hp.heun_case = true;
    return scalar_ode(hp);
}

Eigen::Matrix2cd scalar_monodromy(const ScalarOde& ode, cplx center, double radius, int steps, int order) {
    Eigen::Matrix2cd Y = Eigen::Matrix2cd::Identity();  // rows (f, f'), one column per solution
    std::vector<cplx> pt, qt, a(static_cast<size_t>(order + 1));
    cplx z = center + radius;
    for (int k = 0; k < steps; ++k) {
        const cplx z1 = center + std::polar(radius, 2.0 * M_PI * (k + 1) / steps);
        const cplx h = z1 - z;
        ode.taylor(z, order, pt, qt);
        for (int col = 0; col < 2; ++col) {
            a[0] = Y(0, col);
            a[1] = Y(1, col);
            for (int n = 0; n + 2 <= order; ++n) {
                cplx s = 0.0;
                for (int j = 0; j <= n; ++j)
                    s += pt[static_cast<size_t>(j)] * static_cast<double>(n - j + 1) * a[static_cast<size_t>(n - j + 1)] +
                         qt[static_cast<size_t>(j)] * a[static_cast<size_t>(n - j)];
                a[static_cast<size_t>(n + 2)] = -s / static_cast<double>((n + 2) * (n + 1));
            }
            cplx f = 0.0, df = 0.0, hp = 1.0;
            for (int n = 0; n <= order; ++n) {
                f += a[static_cast<size_t>(n)] * hp;
                if (n + 1 <= order) df += static_cast<double>(n + 1) * a[static_cast<size_t>(n + 1)] * hp;
                hp *= h;
            }
            Y(0, col) = f;
            Y(1, col) = df;
        }
        z = z1;
    }
    return Y;
}

ExampleForms example_closed_forms(double beta, double gamma, double eta, double lambda, double mu) {
    if (!(beta > 0.0 && gamma > 0.0 && beta * gamma > 1.0))
        throw Error(ErrorKind::Positivity, "example_closed_forms: requires beta, gamma > 0 and beta*gamma > 1");
    const double bg = beta * gamma;
    const double sbg = std::sqrt(bg), s1 = std::sqrt(bg - 1.0);
    ExampleForms f;
    f.alpha = 1.0 / sbg;
    const double kbase = 0.25 * lambda * (beta + gamma) / std::sqrt(bg * (bg - 1.0));
    f.kappa_plus = kbase + eta;
    f.kappa_minus = kbase - eta;
    const double base = 0.25 * lambda * lambda - lambda * mu * sbg * (beta + gamma) / (4.0 * s1) + 0.25 * mu * mu * (bg + 1.0) -
                        eta * eta * (bg - 1.0);
    f.q_plus = -(base - eta * mu) / sbg;
    f.q_minus = -(base + eta * mu) / sbg;
    return f;
}

ConfluentParams confluent_limit_params(double g_tilde, double lambda_tilde, double Delta, double eps_bias) {
    const double lg = lambda_tilde + g_tilde * g_tilde;
    const double g2 = g_tilde * g_tilde;
    const double base = lg * (lambda_tilde - 3.0 * g2) - eps_bias * eps_bias - Delta * Delta;
    return {lg - eps_bias, lg + eps_bias, base + 4.0 * g2 * eps_bias, base - 4.0 * g2 * eps_bias};
}

ConfluenceResidual confluence_residuals(double g_tilde, double lambda_tilde, double Delta, double eps_bias, double mu) {
    const double g = g_tilde / std::sqrt(mu);
    const double lp = lambda_tilde + 0.5 * mu;
    const double root = std::sqrt(1.0 - 4.0 * g * g);
    const auto t = confluent_limit_params(g_tilde, lambda_tilde, Delta, eps_bias);
    ConfluenceResidual r;
    r.kappa_plus = std::abs((lp - eps_bias) / root - t.kappa_t_plus - 0.5 * mu);
    r.kappa_minus = std::abs((lp + eps_bias) / root - t.kappa_t_minus - 0.5 * mu);
    if (g_tilde == 0.0) {
        r.q_plus = r.q_minus = 0.0;
        return r;
    }
    const double common = lp * lp - lp * mu / root + 0.25 * mu * mu * (1.0 + 4.0 * g * g) - eps_bias * eps_bias - Delta * Delta;
    const double shift = 4.0 * g * g * mu * eps_bias / root;
    const double qp = -(common + shift) / (2.0 * g);
    const double qm = -(common - shift) / (2.0 * g);
    const double scale = 2.0 * g_tilde / std::sqrt(mu);
    r.q_plus = std::abs(qp * scale + t.q_t_plus);
    r.q_minus = std::abs(qm * scale + t.q_t_minus);
    return r;
}

const char* rabi_kind_name(RabiKind k) {
    switch (k) {
        case RabiKind::AsymmetricRabi: return "asymmetric-rabi";
        case RabiKind::JaynesCummings: return "jaynes-cummings";
        case RabiKind::Generic: return "generic";
    }
    return "generic";
}

RabiClassification rabi_jc_map(const CMatrix& At, const CMatrix& Bt, const CMatrix& Ct) {
    if (At.rows() != 2 || At.cols() != 2 || Bt.rows() != 2 || Bt.cols() != 2 || Ct.rows() != 2 || Ct.cols() != 2)
        throw Error(ErrorKind::Dimension, "rabi_jc_map: p must be 2");
    const double tol = 1e-12;
    const cplx w = 0.5 * At.trace();
    if ((At - w * CMatrix::Identity(2, 2)).norm() > tol * std::max(1.0, At.norm()) || std::abs(w.imag()) > tol)
        throw Error(ErrorKind::NotInFamily, "rabi_jc_map: A~ is not a real multiple of the identity");
    auto coord = [](const CMatrix& m, int k) { return 0.5 * (m * pauli(k)).trace(); };
    auto real = [&](cplx v) { return std::abs(v.imag()) <= tol; };
    auto zero = [&](cplx v) { return std::abs(v) <= tol; };
    const cplx b0 = coord(Bt, 0), b1 = coord(Bt, 1), b2 = coord(Bt, 2), b3 = coord(Bt, 3);
    const cplx c0 = coord(Ct, 0), c1 = coord(Ct, 1), c2 = coord(Ct, 2), c3 = coord(Ct, 3);

    RabiClassification out;
    out.params.omega = w.real();
    const bool c_ok = real(c0) && real(c1) && real(c3) && zero(c2);
    if (!c_ok || !zero(b0) || !zero(b3)) return out;
    if (real(b1) && zero(b2) && !zero(b1)) {
        out.kind = RabiKind::AsymmetricRabi;
        out.params.g_coupling = b1.real();
        out.params.Delta = -c3.real();
        out.params.eps_bias = -c1.real();
        out.params.lambda = c0.real();
        return out;
    }
    // g sigma^- = (g/2) sigma_1 - (i g/2) sigma_2
    if (real(b1) && !zero(b1) && std::abs(b2 + I_unit * b1) <= tol && zero(c1)) {
        out.kind = RabiKind::JaynesCummings;
        out.params.g_coupling = 2.0 * b1.real();
        out.params.Delta = -c3.real();
        out.params.lambda = c0.real();
    }
    return out;
}

QuantizationReport quantization_check(const HeunParameters& h, double tol) {
    QuantizationReport r;
    r.value0 = 1.0 + h.kappa0 - 0.5 * h.mu;
    r.value1 = h.kappa1 - 0.5 * h.mu;
    auto dist = [](cplx v) { return std::hypot(v.real() - std::round(v.real()), v.imag()); };
    r.distance0 = dist(r.value0);
    r.distance1 = dist(r.value1);
    r.pass = r.distance0 <= tol && r.distance1 <= tol && std::round(r.value0.real()) >= 1.0 &&
             std::round(r.value1.real()) >= 1.0;
    return r;
}

}  // namespace ncho
