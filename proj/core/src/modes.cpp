#include "ncho/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncho/truncation.hpp"

namespace ncho {

namespace {

cplx i_power(int m) {
    switch (m & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// i^m (m!/(mu)_m) L_m^{(mu-1)}(x) for m < count.
std::vector<cplx> mode_polynomials(int count, double mu, double x) {
    std::vector<cplx> out(static_cast<size_t>(std::max(count, 0)));
    const double a = mu - 1.0;
    double Lkm1 = 0.0, Lk = 1.0, w = 1.0;
    for (int k = 0; k < count; ++k) {
        out[static_cast<size_t>(k)] = i_power(k) * (w * Lk);
        const double Lnext = ((2.0 * k + 1.0 + a - x) * Lk - (k + a) * Lkm1) / (k + 1.0);
        Lkm1 = Lk;
        Lk = Lnext;
        w *= (k + 1.0) / (mu + k);
    }
    return out;
}

struct Eigenpair {
    double value = 0.0;
    int index = 0;
    CVector v;  // symmetrized coefficients, unit norm
};

Eigenpair solve_pair(const NchoProblem& pr, int M, const double* lambda, int index) {
    const auto op = build_truncated(pr, M);
    const int n = op.size();
    if (lambda) {
        int k = std::min(n, 16);
        RVector vals = lowest_eigenpairs(op, k).values;
        while (vals(k - 1) < *lambda + 1e-6 * (1.0 + std::abs(*lambda)) && k < n) {
            k = std::min(n, 2 * k);
            vals = lowest_eigenpairs(op, k).values;
        }
        Eigen::Index best = 0;
        (vals.array() - *lambda).abs().minCoeff(&best);
        index = static_cast<int>(best);
    }
    if (index + 1 > n) throw Error(ErrorKind::ContractViolation, "eigenfunction: index beyond truncation size");
    const BandEigen be = lowest_eigenpairs(op, index + 1, true);
    Eigenpair out;
    out.value = be.values(index);
    out.index = index;
    out.v = be.vectors.col(index);
    return out;
}

CVector pad(const CVector& v, Eigen::Index n) {
    CVector out = CVector::Zero(n);
    out.head(v.size()) = v;
    return out;
}

EigenProfile build_profile(const NchoProblem& pr, const double* lambda, int index, const std::vector<double>& t_grid) {
    pr.validate();
    Eigenpair prev;
    double change = 1e300;
    int M = 64;
    for (;; M *= 2) {
        Eigenpair cur = solve_pair(pr, M, lambda, index);
        if (prev.v.size() > 0) {
            const CVector old = pad(prev.v, cur.v.size());
            const cplx ov = old.dot(cur.v);
            const cplx ph = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
            change = (cur.v / ph - old).norm();
            const bool done = change < 1e-9 && std::abs(cur.value - prev.value) < 1e-10;
            prev = std::move(cur);
            if (done || M >= 1024) break;
        } else {
            prev = std::move(cur);
        }
    }
    if (lambda && std::abs(*lambda - prev.value) > 1e-6 * (1.0 + std::abs(*lambda))) {
        std::ostringstream os;
        os << "eigenfunction: " << *lambda << " is not an eigenvalue (nearest " << prev.value << ")";
        throw Error(ErrorKind::NotAnEigenvalue, os.str());
    }

    const int p = pr.p;
    CVector v = prev.v;
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v(big)) / std::abs(v(big));

    EigenProfile out;
    out.lambda = prev.value;
    out.index = prev.index;
    out.M = M;
    out.profile_change = change;
    out.t = t_grid;
    out.coefficients.resize(v.size());
    for (int m = 0; m < M; ++m) {
        const double s = std::sqrt(monomial_norm(m, pr.mu));
        out.coefficients.segment(m * p, p) = v.segment(m * p, p) / s;
        out.coeff_norms.push_back(out.coefficients.segment(m * p, p).norm());
    }
    for (double t : t_grid) {
        const auto poly = mode_polynomials(M, pr.mu, 2.0 * t);
        CVector f = CVector::Zero(p);
        for (int m = 0; m < M; ++m) f += out.coefficients.segment(m * p, p) * poly[static_cast<size_t>(m)];
        out.values.push_back(f * std::exp(-t));
    }

    const double top = *std::max_element(out.coeff_norms.begin(), out.coeff_norms.end());
    int hi = 0;
    for (int m = 0; m < M; ++m)
        if (out.coeff_norms[static_cast<size_t>(m)] > 1e-12 * top) hi = m;
    const int lo = std::min(5, hi / 2);
    if (hi - lo >= 2 && out.coeff_norms[static_cast<size_t>(lo)] > 0.0)
        out.tail_ratio =
            std::pow(out.coeff_norms[static_cast<size_t>(hi)] / out.coeff_norms[static_cast<size_t>(lo)], 1.0 / (hi - lo));
    return out;
}

}  // namespace

double monomial_norm(int m, double mu) {
    double w = 1.0;
    for (int k = 0; k < m; ++k) w *= (k + 1.0) / (mu + k);
    return w;
}

cplx laguerre_mode(int m, double mu, double t) {
    return mode_polynomials(m + 1, mu, 2.0 * t)[static_cast<size_t>(m)] * std::exp(-t);
}

std::vector<cplx> laguerre_modes(int count, double mu, double t) {
    auto v = mode_polynomials(count, mu, 2.0 * t);
    const double e = std::exp(-t);
    for (auto& x : v) x *= e;
    return v;
}

GaussRule gauss_laguerre(int n, double alpha) {
    if (n < 1 || alpha <= -1.0) throw Error(ErrorKind::ContractViolation, "gauss_laguerre: need n >= 1, alpha > -1");
    RVector diag(n), sub(std::max(n - 1, 1));
    for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k * (k + alpha));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    // Squared eigenvector components lose relative accuracy at the large nodes, so the
    // weights come from the Christoffel formula at Newton-polished nodes instead.
    auto laguerre = [&](int deg, double x, double& prev) {
        double a = 0.0, b = 1.0;
        for (int k = 0; k < deg; ++k) {
            const double c = ((2.0 * k + 1.0 + alpha - x) * b - (k + alpha) * a) / (k + 1.0);
            a = b;
            b = c;
        }
        prev = a;
        return b;
    };
    double scale = 1.0;  // (alpha+1)_n / n!
    for (int k = 0; k < n; ++k) scale *= (alpha + 1.0 + k) / (k + 1.0);
    GaussRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes(i), prev = 0.0;
        for (int it = 0; it < 3; ++it) {
            const double L = laguerre(n, x, prev);
            const double dL = (n * L - (n + alpha) * prev) / x;
            if (dL != 0.0) x -= L / dL;
        }
        rule.nodes(i) = x;
        const double L1 = laguerre(n + 1, x, prev);
        rule.weights(i) = scale * x / ((n + 1.0) * (n + 1.0) * L1 * L1);
    }
    return rule;
}

CMatrix laguerre_gram(int size, double mu, int nodes) {
    // With x = 2t the measure t^{mu-1} e^{-2t} dt becomes x^{mu-1} e^{-x} dx.
    const GaussRule rule = gauss_laguerre(nodes, mu - 1.0);
    CMatrix G = CMatrix::Zero(size, size);
    for (int k = 0; k < nodes; ++k) {
        const auto poly = mode_polynomials(size, mu, rule.nodes(k));
        const Eigen::Map<const CVector> v(poly.data(), size);
        G += rule.weights(k) * v * v.adjoint();
    }
    return G;
}

EigenProfile eigenfunction_profile(const NchoProblem& pr, double lambda, const std::vector<double>& t_grid) {
    return build_profile(pr, &lambda, 0, t_grid);
}

EigenProfile eigenfunction_profile_index(const NchoProblem& pr, int index, const std::vector<double>& t_grid) {
    if (index < 0) throw Error(ErrorKind::ContractViolation, "eigenfunction: index must be non-negative");
    return build_profile(pr, nullptr, index, t_grid);
}

}  // namespace ncho
