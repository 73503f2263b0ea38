#include "ncho/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "ncho/pencil.hpp"

namespace ncho {

Su11Element Su11Element::to_origin(cplx beta) {
    if (std::abs(beta) >= 1.0) throw Error(ErrorKind::ContractViolation, "to_origin: point must lie in the unit disk");
    const double a = 1.0 / std::sqrt(1.0 - std::norm(beta));
    return {a, -beta * a};
}

Su11Element compose(const Su11Element& g2, const Su11Element& g1) {
    return {g2.a * g1.a + g2.b * std::conj(g1.b), g2.a * g1.b + g2.b * std::conj(g1.a)};
}

XPoint mobius_apply(const Su11Element& g, const XPoint& z) {
    if (z.inf) {
        if (g.b == 0.0) return XPoint::infinity();
        return {g.a / std::conj(g.b), false};
    }
    const cplx den = std::conj(g.b) * z.z + std::conj(g.a);
    const double scale = std::abs(g.b) * std::abs(z.z) + std::abs(g.a);
    if (std::abs(den) <= 1e-14 * scale) return XPoint::infinity();
    return {(g.a * z.z + g.b) / den, false};
}

ABPairT transform_ab(const Su11Element& g, const CMatrix& A, const CMatrix& B) {
    if (!is_hermitian(A)) throw Error(ErrorKind::ContractViolation, "transform_ab: A is not Hermitian");
    const cplx a = g.a, b = g.b, ac = std::conj(g.a), bc = std::conj(g.b);
    ABPairT out;
    out.A = (std::norm(a) + std::norm(b)) * A - 2.0 * (ac * b * B + a * bc * B.adjoint());
    out.A = 0.5 * (out.A + out.A.adjoint());
    out.B = -(ac * bc) * A + ac * ac * B + bc * bc * B.adjoint();
    return out;
}

NchoProblem transform_problem(const Su11Element& g, const NchoProblem& pr) {
    NchoProblem out = pr;
    auto ab = transform_ab(g, pr.A, pr.B);
    out.A = ab.A;
    out.B = ab.B;
    return out;
}

namespace {

void require_unitary(const CMatrix& U) {
    if (U.rows() != U.cols() || (U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).norm() > 1e-10)
        throw Error(ErrorKind::ContractViolation, "gauge_unitary: U is not unitary");
}

CMatrix congruence(const CMatrix& M, const CMatrix& X) { return M * X * M.adjoint(); }

CMatrix hermitize(const CMatrix& X) { return 0.5 * (X + X.adjoint()); }

NchoProblem apply_congruence(const CMatrix& M, const NchoProblem& pr) {
    NchoProblem out = pr;
    out.A = hermitize(congruence(M, pr.A));
    out.B = congruence(M, pr.B);
    out.C0 = hermitize(congruence(M, pr.C0));
    out.W = hermitize(congruence(M, pr.W));
    return out;
}

}  // namespace

GaugeResult gauge_unitary(const CMatrix& U, const CMatrix& A, const CMatrix& B, const CMatrix& C) {
    require_unitary(U);
    return {hermitize(congruence(U, A)), congruence(U, B), hermitize(congruence(U, C))};
}

NchoProblem gauge_problem(const CMatrix& U, const NchoProblem& pr) {
    require_unitary(U);
    return apply_congruence(U, pr);
}

GaugeResult normalize_a(const CMatrix& A, const CMatrix& B, const CMatrix& C) {
    if (!is_positive_definite(A)) throw Error(ErrorKind::ContractViolation, "normalize_a: A is not positive definite");
    const CMatrix S = hermitian_inv_sqrt(A);
    return {CMatrix::Identity(A.rows(), A.cols()), S * B * S, hermitize(S * C * S)};
}

NchoProblem normalize_problem(const NchoProblem& pr, CMatrix* inv_sqrt) {
    if (!is_positive_definite(pr.A))
        throw Error(ErrorKind::ContractViolation, "normalize_a: A is not positive definite");
    const CMatrix S = hermitian_inv_sqrt(pr.A);
    if (inv_sqrt) *inv_sqrt = S;
    NchoProblem out = apply_congruence(S, pr);
    out.A = CMatrix::Identity(pr.p, pr.p);
    return out;
}

NchoProblem replay(const Transcript& t, const NchoProblem& pr) {
    NchoProblem cur = pr;
    for (const auto& s : t) {
        switch (s.kind) {
            case TranscriptStep::Kind::Mobius: cur = transform_problem(s.g, cur); break;
            case TranscriptStep::Kind::Normalize:
                cur = apply_congruence(s.M, cur);
                cur.A = CMatrix::Identity(cur.p, cur.p);
                break;
            case TranscriptStep::Kind::Gauge: cur = apply_congruence(s.M, cur); break;
        }
    }
    return cur;
}

NchoProblem replay_inverse(const Transcript& t, const NchoProblem& std_pr) {
    NchoProblem cur = std_pr;
    for (auto it = t.rbegin(); it != t.rend(); ++it) {
        switch (it->kind) {
            case TranscriptStep::Kind::Mobius: cur = transform_problem(it->g.inverse(), cur); break;
            case TranscriptStep::Kind::Normalize: cur = apply_congruence(it->M.inverse(), cur); break;
            case TranscriptStep::Kind::Gauge: cur = apply_congruence(it->M.adjoint(), cur); break;
        }
    }
    return cur;
}

namespace {

// Phase convention: largest-modulus component of each column real positive.
void fix_column_phases(CMatrix& U) {
    for (Eigen::Index c = 0; c < U.cols(); ++c) {
        Eigen::Index best = 0;
        for (Eigen::Index r = 1; r < U.rows(); ++r)
            if (std::abs(U(r, c)) > std::abs(U(best, c)) + 1e-12) best = r;
        const cplx ph = U(best, c) / std::abs(U(best, c));
        U.col(c) /= ph;
    }
}

bool modulus_then_arg_less(cplx x, cplx y) {
    const double dx = std::abs(x), dy = std::abs(y);
    if (std::abs(dx - dy) > 1e-10 * std::max(1.0, std::max(dx, dy))) return dx < dy;
    return std::arg(x) < std::arg(y);
}

}  // namespace

bool is_std_form(const NchoProblem& pr, double tol) {
    if (pr.p != 2) return false;
    if ((pr.A - CMatrix::Identity(2, 2)).norm() > tol) return false;
    if (pr.B.row(1).norm() > tol) return false;
    const cplx b1 = pr.B(0, 0), b2 = pr.B(0, 1);
    return std::abs(b1) > tol && 2.0 * std::abs(b1) + std::norm(b2) < 1.0;
}

StandardForm standardize_p2(const NchoProblem& pr) {
    if (pr.p != 2) throw Error(ErrorKind::Dimension, "standardize_p2: p must be 2");
    pr.validate();
    if (positivity_margin(pr, 1024).margin <= 0.0)
        throw Error(ErrorKind::Positivity, "standardize_p2: positivity condition fails");
    const auto dec = decompose_pencil(pr);
    if (dec.poles.size() < 3)
        throw Error(ErrorKind::NotGeneric, "standardize_p2: fewer than 3 distinct roots of det(Bz^2+Az+B^dagger)");

    std::vector<cplx> inner;
    for (const auto& a : dec.poles)
        if (std::abs(a) < 1.0) inner.push_back(a);
    std::sort(inner.begin(), inner.end(), modulus_then_arg_less);
    if (inner.size() != 2) throw Error(ErrorKind::NotGeneric, "standardize_p2: expected two inner roots");

    Transcript t;
    Su11Element g;
    cplx other;
    if (!dec.detB_zero) {
        g = Su11Element::to_origin(inner[0]);
        other = mobius_apply(g, inner[1]);
    } else {
        other = inner[0] == 0.0 ? inner[1] : inner[0];
    }
    if (std::abs(other) > 0.0 && std::arg(other) != 0.0) g = compose(Su11Element::rotation(-std::arg(other)), g);
    if (g.b != 0.0 || g.a != 1.0) t.push_back({TranscriptStep::Kind::Mobius, g, CMatrix()});

    NchoProblem cur = replay(t, pr);
    CMatrix S;
    normalize_problem(cur, &S);
    t.push_back({TranscriptStep::Kind::Normalize, Su11Element{}, S});
    cur = replay(t, pr);

    Eigen::JacobiSVD<CMatrix> svd(cur.B, Eigen::ComputeFullU);
    CMatrix U = svd.matrixU();
    fix_column_phases(U);
    t.push_back({TranscriptStep::Kind::Gauge, Su11Element{}, CMatrix(U.adjoint())});

    StandardForm out;
    out.transcript = t;
    out.problem = replay(t, pr);
    out.b1 = out.problem.B(0, 0);
    out.b2 = out.problem.B(0, 1);
    if (std::abs(out.b1) < 1e-12)
        throw Error(ErrorKind::NotGeneric, "standardize_p2: b1 vanishes after the gauge step");
    const cplx b1 = out.b1;
    const double nb2 = std::norm(out.b2);
    const cplx disc = std::sqrt(cplx((1.0 - nb2) * (1.0 - nb2) - 4.0 * std::norm(b1)));
    cplx alpha = (-1.0 + nb2 + disc) / (2.0 * b1);
    if (std::abs(alpha) >= 1.0) alpha = (-1.0 + nb2 - disc) / (2.0 * b1);
    out.alpha = alpha;
    return out;
}

}  // namespace ncho
