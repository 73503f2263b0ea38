#include "ncho/fuchsian.hpp"

#include <algorithm>
#include <cmath>

namespace ncho {

CMatrix FuchsianSystem::coefficient(cplx z) const {
    CMatrix s = CMatrix::Zero(residue_at_infinity.rows(), residue_at_infinity.cols());
    for (size_t j = 0; j < singular_points.size(); ++j) s += residues[j] / (z - singular_points[j]);
    return s;
}

int FuchsianSystem::index_of(cplx z, double tol) const {
    for (size_t j = 0; j < singular_points.size(); ++j)
        if (std::abs(singular_points[j] - z) <= tol * std::max(1.0, std::abs(z))) return static_cast<int>(j);
    return -1;
}

FuchsianSystem build_fuchsian(const NchoProblem& pr, cplx lambda) {
    return build_fuchsian(pr, decompose_pencil(pr), lambda);
}

FuchsianSystem build_fuchsian(const NchoProblem& pr, const PencilDecomposition& dec, cplx lambda) {
    FuchsianSystem sys;
    sys.mu = pr.mu;
    sys.lambda = lambda;
    sys.C = pr.C(lambda);
    sys.detB_zero = dec.detB_zero;
    sys.singular_points = dec.poles;
    sys.pencil_residues = dec.residues;
    sys.residue_at_infinity = CMatrix::Zero(pr.p, pr.p);
    for (size_t j = 0; j < dec.poles.size(); ++j) {
        const cplx a = dec.poles[j];
        CMatrix R = dec.residues[j] * (-pr.mu * (a * pr.B + 0.5 * pr.A) + sys.C);
        sys.residue_at_infinity -= R;
        sys.residues.push_back(std::move(R));
    }
    return sys;
}

CMatrix direct_coefficient(const NchoProblem& pr, cplx lambda, cplx z) {
    const CMatrix N = -pr.mu * z * pr.B - 0.5 * pr.mu * pr.A + pr.C(lambda);
    return pencil_at(pr, z).partialPivLu().solve(N);
}

CMatrix residue_at_infinity_contour(const NchoProblem& pr, cplx lambda, double radius, int points) {
    CMatrix acc = CMatrix::Zero(pr.p, pr.p);
    for (int k = 0; k < points; ++k) {
        const cplx z = std::polar(radius, 2.0 * M_PI * k / points);
        acc += direct_coefficient(pr, lambda, z) * z;
    }
    return -acc / static_cast<double>(points);
}

CMatrix residue_at_infinity_formula(const NchoProblem& pr, const PencilDecomposition& dec, cplx lambda) {
    CMatrix r = pr.mu * CMatrix::Identity(pr.p, pr.p);
    if (dec.detB_zero) {
        const int z = dec.index_of_zero();
        if (z < 0) throw Error(ErrorKind::ContractViolation, "det B = 0 but 0 is not a pole");
        r -= dec.residues[static_cast<size_t>(z)].adjoint() * (0.5 * pr.mu * pr.A + pr.C(lambda));
    }
    return r;
}

ExponentReport exponents_at(const FuchsianSystem& sys, const NchoProblem& pr, int j) {
    if (j < 0 || static_cast<size_t>(j) >= sys.singular_points.size())
        throw Error(ErrorKind::Dimension, "exponents_at: pole index out of range");
    const auto ju = static_cast<size_t>(j);
    const CMatrix& R = sys.residues[ju];
    ExponentReport rep;
    rep.exponents = eigen_general_small(R);
    rep.rank_residue = numerical_rank(R, 1e-8);
    if (sys.pencil_residues.empty()) return rep;

    const cplx a = sys.singular_points[ju];
    rep.kernel_dim = pr.p - numerical_rank(pencil_at(pr, a), 1e-8);
    rep.rank_ok = rep.rank_residue <= rep.kernel_dim;

    // P = X Y^dagger; the non-zero spectrum of R is -mu/2 + eig(Y^dagger C X).
    const CMatrix& P = sys.pencil_residues[ju];
    Eigen::JacobiSVD<CMatrix> svd(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int r = numerical_rank(P, 1e-8);
    const CMatrix X = svd.matrixU().leftCols(r) * svd.singularValues().head(r).cast<cplx>().asDiagonal();
    const CMatrix Y = svd.matrixV().leftCols(r);
    std::vector<cplx> expected(static_cast<size_t>(pr.p - r), cplx(0.0));
    if (r > 0) {
        const CMatrix small = Y.adjoint() * sys.C * X;
        for (const auto& e : eigen_general_small(small)) expected.push_back(e - 0.5 * sys.mu);
    }
    rep.shift_residual = multiset_distance(rep.exponents, expected);
    return rep;
}

FuchsianSystem transform_fuchsian(const Su11Element& g, const FuchsianSystem& sys) {
    FuchsianSystem out;
    out.mu = sys.mu;
    out.lambda = sys.lambda;
    out.C = sys.C;
    const auto p = sys.residue_at_infinity.rows();
    CMatrix total = CMatrix::Zero(p, p);
    double scale = sys.mu;
    for (size_t j = 0; j < sys.singular_points.size(); ++j) {
        total += sys.residues[j];
        scale += sys.residues[j].norm();
        const XPoint w = mobius_apply(g, XPoint{sys.singular_points[j], false});
        if (w.inf) continue;
        out.singular_points.push_back(w.z);
        out.residues.push_back(sys.residues[j]);
    }
    const XPoint ginf = mobius_apply(g, XPoint::infinity());
    const CMatrix extra = -(total + sys.mu * CMatrix::Identity(p, p));
    // The sum of residues carries rounding from every pole; a clean -mu I means no new point.
    if (!ginf.inf && extra.norm() > 1e-9 * scale) {
        out.singular_points.push_back(ginf.z);
        out.residues.push_back(extra);
    }
    out.residue_at_infinity = CMatrix::Zero(p, p);
    for (const auto& R : out.residues) out.residue_at_infinity -= R;
    return out;
}

}  // namespace ncho
