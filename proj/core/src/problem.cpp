#include "ncho/problem.hpp"

#include <cmath>
#include <string>

namespace ncho {

bool NchoProblem::identity_weight(double tol) const {
    return (W - CMatrix::Identity(p, p)).norm() <= tol;
}

void NchoProblem::validate() const {
    if (p <= 0) throw Error(ErrorKind::Dimension, "problem: p must be positive");
    auto check = [&](const CMatrix& m, const char* name) {
        if (m.rows() != p || m.cols() != p)
            throw Error(ErrorKind::Dimension, std::string("problem: ") + name + " must be p x p");
        if (!all_finite(m)) throw Error(ErrorKind::ContractViolation, std::string("problem: ") + name + " not finite");
    };
    check(A, "A");
    check(B, "B");
    check(C0, "C0");
    check(W, "W");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorKind::ContractViolation, "problem: mu must be positive");
    if (!is_hermitian(A)) throw Error(ErrorKind::ContractViolation, "problem: A is not Hermitian");
    if (!is_hermitian(C0)) throw Error(ErrorKind::ContractViolation, "problem: C0 is not Hermitian");
    if (!is_hermitian(W)) throw Error(ErrorKind::ContractViolation, "problem: W is not Hermitian");
}

NchoProblem make_problem(double mu, const CMatrix& A, const CMatrix& B, const CMatrix& C0) {
    NchoProblem pr;
    pr.p = static_cast<int>(A.rows());
    pr.mu = mu;
    pr.A = A;
    pr.B = B;
    pr.C0 = C0;
    pr.W = CMatrix::Identity(pr.p, pr.p);
    pr.validate();
    return pr;
}

double mu_from_harmonic(int n, int k) { return k + 0.5 * n; }

ABPair ab_from_a123(const CMatrix& A1, const CMatrix& A2, const CMatrix& A3) {
    if (A1.rows() != A2.rows() || A1.rows() != A3.rows() || A1.rows() != A1.cols() ||
        A2.rows() != A2.cols() || A3.rows() != A3.cols())
        throw Error(ErrorKind::Dimension, "ab_from_a123: sizes differ");
    if (!is_hermitian(A1) || !is_hermitian(A2) || !is_hermitian(A3))
        throw Error(ErrorKind::ContractViolation, "ab_from_a123: inputs must be Hermitian");
    return {A1 + A3, 0.5 * (-I_unit * A1 + A2 + I_unit * A3)};
}

A123 a123_from_ab(const CMatrix& A, const CMatrix& B) {
    const CMatrix skew = B - B.adjoint();
    return {0.5 * (A + I_unit * skew), B + B.adjoint(), 0.5 * (A - I_unit * skew)};
}

CMatrix pauli(int k) {
    CMatrix s(2, 2);
    switch (k) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, -I_unit, I_unit, 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: s = CMatrix::Identity(2, 2);
    }
    return s;
}

NchoProblem eta_shifted_ncho(double beta, double gamma, double eta, double mu) {
    CMatrix A(2, 2), B(2, 2), C0(2, 2);
    A << beta, 0, 0, gamma;
    B << 0, 0.5 * I_unit, -0.5 * I_unit, 0;
    const double s = std::sqrt(std::max(0.0, beta * gamma - 1.0));
    C0 << 0, I_unit * eta * s, -I_unit * eta * s, 0;
    return make_problem(mu, A, B, C0);
}

}  // namespace ncho
