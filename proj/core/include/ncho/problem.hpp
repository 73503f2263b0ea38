#pragma once

#include "ncho/linalg.hpp"

namespace ncho {

// Matrix data of (Bz^2 + Az + B^dagger) f' = (-mu B z - mu A/2 + C) f with the
// spectral family C(lambda) = C0 + (lambda/2) W. W is the identity for user
// problems; standardization transforms it together with C.
struct NchoProblem {
    int p = 0;
    double mu = 0.0;
    CMatrix A, B, C0, W;

    CMatrix C(cplx lambda) const { return C0 + (0.5 * lambda) * W; }
    bool identity_weight(double tol = 1e-12) const;

    // Throws Dimension / ContractViolation when the invariants fail.
    void validate() const;
};

NchoProblem make_problem(double mu, const CMatrix& A, const CMatrix& B, const CMatrix& C0);

double mu_from_harmonic(int n, int k);

struct ABPair {
    CMatrix A, B;
};
struct A123 {
    CMatrix A1, A2, A3;
};

ABPair ab_from_a123(const CMatrix& A1, const CMatrix& A2, const CMatrix& A3);
A123 a123_from_ab(const CMatrix& A, const CMatrix& B);

// Pauli matrices, and the two-level oscillator with A = diag(beta, gamma), B = (i/2) [[0, 1], [-1, 0]]
// and an eta-dependent off-diagonal C0.
CMatrix pauli(int k);
NchoProblem eta_shifted_ncho(double beta, double gamma, double eta, double mu);

}  // namespace ncho
