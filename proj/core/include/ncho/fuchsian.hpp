#pragma once

#include <vector>

#include "ncho/covariance.hpp"
#include "ncho/pencil.hpp"

namespace ncho {

// f' = sum_j R_j / (z - alpha_j) f
struct FuchsianSystem {
    double mu = 0.0;
    cplx lambda;
    std::vector<cplx> singular_points;
    std::vector<CMatrix> residues;
    CMatrix residue_at_infinity;
    // Pencil data the residues came from (empty after transform_fuchsian).
    std::vector<CMatrix> pencil_residues;
    CMatrix C;
    bool detB_zero = false;

    CMatrix coefficient(cplx z) const;  // sum_j R_j / (z - alpha_j)
    int index_of(cplx z, double tol = 1e-10) const;
};

FuchsianSystem build_fuchsian(const NchoProblem& pr, cplx lambda);
FuchsianSystem build_fuchsian(const NchoProblem& pr, const PencilDecomposition& dec, cplx lambda);

// Q(z)^{-1} N(z) evaluated directly from the matrices, no partial fractions.
CMatrix direct_coefficient(const NchoProblem& pr, cplx lambda, cplx z);

// Residue at infinity by a contour integral of the direct coefficient.
CMatrix residue_at_infinity_contour(const NchoProblem& pr, cplx lambda, double radius, int points = 256);

// mu I, or mu I - P0^dagger (mu A / 2 + C) when det B = 0.
CMatrix residue_at_infinity_formula(const NchoProblem& pr, const PencilDecomposition& dec, cplx lambda);

struct ExponentReport {
    std::vector<cplx> exponents;
    int rank_residue = 0;
    int kernel_dim = 0;
    bool rank_ok = false;
    double shift_residual = 0.0;  // multiset gap to {0} u {-mu/2 + eig(P C | Im P)}
};

ExponentReport exponents_at(const FuchsianSystem& sys, const NchoProblem& pr, int j);

FuchsianSystem transform_fuchsian(const Su11Element& g, const FuchsianSystem& sys);

}  // namespace ncho
