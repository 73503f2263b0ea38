#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ncho/error.hpp"

namespace ncho {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

constexpr cplx I_unit{0.0, 1.0};

bool is_hermitian(const CMatrix& m, double tol = 1e-10);
bool is_positive_definite(const CMatrix& m, double tol = 0.0);
bool all_finite(const CMatrix& m);

// Frobenius norm of (m - m^dagger), relative to max(1, |m|).
double hermitian_defect(const CMatrix& m);

struct AdjDet {
    CMatrix adjugate;
    cplx determinant;
};

// Cofactor expansion up to 4x4, LU-based cofactors above. Max dimension 8.
AdjDet adjugate_and_det(const CMatrix& m);
CMatrix adjugate(const CMatrix& m);
cplx determinant(const CMatrix& m);

struct Root {
    cplx value;
    int multiplicity = 1;
};

// coeffs[k] multiplies z^k. Roots are merged when they are closer than
// tol * max(1, |root|), or when they form a numerically split multiple root.
std::vector<Root> poly_roots(const std::vector<cplx>& coeffs, double tol = 1e-8);

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z);
std::vector<cplx> poly_derivative(const std::vector<cplx>& coeffs);

struct HermitianEigen {
    RVector values;
    CMatrix vectors;  // columns, empty when not requested
};

HermitianEigen eigen_hermitian(const CMatrix& m, bool vectors = false);

// Eigenvalues of a small general matrix, sorted by real then imaginary part.
std::vector<cplx> eigen_general_small(const CMatrix& m);

// Unique Hermitian positive definite square root and its inverse.
CMatrix hermitian_sqrt(const CMatrix& m);
CMatrix hermitian_inv_sqrt(const CMatrix& m);

// Numerical rank from singular values above rel_tol * max(1, sigma_max).
int numerical_rank(const CMatrix& m, double rel_tol = 1e-8);

// 1/Gamma(z) for complex z, entire.
cplx rgamma(cplx z);

// Multiset distance: greedy matching of a against b, max pairwise gap.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

}  // namespace ncho
