#pragma once

#include <vector>

#include "ncho/pencil.hpp"
#include "ncho/truncation.hpp"

namespace ncho {

// Solution of Y' = sum_j R_j/(z - s_j) Y as a Frobenius series at s_j:
// Y = (z - s_j)^rho sum_k u_k (z - s_j)^k, evaluated at z - s_j = h.
CVector frobenius_series(const std::vector<cplx>& poles, const std::vector<CMatrix>& residues, size_t j, cplx rho,
                         const CVector& u0, cplx h);

// Taylor continuation of a fundamental block F from z0 to z1 along a straight path.
CMatrix taylor_transport(const std::vector<cplx>& poles, const std::vector<CMatrix>& residues, cplx z0, cplx z1,
                         const CMatrix& F, int order = 30);

struct ConnectionValue {
    cplx T;
    bool resonant = false;
    bool averaged = false;
};

// Entire function of lambda whose real zeros are the eigenvalues. It multiplies the
// connection coefficient between the regular solution at the origin and the
// dominant local solution at the inner pole by reciprocal Gamma factors.
class ConnectionDeterminant {
public:
    explicit ConnectionDeterminant(const NchoProblem& pr);

    cplx operator()(cplx lambda) const { return evaluate(lambda).T; }
    ConnectionValue evaluate(cplx lambda) const;
    cplx raw(cplx lambda) const;  // before the constant phase is divided out

    int configuration() const { return config_; }
    const NchoProblem& working_problem() const { return work_; }
    double resonance_distance(cplx lambda) const;

private:
    enum { kScalarRegular = 1, kScalarOrigin = 2, kPairOriginInner = 3, kPairOrigin = 4 };
    cplx raw_unchecked(cplx lambda) const;
    std::vector<CMatrix> residues_at(cplx lambda) const;
    cplx exponent_at(size_t j, cplx lambda) const;

    NchoProblem work_;
    PencilDecomposition dec_;
    int config_ = 0;
    int i0_ = -1, ia_ = -1;  // origin and inner pole indices
    std::vector<CVector> x_, y_;  // P_j = x_j y_j^dagger
    cplx phase_{1.0, 0.0};
};

cplx connection_determinant(const NchoProblem& pr, cplx lambda);

struct RefineResult {
    double lambda = 0.0;
    double residual = 0.0;  // |T(lambda)|
    int iterations = 0;
    bool resonant = false;
    double bracket_lo = 0.0, bracket_hi = 0.0;
};

RefineResult refine_eigenvalue(const ConnectionDeterminant& T, double seed);
RefineResult refine_eigenvalue(const NchoProblem& pr, double seed);

SpectrumResult spectrum_connection(const NchoProblem& pr, int target_count, double tol = 1e-10);

}  // namespace ncho
