#pragma once

#include <string>
#include <vector>

#include "ncho/problem.hpp"

namespace ncho {

// Symmetrized ladder operator L - 2 C0 on span{z^m u : m < M}.
// Block (m, m) = A (2m + mu) - 2 C0, block (m+1, m) = 2 B sqrt((m+1)(m+mu)),
// block (m, m+1) = its adjoint.
struct TruncatedOperator {
    int M = 0;
    int p = 0;
    double mu = 0.0;
    CMatrix A, B, C0;

    int size() const { return p * M; }
    int bandwidth() const { return 2 * p - 1; }
    CMatrix diagonal_block(int m) const;
    CMatrix lower_block(int m) const;  // block (m+1, m)
    CMatrix assemble() const;
};

TruncatedOperator build_truncated(const NchoProblem& pr, int M);

// Generic block tridiagonal Hermitian operator: diag[m] at (m, m), lower[m] at (m+1, m).
struct BandEigen {
    RVector values;
    CMatrix vectors;  // columns; empty when not requested
};

BandEigen block_tridiagonal_lowest(const std::vector<CMatrix>& diag, const std::vector<CMatrix>& lower, int count,
                                   bool vectors);

BandEigen lowest_eigenpairs(const TruncatedOperator& op, int count, bool vectors = false);

struct SpectrumResult {
    std::string method;  // "truncation" or "connection"
    std::vector<double> eigenvalues;
    std::vector<double> estimates;  // change under M -> 2M, or |T(lambda)|
    std::vector<int> orders;        // truncation orders visited
    std::vector<std::string> status;
    std::vector<bool> resonant;
};

SpectrumResult spectrum_truncated(const NchoProblem& pr, int target_count, double tol = 1e-10, int M0 = 64,
                                  int Mmax = 8192);

}  // namespace ncho
