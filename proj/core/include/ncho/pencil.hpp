#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncho/problem.hpp"

namespace ncho {

CMatrix pencil_at(const NchoProblem& pr, cplx z);  // B z^2 + A z + B^dagger

// Partial fractions of (Bz^2 + Az + B^dagger)^{-1} = sum_j P_j / (z - alpha_j).
struct PencilDecomposition {
    std::vector<cplx> det_coeffs;  // det_coeffs[k] multiplies z^k
    std::vector<cplx> poles;
    std::vector<CMatrix> residues;
    std::vector<int> root_multiplicity;  // multiplicity as a root of det
    bool zero_is_pole = false;
    bool detB_zero = false;

    int index_of_zero() const;  // -1 when 0 is not a pole
    CMatrix inverse_at(cplx z) const;
};

PencilDecomposition decompose_pencil(const NchoProblem& pr);

struct LemmaCheck {
    std::string name;
    bool applicable = true;  // false for the det B branch that does not apply
    bool pass = false;
    double residual = 0.0;
};

struct LemmaReport {
    std::vector<LemmaCheck> checks;  // six partial fraction identities, in order
    double sampled_identity = 0.0;
    bool all_pass() const;
};

LemmaReport verify_pencil_lemma(const PencilDecomposition& dec, const NchoProblem& pr, double tol = 1e-9,
                                std::uint64_t seed = 0);

struct PositivityResult {
    double margin = 0.0;
    double argmin = 0.0;
    double certified = 0.0;  // margin minus the Lipschitz correction
    int grid_size = 0;
};

PositivityResult positivity_margin(const NchoProblem& pr, int grid_size = 1024);

// Hash of the problem data, used to seed sampling deterministically.
std::uint64_t problem_hash(const NchoProblem& pr);

}  // namespace ncho
