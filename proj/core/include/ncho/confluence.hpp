#pragma once

#include <vector>

#include "ncho/heun.hpp"

namespace ncho {

// Ladder data of the limiting model: H = n A~ - C0~ + B~ a^dagger + B~^dagger a.
struct RabiBlocks {
    CMatrix A, B, C0;
};

RabiBlocks rabi_blocks(const RabiParameters& r);

// Lowest eigenvalues of the number-basis truncation, doubling the size until converged.
std::vector<double> rabi_truncated(const RabiBlocks& rb, int count, double tol = 1e-12, int N0 = 64, int Nmax = 8192);
std::vector<double> rabi_truncated(const RabiParameters& r, int count, double tol = 1e-12);

// B = B~/sqrt(mu), C0 = C0~ + (mu/2) A.
NchoProblem ncho_from_rabi(const RabiBlocks& rb, double mu);

struct ConfluenceRow {
    double mu = 0.0;
    double deviation = 0.0;  // max_k |lambda_k/2 - E_k|
    std::vector<double> ncho_half;
    std::vector<double> rabi;
};

std::vector<ConfluenceRow> confluence_sweep(const RabiParameters& r, const std::vector<double>& mu_list, int count);

}  // namespace ncho
