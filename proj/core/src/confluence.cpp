#include "ncho/confluence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncho/truncation.hpp"

namespace ncho {

RabiBlocks rabi_blocks(const RabiParameters& r) {
    RabiBlocks rb;
    rb.A = r.omega * CMatrix::Identity(2, 2);
    rb.B = r.g_coupling * pauli(1);
    rb.C0 = -r.Delta * pauli(3) - r.eps_bias * pauli(1);
    return rb;
}

std::vector<double> rabi_truncated(const RabiBlocks& rb, int count, double tol, int N0, int Nmax) {
    if (count < 1) throw Error(ErrorKind::ContractViolation, "rabi_truncated: count must be >= 1");
    RVector prev;
    for (int N = N0; N <= Nmax; N *= 2) {
        std::vector<CMatrix> diag, lower;
        for (int n = 0; n < N; ++n) {
            diag.push_back(static_cast<double>(n) * rb.A - rb.C0);
            if (n + 1 < N) lower.push_back(std::sqrt(n + 1.0) * rb.B);
        }
        if (count > N * static_cast<int>(rb.A.rows())) continue;
        const RVector vals = block_tridiagonal_lowest(diag, lower, count, false).values;
        if (prev.size() == vals.size() && (vals - prev).cwiseAbs().maxCoeff() < tol)
            return {vals.data(), vals.data() + vals.size()};
        prev = vals;
    }
    throw Error(ErrorKind::Convergence, "rabi_truncated: spectrum did not converge");
}

std::vector<double> rabi_truncated(const RabiParameters& r, int count, double tol) {
    return rabi_truncated(rabi_blocks(r), count, tol);
}

NchoProblem ncho_from_rabi(const RabiBlocks& rb, double mu) {
    return make_problem(mu, rb.A, rb.B / std::sqrt(mu), rb.C0 + 0.5 * mu * rb.A);
}

std::vector<ConfluenceRow> confluence_sweep(const RabiParameters& r, const std::vector<double>& mu_list, int count) {
    if (count < 1) throw Error(ErrorKind::ContractViolation, "confluence_sweep: count must be >= 1");
    const RabiBlocks rb = rabi_blocks(r);
    const auto E = rabi_truncated(rb, count);
    std::vector<ConfluenceRow> rows;
    for (double mu : mu_list) {
        ConfluenceRow row;
        row.mu = mu;
        row.rabi = E;
        const auto spec = spectrum_truncated(ncho_from_rabi(rb, mu), count, 1e-12);
        for (size_t k = 0; k < spec.eigenvalues.size(); ++k) {
            row.ncho_half.push_back(0.5 * spec.eigenvalues[k]);
            row.deviation = std::max(row.deviation, std::abs(row.ncho_half.back() - E[k]));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ncho
