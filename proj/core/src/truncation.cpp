#include "ncho/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace ncho {

CMatrix TruncatedOperator::diagonal_block(int m) const { return A * (2.0 * m + mu) - 2.0 * C0; }

CMatrix TruncatedOperator::lower_block(int m) const { return 2.0 * std::sqrt((m + 1.0) * (m + mu)) * B; }

CMatrix TruncatedOperator::assemble() const {
    CMatrix L = CMatrix::Zero(size(), size());
    for (int m = 0; m < M; ++m) {
        L.block(m * p, m * p, p, p) = diagonal_block(m);
        if (m + 1 < M) {
            const CMatrix S = lower_block(m);
            L.block((m + 1) * p, m * p, p, p) = S;
            L.block(m * p, (m + 1) * p, p, p) = S.adjoint();
        }
    }
    return L;
}

TruncatedOperator build_truncated(const NchoProblem& pr, int M) {
    pr.validate();
    if (M < 8) throw Error(ErrorKind::ContractViolation, "build_truncated: M must be at least 8");
    if (!pr.identity_weight())
        throw Error(ErrorKind::ContractViolation, "build_truncated: spectral weight must be the identity");
    TruncatedOperator op;
    op.M = M;
    op.p = pr.p;
    op.mu = pr.mu;
    op.A = pr.A;
    op.B = pr.B;
    op.C0 = pr.C0;
    return op;
}

BandEigen block_tridiagonal_lowest(const std::vector<CMatrix>& diag, const std::vector<CMatrix>& lower, int count,
                                   bool vectors) {
    const int M = static_cast<int>(diag.size());
    if (M == 0) throw Error(ErrorKind::Dimension, "block_tridiagonal_lowest: empty operator");
    const int p = static_cast<int>(diag[0].rows());
    const int n = p * M;
    if (count < 1 || count > n) throw Error(ErrorKind::ContractViolation, "block_tridiagonal_lowest: bad count");
    const int kd = std::max(0, 2 * p - 1);
    const int ldab = kd + 1;
    // Lower band storage, column major: ab[(i - j) + j * ldab] = L(i, j) for i >= j.
    std::vector<lapack_complex_double> ab(static_cast<size_t>(ldab) * n, cplx(0.0, 0.0));
    auto put = [&](int i, int j, cplx v) {
        ab[static_cast<size_t>(i - j) + static_cast<size_t>(j) * ldab] = v;
    };
    for (int m = 0; m < M; ++m) {
        const CMatrix D = 0.5 * (diag[static_cast<size_t>(m)] + diag[static_cast<size_t>(m)].adjoint());
        for (int c = 0; c < p; ++c)
            for (int r = c; r < p; ++r) put(m * p + r, m * p + c, D(r, c));
        if (m + 1 < M)
            for (int c = 0; c < p; ++c)
                for (int r = 0; r < p; ++r) put((m + 1) * p + r, m * p + c, lower[static_cast<size_t>(m)](r, c));
    }
    const char jobz = vectors ? 'V' : 'N';
    std::vector<lapack_complex_double> q(vectors ? static_cast<size_t>(n) * n : 1);
    std::vector<lapack_complex_double> z(vectors ? static_cast<size_t>(n) * count : 1);
    std::vector<double> w(static_cast<size_t>(n));
    std::vector<lapack_int> ifail(static_cast<size_t>(n));
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_zhbevx(LAPACK_COL_MAJOR, jobz, 'I', 'L', n, kd, ab.data(), ldab, q.data(),
                                           vectors ? n : 1, 0.0, 0.0, 1, count, abstol, &found, w.data(), z.data(),
                                           vectors ? n : 1, ifail.data());
    if (info != 0 || found != count) {
        std::ostringstream os;
        os << "zhbevx failed (info=" << info << ", found=" << found << ")";
        throw Error(ErrorKind::Convergence, os.str());
    }
    BandEigen out;
    out.values = Eigen::Map<RVector>(w.data(), count);
    if (vectors) {
        out.vectors.resize(n, count);
        for (int c = 0; c < count; ++c)
            for (int r = 0; r < n; ++r) {
                out.vectors(r, c) = z[static_cast<size_t>(r) + static_cast<size_t>(c) * n];
            }
    }
    return out;
}

BandEigen lowest_eigenpairs(const TruncatedOperator& op, int count, bool vectors) {
    std::vector<CMatrix> diag, lower;
    for (int m = 0; m < op.M; ++m) {
        diag.push_back(op.diagonal_block(m));
        if (m + 1 < op.M) lower.push_back(op.lower_block(m));
    }
    return block_tridiagonal_lowest(diag, lower, count, vectors);
}

SpectrumResult spectrum_truncated(const NchoProblem& pr, int target_count, double tol, int M0, int Mmax) {
    if (target_count < 1) throw Error(ErrorKind::ContractViolation, "spectrum_truncated: target_count must be >= 1");
    SpectrumResult res;
    res.method = "truncation";
    RVector prev;
    for (int M = std::max(M0, 8); M <= Mmax; M *= 2) {
        const auto op = build_truncated(pr, M);
        if (target_count > op.size()) continue;
        const RVector vals = lowest_eigenpairs(op, target_count).values;
        res.orders.push_back(M);
        if (prev.size() == vals.size()) {
            const RVector diff = (vals - prev).cwiseAbs();
            if (diff.maxCoeff() < tol) {
                res.eigenvalues.assign(vals.data(), vals.data() + vals.size());
                res.estimates.assign(diff.data(), diff.data() + diff.size());
                res.status.assign(static_cast<size_t>(target_count), "converged");
                res.resonant.assign(static_cast<size_t>(target_count), false);
                return res;
            }
        }
        prev = vals;
    }
    std::ostringstream os;
    os << "spectrum_truncated: lowest " << target_count << " eigenvalues not converged to " << tol << " by M = " << Mmax;
    throw Error(ErrorKind::Convergence, os.str());
}

}  // namespace ncho
