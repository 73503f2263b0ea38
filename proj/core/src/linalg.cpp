#include "ncho/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gsl/gsl_sf_gamma.h>

namespace ncho {

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Dimension: return "DimensionError";
        case ErrorKind::DegenerateInput: return "DegenerateInputError";
        case ErrorKind::ContractViolation: return "ContractViolation";
        case ErrorKind::SimplePoleViolation: return "SimplePoleViolation";
        case ErrorKind::DegeneratePencil: return "DegeneratePencil";
        case ErrorKind::PoleOnUnitCircle: return "PoleOnUnitCircle";
        case ErrorKind::NotGeneric: return "NotGenericError";
        case ErrorKind::Positivity: return "PositivityError";
        case ErrorKind::Convergence: return "ConvergenceError";
        case ErrorKind::Continuation: return "ContinuationError";
        case ErrorKind::Refinement: return "RefinementError";
        case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalueError";
        case ErrorKind::WrongBranch: return "WrongBranchError";
        case ErrorKind::NotInFamily: return "NotInFamilyError";
        case ErrorKind::Schema: return "SchemaError";
    }
    return "Error";
}

bool all_finite(const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
    return true;
}

double hermitian_defect(const CMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

bool is_hermitian(const CMatrix& m, double tol) {
    return m.rows() == m.cols() && hermitian_defect(m) <= tol;
}

bool is_positive_definite(const CMatrix& m, double tol) {
    if (!is_hermitian(m, 1e-10)) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) > tol;
}

namespace {

cplx laplace_det(const CMatrix& m) {
    const auto n = m.rows();
    if (n == 0) return 1.0;
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    cplx d = 0.0;
    CMatrix sub(n - 1, n - 1);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index i = 1; i < n; ++i)
            for (Eigen::Index j = 0, jj = 0; j < n; ++j)
                if (j != c) sub(i - 1, jj++) = m(i, j);
        const double sign = (c % 2 == 0) ? 1.0 : -1.0;
        d += sign * m(0, c) * laplace_det(sub);
    }
    return d;
}

CMatrix minor_of(const CMatrix& m, Eigen::Index r, Eigen::Index c) {
    const auto n = m.rows();
    CMatrix sub(n - 1, n - 1);
    for (Eigen::Index i = 0, ii = 0; i < n; ++i) {
        if (i == r) continue;
        for (Eigen::Index j = 0, jj = 0; j < n; ++j)
            if (j != c) sub(ii, jj++) = m(i, j);
        ++ii;
    }
    return sub;
}

}  // namespace

AdjDet adjugate_and_det(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorKind::Dimension, "adjugate_and_det: matrix must be square and non-empty");
    const auto n = m.rows();
    if (n > 8) throw Error(ErrorKind::Dimension, "adjugate_and_det: dimension above 8");
    AdjDet out;
    out.adjugate = CMatrix(n, n);
    if (n == 1) {
        out.adjugate(0, 0) = 1.0;
        out.determinant = m(0, 0);
        return out;
    }
    const bool small = n <= 4;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            CMatrix sub = minor_of(m, j, i);
            cplx d = small ? laplace_det(sub) : sub.fullPivLu().determinant();
            out.adjugate(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * d;
        }
    out.determinant = small ? laplace_det(m) : m.fullPivLu().determinant();
    return out;
}

CMatrix adjugate(const CMatrix& m) { return adjugate_and_det(m).adjugate; }

cplx determinant(const CMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::Dimension, "determinant: matrix must be square");
    if (m.rows() <= 4) return laplace_det(m);
    return m.fullPivLu().determinant();
}

cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<cplx> poly_derivative(const std::vector<cplx>& c) {
    std::vector<cplx> d;
    for (size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}

namespace {

double abs_scale(const std::vector<cplx>& c, double r) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

std::vector<cplx> aberth(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 1) return {-c[0] / c[1]};
    const auto dc = poly_derivative(c);
    const double radius = std::pow(std::abs(c[0]) / std::abs(c[n]), 1.0 / n);
    const double r0 = (radius > 0 && std::isfinite(radius)) ? radius : 1.0;
    std::vector<cplx> z(n);
    for (int k = 0; k < n; ++k) z[k] = std::polar(r0, 2.0 * M_PI * k / n + 0.4);

    for (int iter = 0; iter < 800; ++iter) {
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            const cplx pv = poly_eval(c, z[k]);
            if (pv == 0.0) continue;
            const cplx w = pv / poly_eval(dc, z[k]);
            cplx s = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            cplx corr = w / (1.0 - w * s);
            if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) corr = w;
            z[k] -= corr;
            worst = std::max(worst, std::abs(corr) / std::max(1.0, std::abs(z[k])));
        }
        if (worst < 1e-16) break;
    }
    // Newton polish, kept only when it lowers |p|.
    for (auto& r : z)
        for (int it = 0; it < 3; ++it) {
            const cplx d = poly_eval(dc, r);
            if (d == 0.0) break;
            const cplx cand = r - poly_eval(c, r) / d;
            if (std::abs(poly_eval(c, cand)) < std::abs(poly_eval(c, r))) r = cand;
            else break;
        }
    return z;
}

}  // namespace

std::vector<Root> poly_roots(const std::vector<cplx>& coeffs, double tol) {
    std::vector<cplx> c = coeffs;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.empty()) throw Error(ErrorKind::DegenerateInput, "poly_roots: zero polynomial");
    for (const auto& v : c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::DegenerateInput, "poly_roots: non-finite coefficient");
    if (c.size() > 17) throw Error(ErrorKind::Dimension, "poly_roots: degree above 16");

    size_t nz = 0;
    while (nz < c.size() && c[nz] == 0.0) ++nz;
    std::vector<cplx> reduced(c.begin() + static_cast<long>(nz), c.end());

    std::vector<cplx> raw;
    if (reduced.size() > 1) raw = aberth(reduced);

    // Union-find clustering.
    const size_t n = raw.size();
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    const auto dc = poly_derivative(reduced);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double scale = std::max(1.0, std::max(std::abs(raw[i]), std::abs(raw[j])));
            const double gap = std::abs(raw[i] - raw[j]);
            bool merge = gap < tol * scale;
            if (!merge && gap < 1e-5 * scale) {
                const cplx mid = 0.5 * (raw[i] + raw[j]);
                const double dscale = abs_scale(dc, std::abs(mid));
                merge = std::abs(poly_eval(dc, mid)) < 1e-7 * std::max(dscale, 1e-300);
            }
            if (merge) parent[find(i)] = find(j);
        }

    std::vector<Root> out;
    std::vector<int> seen(n, -1);
    for (size_t i = 0; i < n; ++i) {
        const size_t r = find(i);
        if (seen[r] < 0) {
            seen[r] = static_cast<int>(out.size());
            out.push_back({raw[i], 1});
        } else {
            Root& acc = out[static_cast<size_t>(seen[r])];
            acc.value = (acc.value * static_cast<double>(acc.multiplicity) + raw[i]) /
                        static_cast<double>(acc.multiplicity + 1);
            acc.multiplicity += 1;
        }
    }
    if (nz > 0) out.push_back({0.0, static_cast<int>(nz)});
    std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
        if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) < std::abs(b.value);
        return std::arg(a.value) < std::arg(b.value);
    });
    return out;
}

HermitianEigen eigen_hermitian(const CMatrix& m, bool vectors) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::Dimension, "eigen_hermitian: matrix must be square");
    if (!is_hermitian(m, 1e-10))
        throw Error(ErrorKind::ContractViolation, "eigen_hermitian: matrix is not Hermitian");
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    HermitianEigen out;
    out.values = es.eigenvalues();
    if (vectors) out.vectors = es.eigenvectors();
    return out;
}

std::vector<cplx> eigen_general_small(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorKind::Dimension, "eigen_general_small: matrix must be square and non-empty");
    const auto n = m.rows();
    if (n > 8) throw Error(ErrorKind::Dimension, "eigen_general_small: dimension above 8");
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "eigen_general_small: QR iteration failed");
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(out.begin(), out.end(), [](cplx u, cplx v) {
        if (u.real() != v.real()) return u.real() < v.real();
        return u.imag() < v.imag();
    });
    return out;
}

CMatrix hermitian_sqrt(const CMatrix& m) {
    auto eig = eigen_hermitian(m, true);
    if (eig.values(0) <= 0.0)
        throw Error(ErrorKind::ContractViolation, "hermitian_sqrt: matrix is not positive definite");
    return eig.vectors * eig.values.cwiseSqrt().cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

CMatrix hermitian_inv_sqrt(const CMatrix& m) {
    auto eig = eigen_hermitian(m, true);
    if (eig.values(0) <= 0.0)
        throw Error(ErrorKind::ContractViolation, "hermitian_inv_sqrt: matrix is not positive definite");
    return eig.vectors * eig.values.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

int numerical_rank(const CMatrix& m, double rel_tol) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double cut = rel_tol * std::max(1.0, s(0));
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

namespace {

cplx lngamma(cplx z) {
    gsl_sf_result lnr, arg;
    gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
    return {lnr.val, arg.val};
}

// sin(pi z) with exact zeros at the integers.
cplx sinpi(cplx z) {
    const double n = std::round(z.real());
    const cplx f = z - n;
    const double sign = (static_cast<long long>(n) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sin(M_PI * f);
}

}  // namespace

cplx rgamma(cplx z) {
    if (z.real() < 0.5) return sinpi(z) * std::exp(lngamma(1.0 - z)) / M_PI;
    return std::exp(-lngamma(z));
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        size_t best = b.size();
        double bd = INFINITY;
        for (size_t j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(x - b[j]) < bd) {
                bd = std::abs(x - b[j]);
                best = j;
            }
        used[best] = true;
        worst = std::max(worst, bd);
    }
    return worst;
}

}  // namespace ncho
