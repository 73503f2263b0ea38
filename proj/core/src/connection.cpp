#include "ncho/connection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncho/covariance.hpp"

namespace ncho {

namespace {

double nearest_other(const std::vector<cplx>& poles, size_t j, cplx z) {
    double d = 1e300;
    for (size_t i = 0; i < poles.size(); ++i)
        if (i != j) d = std::min(d, std::abs(poles[i] - z));
    return d;
}

double dist_to_integers(cplx z, int lo) {
    const double n = std::max(static_cast<double>(lo), std::round(z.real()));
    return std::abs(z - cplx(n, 0.0));
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

CVector frobenius_series(const std::vector<cplx>& poles, const std::vector<CMatrix>& residues, size_t j, cplx rho,
                         const CVector& u0, cplx h) {
    const auto p = u0.size();
    const cplx s = poles[j];
    const CMatrix& Rj = residues[j];
    std::vector<CMatrix> H;  // H_k = -sum_{i != j} R_i / (s_i - s)^{k+1}
    std::vector<cplx> inv, pw;
    for (size_t i = 0; i < poles.size(); ++i) {
        if (i == j) continue;
        inv.push_back(1.0 / (poles[i] - s));
        pw.push_back(inv.back());
    }
    auto next_H = [&]() {
        CMatrix Hk = CMatrix::Zero(p, p);
        size_t c = 0;
        for (size_t i = 0; i < poles.size(); ++i) {
            if (i == j) continue;
            Hk -= residues[i] * pw[c];
            pw[c] *= inv[c];
            ++c;
        }
        H.push_back(std::move(Hk));
    };

    std::vector<CVector> u{u0};
    CVector total = u0;
    cplx hp(1.0, 0.0);
    const CMatrix Id = CMatrix::Identity(p, p);
    int small = 0;
    for (int k = 1; k <= 4000; ++k) {
        next_H();
        CVector rhs = CVector::Zero(p);
        for (int i = 0; i < k; ++i) rhs += H[static_cast<size_t>(k - 1 - i)] * u[static_cast<size_t>(i)];
        const CMatrix lhs = (static_cast<double>(k) + rho) * Id - Rj;
        CVector uk = lhs.fullPivLu().solve(rhs);
        hp *= h;
        const CVector term = uk * hp;
        total += term;
        u.push_back(std::move(uk));
        if (!term.allFinite()) break;
        if (k > 10 && term.norm() < 1e-17 * total.norm()) {
            if (++small >= 2) return total;
        } else {
            small = 0;
        }
    }
    throw Error(ErrorKind::Continuation, "frobenius_series: local series did not converge");
}

CMatrix taylor_transport(const std::vector<cplx>& poles, const std::vector<CMatrix>& residues, cplx z0, cplx z1,
                         const CMatrix& F0, int order) {
    const auto p = F0.rows();
    CMatrix F = F0;
    cplx z = z0;
    std::vector<CMatrix> Mk(static_cast<size_t>(order) + 1), co(static_cast<size_t>(order) + 2);
    for (int step = 0; step < 100000; ++step) {
        const cplx rem = z1 - z;
        if (std::abs(rem) <= 1e-15 * std::max(1.0, std::abs(z1))) return F;
        double d = 1e300;
        for (const auto& a : poles) d = std::min(d, std::abs(a - z));
        if (d < 1e-10) throw Error(ErrorKind::Continuation, "taylor_transport: path hits a singular point");
        cplx h = rem;
        if (std::abs(h) > 0.4 * d) h *= 0.4 * d / std::abs(h);
        std::vector<cplx> inv, pw;
        for (const auto& a : poles) {
            inv.push_back(1.0 / (a - z));
            pw.push_back(inv.back());
        }
        for (int k = 0; k <= order; ++k) {
            CMatrix m = CMatrix::Zero(p, p);
            for (size_t i = 0; i < poles.size(); ++i) {
                m -= residues[i] * pw[i];
                pw[i] *= inv[i];
            }
            Mk[static_cast<size_t>(k)] = std::move(m);
        }
        co[0] = F;
        CMatrix acc = F;
        cplx hp(1.0, 0.0);
        for (int k = 0; k < order; ++k) {
            CMatrix next = CMatrix::Zero(p, F.cols());
            for (int i = 0; i <= k; ++i) next += Mk[static_cast<size_t>(i)] * co[static_cast<size_t>(k - i)];
            co[static_cast<size_t>(k) + 1] = next / static_cast<double>(k + 1);
            hp *= h;
            acc += co[static_cast<size_t>(k) + 1] * hp;
        }
        F = acc;
        z += h;
    }
    throw Error(ErrorKind::Continuation, "taylor_transport: too many steps");
}

ConnectionDeterminant::ConnectionDeterminant(const NchoProblem& pr) {
    pr.validate();
    if (!pr.identity_weight())
        throw Error(ErrorKind::ContractViolation, "connection determinant: spectral weight must be the identity");
    if (pr.p > 2) throw Error(ErrorKind::ContractViolation, "connection determinant: only p <= 2 is supported");
    try {
        dec_ = decompose_pencil(pr);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PoleOnUnitCircle) throw Error(ErrorKind::Positivity, e.what());
        throw;
    }
    if (positivity_margin(pr).margin <= 0.0)
        throw Error(ErrorKind::Positivity, "connection determinant: Bz + A + B^dagger conj(z) is not positive");
    work_ = pr;
    if (pr.p == 2 && !dec_.zero_is_pole) {
        std::vector<cplx> inner;
        for (const auto& a : dec_.poles)
            if (std::abs(a) < 1.0) inner.push_back(a);
        if (inner.empty()) throw Error(ErrorKind::NotGeneric, "connection determinant: no inner pole");
        std::sort(inner.begin(), inner.end(), [](cplx u, cplx v) {
            if (std::abs(std::abs(u) - std::abs(v)) > 1e-10) return std::abs(u) < std::abs(v);
            return std::arg(u) < std::arg(v);
        });
        work_ = transform_problem(Su11Element::to_origin(inner.front()), pr);
        dec_ = decompose_pencil(work_);
    }

    std::vector<int> inner;
    for (size_t j = 0; j < dec_.poles.size(); ++j)
        if (std::abs(dec_.poles[j]) < 1.0) inner.push_back(static_cast<int>(j));
    i0_ = dec_.index_of_zero();
    for (int j : inner)
        if (j != i0_) ia_ = j;
    const int n_other = static_cast<int>(inner.size()) - (i0_ >= 0 ? 1 : 0);
    if (pr.p == 1) {
        if (i0_ < 0 && n_other == 1) config_ = kScalarRegular;
        else if (i0_ >= 0 && n_other == 0) config_ = kScalarOrigin;
    } else {
        if (i0_ >= 0 && n_other == 1) config_ = kPairOriginInner;
        else if (i0_ >= 0 && n_other == 0) config_ = kPairOrigin;
    }
    if (config_ == 0) throw Error(ErrorKind::NotGeneric, "connection determinant: unsupported pole configuration");

    for (const auto& P : dec_.residues) {
        Eigen::JacobiSVD<CMatrix> svd(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
        x_.push_back(svd.matrixU().col(0) * svd.singularValues()(0));
        y_.push_back(svd.matrixV().col(0));
    }
    if (config_ == kPairOriginInner) {
        for (int j : {i0_, ia_})
            if (numerical_rank(dec_.residues[static_cast<size_t>(j)], 1e-8) != 1)
                throw Error(ErrorKind::NotGeneric, "connection determinant: residue at an inner pole is not rank one");
    }

    // T(i s) T(-i s) has the phase of the constant factor squared.
    const double s = 1.0 + work_.mu * work_.A.norm() + 2.0 * work_.C0.norm();
    const cplx prod = raw(cplx(0.0, s)) * raw(cplx(0.0, -s));
    if (std::abs(prod) > 0.0 && finite(prod)) {
        double theta = 0.5 * std::arg(prod);
        if (theta <= -0.5 * M_PI) theta += M_PI;
        phase_ = std::polar(1.0, -theta);
    }
}

std::vector<CMatrix> ConnectionDeterminant::residues_at(cplx lambda) const {
    const CMatrix C = work_.C(lambda);
    std::vector<CMatrix> R;
    for (size_t j = 0; j < dec_.poles.size(); ++j)
        R.push_back(dec_.residues[j] * (-work_.mu * (dec_.poles[j] * work_.B + 0.5 * work_.A) + C));
    return R;
}

cplx ConnectionDeterminant::exponent_at(size_t j, cplx lambda) const {
    const CMatrix N = -work_.mu * (dec_.poles[j] * work_.B + 0.5 * work_.A) + work_.C(lambda);
    return (y_[j].adjoint() * N * x_[j])(0, 0);
}

double ConnectionDeterminant::resonance_distance(cplx lambda) const {
    if (config_ != kPairOriginInner) return 1e300;
    const cplx rho_a = exponent_at(static_cast<size_t>(ia_), lambda);
    const cplx rho_0 = exponent_at(static_cast<size_t>(i0_), lambda);
    return std::min(dist_to_integers(rho_a, -1000000), dist_to_integers(rho_0, 1));
}

cplx ConnectionDeterminant::raw_unchecked(cplx lambda) const {
    const auto& poles = dec_.poles;
    if (config_ == kScalarOrigin) {
        const cplx rho0 = residues_at(lambda)[static_cast<size_t>(i0_)](0, 0);
        return rgamma(-rho0);
    }
    if (config_ == kPairOrigin) {
        cplx t(1.0, 0.0);
        for (const auto& e : eigen_general_small(residues_at(lambda)[static_cast<size_t>(i0_)])) t *= rgamma(-e);
        return t;
    }
    const auto R = residues_at(lambda);
    const auto ja = static_cast<size_t>(ia_);
    const cplx al = poles[ja];
    const cplx dir = al / std::abs(al);
    const double da = nearest_other(poles, ja, al);
    const cplx zstar = al - 0.35 * da * dir;
    const cplx shift = std::pow((al - zstar) / al, R[ja].trace());

    if (config_ == kScalarRegular) {
        const CMatrix F = taylor_transport(poles, R, cplx(0.0), zstar, CMatrix::Identity(1, 1));
        const cplx rho = R[ja](0, 0);
        const CVector g = frobenius_series(poles, R, ja, rho, CVector::Ones(1), zstar - al) * shift;
        return F(0, 0) / g(0) * rgamma(-rho);
    }

    // Regular solution at the origin, carried to the inner pole and split into local solutions.
    const auto j0 = static_cast<size_t>(i0_);
    auto kernel = [&](size_t j) {
        const CMatrix N = -work_.mu * (poles[j] * work_.B + 0.5 * work_.A) + work_.C(lambda);
        const CVector r = (y_[j].adjoint() * N).transpose();
        CVector k(2);
        k << r(1), -r(0);
        return k;
    };
    const cplx rho0 = R[j0].trace();
    const cplx rho = R[ja].trace();
    const double d0 = nearest_other(poles, j0, cplx(0.0));
    const cplx zs = 0.3 * d0 * dir;
    CMatrix F(2, 1);
    F.col(0) = frobenius_series(poles, R, j0, 0.0, kernel(j0), zs);
    F = taylor_transport(poles, R, zs, zstar, F);
    CMatrix G(2, 2);
    G.col(0) = frobenius_series(poles, R, ja, 0.0, kernel(ja), zstar - al);
    G.col(1) = frobenius_series(poles, R, ja, rho, x_[ja], zstar - al) * shift;
    const CVector K = G.fullPivLu().solve(F.col(0));
    return K(1) * rgamma(-rho) * rgamma(1.0 - rho0);
}

cplx ConnectionDeterminant::raw(cplx lambda) const {
    const double dist = resonance_distance(lambda);
    cplx t(std::nan(""), 0.0);
    if (dist >= 1e-7) t = raw_unchecked(lambda);
    if (!finite(t)) {
        const double delta = 1e-5;
        t = 0.5 * (raw_unchecked(lambda + delta) + raw_unchecked(lambda - delta));
    }
    return t;
}

ConnectionValue ConnectionDeterminant::evaluate(cplx lambda) const {
    ConnectionValue v;
    const double dist = resonance_distance(lambda);
    v.resonant = dist < 1e-6;
    v.averaged = dist < 1e-7;
    v.T = raw(lambda) * phase_;
    if (!finite(v.T)) throw Error(ErrorKind::Continuation, "connection determinant: non-finite value");
    return v;
}

cplx connection_determinant(const NchoProblem& pr, cplx lambda) { return ConnectionDeterminant(pr)(lambda); }

RefineResult refine_eigenvalue(const ConnectionDeterminant& T, double seed) {
    RefineResult out;
    out.lambda = seed;
    auto f = [&](double x) { return T(cplx(x, 0.0)).real(); };
    const ConnectionValue v0 = T.evaluate(seed);
    out.resonant = v0.resonant;
    const double f0 = v0.T.real();
    const double scale = std::max(1.0, std::abs(seed));
    if (std::abs(v0.T) < 1e-300) {
        out.bracket_lo = out.bracket_hi = seed;
        return out;
    }

    double a = 0, b = 0, fa = 0, fb = 0;
    bool found = false;
    double h = 1e-6 * scale;
    for (int tries = 0; tries < 12 && !found; ++tries, h *= 4.0) {
        const double lo = seed - h, hi = seed + h;
        const double flo = f(lo), fhi = f(hi);
        if (std::signbit(flo) != std::signbit(f0)) {
            a = lo, fa = flo, b = seed, fb = f0;
            found = true;
        } else if (std::signbit(fhi) != std::signbit(f0)) {
            a = seed, fa = f0, b = hi, fb = fhi;
            found = true;
        }
    }
    if (!found) {
        std::ostringstream os;
        os << "refine_eigenvalue: no sign change of T near " << seed;
        throw Error(ErrorKind::Refinement, os.str());
    }
    out.bracket_lo = a;
    out.bracket_hi = b;

    // Illinois variant of regula falsi.
    int it = 0;
    for (; it < 200; ++it) {
        if (std::abs(b - a) <= 4e-16 * scale) break;
        const double c = (a * fb - b * fa) / (fb - fa);
        const double fc = f(c);
        if (fc == 0.0) {
            a = b = c;
            fa = fb = 0.0;
            break;
        }
        if (std::signbit(fc) != std::signbit(fb)) {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = c;
        fb = fc;
    }
    out.lambda = std::abs(fa) < std::abs(fb) ? a : b;
    out.iterations = it;
    const ConnectionValue v = T.evaluate(out.lambda);
    out.residual = std::abs(v.T);
    out.resonant = out.resonant || v.resonant;
    return out;
}

RefineResult refine_eigenvalue(const NchoProblem& pr, double seed) {
    return refine_eigenvalue(ConnectionDeterminant(pr), seed);
}

SpectrumResult spectrum_connection(const NchoProblem& pr, int target_count, double tol) {
    const ConnectionDeterminant T(pr);
    SpectrumResult seeds = spectrum_truncated(pr, target_count, std::min(tol, 1e-8));
    SpectrumResult res;
    res.method = "connection";
    res.orders = seeds.orders;
    for (double s : seeds.eigenvalues) {
        try {
            const RefineResult r = refine_eigenvalue(T, s);
            res.eigenvalues.push_back(r.lambda);
            res.estimates.push_back(r.residual);
            res.status.emplace_back("refined");
            res.resonant.push_back(r.resonant);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Refinement) throw;
            const ConnectionValue v = T.evaluate(s);
            res.eigenvalues.push_back(s);
            res.estimates.push_back(std::abs(v.T));
            res.status.emplace_back("unbracketed");
            res.resonant.push_back(v.resonant);
        }
    }
    return res;
}

}  // namespace ncho
