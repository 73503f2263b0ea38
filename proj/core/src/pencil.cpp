#include "ncho/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace ncho {

CMatrix pencil_at(const NchoProblem& pr, cplx z) { return pr.B * (z * z) + pr.A * z + pr.B.adjoint(); }

int PencilDecomposition::index_of_zero() const {
    for (size_t j = 0; j < poles.size(); ++j)
        if (poles[j] == 0.0) return static_cast<int>(j);
    return -1;
}

CMatrix PencilDecomposition::inverse_at(cplx z) const {
    const auto p = residues.empty() ? 0 : residues[0].rows();
    CMatrix s = CMatrix::Zero(p, p);
    for (size_t j = 0; j < poles.size(); ++j) s += residues[j] / (z - poles[j]);
    return s;
}

namespace {

constexpr int kContourPoints = 128;

// Laurent coefficient (1/2 pi i) \oint (z - c)^k Q(z)^{-1} dz on |z - c| = rho.
CMatrix contour_moment(const NchoProblem& pr, cplx c, double rho, int k, double* max_inv = nullptr) {
    CMatrix acc = CMatrix::Zero(pr.p, pr.p);
    double big = 0.0;
    for (int i = 0; i < kContourPoints; ++i) {
        const cplx w = std::polar(1.0, 2.0 * M_PI * i / kContourPoints);
        const cplx h = rho * w;
        CMatrix inv = pencil_at(pr, c + h).inverse();
        big = std::max(big, inv.norm());
        acc += inv * (std::pow(h, k) * h);
    }
    if (max_inv) *max_inv = big;
    return acc / static_cast<double>(kContourPoints);
}

}  // namespace

PencilDecomposition decompose_pencil(const NchoProblem& pr) {
    pr.validate();
    const int p = pr.p;
    const int n = 2 * p + 1;
    PencilDecomposition dec;

    std::vector<cplx> vals(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) vals[static_cast<size_t>(k)] = determinant(pencil_at(pr, std::polar(1.0, 2.0 * M_PI * k / n)));
    std::vector<cplx> c(static_cast<size_t>(n));
    double big = 0.0;
    for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) acc += vals[static_cast<size_t>(k)] * std::polar(1.0, -2.0 * M_PI * j * k / n);
        c[static_cast<size_t>(j)] = acc / static_cast<double>(n);
        big = std::max(big, std::abs(c[static_cast<size_t>(j)]));
    }
    const double scale = std::pow(pr.A.norm() + 2.0 * pr.B.norm(), p);
    if (big <= 1e-14 * std::max(scale, 1e-300))
        throw Error(ErrorKind::DegeneratePencil, "decompose_pencil: det(Bz^2+Az+B^dagger) vanishes identically");

    // det Q(z) = z^p det(Bz + A + B^dagger/z) is z^p times a real function on |z| = 1,
    // so c[2p-k] = conj(c[k]); trim both ends together.
    int trimmed = 0;
    while (trimmed < p && std::abs(c[static_cast<size_t>(2 * p - trimmed)]) <= 1e-12 * big) ++trimmed;
    c.resize(static_cast<size_t>(2 * p - trimmed + 1));
    for (int k = 0; k < trimmed; ++k) c[static_cast<size_t>(k)] = 0.0;
    dec.det_coeffs = c;
    dec.detB_zero = trimmed > 0;

    const auto roots = poly_roots(c);
    const auto dc = poly_derivative(c);
    for (const auto& r : roots)
        if (std::abs(std::abs(r.value) - 1.0) < 1e-10)
            throw Error(ErrorKind::PoleOnUnitCircle, "decompose_pencil: root of det on the unit circle");

    for (size_t i = 0; i < roots.size(); ++i) {
        const cplx a = roots[i].value;
        CMatrix P;
        if (roots[i].multiplicity == 1) {
            P = adjugate(pencil_at(pr, a)) / poly_eval(dc, a);
        } else {
            double dist = 1.0;
            for (size_t j = 0; j < roots.size(); ++j)
                if (j != i) dist = std::min(dist, std::abs(roots[j].value - a));
            const double rho = 0.5 * dist;
            double max_inv = 0.0;
            P = contour_moment(pr, a, rho, 0, &max_inv);
            const CMatrix second = contour_moment(pr, a, rho, 1);
            if (second.norm() > 1e-8 * max_inv * rho)
                throw Error(ErrorKind::SimplePoleViolation,
                            "decompose_pencil: (Bz^2+Az+B^dagger)^{-1} has a pole of order > 1");
        }
        dec.poles.push_back(a);
        dec.residues.push_back(P);
        dec.root_multiplicity.push_back(roots[i].multiplicity);
    }
    dec.zero_is_pole = dec.index_of_zero() >= 0;
    return dec;
}

bool LemmaReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.pass; });
}

std::uint64_t problem_hash(const NchoProblem& pr) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const void* data, size_t len) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    mix(&pr.p, sizeof(pr.p));
    mix(&pr.mu, sizeof(pr.mu));
    for (const CMatrix* m : {&pr.A, &pr.B, &pr.C0, &pr.W})
        mix(m->data(), sizeof(cplx) * static_cast<size_t>(m->size()));
    return h;
}

LemmaReport verify_pencil_lemma(const PencilDecomposition& dec, const NchoProblem& pr, double tol, std::uint64_t seed) {
    const int p = pr.p;
    const CMatrix Id = CMatrix::Identity(p, p);
    const auto& poles = dec.poles;
    const auto& P = dec.residues;
    double pscale = 1.0;
    for (const auto& m : P) pscale = std::max(pscale, m.norm());

    auto partner = [&](size_t j) {
        const cplx target = 1.0 / std::conj(poles[j]);
        size_t best = 0;
        for (size_t k = 1; k < poles.size(); ++k)
            if (std::abs(poles[k] - target) < std::abs(poles[best] - target)) best = k;
        return best;
    };

    LemmaReport rep;

    // 1. pole pairing
    double r1 = 0.0;
    for (size_t j = 0; j < poles.size(); ++j) {
        if (poles[j] == 0.0) continue;
        const cplx target = 1.0 / std::conj(poles[j]);
        r1 = std::max(r1, std::abs(poles[partner(j)] - target) / std::max(1.0, std::abs(target)));
    }
    rep.checks.push_back({"pole_pairing", true, r1 < tol, r1});

    // 2. P_{1/conj(a)} = -P_a^dagger, and no polynomial part (sampled identity)
    double r2 = 0.0;
    for (size_t j = 0; j < poles.size(); ++j) {
        if (poles[j] == 0.0) continue;
        r2 = std::max(r2, (P[partner(j)] + P[j].adjoint()).norm() / pscale);
    }
    std::mt19937_64 rng(problem_hash(pr) ^ seed);
    std::uniform_real_distribution<double> ur(0.2, 3.0), ua(0.0, 2.0 * M_PI);
    double ident = 0.0;
    for (int s = 0; s < 16;) {
        const cplx z = std::polar(ur(rng), ua(rng));
        bool ok = true;
        for (const auto& a : poles)
            if (std::abs(z - a) < 0.05) ok = false;
        if (!ok) continue;
        const CMatrix Q = pencil_at(pr, z);
        const CMatrix prod = dec.inverse_at(z) * Q;
        ident = std::max(ident, (prod - Id).norm());
        ++s;
    }
    rep.sampled_identity = ident;
    r2 = std::max(r2, ident);
    rep.checks.push_back({"residue_symmetry_no_polynomial_part", true, r2 < tol, r2});

    CMatrix sumP = CMatrix::Zero(p, p), sumPB = CMatrix::Zero(p, p), sumaPB = CMatrix::Zero(p, p);
    double amax = 1.0;
    for (size_t j = 0; j < poles.size(); ++j) {
        sumP += P[j];
        sumPB += P[j] * pr.B;
        sumaPB += poles[j] * P[j] * pr.B;
        amax = std::max(amax, std::abs(poles[j]));
    }
    const double s3 = pscale * std::max(1.0, pr.B.norm()) * amax * static_cast<double>(std::max<size_t>(1, poles.size()));

    // 3. det B != 0 branch
    if (!dec.detB_zero) {
        const double r3 = std::max(sumP.norm() / pscale, (sumaPB - Id).norm() / s3);
        rep.checks.push_back({"detB_nonzero_sums", true, r3 < tol, r3});
        rep.checks.push_back({"detB_zero_sums", false, true, 0.0});
    } else {
        rep.checks.push_back({"detB_nonzero_sums", false, true, 0.0});
        const int z = dec.index_of_zero();
        double r4 = INFINITY;
        if (z >= 0) {
            const CMatrix P0d = P[static_cast<size_t>(z)].adjoint();
            r4 = std::max({(sumP - P0d).norm() / pscale, sumPB.norm() / s3,
                           (sumaPB - (Id - P0d * pr.A)).norm() / (s3 * std::max(1.0, pr.A.norm()))});
        }
        rep.checks.push_back({"detB_zero_sums", true, r4 < tol, r4});
    }

    // 5. rank bound
    double r5 = 0.0;
    for (size_t j = 0; j < poles.size(); ++j) {
        const int rank = numerical_rank(P[j], 1e-8);
        const int ker = p - numerical_rank(pencil_at(pr, poles[j]), 1e-8);
        r5 = std::max(r5, static_cast<double>(std::max(0, rank - ker)));
    }
    rep.checks.push_back({"rank_bound", true, r5 == 0.0, r5});

    // 6. idempotent-type identity
    double r6 = 0.0;
    for (size_t j = 0; j < poles.size(); ++j) {
        const CMatrix lhs = P[j] * (2.0 * poles[j] * pr.B + pr.A) * P[j];
        r6 = std::max(r6, (lhs - P[j]).norm() / std::max(1.0, P[j].norm() * P[j].norm() * (2.0 * std::abs(poles[j]) * pr.B.norm() + pr.A.norm())));
    }
    rep.checks.push_back({"projector_identity", true, r6 < tol, r6});
    return rep;
}

PositivityResult positivity_margin(const NchoProblem& pr, int grid_size) {
    if (grid_size < 64) throw Error(ErrorKind::ContractViolation, "positivity_margin: grid_size must be >= 64");
    PositivityResult res;
    res.grid_size = grid_size;
    res.margin = INFINITY;
    const CMatrix Bd = pr.B.adjoint();
    for (int k = 0; k < grid_size; ++k) {
        const double phi = 2.0 * M_PI * k / grid_size;
        const cplx z = std::polar(1.0, phi);
        const CMatrix H = pr.B * z + pr.A + Bd * std::conj(z);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()), Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < res.margin) {
            res.margin = es.eigenvalues()(0);
            res.argmin = phi;
        }
    }
    const double bnorm = pr.p > 0 ? Eigen::JacobiSVD<CMatrix>(pr.B).singularValues()(0) : 0.0;
    res.certified = res.margin - 2.0 * M_PI * bnorm / grid_size;
    return res;
}

}  // namespace ncho
