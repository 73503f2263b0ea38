#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "ncho/covariance.hpp"
#include "ncho/pencil.hpp"

using namespace ncho;

namespace {

Su11Element random_g(std::mt19937_64& rng, double bmax) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const cplx b = std::polar(bmax * u(rng), 2.0 * M_PI * u(rng));
    const cplx a = std::polar(std::sqrt(1.0 + std::norm(b)), 2.0 * M_PI * u(rng));
    return {a, b};
}

double pole_set_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return 1e300;
    return multiset_distance(std::move(a), std::move(b));
}

}  // namespace

TEST(Su11, GroupLaws) {
    std::mt19937_64 rng(8);
    const auto g1 = random_g(rng, 0.5), g2 = random_g(rng, 0.5), g3 = random_g(rng, 0.5);
    EXPECT_LT(g1.defect(), 1e-14);
    const auto l = compose(compose(g3, g2), g1);
    const auto r = compose(g3, compose(g2, g1));
    EXPECT_LT(std::abs(l.a - r.a) + std::abs(l.b - r.b), 1e-14);
    const auto id = compose(g1, g1.inverse());
    EXPECT_LT(std::abs(id.a - 1.0) + std::abs(id.b), 1e-14);
    for (cplx z : {cplx(0.3, 0.1), cplx(-0.7, 0.2)}) {
        const cplx w = mobius_apply(g2, mobius_apply(g1, z));
        EXPECT_LT(std::abs(w - mobius_apply(compose(g2, g1), z)), 1e-14);
        EXPECT_LT(std::abs(mobius_apply(g1, z)), 1.0);
    }
}

TEST(Su11, ToOriginAndInfinity) {
    const cplx beta(0.3, -0.4);
    EXPECT_LT(std::abs(mobius_apply(Su11Element::to_origin(beta), beta)), 1e-15);
    const Su11Element g{std::cosh(0.3), std::sinh(0.3)};
    const XPoint gi = mobius_apply(g, XPoint::infinity());
    EXPECT_FALSE(gi.inf);
    EXPECT_LT(std::abs(gi.z - std::cosh(0.3) / std::sinh(0.3)), 1e-14);
    const XPoint back = mobius_apply(g, XPoint{-std::conj(g.a) / std::conj(g.b), false});
    EXPECT_TRUE(back.inf);
}

TEST(Covariance, PolesFollowMobiusRule) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 20; ++k) {
        const auto pr = gen::random_problem(rng, 1 + k % 3);
        const auto g = random_g(rng, 0.5);
        const auto dec = decompose_pencil(pr);
        const auto tr = transform_problem(g, pr);
        const auto dec2 = decompose_pencil(tr);
        std::vector<cplx> mapped;
        for (const auto& a : dec.poles) mapped.push_back(mobius_apply(g, a));
        EXPECT_LT(pole_set_distance(mapped, dec2.poles), 1e-8);
        EXPECT_TRUE(is_hermitian(tr.A, 1e-12));
    }
}

TEST(Covariance, ActionIsAHomomorphism) {
    std::mt19937_64 rng(13);
    const auto pr = gen::random_problem(rng, 2);
    const auto g1 = random_g(rng, 0.4), g2 = random_g(rng, 0.4);
    const auto lhs = transform_ab(g2, transform_ab(g1, pr.A, pr.B).A, transform_ab(g1, pr.A, pr.B).B);
    const auto rhs = transform_ab(compose(g2, g1), pr.A, pr.B);
    EXPECT_LT((lhs.A - rhs.A).norm() + (lhs.B - rhs.B).norm(), 1e-12);
}

TEST(Covariance, RotationOnlyRotatesB) {
    std::mt19937_64 rng(14);
    const auto pr = gen::random_problem(rng, 2);
    const double phi = 0.7;
    const auto ab = transform_ab(Su11Element::rotation(phi), pr.A, pr.B);
    EXPECT_LT((ab.A - pr.A).norm(), 1e-14);
    EXPECT_NEAR(ab.B.norm(), pr.B.norm(), 1e-14);
}

TEST(Gauge, UnitaryConjugation) {
    std::mt19937_64 rng(15);
    const auto pr = gen::random_problem(rng, 2);
    const CMatrix U = Eigen::HouseholderQR<CMatrix>(gen::random_complex(rng, 2, 2)).householderQ();
    const auto gp = gauge_problem(U, pr);
    const auto d1 = decompose_pencil(pr), d2 = decompose_pencil(gp);
    EXPECT_LT(pole_set_distance(d1.poles, d2.poles), 1e-10);
    CMatrix notU = U;
    notU(0, 0) += 0.1;
    EXPECT_THROW(gauge_problem(notU, pr), Error);
}

TEST(Normalize, MakesAIdentity) {
    std::mt19937_64 rng(16);
    const auto pr = gen::random_problem(rng, 3);
    CMatrix S;
    const auto np = normalize_problem(pr, &S);
    EXPECT_LT((np.A - CMatrix::Identity(3, 3)).norm(), 1e-15);
    EXPECT_LT((S * pr.A * S - CMatrix::Identity(3, 3)).norm(), 1e-12);
    const auto d1 = decompose_pencil(pr), d2 = decompose_pencil(np);
    EXPECT_LT(pole_set_distance(d1.poles, d2.poles), 1e-10);
}

TEST(Standardize, EtaShiftedFamily) {
    for (double beta : {1.5, 2.0, 3.0})
        for (double gamma : {1.0, 2.0}) {
            const auto pr = eta_shifted_ncho(beta, gamma, 0.2, 0.5);
            const auto sf = standardize_p2(pr);
            EXPECT_TRUE(is_std_form(sf.problem));
            EXPECT_NEAR(sf.alpha.real(), 1.0 / std::sqrt(beta * gamma), 1e-12);
            EXPECT_NEAR(sf.alpha.imag(), 0.0, 1e-12);
            const auto back = replay_inverse(sf.transcript, sf.problem);
            EXPECT_LT((back.A - pr.A).norm() + (back.B - pr.B).norm() + (back.C0 - pr.C0).norm(), 1e-12);
        }
}

TEST(Standardize, RandomInstances) {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; ++k) {
        const auto pr = gen::random_problem(rng, 2);
        const auto sf = standardize_p2(pr);
        EXPECT_TRUE(is_std_form(sf.problem));
        const auto dec = decompose_pencil(sf.problem);
        int inner = 0;
        bool zero = false;
        for (const auto& a : dec.poles) {
            if (std::abs(a) < 1.0) ++inner;
            zero = zero || std::abs(a) < 1e-12;
        }
        EXPECT_EQ(inner, 2);
        EXPECT_TRUE(zero);
        EXPECT_LT(std::abs(sf.alpha), 1.0);
    }
}

TEST(Standardize, Errors) {
    CMatrix one = CMatrix::Identity(1, 1);
    try {
        standardize_p2(make_problem(0.5, one, 0.25 * one, 0.0 * one));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Dimension);
    }
    try {
        standardize_p2(eta_shifted_ncho(0.5, 1.0, 0.0, 0.5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Positivity);
    }
}
