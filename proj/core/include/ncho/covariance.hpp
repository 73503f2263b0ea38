#pragma once

#include <vector>

#include "ncho/problem.hpp"

namespace ncho {

// g = [[a, b], [conj(b), conj(a)]] with |a|^2 - |b|^2 = 1.
struct Su11Element {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};

    double defect() const { return std::abs(std::norm(a) - std::norm(b) - 1.0); }
    Su11Element inverse() const { return {std::conj(a), -b}; }
    static Su11Element boost(double t) { return {std::cosh(t), std::sinh(t)}; }
    static Su11Element rotation(double phi) { return {std::polar(1.0, 0.5 * phi), 0.0}; }
    // The automorphism sending beta (|beta| < 1) to 0.
    static Su11Element to_origin(cplx beta);
};

Su11Element compose(const Su11Element& g2, const Su11Element& g1);  // g2 g1

// Point of the Riemann sphere.
struct XPoint {
    cplx z{0.0, 0.0};
    bool inf = false;

    static XPoint infinity() { return {cplx(0.0, 0.0), true}; }
};

XPoint mobius_apply(const Su11Element& g, const XPoint& z);
inline cplx mobius_apply(const Su11Element& g, cplx z) { return mobius_apply(g, XPoint{z, false}).z; }

struct ABPairT {
    CMatrix A, B;
};
ABPairT transform_ab(const Su11Element& g, const CMatrix& A, const CMatrix& B);
NchoProblem transform_problem(const Su11Element& g, const NchoProblem& pr);

struct GaugeResult {
    CMatrix A, B, C;
};
GaugeResult gauge_unitary(const CMatrix& U, const CMatrix& A, const CMatrix& B, const CMatrix& C);
NchoProblem gauge_problem(const CMatrix& U, const NchoProblem& pr);

GaugeResult normalize_a(const CMatrix& A, const CMatrix& B, const CMatrix& C);
NchoProblem normalize_problem(const NchoProblem& pr, CMatrix* inv_sqrt = nullptr);

struct TranscriptStep {
    enum class Kind { Mobius, Normalize, Gauge } kind;
    Su11Element g;  // Mobius
    CMatrix M;      // Normalize: A^{-1/2}; Gauge: U. Acts as X -> M X M^dagger.
};

using Transcript = std::vector<TranscriptStep>;

NchoProblem replay(const Transcript& t, const NchoProblem& pr);
NchoProblem replay_inverse(const Transcript& t, const NchoProblem& std_pr);

struct StandardForm {
    NchoProblem problem;
    Transcript transcript;
    cplx alpha;  // inner non-zero pole of the standardized pencil
    cplx b1, b2;
};

StandardForm standardize_p2(const NchoProblem& pr);

// True when A = I, B has a zero second row, b1 != 0 and 2|b1| + |b2|^2 < 1.
bool is_std_form(const NchoProblem& pr, double tol = 1e-9);

}  // namespace ncho
