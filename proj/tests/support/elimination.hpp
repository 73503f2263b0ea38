#pragma once

#include <functional>

#include "ncho/problem.hpp"

namespace ncho::gen {

// Scalar equation f1'' + P f1' + Q f1 = 0 obtained by eliminating f2 from f' = M f with
// M = Q(z)^{-1} N(z) formed directly from the matrices (p = 2).
struct Elimination {
    NchoProblem pr;
    cplx lambda;

    void pq(cplx z, cplx& P, cplx& Q) const {
        const CMatrix pen = pr.B * z * z + pr.A * z + pr.B.adjoint();
        const CMatrix dpen = 2.0 * z * pr.B + pr.A;
        const CMatrix N = -pr.mu * z * pr.B - 0.5 * pr.mu * pr.A + pr.C(lambda);
        const CMatrix dN = -pr.mu * pr.B;
        const auto lu = pen.partialPivLu();
        const CMatrix M = lu.solve(N);
        const CMatrix Mp = lu.solve(dN - dpen * M);
        const cplx lg = Mp(0, 1) / M(0, 1);
        P = -M(0, 0) - lg - M(1, 1);
        Q = -Mp(0, 0) - M(0, 1) * M(1, 0) + M(0, 0) * lg + M(0, 0) * M(1, 1);
    }
    cplx P(cplx z) const {
        cplx p, q;
        pq(z, p, q);
        return p;
    }
    cplx Q(cplx z) const {
        cplx p, q;
        pq(z, p, q);
        return q;
    }
};

// (1 / 2 pi i) times the integral of f over the circle |z - c| = r.
inline cplx contour(const std::function<cplx(cplx)>& f, cplx c, double r, int n = 256) {
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx d = std::polar(r, 2.0 * M_PI * k / n);
        acc += f(c + d) * d;
    }
    return acc / static_cast<double>(n);
}

}  // namespace ncho::gen
