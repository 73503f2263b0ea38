#pragma once

#include <vector>

#include "ncho/problem.hpp"

namespace ncho {

// m! / (mu)_m, the squared norm of z^m.
double monomial_norm(int m, double mu);

// l_m(t) = i^m (m!/(mu)_m) L_m^{(mu-1)}(2t) e^{-t}.
cplx laguerre_mode(int m, double mu, double t);
// All modes l_0 .. l_{count-1} at t.
std::vector<cplx> laguerre_modes(int count, double mu, double t);

struct GaussRule {
    RVector nodes;
    RVector weights;  // normalized to sum 1
};

// Gauss rule for x^alpha e^{-x} on (0, inf), by Golub-Welsch.
GaussRule gauss_laguerre(int n, double alpha);

// <l_m, l_n> for m, n < size in L^2(t^{mu-1} dt), scaled so that <l_0, l_0> = 1.
CMatrix laguerre_gram(int size, double mu, int nodes = 64);

struct EigenProfile {
    double lambda = 0.0;       // eigenvalue used
    int index = 0;             // position in the ascending spectrum
    int M = 0;                 // truncation order used
    std::vector<double> t;
    std::vector<CVector> values;      // profile components at each t
    std::vector<double> coeff_norms;  // |u_m|
    double tail_ratio = 0.0;          // geometric decay rate of |u_m|
    double profile_change = 0.0;      // change of the normalized coefficients under M -> 2M
    CVector coefficients;             // u_m stacked, length p M
};

EigenProfile eigenfunction_profile(const NchoProblem& pr, double lambda, const std::vector<double>& t_grid);
EigenProfile eigenfunction_profile_index(const NchoProblem& pr, int index, const std::vector<double>& t_grid);

}  // namespace ncho
