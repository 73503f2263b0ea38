#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncho/covariance.hpp"

namespace ncho {

struct SchemeRow {
    std::string label;
    XPoint point;
    cplx e0, e1;
};

struct HeunParameters {
    cplx alpha, kappa0, kappa1, q1;
    std::optional<cplx> epsilon, q2;
    double mu = 0.0;
    cplx lambda;
    cplx b1, b2, c1, c2, c3;
    bool heun_case = false;    // b2 = 0: four singular points, no apparent one
    bool coalescence = false;  // c3 = -mu/2 with b2 != 0
    int alpha_branch = +1;     // sign in front of the square root
    std::vector<SchemeRow> scheme;
    cplx fuchs_sum;
};

HeunParameters heun_like_parameters(const NchoProblem& std_problem, cplx lambda);

struct Heun4 {
    cplx alpha, kappa0, kappa1, q1;
    double mu = 0.0;
    std::vector<SchemeRow> scheme;
    cplx fuchs_sum;
};

Heun4 heun_equation_4pt(const NchoProblem& std_problem, cplx lambda);

// f'' + P f' + Q f = 0 with P, Q sums of simple poles.
struct ScalarOde {
    std::vector<cplx> p_poles, p_res, q_poles, q_res;

    cplx P(cplx z) const;
    cplx Q(cplx z) const;
    // Taylor coefficients of P and Q at c up to the given order.
    void taylor(cplx c, int order, std::vector<cplx>& pt, std::vector<cplx>& qt) const;
    std::vector<cplx> singular_points() const;
};

ScalarOde scalar_ode(const HeunParameters& h);
ScalarOde scalar_ode(const Heun4& h);

// Monodromy matrix of (f, f') around a circle of the given radius.
Eigen::Matrix2cd scalar_monodromy(const ScalarOde& ode, cplx center, double radius, int steps = 32, int order = 40);

struct ExampleForms {
    double alpha, kappa_plus, kappa_minus, q_plus, q_minus;
};

ExampleForms example_closed_forms(double beta, double gamma, double eta, double lambda, double mu);

struct ConfluentParams {
    double kappa_t_plus, kappa_t_minus, q_t_plus, q_t_minus;
};

ConfluentParams confluent_limit_params(double g_tilde, double lambda_tilde, double Delta, double eps_bias);

// |kappa_pm(mu) - kappa~_pm - mu/2| and |q_pm(mu) 2 g~/sqrt(mu) + q~_pm| at finite mu.
struct ConfluenceResidual {
    double kappa_plus, kappa_minus, q_plus, q_minus;
};

ConfluenceResidual confluence_residuals(double g_tilde, double lambda_tilde, double Delta, double eps_bias, double mu);

struct RabiParameters {
    double omega = 1.0;
    double g_coupling = 0.0;
    double Delta = 0.0;
    double eps_bias = 0.0;
    double lambda = 0.0;
};

enum class RabiKind { AsymmetricRabi, JaynesCummings, Generic };

struct RabiClassification {
    RabiKind kind = RabiKind::Generic;
    RabiParameters params;
};

RabiClassification rabi_jc_map(const CMatrix& A_tilde, const CMatrix& B_tilde, const CMatrix& C_tilde);
const char* rabi_kind_name(RabiKind k);

struct QuantizationReport {
    cplx value0, value1;  // 1 + kappa0 - mu/2 and kappa1 - mu/2
    double distance0 = 0.0, distance1 = 0.0;
    bool pass = false;
};

QuantizationReport quantization_check(const HeunParameters& h, double tol = 1e-8);

}  // namespace ncho
