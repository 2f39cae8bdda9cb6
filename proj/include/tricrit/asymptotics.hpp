#pragma once

#include <array>
#include <vector>

#include "tricrit/curves.hpp"
#include "tricrit/model.hpp"
#include "tricrit/phase.hpp"

namespace tricrit {

// One observable's N -> infinity law: prefactor * N^{n_power} * e^{exp_rate*N}.
// Laws are kept symbolic; dense-phase values overflow any double long
// before the asymptotics stop being interesting.
struct AsymptoticLaw {
    double exp_rate = 0;  // |V(t0)| in the dense phase, else 0
    double n_power = 0;
    double prefactor = 0;
    PhaseLabel region = PhaseLabel::Dilute;

    double log_value(double N) const;  // log of the law at finite N
};

struct ObservableLaws {
    AsymptoticLaw G00, G01, chi, EL, rho;
};

// Endpoint Laplace approximation of int_a e^{-N V} q dt with
// V ~ Va + v0 (t-a)^mu and q ~ q0 (t-a)^{lambda-1}:
//   e^{-N Va} q0 Gamma(lambda/mu) / (mu (v0 N)^{lambda/mu}).
double laplace_endpoint(int mu, double v0, double Va, double lambda, double q0,
                        double N);

// Interior-minimum Laplace value of the reduced superintegral:
//   e^{-N V(t0)} N^{-1/2} sqrt(2 pi / V''(t0)) * d2F(t0,t0).
double laplace_interior(double t0_value, double Vppt0, double d2F, double N);

// Second coefficient of the interior expansion (diagnostic only):
//   b1 = [2 q'' - 2 V''' q'/V'' + (5 V'''^2/(6 V''^2) - V''''/(2 V'')) q]
//        / (2 V'')^{3/2},   all functions at t0.
double laplace_interior_b1(double Vpp, double Vppp, double Vpppp, double q,
                           double qp, double qpp);

// Region-resolved laws for G00, G01, chi, EL and the density.
ObservableLaws observable_laws(const Interaction& inter,
                               const PhaseReport& report);

struct TricriticalConstants {
    double alpha, b, a;
    double B0, B1, B2, B3;
    double nu_gg_second, nu_gg_first;
};

// alpha = 1 - M2/2, b = M3 - M2^2, a = (M4 - 2 M2 M3 + M2^3)/2,
// B0 = sqrt(2/alpha), B1/B2 = (-/+ b + sqrt(b^2 + 2 alpha a))/alpha,
// B3 = 3b/(2 alpha); one-sided boundary curvatures at the tricritical point.
TricriticalConstants tricritical_constants(const TricriticalPoint& tc);

struct ApproachRow {
    double s;
    double t0 = 0, rho = 0, chi = 0;  // dense rows fill t0/rho, dilute rows chi
};

struct ApproachTable {
    std::vector<ApproachRow> rows;
    bool dilute_side = false;
    double fit_exponent = 0;   // log-log LSQ over the smallest decade of s
    double fit_amplitude = 0;
};

// Observables along the segment (g + s m1, nu + s m2): infinite-volume chi
// on the dilute side, minimizer t0 and density Vdot(t0) on the dense side.
// Throws SolveFailure naming the first s whose point lands on the wrong side.
ApproachTable approach_scaling(const ModelParams& base, std::array<double, 2> m,
                               const std::vector<double>& s_values);

// t0 along the first-order curve itself, parametrised by s = g_c - g.
ApproachTable first_order_t0_scaling(const TricriticalPoint& tc,
                                     const std::vector<double>& s_values,
                                     double u = 1.0);

}  // namespace tricrit
