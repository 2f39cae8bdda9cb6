#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tricrit/model.hpp"
#include "tricrit/phase.hpp"

namespace tricrit {

enum class CurveKind { SecondOrder, FirstOrder, Vpp0Zero };

const char* to_string(CurveKind kind);

struct BoundaryPoint {
    double g = 0, nu = 0;
    CurveKind kind = CurveKind::SecondOrder;
    std::optional<double> t0;  // interior double root (FirstOrder only)
    double res1 = 0, res2 = 0; // final Newton residuals
    bool verified = true;      // phase-boundary side conditions held
};

struct TricriticalPoint {
    double g = 0, nu = 0;
    std::array<double, 5> M{};  // M_0..M_4 at the point
    double alpha = 0;           // V'''(0) = 1 - M_2/2
    double b = 0;               // M_3 - M_2^2
    double a_coef = 0;          // (M_4 - 2 M_2 M_3 + M_2^3)/2
};

struct SolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CurveOptions {
    double u = 1.0;
    double residual_tol = 1e-11;
    int max_iter = 50;
    bool verify = true;  // re-classify the solved point (side conditions always checked)
};

// 2D Newton on (M_0 - 1, M_1 - 1) with the exact moment-derivative Jacobian
// [[-M_2, -M_1], [-M_3, -M_2]].
TricriticalPoint tricritical_solve(std::pair<double, double> guess = {-3.2, 2.1},
                                   const CurveOptions& opts = {});

// nu solving M_0(g, nu) = 1 (Newton, derivative -M_1; monotone in nu so a
// bracket safeguard gives global convergence).  For g below the tricritical
// point the curve is no longer the phase boundary: the V''(0) > 0 check
// fails and the point comes back with verified = false.
BoundaryPoint second_order_nu(double g, std::optional<double> nu_hint = {},
                              const CurveOptions& opts = {});

// nu solving V''(0) = 0, i.e. M_1 = M_0^2 (Newton, derivative -M_2 + 2 M_0 M_1).
BoundaryPoint vpp0_curve_nu(double g, std::optional<double> nu_hint = {},
                            const CurveOptions& opts = {});

// First-order curve point at given g: damped 2D Newton in (nu, t0) on
// (V(t0), V'(t0)) with Jacobian [[Vdot, V'], [Vdot', V'']].  Near the
// tricritical point the solve is seeded from t0 ~ B3 (g_c - g).
BoundaryPoint first_order_point(double g,
                                std::optional<std::pair<double, double>> hint = {},
                                const CurveOptions& opts = {});

// Continuation trace over [g_min, g_max]: second-order branch for
// g >= g_c, first-order branch below, the tricritical point inserted at the
// kind switch.  Predictor from the previous two points seeds each solve.
std::vector<BoundaryPoint> trace_boundary(double g_min, double g_max,
                                          double step,
                                          const CurveOptions& opts = {});

}  // namespace tricrit
