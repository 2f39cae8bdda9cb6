#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

namespace tricrit {

// Decay information for an integrand on [0, inf):
// log|f(s)| <= log_C - eps * s for s >= s0.
struct DecayHint {
    double eps = 1.0;
    double log_C = 0.0;
    double s0 = 0.0;
};

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_floor = 1e-300;
    int max_panels = 4000;
};

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    double truncation_point = 0.0;
    bool converged = true;
};

// Integral of f over [0, inf) for continuous f decaying per the hint.
// Truncation point from the hint (re-derived from a coarse value estimate,
// then doubled once; extended further if the integrand at the cut is not
// yet below tolerance).  Interior handled by adaptive Gauss-Kronrod 15(7)
// bisection.  A NaN from f throws std::runtime_error naming the abscissa;
// exhausting the panel budget returns converged=false with the best estimate.
QuadResult integrate_decaying(const std::function<double(double)>& f,
                              const DecayHint& hint,
                              const QuadOptions& opts = {});

// Same contract, integrand supplied as (log|f|, sign).  The integration
// runs on exp(log|f| - log_scale) * sign after a coarse scan fixes
// log_scale at the peak magnitude, so e^{-N V(t)} factors with N >= 1e6
// neither overflow nor drown.  True integral = value * exp(log_scale).
struct ScaledQuadResult {
    double log_scale = 0.0;
    QuadResult q;
};
ScaledQuadResult integrate_decaying_log(
    const std::function<std::pair<double, double>(double)>& log_f,
    const DecayHint& hint, const QuadOptions& opts = {});

// Thrown by callers that treat converged=false as an error.
struct NonConvergence : std::runtime_error {
    QuadResult best;
    NonConvergence(const std::string& what, QuadResult best_)
        : std::runtime_error(what), best(best_) {}
};

}  // namespace tricrit
