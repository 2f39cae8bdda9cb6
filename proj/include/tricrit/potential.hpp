#pragma once

#include <array>
#include <vector>

#include "tricrit/model.hpp"
#include "tricrit/quadrature.hpp"

namespace tricrit {

// Moments M_k = int_0^inf p(s) e^{-s} s^k ds of the interaction measure.
struct Moments {
    std::vector<double> M;
    std::vector<double> err;
};

// Cached moment table backing every small-t series evaluation of one
// Interaction.  Shared M_k values make the quadrature errors of V, V', Vdot
// at nearby t fully correlated, which is what keeps the near-tricritical
// Newton systems well conditioned.
class SeriesCache {
public:
    static constexpr int kOrder = 20;
    std::array<double, kOrder + 1> M{};
    std::array<double, kOrder + 1> Merr{};
};

// Which evaluation route to use for v and its derivatives.
enum class Route {
    Auto,    // series for t <= 0.1, Bessel integrals above
    Series,  // truncated moment series (valid for any t, errors correlated)
    Bessel,  // the integral representations with scaled Bessel kernels
};

struct VDerivs {
    double v = 0, vp = 0, vpp = 0, vppp = 0;
    double err = 0;
};

struct VdotDerivs {
    double vdot = 0, vdotp = 0, vdotpp = 0, vdotppp = 0;
    double err = 0;
};

// Effective potential and its derivative stack at one point t:
// V = t - log(1+v), primes are t-derivatives, dots are derivatives in the
// chemical potential direction (p -> p e^{-eps s}).
struct PotentialEval {
    double t = 0;
    double v = 0, vp = 0, vpp = 0, vppp = 0;
    double vdot = 0, vdotp = 0, vdotpp = 0, vdotppp = 0;
    double V = 0, Vp = 0, Vpp = 0, Vppp = 0;
    double Vdot = 0, Vdotp = 0, Vdotpp = 0, Vdotppp = 0;
    double err = 0;
};

struct PotentialOptions {
    int t_order = 3;    // v derivatives computed up to this order (0..3)
    int dot_order = 3;  // vdot derivatives up to this order (-1 skips dots)
    Route route = Route::Auto;
    double rel_tol = 1e-11;
};

Moments moments(const Interaction& inter, int kmax, double rel_tol = 1e-11);

// v(t) = int p(s) e^{-s} sqrt(t/s) I_1(2 sqrt(st)) ds and its derivatives
// v^(n)(t) = int p(s) e^{-s} (s/t)^{(n-1)/2} I_{n-1}(2 sqrt(st)) ds.
VDerivs v_and_derivs(const Interaction& inter, double t, int max_order = 3,
                     Route route = Route::Auto, double rel_tol = 1e-11);

// vdot(t) = -int p(s) e^{-s} sqrt(st) I_1(2 sqrt(st)) ds and its first three
// t-derivatives (dotting shifts the moment index by one: vdot^(n) carries
// an extra factor of s in the integrand relative to v^(n)).
VdotDerivs vdot_and_derivs(const Interaction& inter, double t,
                           int max_order = 3, Route route = Route::Auto,
                           double rel_tol = 1e-11);

PotentialEval potential_eval(const Interaction& inter, double t,
                             const PotentialOptions& opts = {});

}  // namespace tricrit
