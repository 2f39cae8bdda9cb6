#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>

#include "tricrit/model.hpp"
#include "tricrit/potential.hpp"

namespace tricrit {

// Diagonal restriction of a two-slot observable kernel F(t1, t2): the
// reduced representation needs exactly F(t,t) and the first-slot partial
// d1F(t,t), both assembled from the potential derivative stack.
struct KernelPair {
    std::string name;
    std::function<double(const PotentialEval&)> F, d1F;
    int t_order = 2;
    int dot_order = -1;
};

// Two-point kernels: F01(t,t) = (1-V')^2 t and the G00 correction V'' t.
KernelPair kernel_F01();
KernelPair kernel_G00_correction();

// chi as a single kernel, (N-1) F01 + F01 - correction folded together:
// chi = (1 - V'(0)) + I[N*F01 - corr].  Used as an independent route for
// the chi identity check.
KernelPair kernel_chi_combined(double N);

// Length kernels K012, K001, K011, K000 (in that order).
std::array<KernelPair, 4> length_kernels();

// Signed value stored as sign * exp(log_abs); usable when the dense phase
// makes e^{N |V(t0)|} overflow.
struct ScaledValue {
    double log_abs = -std::numeric_limits<double>::infinity();
    double sign = 0.0;

    double value() const;  // +/-inf on overflow
};
ScaledValue sv_add(ScaledValue a, ScaledValue b);
ScaledValue sv_scale(ScaledValue a, double c);

// int_0^inf e^{-N V(t)} (N V'(t) F(t,t) - d1F(t,t)) dt, evaluated in
// log-magnitude form with the minimum of V as the shift.
ScaledValue reduce_integral_scaled(const Interaction& inter,
                                   const KernelPair& kernel, double N,
                                   double rel_tol = 1e-10);
// Same, returned as a plain double (inf if it overflows).
double reduce_integral(const Interaction& inter, const KernelPair& kernel,
                       double N, double rel_tol = 1e-10);

struct FiniteNObservables {
    double N = 0;
    bool log_mode = false;  // linear fields overflow in the dense phase
    double G00 = 0, G01 = 0, chi = 0, EL = 0, rho_N = 0;
    double log_G00 = 0, log_G01 = 0, log_chi = 0, log_EL = 0;
    double err = 0;  // propagated relative error estimate (coarse bound)
};

// Exact finite-N observables via the reduced 1D integrals; valid for any
// N >= 1 (the (N-1)(N-2) length factor vanishes below N = 3 on its own).
FiniteNObservables finite_n_observables(const Interaction& inter, double N,
                                        double rel_tol = 1e-10);

}  // namespace tricrit
