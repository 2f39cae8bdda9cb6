#pragma once

namespace tricrit {

// Exponentially scaled modified Bessel function of the first kind,
// e^{-z} I_n(z), for orders n = 0..3 and z >= 0.
//
// Power series below z = 30, truncated large-z asymptotic expansion above;
// the crossover sits where the asymptotic tail is already below 1e-16, so
// both branches meet the 1e-13 relative-error contract.  Throws
// std::domain_error for n outside 0..3, negative z, or NaN.
double bessel_i_scaled(int n, double z);

}  // namespace tricrit
