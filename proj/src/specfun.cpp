#include "tricrit/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tricrit {

namespace {

constexpr double kCrossover = 30.0;

// e^{-z} sum_k (z/2)^{2k+n} / (k! (k+n)!).  All terms positive, no
// cancellation; the unscaled sum stays below e^z so there is no overflow
// for z < kCrossover.
double series_branch(int n, double z)
{
    const double q = 0.25 * z * z;
    double term = 1.0;
    for (int j = 2; j <= n; ++j) term /= j;       // 1/n!
    term *= std::pow(0.5 * z, n);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum * std::exp(-z);
}

// e^{-z} I_n(z) ~ (2 pi z)^{-1/2} sum_k c_k with
// c_{k+1} = -c_k (mu - (2k+1)^2) / (8 z (k+1)), mu = 4 n^2.
// For z >= 30 the terms fall below 1e-17 before the divergent tail sets in.
double asymptotic_branch(int n, double z)
{
    const double mu = 4.0 * n * n;
    double c = 1.0, sum = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double odd = 2.0 * k + 1.0;
        const double next = -c * (mu - odd * odd) / (8.0 * z * (k + 1));
        if (std::abs(next) >= std::abs(c)) break;  // past optimal truncation
        c = next;
        sum += c;
        if (std::abs(c) < 1e-18 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * z);
}

}  // namespace

double bessel_i_scaled(int n, double z)
{
    if (n < 0 || n > 3)
        throw std::domain_error("bessel_i_scaled: order must be 0..3, got " +
                                std::to_string(n));
    if (std::isnan(z) || z < 0.0)
        throw std::domain_error("bessel_i_scaled: z must be >= 0 and finite");
    if (!std::isfinite(z)) return 0.0;
    if (z < kCrossover) return series_branch(n, z);
    return asymptotic_branch(n, z);
}

}  // namespace tricrit
