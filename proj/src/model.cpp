#include "tricrit/model.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "model_impl.hpp"

namespace tricrit {

bool admissible(const ModelParams& p)
{
    if (std::isnan(p.u) || std::isnan(p.g) || std::isnan(p.nu)) return false;
    if (p.u > 0.0) return true;
    if (p.u == 0.0 && p.g > 0.0) return true;
    return p.u == 0.0 && p.g == 0.0 && p.nu > -1.0;
}

Interaction::Interaction(LogP log_p, LogP dlog_p, double decay_eps,
                         double decay_C)
{
    if (!log_p) throw std::invalid_argument("Interaction: log_p is empty");
    if (std::abs(log_p(0.0)) > 1e-12)
        throw std::invalid_argument("Interaction: log p(0) must be 0");
    // Spot-check the promised bound log p(s) <= -eps s + C.
    for (double s : {0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 60.0, 120.0}) {
        if (log_p(s) > -decay_eps * s + decay_C + 1e-9)
            throw std::invalid_argument(
                "Interaction: decay bound violated at s = " + std::to_string(s));
    }
    auto impl = std::make_shared<Impl>();
    impl->log_p = std::move(log_p);
    impl->dlog_p = std::move(dlog_p);
    impl->decay_eps = decay_eps;
    impl->decay_C = decay_C;
    impl_ = std::move(impl);
}

double Interaction::log_p(double s) const { return impl_->log_p(s); }
double Interaction::dlog_p(double s) const
{
    if (!impl_->dlog_p)
        throw std::logic_error("Interaction: no derivative supplied");
    return impl_->dlog_p(s);
}
double Interaction::decay_eps() const { return impl_->decay_eps; }
double Interaction::decay_C() const { return impl_->decay_C; }

Interaction make_polynomial_interaction(const ModelParams& params)
{
    if (!admissible(params))
        throw std::invalid_argument(
            "make_polynomial_interaction: inadmissible parameters (need u > 0, "
            "or u = 0 and g > 0, or u = g = 0 and nu > -1)");
    const double u = params.u, g = params.g, nu = params.nu;
    auto log_p = [u, g, nu](double s) { return -((u * s + g) * s + nu) * s; };
    auto dlog_p = [u, g, nu](double s) { return -(3.0 * u * s + 2.0 * g) * s - nu; };

    double eps, C;
    if (u > 0.0 || g > 0.0) {
        eps = 1.0;
        // C = max_s (log p + s); coarse grid plus margin is enough, the
        // quadrature extends its cut when a hint proves optimistic.
        C = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double s = 0.1 * i;
            C = std::max(C, log_p(s) + eps * s);
        }
        C += 0.5;
    } else {  // free walk: log p = -nu s exactly
        eps = nu;
        C = 0.0;
    }
    return Interaction(log_p, dlog_p, eps, C);
}

}  // namespace tricrit
