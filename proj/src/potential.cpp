#include "tricrit/potential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "model_impl.hpp"
#include "tricrit/specfun.hpp"

namespace tricrit {

namespace {

constexpr double kSeriesThreshold = 0.1;

// Decay hint for integrands p(s) e^{-s} s^k; the measure decays at rate
// 1 + decay_eps(p).
DecayHint moment_hint(const Interaction& inter, int k)
{
    const double eps_m = 1.0 + inter.decay_eps();
    DecayHint h;
    h.eps = 0.5 * eps_m;
    h.log_C = inter.decay_C() + (k > 0 ? k * (std::log(2.0 * k / eps_m) - 1.0) : 0.0) + 2.0;
    return h;
}

// Decay hint for the Bessel-kernel integrands: 2 sqrt(st) <= a s + t/a with
// a = (1 + eps)/2 leaves net decay (1 + eps)/2; slack absorbs the power
// factors (the integrator extends the cut if the hint proves optimistic).
DecayHint bessel_hint(const Interaction& inter, double t, int spower)
{
    const double eps_m = 1.0 + inter.decay_eps();
    DecayHint h;
    h.eps = 0.4 * eps_m;
    h.log_C = inter.decay_C() + 2.0 * t / eps_m + 5.0 +
              (spower > 0 ? spower * std::log(2.0 + 8.0 * spower / eps_m) : 0.0);
    return h;
}

double single_moment(const Interaction& inter, int k, double rel_tol,
                     double* err)
{
    auto f = [&inter, k](double s) {
        return std::exp(inter.log_p(s) - s + k * std::log(s > 0 ? s : 1e-320));
    };
    auto f0 = [&inter](double s) { return std::exp(inter.log_p(s) - s); };
    QuadResult q = k == 0
        ? integrate_decaying(f0, moment_hint(inter, 0), {rel_tol})
        : integrate_decaying(f, moment_hint(inter, k), {rel_tol});
    if (!q.converged)
        throw NonConvergence("moment M_" + std::to_string(k) +
                             " did not converge", q);
    if (err) *err = q.abs_error_estimate;
    return q.value;
}

const SeriesCache& cache_of(const Interaction& inter)
{
    return inter.series_cache();
}

// Series coefficients: v uses M_k, each t-derivative shifts the factorial
// pattern, each dot shifts the moment index up by one.
//   v      = sum M_k t^{k+1} / (k!(k+1)!)       v'   = sum M_k t^k / (k!)^2
//   v''    = sum M_{k+1} t^k / (k!(k+1)!)       v''' = sum M_{k+2} t^k / (k!(k+2)!)
VDerivs v_series(const SeriesCache& c, double t, int max_order)
{
    VDerivs out;
    double trunc = 0;
    for (int k = 0; k + 3 <= SeriesCache::kOrder; ++k) {
        const double f0 = std::tgamma(k + 1.0);           // k!
        const double f1 = f0 * (k + 1.0);                 // (k+1)!
        const double f2 = f1 * (k + 2.0);                 // (k+2)!
        const double tk = std::pow(t, k);
        out.v += c.M[k] * tk * t / (f0 * f1);
        out.vp += c.M[k] * tk / (f0 * f0);
        if (max_order >= 2) out.vpp += c.M[k + 1] * tk / (f0 * f1);
        if (max_order >= 3) out.vppp += c.M[k + 2] * tk / (f0 * f2);
        trunc = std::abs(c.M[k + 2]) * tk / (f0 * f0);
        out.err += (c.Merr[k] + c.Merr[k + 2]) * tk / (f0 * f0);
        if (k > 2 && trunc < 1e-18 * (std::abs(out.vp) + 1e-30)) break;
    }
    out.err += trunc;
    return out;
}

VdotDerivs vdot_series(const SeriesCache& c, double t, int max_order)
{
    VdotDerivs out;
    double trunc = 0;
    for (int k = 0; k + 3 <= SeriesCache::kOrder; ++k) {
        const double f0 = std::tgamma(k + 1.0);
        const double f1 = f0 * (k + 1.0);
        const double f2 = f1 * (k + 2.0);
        const double tk = std::pow(t, k);
        out.vdot -= c.M[k + 1] * tk * t / (f0 * f1);
        if (max_order >= 1) out.vdotp -= c.M[k + 1] * tk / (f0 * f0);
        if (max_order >= 2) out.vdotpp -= c.M[k + 2] * tk / (f0 * f1);
        if (max_order >= 3) out.vdotppp -= c.M[k + 3] * tk / (f0 * f2);
        trunc = std::abs(c.M[k + 3]) * tk / (f0 * f0);
        out.err += (c.Merr[k + 1] + c.Merr[k + 3]) * tk / (f0 * f0);
        if (k > 2 && trunc < 1e-18 * (std::abs(out.vdotp) + 1e-30)) break;
    }
    out.err += trunc;
    return out;
}

// One Bessel-kernel integral: int p(s) e^{-s} s^{spow} (s/t)^{half/2}
// I_{ord}(2 sqrt(st)) ds, written through the scaled Bessel so that the
// exponential pieces combine in log space.
double bessel_integral(const Interaction& inter, double t, int ord, double half,
                       int spow, double rel_tol)
{
    auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double z = 2.0 * std::sqrt(s * t);
        const double lg = inter.log_p(s) - s + z + 0.5 * half * std::log(s / t) +
                          spow * std::log(s);
        return std::exp(lg) * bessel_i_scaled(ord, z);
    };
    QuadResult q = integrate_decaying(f, bessel_hint(inter, t, spow + 1),
                                      {rel_tol});
    if (!q.converged)
        throw NonConvergence("potential integral did not converge at t = " +
                             std::to_string(t), q);
    return q.value;
}

}  // namespace

const SeriesCache& Interaction::series_cache() const
{
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (!impl_->cache) {
        auto c = std::make_shared<SeriesCache>();
        for (int k = 0; k <= SeriesCache::kOrder; ++k)
            c->M[k] = single_moment(*this, k, 1e-13, &c->Merr[k]);
        impl_->cache = std::move(c);
    }
    return *impl_->cache;
}

Moments moments(const Interaction& inter, int kmax, double rel_tol)
{
    if (kmax < 0 || kmax > 8)
        throw std::invalid_argument("moments: kmax must be in 0..8");
    Moments out;
    out.M.resize(kmax + 1);
    out.err.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k)
        out.M[k] = single_moment(inter, k, rel_tol, &out.err[k]);
    return out;
}

VDerivs v_and_derivs(const Interaction& inter, double t, int max_order,
                     Route route, double rel_tol)
{
    if (t < 0 || std::isnan(t))
        throw std::domain_error("v_and_derivs: t must be >= 0");
    if (max_order < 0 || max_order > 3)
        throw std::invalid_argument("v_and_derivs: max_order must be 0..3");
    const SeriesCache& c = cache_of(inter);
    if (t == 0.0) {
        VDerivs out;
        out.vp = c.M[0];
        out.vpp = c.M[1];
        out.vppp = 0.5 * c.M[2];
        out.err = c.Merr[0] + c.Merr[1] + c.Merr[2];
        return out;
    }
    if (route == Route::Series || (route == Route::Auto && t <= kSeriesThreshold))
        return v_series(c, t, max_order);

    VDerivs out;
    out.v = bessel_integral(inter, t, 1, -1, 0, rel_tol);   // sqrt(t/s) I_1
    out.vp = bessel_integral(inter, t, 0, 0, 0, rel_tol);   // I_0
    if (max_order >= 2)
        out.vpp = bessel_integral(inter, t, 1, 1, 0, rel_tol);   // sqrt(s/t) I_1
    if (max_order >= 3)
        out.vppp = bessel_integral(inter, t, 2, 2, 0, rel_tol);  // (s/t) I_2
    out.err = rel_tol * (std::abs(out.v) + std::abs(out.vp) +
                         std::abs(out.vpp) + std::abs(out.vppp));
    return out;
}

VdotDerivs vdot_and_derivs(const Interaction& inter, double t, int max_order,
                           Route route, double rel_tol)
{
    if (t < 0 || std::isnan(t))
        throw std::domain_error("vdot_and_derivs: t must be >= 0");
    if (max_order < 0 || max_order > 3)
        throw std::invalid_argument("vdot_and_derivs: max_order must be 0..3");
    const SeriesCache& c = cache_of(inter);
    if (t == 0.0) {
        VdotDerivs out;
        out.vdotp = -c.M[1];
        out.vdotpp = -c.M[2];
        out.vdotppp = -0.5 * c.M[3];
        out.err = c.Merr[1] + c.Merr[2] + c.Merr[3];
        return out;
    }
    if (route == Route::Series || (route == Route::Auto && t <= kSeriesThreshold))
        return vdot_series(c, t, max_order);

    VdotDerivs out;
    out.vdot = -bessel_integral(inter, t, 1, -1, 1, rel_tol);  // sqrt(st) I_1
    if (max_order >= 1)
        out.vdotp = -bessel_integral(inter, t, 0, 0, 1, rel_tol);   // s I_0
    if (max_order >= 2)
        out.vdotpp = -bessel_integral(inter, t, 1, 1, 1, rel_tol);  // s sqrt(s/t) I_1
    if (max_order >= 3)
        out.vdotppp = -bessel_integral(inter, t, 2, 2, 1, rel_tol); // s (s/t) I_2
    out.err = rel_tol * (std::abs(out.vdot) + std::abs(out.vdotp) +
                         std::abs(out.vdotpp) + std::abs(out.vdotppp));
    return out;
}

PotentialEval potential_eval(const Interaction& inter, double t,
                             const PotentialOptions& opts)
{
    PotentialEval e;
    e.t = t;
    VDerivs vd = v_and_derivs(inter, t, opts.t_order, opts.route, opts.rel_tol);
    e.v = vd.v;
    e.vp = vd.vp;
    e.vpp = vd.vpp;
    e.vppp = vd.vppp;
    e.err = vd.err;
    if (opts.dot_order >= 0) {
        VdotDerivs dd = vdot_and_derivs(inter, t, opts.dot_order, opts.route,
                                        opts.rel_tol);
        e.vdot = dd.vdot;
        e.vdotp = dd.vdotp;
        e.vdotpp = dd.vdotpp;
        e.vdotppp = dd.vdotppp;
        e.err += dd.err;
    }

    const double w = 1.0 + e.v;
    if (!(w > 0.0))
        throw std::runtime_error("potential_eval: 1 + v <= 0 at t = " +
                                 std::to_string(t));
    const double r = e.vp / w;
    e.V = t - std::log1p(e.v);
    e.Vp = 1.0 - r;
    e.Vpp = -e.vpp / w + r * r;
    e.Vppp = -e.vppp / w + 3.0 * e.vpp * e.vp / (w * w) - 2.0 * r * r * r;
    if (opts.dot_order >= 0) {
        e.Vdot = -e.vdot / w;
        e.Vdotp = -e.vdotp / w + e.vdot * e.vp / (w * w);
        e.Vdotpp = -e.vdotpp / w +
                   (2.0 * e.vdotp * e.vp + e.vdot * e.vpp) / (w * w) -
                   2.0 * e.vdot * e.vp * e.vp / (w * w * w);
        e.Vdotppp = -e.vdotppp / w +
                    (3.0 * e.vdotpp * e.vp + 3.0 * e.vdotp * e.vpp +
                     e.vdot * e.vppp) / (w * w) -
                    (6.0 * e.vdotp * e.vp * e.vp +
                     6.0 * e.vdot * e.vp * e.vpp) / (w * w * w) +
                    6.0 * e.vdot * e.vp * e.vp * e.vp / (w * w * w * w);
    }
    return e;
}

}  // namespace tricrit
