#include "tricrit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace tricrit {

namespace {

// Gauss-Kronrod 15(7) on [-1,1]; QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value, abs_mass, error;
};

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const {
        return x.error < y.error;
    }
};

class Integrator {
public:
    Integrator(const std::function<double(double)>& f, long* evals)
        : f_(f), evals_(evals) {}

    Panel eval_panel(double a, double b) const {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        double fc = call(c);
        double kron = kWgk[7] * fc;
        double mass = kWgk[7] * std::abs(fc);
        double gauss = kWg[3] * fc;
        for (int i = 0; i < 7; ++i) {
            const double dx = h * kXgk[i];
            const double fl = call(c - dx), fr = call(c + dx);
            kron += kWgk[i] * (fl + fr);
            mass += kWgk[i] * (std::abs(fl) + std::abs(fr));
            if (i % 2 == 1) gauss += kWg[i / 2] * (fl + fr);
        }
        return Panel{a, b, kron * h, mass * h, std::abs((kron - gauss) * h)};
    }

private:
    double call(double x) const {
        const double y = f_(x);
        ++*evals_;
        if (std::isnan(y))
            throw std::runtime_error(
                "integrate_decaying: integrand returned NaN at s = " +
                std::to_string(x));
        return y;
    }

    const std::function<double(double)>& f_;
    long* evals_;
};

struct AdaptOut {
    QuadResult res;
    double abs_mass = 0.0;
};

// Adaptive bisection on [0, s_star].  Signed integrands with near-total
// cancellation terminate at the rounding floor of the absolute mass.
AdaptOut adapt(const std::function<double(double)>& f, double s_star,
               const QuadOptions& opts, long* evals)
{
    Integrator integ(f, evals);
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    long double total = 0.0L, totabs = 0.0L, toterr = 0.0L;
    const int initial = 8;
    for (int i = 0; i < initial; ++i) {
        Panel p = integ.eval_panel(s_star * i / initial,
                                   s_star * (i + 1) / initial);
        total += p.value;
        totabs += p.abs_mass;
        toterr += p.error;
        heap.push(p);
    }
    int panels = initial;
    AdaptOut out;
    auto target = [&]() {
        return std::max({opts.rel_tol * std::abs(static_cast<double>(total)),
                         5e-16 * static_cast<double>(totabs),
                         opts.abs_floor});
    };
    while (static_cast<double>(toterr) > target()) {
        if (panels >= opts.max_panels) {
            out.res.converged = false;
            break;
        }
        Panel worst = heap.top();
        heap.pop();
        Panel l = integ.eval_panel(worst.a, 0.5 * (worst.a + worst.b));
        Panel r = integ.eval_panel(0.5 * (worst.a + worst.b), worst.b);
        total += l.value + r.value - worst.value;
        totabs += l.abs_mass + r.abs_mass - worst.abs_mass;
        toterr += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    out.res.value = static_cast<double>(total);
    out.res.abs_error_estimate = static_cast<double>(toterr);
    out.res.truncation_point = s_star;
    out.abs_mass = static_cast<double>(totabs);
    return out;
}

}  // namespace

QuadResult integrate_decaying(const std::function<double(double)>& f,
                              const DecayHint& hint, const QuadOptions& opts)
{
    if (!(hint.eps > 0.0))
        throw std::invalid_argument("integrate_decaying: decay rate must be > 0");
    if (opts.rel_tol < 1e-13 || opts.rel_tol > 1e-3)
        throw std::invalid_argument(
            "integrate_decaying: rel_tol outside [1e-13, 1e-3]");

    long evals = 0;

    // Coarse value estimate on a window where the hinted tail is < e^{-42}.
    const double s_coarse = hint.s0 + 42.0 / hint.eps;
    Integrator integ(f, &evals);
    long double coarse = 0.0L;
    for (int i = 0; i < 16; ++i)
        coarse += integ.eval_panel(s_coarse * i / 16.0,
                                   s_coarse * (i + 1) / 16.0).value;
    const double v_est =
        std::max(std::abs(static_cast<double>(coarse)), opts.abs_floor);

    // Cut where the hinted tail mass drops below tol * |value|, doubled once.
    double s_star = hint.s0 +
        std::max(1.0, (hint.log_C - std::log(opts.rel_tol * v_est)) / hint.eps);
    s_star *= 2.0;

    AdaptOut out;
    for (int attempt = 0; attempt < 8; ++attempt) {
        out = adapt(f, s_star, opts, &evals);
        const double fs = std::abs(f(s_star));
        ++evals;
        const double scale = std::max({std::abs(out.res.value),
                                       1e-3 * out.abs_mass, opts.abs_floor});
        if (std::isfinite(fs) && fs <= opts.rel_tol * scale) break;
        s_star *= 2.0;  // hint was optimistic; push the cut out
    }
    out.res.evaluations = evals;
    // Residual tail bound from the hint, folded into the error estimate.
    out.res.abs_error_estimate += std::exp(
        hint.log_C - hint.eps * (out.res.truncation_point - hint.s0)) / hint.eps;
    return out.res;
}

ScaledQuadResult integrate_decaying_log(
    const std::function<std::pair<double, double>(double)>& log_f,
    const DecayHint& hint, const QuadOptions& opts)
{
    if (!(hint.eps > 0.0))
        throw std::invalid_argument(
            "integrate_decaying_log: decay rate must be > 0");

    // Peak log-magnitude from a scan mixing linear and logarithmic spacing.
    const double s_hi = hint.s0 + 46.0 / hint.eps;
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 48; ++i) {
        const double u = static_cast<double>(i) / 48.0;
        for (double s : {s_hi * u, s_hi * std::pow(10.0, -8.0 * (1.0 - u))}) {
            const double lm = log_f(s).first;
            if (std::isfinite(lm)) peak = std::max(peak, lm);
        }
    }
    if (!std::isfinite(peak)) peak = 0.0;

    const double shift = peak;
    auto f = [&log_f, shift](double s) {
        const auto [lm, sign] = log_f(s);
        if (sign == 0.0 || lm == -std::numeric_limits<double>::infinity())
            return 0.0;
        return sign * std::exp(lm - shift);
    };
    DecayHint shifted = hint;
    shifted.log_C = hint.log_C - shift;
    ScaledQuadResult out;
    out.log_scale = shift;
    out.q = integrate_decaying(f, shifted, opts);
    return out;
}

}  // namespace tricrit
