#include "tricrit/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "tricrit/potential.hpp"

namespace tricrit {

double AsymptoticLaw::log_value(double N) const
{
    return std::log(prefactor) + n_power * std::log(N) + exp_rate * N;
}

double laplace_endpoint(int mu, double v0, double Va, double lambda, double q0,
                        double N)
{
    if (mu < 1 || mu > 3)
        throw std::invalid_argument("laplace_endpoint: mu must be 1, 2 or 3");
    if (!(v0 > 0) || !(lambda > 0))
        throw std::invalid_argument("laplace_endpoint: need v0 > 0, lambda > 0");
    const double lm = lambda / mu;
    return std::exp(-N * Va) * q0 / (mu * std::pow(v0 * N, lm)) * std::tgamma(lm);
}

double laplace_interior(double t0_value, double Vppt0, double d2F, double N)
{
    if (!(Vppt0 > 0))
        throw std::invalid_argument("laplace_interior: need V''(t0) > 0");
    return std::exp(-N * t0_value) / std::sqrt(N) *
           std::sqrt(2.0 * M_PI / Vppt0) * d2F;
}

double laplace_interior_b1(double Vpp, double Vppp, double Vpppp, double q,
                           double qp, double qpp)
{
    if (!(Vpp > 0))
        throw std::invalid_argument("laplace_interior_b1: need V'' > 0");
    const double bracket = 2.0 * qpp - 2.0 * Vppp * qp / Vpp +
                           (5.0 * Vppp * Vppp / (6.0 * Vpp * Vpp) -
                            Vpppp / (2.0 * Vpp)) * q;
    return bracket / std::pow(2.0 * Vpp, 1.5);
}

ObservableLaws observable_laws(const Interaction& inter,
                               const PhaseReport& report)
{
    ObservableLaws laws;
    auto set = [&](AsymptoticLaw& l, double rate, double power, double pre) {
        l.exp_rate = rate;
        l.n_power = power;
        l.prefactor = pre;
        l.region = report.label;
    };

    switch (report.label) {
        case PhaseLabel::Dilute: {
            const double Vp0 = report.Vp0;
            PotentialOptions o;
            o.dot_order = 1;
            const double Vdotp0 = potential_eval(inter, 0.0, o).Vdotp;
            set(laws.G00, 0, 0, 1.0 - Vp0);
            set(laws.G01, 0, -1, (1.0 - Vp0) * (1.0 - Vp0) / Vp0);
            set(laws.chi, 0, 0, (1.0 - Vp0) / Vp0);
            set(laws.EL, 0, 0, Vdotp0 / (Vp0 * (1.0 - Vp0)));
            set(laws.rho, 0, 0, 0);
            break;
        }
        case PhaseLabel::SecondOrderCurve: {
            const double v0 = 0.5 * report.Vpp0;
            PotentialOptions o;
            o.dot_order = 1;
            const double Vdotp0 = potential_eval(inter, 0.0, o).Vdotp;
            set(laws.G00, 0, 0, 1.0);
            set(laws.G01, 0, -0.5, std::tgamma(1.5) / std::sqrt(v0));
            set(laws.chi, 0, 0.5, std::tgamma(1.5) / std::sqrt(v0));
            set(laws.EL, 0, 0.5,
                Vdotp0 / (std::tgamma(0.5) * std::sqrt(v0)));
            set(laws.rho, 0, 0, 0);
            break;
        }
        case PhaseLabel::Tricritical: {
            const double v0 = report.Vppp0 / 6.0;
            const double c = std::cbrt(v0);
            set(laws.G00, 0, 0, 1.0);
            set(laws.G01, 0, -1.0 / 3.0, std::tgamma(4.0 / 3.0) / c);
            set(laws.chi, 0, 2.0 / 3.0, std::tgamma(4.0 / 3.0) / c);
            set(laws.EL, 0, 2.0 / 3.0,
                std::tgamma(2.0 / 3.0) / std::tgamma(1.0 / 3.0) / c);
            set(laws.rho, 0, 0, 0);
            break;
        }
        case PhaseLabel::FirstOrderCurve:
        case PhaseLabel::Dense: {
            if (!report.t0)
                throw std::invalid_argument(
                    "observable_laws: report lacks the interior minimum");
            const double t0 = *report.t0;
            const double Vt0 = *report.Vt0;
            const double Vpp = *report.Vppt0;
            PotentialOptions o;
            o.t_order = 2;
            o.dot_order = 0;
            PotentialEval e = potential_eval(inter, t0, o);
            const double rate =
                report.label == PhaseLabel::Dense ? std::abs(Vt0) : 0.0;
            const double gauss = std::sqrt(2.0 * M_PI / Vpp);
            if (report.label == PhaseLabel::Dense)
                set(laws.G00, rate, -0.5, gauss * (1.0 - Vpp));
            else
                set(laws.G00, 0, 0, 1.0 - report.Vp0);
            set(laws.G01, rate, -0.5, gauss);
            set(laws.chi, rate, 0.5, gauss);
            set(laws.EL, 0, 1.0, e.Vdot);
            set(laws.rho, 0, 0, e.Vdot);
            break;
        }
    }
    return laws;
}

TricriticalConstants tricritical_constants(const TricriticalPoint& tc)
{
    TricriticalConstants k;
    k.alpha = tc.alpha;
    k.b = tc.b;
    k.a = tc.a_coef;
    if (!(k.alpha > 0) || !(k.b > 0))
        throw std::runtime_error(
            "tricritical_constants: alpha or b not positive; upstream "
            "moments are off");
    const double disc = std::sqrt(k.b * k.b + 2.0 * k.alpha * k.a);
    k.B0 = std::sqrt(2.0 / k.alpha);
    k.B1 = (-k.b + disc) / k.alpha;
    k.B2 = (k.b + disc) / k.alpha;
    k.B3 = 1.5 * k.b / k.alpha;
    k.nu_gg_second = tc.M[4] - 2.0 * tc.M[3] * tc.M[2] +
                     tc.M[2] * tc.M[2] * tc.M[2];
    k.nu_gg_first = k.nu_gg_second + 0.75 * k.b * k.b / k.alpha;
    if (!(k.B0 > 0 && k.B1 > 0 && k.B2 > 0 && k.B3 > 0))
        throw std::runtime_error("tricritical_constants: B constants must be positive");
    return k;
}

namespace {

// Interior minimizer of V for a near-boundary point: seeded from the
// quadratic in V'(t) = V'(0) + V''(0) t + V'''(0) t^2/2, polished by Newton.
// Returns false when V'(0) >= 0 (no dense-side root).
bool dense_minimizer(const Interaction& inter, double* t0_out)
{
    const SeriesCache& c = inter.series_cache();
    const double Vp0 = 1.0 - c.M[0];
    const double Vpp0 = c.M[0] * c.M[0] - c.M[1];
    const double Vppp0 = -0.5 * c.M[2] + 3.0 * c.M[1] * c.M[0] -
                         2.0 * c.M[0] * c.M[0] * c.M[0];
    if (Vp0 >= 0.0) return false;
    const double disc = Vpp0 * Vpp0 - 2.0 * Vppp0 * Vp0;
    double t0 = disc > 0.0 ? (-Vpp0 + std::sqrt(disc)) / Vppp0
                           : -Vp0 / std::max(Vpp0, 1e-6);
    if (!(t0 > 0) || !std::isfinite(t0)) t0 = 1e-3;
    PotentialOptions o;
    o.t_order = 2;
    o.dot_order = -1;
    for (int it = 0; it < 100; ++it) {
        PotentialEval e = potential_eval(inter, t0, o);
        const double step = -e.Vp / e.Vpp;
        double lam = 1.0;
        if (t0 + step < 0.25 * t0) lam = 0.5 * t0 / std::abs(step);
        t0 += lam * step;
        if (std::abs(step) < 1e-13 * std::max(t0, 1e-8)) break;
    }
    PotentialEval e = potential_eval(inter, t0, o);
    if (!(e.Vpp > 0.0)) return false;
    *t0_out = t0;
    return true;
}

void fit_smallest_decade(ApproachTable* table)
{
    double s_min = std::numeric_limits<double>::infinity();
    for (const auto& r : table->rows) s_min = std::min(s_min, r.s);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : table->rows) {
        if (r.s > 10.0 * s_min * (1 + 1e-9)) continue;
        const double y = table->dilute_side ? r.chi : r.t0;
        const double lx = std::log(r.s), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        throw std::invalid_argument("approach fit: need >= 2 points in the "
                                    "smallest decade of s");
    const double p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    table->fit_exponent = p;
    table->fit_amplitude = std::exp((sy - p * sx) / n);
}

}  // namespace

ApproachTable approach_scaling(const ModelParams& base, std::array<double, 2> m,
                               const std::vector<double>& s_values)
{
    if (s_values.empty())
        throw std::invalid_argument("approach_scaling: empty s grid");
    ApproachTable table;
    bool side_known = false;
    for (double s : s_values) {
        ModelParams p{base.u, base.g + s * m[0], base.nu + s * m[1]};
        Interaction inter = make_polynomial_interaction(p);
        const SeriesCache& c = inter.series_cache();
        const double Vp0 = 1.0 - c.M[0];
        ApproachRow row;
        row.s = s;
        if (Vp0 > 0.0) {
            // dilute side: infinite-volume susceptibility
            if (side_known && !table.dilute_side)
                throw SolveFailure("approach_scaling: point at s = " +
                                   std::to_string(s) + " crossed to the dilute side");
            table.dilute_side = true;
            side_known = true;
            row.chi = (1.0 - Vp0) / Vp0;
        } else {
            if (side_known && table.dilute_side)
                throw SolveFailure("approach_scaling: point at s = " +
                                   std::to_string(s) + " crossed to the dense side");
            table.dilute_side = false;
            side_known = true;
            double t0 = 0;
            if (!dense_minimizer(inter, &t0))
                throw SolveFailure("approach_scaling: no interior minimum at s = " +
                                   std::to_string(s));
            row.t0 = t0;
            PotentialOptions o;
            o.t_order = 0;
            o.dot_order = 0;
            row.rho = potential_eval(inter, t0, o).Vdot;
        }
        table.rows.push_back(row);
    }
    fit_smallest_decade(&table);
    return table;
}

ApproachTable first_order_t0_scaling(const TricriticalPoint& tc,
                                     const std::vector<double>& s_values,
                                     double u)
{
    ApproachTable table;
    table.dilute_side = false;
    CurveOptions copts;
    copts.u = u;
    copts.verify = false;
    std::optional<std::pair<double, double>> hint;
    for (double s : s_values) {
        const double g = tc.g - s;
        const double B3 = 1.5 * tc.b / tc.alpha;
        hint = {{tc.nu + tc.M[2] * s, B3 * s}};
        BoundaryPoint bp = first_order_point(g, hint, copts);
        ApproachRow row;
        row.s = s;
        row.t0 = *bp.t0;
        Interaction inter = make_polynomial_interaction({u, g, bp.nu});
        PotentialOptions o;
        o.t_order = 0;
        o.dot_order = 0;
        row.rho = potential_eval(inter, *bp.t0, o).Vdot;
        table.rows.push_back(row);
    }
    fit_smallest_decade(&table);
    return table;
}

}  // namespace tricrit
