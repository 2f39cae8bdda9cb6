#include "tricrit/curves.hpp"

#include <algorithm>
#include <cmath>

#include "tricrit/potential.hpp"

namespace tricrit {

const char* to_string(CurveKind kind)
{
    switch (kind) {
        case CurveKind::SecondOrder: return "second-order";
        case CurveKind::FirstOrder: return "first-order";
        case CurveKind::Vpp0Zero: return "vpp0-zero";
    }
    return "?";
}

namespace {

// M_0..M_kmax at (u, g, nu), tight tolerance (curve solves live or die on
// correlated, near-machine moment values).
std::vector<double> moments_at(double u, double g, double nu, int kmax)
{
    Interaction inter = make_polynomial_interaction({u, g, nu});
    return moments(inter, kmax, 1e-13).M;
}

PotentialEval eval_fo(const Interaction& inter, double t)
{
    PotentialOptions o;
    o.t_order = 2;
    o.dot_order = 1;
    return potential_eval(inter, t, o);
}

void verify_classification(double u, double g, double nu, PhaseLabel expected,
                           BoundaryPoint* bp)
{
    try {
        PhaseReport rep = classify(make_polynomial_interaction({u, g, nu}));
        if (rep.label != expected) bp->verified = false;
    } catch (const AmbiguousClassification&) {
        // A point solved onto a curve sits at the tolerance edge by
        // construction; an ambiguous call there is acceptable.
    }
}

}  // namespace

TricriticalPoint tricritical_solve(std::pair<double, double> guess,
                                   const CurveOptions& opts)
{
    double g = guess.first, nu = guess.second;
    for (int it = 0; it < opts.max_iter; ++it) {
        auto M = moments_at(opts.u, g, nu, 3);
        const double r0 = M[0] - 1.0;
        const double r1 = M[1] - 1.0;
        const double det = M[2] * M[2] - M[1] * M[3];
        if (std::abs(det) < 1e-14)
            throw SolveFailure("tricritical_solve: singular Jacobian");
        // J = [[-M2, -M1], [-M3, -M2]], solve J d = -r
        const double dg = (M[2] * r0 - M[1] * r1) / det;
        const double dn = (M[2] * r1 - M[3] * r0) / det;
        g -= dg;
        nu -= dn;
        if (std::abs(dg) + std::abs(dn) > 5.0)
            throw SolveFailure("tricritical_solve: diverged");
        if (std::abs(dg) + std::abs(dn) < 1e-14) break;
    }
    auto M = moments_at(opts.u, g, nu, 4);
    if (std::max(std::abs(M[0] - 1.0), std::abs(M[1] - 1.0)) > opts.residual_tol)
        throw SolveFailure("tricritical_solve: residual above tolerance");
    TricriticalPoint tc;
    tc.g = g;
    tc.nu = nu;
    for (int k = 0; k < 5; ++k) tc.M[k] = M[k];
    tc.alpha = 1.0 - 0.5 * M[2];
    tc.b = M[3] - M[2] * M[2];
    tc.a_coef = 0.5 * (M[4] - 2.0 * M[2] * M[3] + M[2] * M[2] * M[2]);
    return tc;
}

namespace {

using Resid = double (*)(const std::vector<double>&);

// Safeguarded scalar Newton in nu: expand a bracket, then keep Newton
// steps inside it.
double solve_in_nu(double u, double g, double nu0, Resid resid, Resid dresid,
                   const CurveOptions& opts)
{
    auto value = [&](double nu) { return resid(moments_at(u, g, nu, 2)); };

    double lo = nu0, hi = nu0;
    double flo = value(lo), fhi = flo;
    for (int k = 0; k < 60 && (flo < 0) == (fhi < 0); ++k) {
        const double w = 0.25 * std::pow(1.6, k);
        if (k % 2 == 0) {
            lo -= w;
            if (u == 0.0 && g == 0.0) lo = std::max(lo, -1.0 + 1e-9);
            flo = value(lo);
        } else {
            hi += w;
            fhi = value(hi);
        }
    }
    if ((flo < 0) == (fhi < 0))
        throw SolveFailure("curve solve: failed to bracket a root in nu");

    double nu = 0.5 * (lo + hi);
    for (int it = 0; it < opts.max_iter + 30; ++it) {
        auto M = moments_at(u, g, nu, 2);
        const double r = resid(M);
        if (std::abs(r) < 1e-13) return nu;
        if ((r < 0) == (flo < 0)) {
            lo = nu;
        } else {
            hi = nu;
        }
        if (hi - lo < 1e-14 * std::max(1.0, std::abs(nu))) break;
        const double dr = dresid(M);
        double next = dr != 0.0 ? nu - r / dr : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        nu = next;
    }
    if (std::abs(resid(moments_at(u, g, nu, 2))) > opts.residual_tol)
        throw SolveFailure("curve solve: residual above tolerance");
    return nu;
}

double resid_m0(const std::vector<double>& M) { return M[0] - 1.0; }
double dresid_m0(const std::vector<double>& M) { return -M[1]; }
double resid_vpp0(const std::vector<double>& M) { return M[1] - M[0] * M[0]; }
double dresid_vpp0(const std::vector<double>& M)
{
    return -M[2] + 2.0 * M[0] * M[1];
}

}  // namespace

BoundaryPoint second_order_nu(double g, std::optional<double> nu_hint,
                              const CurveOptions& opts)
{
    const double nu = solve_in_nu(opts.u, g, nu_hint.value_or(2.0), resid_m0,
                                  dresid_m0, opts);
    auto M = moments_at(opts.u, g, nu, 1);
    BoundaryPoint bp;
    bp.g = g;
    bp.nu = nu;
    bp.kind = CurveKind::SecondOrder;
    bp.res1 = M[0] - 1.0;
    bp.verified = M[1] < M[0] * M[0];  // V''(0) > 0 on the phase boundary
    if (bp.verified && opts.verify)
        verify_classification(opts.u, g, nu, PhaseLabel::SecondOrderCurve, &bp);
    return bp;
}

BoundaryPoint vpp0_curve_nu(double g, std::optional<double> nu_hint,
                            const CurveOptions& opts)
{
    const double nu = solve_in_nu(opts.u, g, nu_hint.value_or(2.0), resid_vpp0,
                                  dresid_vpp0, opts);
    BoundaryPoint bp;
    bp.g = g;
    bp.nu = nu;
    bp.kind = CurveKind::Vpp0Zero;
    bp.res1 = resid_vpp0(moments_at(opts.u, g, nu, 1));
    return bp;
}

BoundaryPoint first_order_point(double g,
                                std::optional<std::pair<double, double>> hint,
                                const CurveOptions& opts)
{
    double nu, t0;
    if (hint) {
        nu = hint->first;
        t0 = hint->second;
    } else {
        // Seed from the expansion around the tricritical point:
        // t0 ~ B3 s, nu ~ nu_c + M2 s + nu_gg_first s^2 / 2, s = g_c - g.
        TricriticalPoint tc = tricritical_solve({-3.2, 2.1}, opts);
        if (g >= tc.g)
            throw SolveFailure(
                "first_order_point: needs g below the tricritical point");
        const double s = tc.g - g;
        const double nu_gg = tc.M[4] - 2.0 * tc.M[3] * tc.M[2] +
                             tc.M[2] * tc.M[2] * tc.M[2] +
                             0.75 * tc.b * tc.b / tc.alpha;
        nu = tc.nu + tc.M[2] * s + 0.5 * nu_gg * s * s;
        t0 = 1.5 * tc.b / tc.alpha * s;
    }

    Interaction inter = make_polynomial_interaction({opts.u, g, nu});
    double res1 = 0, res2 = 0;
    bool converged = false;
    for (int it = 0; it < opts.max_iter + 30; ++it) {
        PotentialEval e = eval_fo(inter, t0);
        res1 = e.V;
        res2 = e.Vp;
        // The V(t0) residual scales with t0 near the tricritical point.
        if (std::abs(res1) < 1e-13 * std::max(t0, 1e-6) &&
            std::abs(res2) < 1e-13) {
            converged = true;
            break;
        }
        const double det = e.Vdot * e.Vpp - e.Vp * e.Vdotp;
        if (det == 0.0 || !std::isfinite(det))
            throw SolveFailure("first_order_point: degenerate Jacobian at g = " +
                               std::to_string(g));
        const double dnu = -(e.Vpp * res1 - e.Vp * res2) / det;
        const double dt0 = -(e.Vdot * res2 - e.Vdotp * res1) / det;
        double lam = 1.0;  // damping keeps t0 positive
        if (t0 + dt0 < 0.25 * t0) lam = std::min(lam, 0.5 * t0 / std::abs(dt0));
        nu += lam * dnu;
        t0 += lam * dt0;
        inter = make_polynomial_interaction({opts.u, g, nu});
        if (lam == 1.0 && std::abs(dnu) + std::abs(dt0) < 1e-12 * std::max(1.0, t0)) {
            converged = true;  // step at the numerical floor
            break;
        }
    }
    PotentialEval e = eval_fo(inter, t0);
    if (!converged &&
        (std::abs(e.V) > opts.residual_tol || std::abs(e.Vp) > opts.residual_tol))
        throw SolveFailure("first_order_point: no convergence at g = " +
                           std::to_string(g));

    auto M = moments_at(opts.u, g, nu, 0);
    BoundaryPoint bp;
    bp.g = g;
    bp.nu = nu;
    bp.kind = CurveKind::FirstOrder;
    bp.t0 = t0;
    bp.res1 = e.V;
    bp.res2 = e.Vp;
    bp.verified = (1.0 - M[0]) > 0.0 && e.Vpp > 0.0;
    if (bp.verified && opts.verify)
        verify_classification(opts.u, g, nu, PhaseLabel::FirstOrderCurve, &bp);
    return bp;
}

std::vector<BoundaryPoint> trace_boundary(double g_min, double g_max,
                                          double step, const CurveOptions& opts)
{
    if (!(step > 0) || !(g_max > g_min))
        throw std::invalid_argument(
            "trace_boundary: need g_min < g_max and step > 0");
    TricriticalPoint tc = tricritical_solve({-3.2, 2.1}, opts);
    CurveOptions fast = opts;
    fast.verify = false;

    std::vector<double> gs;
    for (double g = g_min; g <= g_max + 1e-12; g += step) gs.push_back(g);

    std::vector<BoundaryPoint> first, second;
    std::vector<double> below, above;
    for (double g : gs)
        (g < tc.g - 1e-9 ? below : above).push_back(g);

    // First-order branch, walked outward from the tricritical point with a
    // linear predictor from the previous two solutions.
    std::sort(below.begin(), below.end(), std::greater<>());
    for (std::size_t i = 0; i < below.size(); ++i) {
        std::optional<std::pair<double, double>> hint;
        if (i >= 2)
            hint = {{2 * first[i - 1].nu - first[i - 2].nu,
                     2 * *first[i - 1].t0 - *first[i - 2].t0}};
        else if (i == 1)
            hint = {{first[0].nu, *first[0].t0}};
        first.push_back(first_order_point(below[i], hint, fast));
    }
    std::sort(above.begin(), above.end());
    for (std::size_t i = 0; i < above.size(); ++i) {
        std::optional<double> hint =
            i >= 2 ? std::optional<double>(2 * second[i - 1].nu - second[i - 2].nu)
                   : (i == 1 ? std::optional<double>(second[0].nu)
                             : std::optional<double>(tc.nu));
        second.push_back(second_order_nu(above[i], hint, fast));
    }

    std::vector<BoundaryPoint> out(first.rbegin(), first.rend());
    BoundaryPoint tcp;
    tcp.g = tc.g;
    tcp.nu = tc.nu;
    tcp.kind = CurveKind::SecondOrder;
    tcp.t0 = 0.0;
    out.push_back(tcp);
    out.insert(out.end(), second.begin(), second.end());
    return out;
}

}  // namespace tricrit
