#include "tricrit/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tricrit {

const char* to_string(PhaseLabel label)
{
    switch (label) {
        case PhaseLabel::Dilute: return "Dilute";
        case PhaseLabel::SecondOrderCurve: return "SecondOrderCurve";
        case PhaseLabel::Tricritical: return "Tricritical";
        case PhaseLabel::FirstOrderCurve: return "FirstOrderCurve";
        case PhaseLabel::Dense: return "Dense";
    }
    return "?";
}

namespace {

PotentialEval eval2(const Interaction& inter, double t, double rel_tol)
{
    PotentialOptions o;
    o.t_order = 2;
    o.dot_order = -1;
    o.rel_tol = rel_tol;
    return potential_eval(inter, t, o);
}

// Scan grid: log-spaced up to 1 (catches the shallow dips that open up just
// beyond t = 0 near the first-order curve), linear from 1 to t_max.
std::vector<double> scan_grid(double t_max, int n)
{
    std::vector<double> ts;
    ts.reserve(n + 1);
    const int n_log = n / 2;
    const double lo = 1e-4;
    const double hi_log = std::min(1.0, t_max);
    for (int i = 0; i < n_log; ++i)
        ts.push_back(lo * std::pow(hi_log / lo, static_cast<double>(i) / (n_log - 1)));
    if (t_max > 1.0) {
        const int n_lin = n - n_log;
        for (int i = 1; i <= n_lin; ++i)
            ts.push_back(1.0 + (t_max - 1.0) * i / n_lin);
    }
    return ts;
}

// Safeguarded Newton for V' = 0 inside a bracket [a, b] with V'(a), V'(b) of
// opposite sign.
double polish_root(const Interaction& inter, double a, double b, double fa,
                   const ScanOptions& opts)
{
    double x = 0.5 * (a + b);
    for (int it = 0; it < 80; ++it) {
        PotentialEval e = eval2(inter, x, opts.rel_tol);
        if (std::abs(e.Vp) < opts.vp_tol) return x;
        if ((e.Vp < 0) == (fa < 0))
            a = x;
        else
            b = x;
        double step = e.Vpp != 0.0 ? -e.Vp / e.Vpp : 0.0;
        double xn = x + step;
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);  // fall back to bisection
        x = xn;
    }
    throw std::runtime_error(
        "interior_minima: root polish exceeded its budget near t = " +
        std::to_string(x));
}

}  // namespace

std::vector<InteriorMinimum> interior_minima(const Interaction& inter,
                                             const ScanOptions& opts)
{
    double t_max = opts.t_max;
    for (int attempt = 0;; ++attempt) {
        std::vector<double> ts = scan_grid(t_max, opts.grid_points);
        std::vector<double> vp(ts.size());
        double v_end = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            PotentialEval e = eval2(inter, ts[i], opts.rel_tol);
            vp[i] = e.Vp;
            if (i + 1 == ts.size()) v_end = e.V;
        }

        std::vector<InteriorMinimum> minima;
        double worst = 0.0;  // lowest candidate minimum seen
        // V'(0+) sign from the first grid value; a sign change in each cell
        // gets the bracket subdivided before polishing.
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            if (!(vp[i] < 0.0) != !(vp[i + 1] < 0.0)) {
                double a = ts[i], b = ts[i + 1], fa = vp[i];
                for (int r = 1; r < opts.refine; ++r) {
                    const double m = ts[i] + (ts[i + 1] - ts[i]) * r / opts.refine;
                    const double fm = eval2(inter, m, opts.rel_tol).Vp;
                    if ((fm < 0) == (fa < 0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                        break;
                    }
                }
                const double root = polish_root(inter, a, b, fa, opts);
                PotentialEval e = eval2(inter, root, opts.rel_tol);
                if (e.Vpp > 0.0) {
                    minima.push_back({root, e.V, e.Vpp});
                    worst = std::min(worst, e.V);
                }
            }
        }
        if (v_end > worst + 10.0) return minima;
        if (attempt >= opts.max_doublings)
            throw std::runtime_error(
                "interior_minima: t_max doubling exhausted without clearing "
                "the candidate minima");
        t_max *= 2.0;
    }
}

PhaseReport classify(const Interaction& inter, const ClassifyOptions& opts)
{
    const SeriesCache& c = inter.series_cache();
    const double M0 = c.M[0], M1 = c.M[1], M2 = c.M[2];
    PhaseReport rep;
    rep.Vp0 = 1.0 - M0;
    rep.Vpp0 = M0 * M0 - M1;
    rep.Vppp0 = -0.5 * M2 + 3.0 * M1 * M0 - 2.0 * M0 * M0 * M0;

    std::vector<InteriorMinimum> mins = interior_minima(inter, opts.scan);
    PhaseMargins mg;
    mg.Vp0 = rep.Vp0;
    mg.Vpp0 = rep.Vpp0;
    mg.Vppp0 = rep.Vppp0;
    mg.min_interior_V = std::numeric_limits<double>::infinity();
    const InteriorMinimum* lowest = nullptr;
    for (const auto& m : mins) {
        if (m.V < mg.min_interior_V) {
            mg.min_interior_V = m.V;
            mg.t_at_min = m.t;
            lowest = &m;
        }
    }
    rep.margins = mg;

    const double tol = opts.tol;
    const bool min_at_zero = mg.min_interior_V > tol;  // global minimum stays at t = 0
    const bool dense = mg.min_interior_V < -tol;
    const bool dilute = rep.Vp0 > tol && min_at_zero;
    bool first_order = false;
    const InteriorMinimum* degenerate = nullptr;
    if (rep.Vp0 > tol) {
        for (const auto& m : mins)
            if (std::abs(m.V) <= tol && m.Vpp > 0.0) {
                first_order = true;
                degenerate = &m;
            }
    }
    const bool second_order =
        std::abs(rep.Vp0) <= tol && rep.Vpp0 > tol && min_at_zero;
    const bool tricritical = std::abs(rep.Vp0) <= tol &&
                             std::abs(rep.Vpp0) <= tol && rep.Vppp0 > tol &&
                             min_at_zero;

    const int hits = int(dense) + int(dilute) + int(first_order) +
                     int(second_order) + int(tricritical);
    if (hits != 1)
        throw AmbiguousClassification(
            hits == 0 ? "classify: no region condition holds at tol"
                      : "classify: multiple region conditions hold at tol",
            mg);

    if (dense) {
        rep.label = PhaseLabel::Dense;
        rep.t0 = lowest->t;
        rep.Vt0 = lowest->V;
        rep.Vppt0 = lowest->Vpp;
    } else if (first_order) {
        rep.label = PhaseLabel::FirstOrderCurve;
        rep.t0 = degenerate->t;
        rep.Vt0 = degenerate->V;
        rep.Vppt0 = degenerate->Vpp;
    } else if (dilute) {
        rep.label = PhaseLabel::Dilute;
    } else if (second_order) {
        rep.label = PhaseLabel::SecondOrderCurve;
    } else {
        rep.label = PhaseLabel::Tricritical;
    }
    return rep;
}

}  // namespace tricrit
