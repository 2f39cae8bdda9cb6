#include "tricrit/finite_n.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tricrit/quadrature.hpp"

namespace tricrit {

namespace {

double Q(const PotentialEval& e) { return 1.0 - e.Vp; }

}  // namespace

KernelPair kernel_F01()
{
    KernelPair k;
    k.name = "F01";
    k.t_order = 2;
    k.F = [](const PotentialEval& e) { return Q(e) * Q(e) * e.t; };
    k.d1F = [](const PotentialEval& e) { return -2.0 * Q(e) * e.Vpp * e.t; };
    return k;
}

KernelPair kernel_G00_correction()
{
    KernelPair k;
    k.name = "G00corr";
    k.t_order = 3;
    k.F = [](const PotentialEval& e) { return e.Vpp * e.t; };
    k.d1F = [](const PotentialEval& e) { return e.Vppp * e.t; };
    return k;
}

KernelPair kernel_chi_combined(double N)
{
    KernelPair k;
    k.name = "chi";
    k.t_order = 3;
    k.F = [N](const PotentialEval& e) {
        return N * Q(e) * Q(e) * e.t - e.Vpp * e.t;
    };
    k.d1F = [N](const PotentialEval& e) {
        return -2.0 * N * Q(e) * e.Vpp * e.t - e.Vppp * e.t;
    };
    return k;
}

std::array<KernelPair, 4> length_kernels()
{
    KernelPair k012;
    k012.name = "K012";
    k012.t_order = 2;
    k012.dot_order = 1;
    k012.F = [](const PotentialEval& e) { return Q(e) * Q(e) * e.Vdot * e.t; };
    k012.d1F = [](const PotentialEval& e) {
        return (-2.0 * Q(e) * e.Vpp * e.Vdot + Q(e) * Q(e) * e.Vdotp) * e.t;
    };

    KernelPair k001;
    k001.name = "K001";
    k001.t_order = 3;
    k001.dot_order = 1;
    k001.F = [](const PotentialEval& e) {
        return (Q(e) + Q(e) * Q(e) * e.t - e.Vpp * e.t) * e.Vdot;
    };
    k001.d1F = [](const PotentialEval& e) {
        return (-e.Vpp - 2.0 * Q(e) * e.Vpp * e.t - e.Vppp * e.t) * e.Vdot +
               (Q(e) + Q(e) * Q(e) * e.t - e.Vpp * e.t) * e.Vdotp;
    };

    KernelPair k011;
    k011.name = "K011";
    k011.t_order = 3;
    k011.dot_order = 2;
    k011.F = [](const PotentialEval& e) {
        return e.t * Q(e) * (Q(e) * e.Vdot + e.Vdotp);
    };
    k011.d1F = [](const PotentialEval& e) {
        return e.t * (-e.Vpp * (Q(e) * e.Vdot + e.Vdotp) +
                      Q(e) * (-e.Vpp * e.Vdot + Q(e) * e.Vdotp + e.Vdotpp));
    };

    KernelPair k000;
    k000.name = "K000";
    k000.t_order = 3;
    k000.dot_order = 3;
    k000.F = [](const PotentialEval& e) {
        return (Q(e) + Q(e) * Q(e) * e.t - e.Vpp * e.t) * e.Vdot +
               (1.0 + 2.0 * Q(e) * e.t) * e.Vdotp + e.Vdotpp * e.t;
    };
    k000.d1F = [](const PotentialEval& e) {
        const double d1_k001 =
            (-e.Vpp - 2.0 * Q(e) * e.Vpp * e.t - e.Vppp * e.t) * e.Vdot +
            (Q(e) + Q(e) * Q(e) * e.t - e.Vpp * e.t) * e.Vdotp;
        return d1_k001 - 2.0 * e.Vpp * e.t * e.Vdotp +
               (1.0 + 2.0 * Q(e) * e.t) * e.Vdotpp + e.Vdotppp * e.t;
    };

    return {k012, k001, k011, k000};
}

double ScaledValue::value() const
{
    return sign * std::exp(log_abs);
}

ScaledValue sv_add(ScaledValue a, ScaledValue b)
{
    if (a.sign == 0.0) return b;
    if (b.sign == 0.0) return a;
    if (a.log_abs < b.log_abs) std::swap(a, b);
    const double d = a.sign * b.sign * std::exp(b.log_abs - a.log_abs);
    const double m = 1.0 + d;
    ScaledValue out;
    if (m <= 0.0) {
        if (m == 0.0) return {};
        out.sign = -a.sign;
        out.log_abs = a.log_abs + std::log(-m);
    } else {
        out.sign = a.sign;
        out.log_abs = a.log_abs + std::log(m);
    }
    return out;
}

ScaledValue sv_scale(ScaledValue a, double c)
{
    if (c == 0.0 || a.sign == 0.0) return {};
    a.log_abs += std::log(std::abs(c));
    if (c < 0) a.sign = -a.sign;
    return a;
}

namespace {

struct VScan {
    double Vmin = 0, t_argmin = 0, t_cut = 0, slope = 0.02;
};

// Coarse scan of V: global minimum and a cut where N (V - Vmin) clears 60.
VScan scan_potential(const Interaction& inter, double N, double rel_tol)
{
    PotentialOptions o;
    o.t_order = 0;
    o.dot_order = -1;
    o.rel_tol = rel_tol;
    auto V = [&](double t) { return potential_eval(inter, t, o).V; };

    VScan sc;
    double t_hi = 16.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        sc.Vmin = 0.0;
        sc.t_argmin = 0.0;
        const int n = 220;
        std::vector<double> ts, vs;
        ts.reserve(2 * n);
        for (int i = 0; i < n; ++i)
            ts.push_back(1e-4 * std::pow(std::min(1.0, t_hi) / 1e-4,
                                         static_cast<double>(i) / (n - 1)));
        for (int i = 1; i <= n; ++i)
            if (t_hi > 1.0) ts.push_back(1.0 + (t_hi - 1.0) * i / n);
        vs.reserve(ts.size());
        for (double t : ts) {
            const double v = V(t);
            vs.push_back(v);
            if (v < sc.Vmin) {
                sc.Vmin = v;
                sc.t_argmin = t;
            }
        }
        // first scan point past the minimum clearing the threshold
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (ts[i] > sc.t_argmin && N * (vs[i] - sc.Vmin) > 60.0) {
                sc.t_cut = ts[i];
                const double v2 = V(1.5 * sc.t_cut);
                sc.slope = std::max((v2 - vs[i]) / (0.5 * sc.t_cut), 0.02);
                return sc;
            }
        }
        t_hi *= 4.0;
    }
    throw std::runtime_error("reduce_integral: failed to locate the decay cut");
}

}  // namespace

ScaledValue reduce_integral_scaled(const Interaction& inter,
                                   const KernelPair& kernel, double N,
                                   double rel_tol)
{
    if (N < 1)
        throw std::invalid_argument("reduce_integral: N must be >= 1");
    PotentialOptions o;
    o.t_order = kernel.t_order;
    o.dot_order = kernel.dot_order;
    o.rel_tol = std::max(rel_tol * 1e-2, 1e-13);

    VScan sc = scan_potential(inter, N, o.rel_tol);

    auto log_f = [&](double t) -> std::pair<double, double> {
        PotentialEval e = potential_eval(inter, t, o);
        const double bracket = N * e.Vp * kernel.F(e) - kernel.d1F(e);
        if (bracket == 0.0 || !std::isfinite(bracket))
            return {-std::numeric_limits<double>::infinity(), 0.0};
        return {-N * e.V + std::log(std::abs(bracket)),
                bracket > 0 ? 1.0 : -1.0};
    };

    DecayHint hint;
    hint.eps = N * sc.slope;
    hint.s0 = sc.t_cut;
    hint.log_C = log_f(sc.t_cut).first + hint.eps * sc.t_cut + 3.0;
    if (!std::isfinite(hint.log_C)) hint.log_C = -N * sc.Vmin + 3.0;

    ScaledQuadResult q = integrate_decaying_log(log_f, hint, {rel_tol});
    if (!q.q.converged)
        throw NonConvergence("reduce_integral(" + kernel.name +
                             ") did not converge", q.q);
    ScaledValue out;
    if (q.q.value != 0.0) {
        out.log_abs = q.log_scale + std::log(std::abs(q.q.value));
        out.sign = q.q.value > 0 ? 1.0 : -1.0;
    }
    return out;
}

double reduce_integral(const Interaction& inter, const KernelPair& kernel,
                       double N, double rel_tol)
{
    return reduce_integral_scaled(inter, kernel, N, rel_tol).value();
}

FiniteNObservables finite_n_observables(const Interaction& inter, double N,
                                        double rel_tol)
{
    FiniteNObservables out;
    out.N = N;

    const SeriesCache& c = inter.series_cache();
    const double one_minus_Vp0 = c.M[0];  // 1 - V'(0) = M_0

    ScaledValue I01 = reduce_integral_scaled(inter, kernel_F01(), N, rel_tol);
    ScaledValue Icorr =
        reduce_integral_scaled(inter, kernel_G00_correction(), N, rel_tol);
    ScaledValue G00 = sv_add(sv_add(ScaledValue{std::log(one_minus_Vp0), 1.0},
                                    I01),
                             sv_scale(Icorr, -1.0));
    ScaledValue chi = sv_add(G00, sv_scale(I01, N - 1.0));

    auto ks = length_kernels();
    ScaledValue I012 = reduce_integral_scaled(inter, ks[0], N, rel_tol);
    ScaledValue I001 = reduce_integral_scaled(inter, ks[1], N, rel_tol);
    ScaledValue I011 = reduce_integral_scaled(inter, ks[2], N, rel_tol);
    ScaledValue I000 = reduce_integral_scaled(inter, ks[3], N, rel_tol);
    ScaledValue chiEL = sv_add(
        sv_add(sv_scale(I012, (N - 1.0) * (N - 2.0)),
               sv_scale(sv_add(I001, sv_scale(I011, 2.0)), N - 1.0)),
        I000);

    out.log_G00 = G00.log_abs;
    out.log_G01 = I01.log_abs;
    out.log_chi = chi.log_abs;
    out.log_EL = chiEL.log_abs - chi.log_abs;
    out.log_mode = out.log_chi > 690.0;

    out.G00 = G00.value();
    out.G01 = I01.value();
    out.chi = chi.value();
    out.EL = (chi.sign != 0.0 && chiEL.sign != 0.0)
                 ? chiEL.sign * chi.sign * std::exp(out.log_EL)
                 : 0.0;
    out.rho_N = out.EL / N;
    out.err = 10.0 * rel_tol;  // coarse propagated bound
    return out;
}

}  // namespace tricrit
