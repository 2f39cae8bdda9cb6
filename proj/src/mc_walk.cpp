#include "tricrit/mc_walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tricrit {

namespace {

// splitmix64; decorrelates the per-trajectory streams from a single seed.
std::uint64_t mix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next()
    {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }  // [0,1)
    // uniform integer in [0, n) without rate-dependent platform quirks
    std::uint64_t below(std::uint64_t n)
    {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

double phi(const ModelParams& p, double L)
{
    return (p.u * L + p.g) * L * L;  // u L^3 + g L^2
}

struct Accumulator {
    double mean = 0, m2 = 0;
    long long n = 0;
    void add(double x)
    {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double std_error() const
    {
        return n > 1 ? std::sqrt(m2 / ((double)n * (n - 1))) : 0.0;
    }
};

// Streams one trajectory through the grid, reporting the interaction sum
// S(T) = sum_x (u L_{T,x}^3 + g L_{T,x}^2) and the state at each grid time.
template <typename Visit>
void run_trajectory(const ModelParams& params, int N,
                    const std::vector<double>& grid, Rng& rng, Visit&& visit)
{
    const double rate = 1.0 - 1.0 / N;
    std::vector<double> L(N, 0.0);
    int state = 0;
    double t_entered = 0.0;
    double S = 0.0;  // interaction sum over completed occupations
    std::size_t gi = 0;
    const double T_max = grid.back();
    double now = 0.0;
    while (gi < grid.size()) {
        const double tau = -std::log1p(-rng.uniform()) / rate;
        const double t_jump = now + tau;
        while (gi < grid.size() && grid[gi] <= t_jump) {
            const double Lx = L[state] + (grid[gi] - t_entered);
            const double S_T = S - phi(params, L[state]) + phi(params, Lx);
            visit(gi, S_T, state);
            ++gi;
        }
        if (t_jump >= T_max) break;
        const double Lx = L[state] + (t_jump - t_entered);
        S += phi(params, Lx) - phi(params, L[state]);
        L[state] = Lx;
        const std::uint64_t r = rng.below(N - 1);
        state = static_cast<int>(r < static_cast<std::uint64_t>(state) ? r : r + 1);
        t_entered = t_jump;
        now = t_jump;
    }
}

std::vector<double> pilot_grid(const ModelParams& params, int N,
                               std::uint64_t seed)
{
    // Doubling search for a horizon where the weight curve has decayed to
    // 1e-6 of its value at T = 0 (which is 1).
    double T_max = 8.0;
    for (int attempt = 0;; ++attempt) {
        const int G = 64;
        std::vector<double> grid(G);
        for (int i = 0; i < G; ++i) grid[i] = T_max * (i + 1) / G;
        std::vector<Accumulator> acc(G);
        const long long n_pilot = 2048;
        for (long long k = 0; k < n_pilot; ++k) {
            Rng rng(mix(seed ^ 0x70696c6f74ULL) + k);
            run_trajectory(params, N, grid, rng,
                           [&](std::size_t gi, double S_T, int) {
                               acc[gi].add(std::exp(-S_T - params.nu * grid[gi]));
                           });
        }
        // Non-decaying weight means dense-region parameters: naive MC has
        // no integrable curve to sum.
        if (acc[G - 1].mean > 0.8 * acc[3 * G / 4 - 1].mean &&
            acc[G - 1].mean > 1e-4)
            throw std::runtime_error(
                "sample_weight_curve: weight curve is not decaying "
                "(dense-region parameters?)");
        if (acc[G - 1].mean < 1e-6) {
            std::vector<double> full(600);
            for (std::size_t i = 0; i < full.size(); ++i)
                full[i] = T_max * (i + 1) / full.size();
            return full;
        }
        if (attempt >= 10)
            throw std::runtime_error(
                "sample_weight_curve: weight curve still above 1e-6 at T = " +
                std::to_string(T_max));
        T_max *= 2.0;
    }
}

}  // namespace

WalkTrajectory simulate_walk(int N, double T, std::uint64_t seed,
                             std::uint64_t index)
{
    if (N < 2) throw std::invalid_argument("simulate_walk: need N >= 2");
    if (!(T > 0)) throw std::invalid_argument("simulate_walk: need T > 0");
    Rng rng(mix(seed) + index);
    const double rate = 1.0 - 1.0 / N;
    WalkTrajectory traj;
    traj.T = T;
    traj.local_time.assign(N, 0.0);
    int state = 0;
    double now = 0.0;
    while (true) {
        const double tau = -std::log1p(-rng.uniform()) / rate;
        traj.vertices.push_back(state);
        if (now + tau >= T) {
            traj.holding.push_back(T - now);
            traj.local_time[state] += T - now;
            break;
        }
        traj.holding.push_back(tau);
        traj.local_time[state] += tau;
        now += tau;
        const std::uint64_t r = rng.below(N - 1);
        state = static_cast<int>(r < static_cast<std::uint64_t>(state) ? r : r + 1);
    }
    return traj;
}

WeightCurve sample_weight_curve(const ModelParams& params, int N,
                                const std::vector<double>& T_grid,
                                long long n_samples, std::uint64_t seed)
{
    if (N < 2) throw std::invalid_argument("sample_weight_curve: need N >= 2");
    if (T_grid.empty() || n_samples < 1)
        throw std::invalid_argument("sample_weight_curve: empty grid or samples");
    std::vector<Accumulator> acc(T_grid.size());
    for (long long k = 0; k < n_samples; ++k) {
        Rng rng(mix(seed) + k);
        run_trajectory(params, N, T_grid, rng,
                       [&](std::size_t gi, double S_T, int) {
                           acc[gi].add(std::exp(-S_T - params.nu * T_grid[gi]));
                       });
    }
    WeightCurve out;
    out.T_grid = T_grid;
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.mean_weight.push_back(
            {acc[i].mean, acc[i].std_error(), n_samples, seed});
    // decay sanity on the sampled curve itself
    const std::size_t q3 = 3 * acc.size() / 4;
    if (acc.size() >= 8 && acc.back().mean > 1e-4 &&
        acc.back().mean > 0.9 * acc[q3].mean)
        throw std::runtime_error(
            "sample_weight_curve: running mean not decreasing over the last "
            "decade of T");
    return out;
}

namespace {

struct CurveIntegral {
    double value, error;
};

// Trapezoid from 0 (where the weight is exactly 1 for y-unconstrained
// curves, or the supplied first value) plus an exponential tail fit.
CurveIntegral integrate_curve(const std::vector<double>& grid,
                              const std::vector<double>& mean,
                              const std::vector<double>& se, double value_at_0)
{
    double I = 0.0, Ierr = 0.0;
    double prev_T = 0.0, prev_m = value_at_0, prev_se = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        I += 0.5 * (prev_m + mean[i]) * (grid[i] - prev_T);
        Ierr += 0.5 * (prev_se + se[i]) * (grid[i] - prev_T);
        prev_T = grid[i];
        prev_m = mean[i];
        prev_se = se[i];
    }
    // tail: log-linear fit over the last quarter of the grid
    const std::size_t q = 3 * grid.size() / 4;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = q; i < grid.size(); ++i) {
        if (mean[i] <= 0) continue;
        sx += grid[i];
        sy += std::log(mean[i]);
        sxx += grid[i] * grid[i];
        sxy += grid[i] * std::log(mean[i]);
        ++n;
    }
    if (n >= 2) {
        const double lambda = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (lambda > 0 && mean.back() > 0) {
            I += mean.back() / lambda;
            Ierr += (se.back() + 0.5 * mean.back()) / lambda;
        }
    }
    return {I, Ierr};
}

}  // namespace

McEstimate estimate_chi(const ModelParams& params, int N, long long n_samples,
                        std::uint64_t seed)
{
    std::vector<double> grid = pilot_grid(params, N, seed);
    WeightCurve wc = sample_weight_curve(params, N, grid, n_samples, seed);
    std::vector<double> m, se;
    for (const auto& e : wc.mean_weight) {
        m.push_back(e.value);
        se.push_back(e.std_error);
    }
    CurveIntegral ci = integrate_curve(grid, m, se, 1.0);
    // discretization bound from a half-resolution trapezoid
    std::vector<double> g2, m2, se2;
    for (std::size_t i = 1; i < grid.size(); i += 2) {
        g2.push_back(grid[i]);
        m2.push_back(m[i]);
        se2.push_back(se[i]);
    }
    CurveIntegral c2 = integrate_curve(g2, m2, se2, 1.0);
    return {ci.value, ci.error + std::abs(ci.value - c2.value), n_samples, seed};
}

McEstimate estimate_two_point(const ModelParams& params, int N,
                              bool x_equals_y, long long n_samples,
                              std::uint64_t seed)
{
    std::vector<double> grid = pilot_grid(params, N, seed);
    std::vector<Accumulator> acc(grid.size());
    for (long long k = 0; k < n_samples; ++k) {
        Rng rng(mix(seed) + k);
        run_trajectory(params, N, grid, rng,
                       [&](std::size_t gi, double S_T, int state) {
                           const double w =
                               std::exp(-S_T - params.nu * grid[gi]);
                           if (x_equals_y)
                               acc[gi].add(state == 0 ? w : 0.0);
                           else
                               acc[gi].add(state != 0 ? w / (N - 1) : 0.0);
                       });
    }
    std::vector<double> m, se;
    for (const auto& a : acc) {
        m.push_back(a.mean);
        se.push_back(a.std_error());
    }
    // at T = 0 the walk is at its start: weight 1 for x=y, 0 otherwise
    CurveIntegral ci = integrate_curve(grid, m, se, x_equals_y ? 1.0 : 0.0);
    return {ci.value, ci.error, n_samples, seed};
}

}  // namespace tricrit
