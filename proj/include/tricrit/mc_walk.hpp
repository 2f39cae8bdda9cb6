#pragma once

#include <cstdint>
#include <vector>

#include "tricrit/model.hpp"

namespace tricrit {

// One continuous-time walk on the complete graph K_N: holding rate
// 1 - 1/N, jump targets uniform over the other N-1 vertices.
struct WalkTrajectory {
    std::vector<int> vertices;      // visited states, first entry is 0
    std::vector<double> holding;    // time spent in each (last truncated at T)
    std::vector<double> local_time; // per-vertex totals, sums to T exactly
    double T = 0;
};

// Deterministic per-trajectory stream: trajectory `index` of a run with
// `seed` is identical no matter how the work is chunked.
WalkTrajectory simulate_walk(int N, double T, std::uint64_t seed,
                             std::uint64_t index);

struct McEstimate {
    double value = 0;
    double std_error = 0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
};

struct WeightCurve {
    std::vector<double> T_grid;
    std::vector<McEstimate> mean_weight;  // E p_N(L_T) per grid time
};

// Sampled weight curve T -> E p_N(L_T), one trajectory serving every grid
// time (local times are cumulative).  Dilute-region parameters only: a
// running mean that stops decaying aborts with a diagnostic.
WeightCurve sample_weight_curve(const ModelParams& params, int N,
                                const std::vector<double>& T_grid,
                                long long n_samples, std::uint64_t seed);

// chi = int_0^inf E p_N(L_T) dT by trapezoid over an automatically chosen
// grid plus an exponential tail bound.
McEstimate estimate_chi(const ModelParams& params, int N, long long n_samples,
                        std::uint64_t seed);

// G_00 (x_equals_y) or G_01 (pooled over the N-1 off-diagonal targets).
McEstimate estimate_two_point(const ModelParams& params, int N,
                              bool x_equals_y, long long n_samples,
                              std::uint64_t seed);

}  // namespace tricrit
