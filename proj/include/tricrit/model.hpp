#pragma once

#include <functional>
#include <memory>

namespace tricrit {

// Interaction weights for p(t) = exp(-u t^3 - g t^2 - nu t).  The cubic
// coefficient is a parameter (u = 1 recovers the two-parameter family);
// u = 0 with g = 0 is the exactly solvable free walk used as an oracle.
struct ModelParams {
    double u = 1.0;
    double g = 0.0;
    double nu = 0.0;
};

// p(s) e^{-s} must be integrable against all polynomial weights:
// u > 0, or (u = 0 and g > 0), or (u = g = 0 and nu > -1).
bool admissible(const ModelParams& p);

class SeriesCache;  // moment table backing the small-t series (potential.cpp)

// An interaction exposed through log p (never p itself, so large-s
// evaluations cannot underflow) together with a decay bound
// log p(s) <= -decay_eps * s + decay_C.  Immutable and cheap to copy;
// safe to share across threads.
class Interaction {
public:
    using LogP = std::function<double(double)>;

    // Generic hook.  log_p(0) must be 0; the decay bound is spot-checked
    // on a sample grid and violations throw std::invalid_argument.
    Interaction(LogP log_p, LogP dlog_p, double decay_eps, double decay_C);

    double log_p(double s) const;
    double dlog_p(double s) const;
    double decay_eps() const;
    double decay_C() const;

    // Lazily built moment table shared by every small-t series evaluation
    // of this interaction (thread-safe).
    const SeriesCache& series_cache() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Interaction for log p(s) = -u s^3 - g s^2 - nu s.  Rejects inadmissible
// parameter combinations.  The reported decay bound is eps = 1 whenever
// u > 0 or g > 0, and eps = nu for the pure free walk.
Interaction make_polynomial_interaction(const ModelParams& params);

}  // namespace tricrit
