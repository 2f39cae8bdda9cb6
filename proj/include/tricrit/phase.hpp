#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tricrit/model.hpp"
#include "tricrit/potential.hpp"

namespace tricrit {

enum class PhaseLabel {
    Dilute,
    SecondOrderCurve,
    Tricritical,
    FirstOrderCurve,
    Dense,
};

const char* to_string(PhaseLabel label);

struct InteriorMinimum {
    double t;
    double V;
    double Vpp;
};

// Signed distances of the defining conditions from their thresholds.
struct PhaseMargins {
    double Vp0 = 0, Vpp0 = 0, Vppp0 = 0;
    double min_interior_V = 0;  // +inf when V' has no interior minimum
    double t_at_min = 0;
};

struct PhaseReport {
    PhaseLabel label;
    double Vp0, Vpp0, Vppp0;
    std::optional<double> t0, Vt0, Vppt0;  // interior global minimum witnesses
    PhaseMargins margins;
};

struct AmbiguousClassification : std::runtime_error {
    PhaseMargins margins;
    AmbiguousClassification(const std::string& what, PhaseMargins m)
        : std::runtime_error(what), margins(m) {}
};

struct ScanOptions {
    double t_max = 50.0;
    int grid_points = 2000;
    int refine = 4;
    double vp_tol = 1e-12;
    int max_doublings = 6;
    double rel_tol = 1e-11;
};

// All interior minima of V on (0, t_max): sign changes of V' on a dense
// grid (log-spaced below 1, linear above), brackets refined and polished by
// safeguarded Newton to |V'| < vp_tol; only roots with V'' > 0 returned.
// t_max doubles until V(t_max) clears every candidate minimum by 10.
std::vector<InteriorMinimum> interior_minima(const Interaction& inter,
                                             const ScanOptions& opts = {});

struct ClassifyOptions {
    double tol = 1e-8;
    ScanOptions scan;
};

// Five-region classification from the minimum structure of V.  Throws
// AmbiguousClassification when no label (or more than one) holds at the
// given tolerance; margins always let callers see how close the call was.
PhaseReport classify(const Interaction& inter, const ClassifyOptions& opts = {});

}  // namespace tricrit
