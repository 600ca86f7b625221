#pragma once

#include <vector>

#include "trajectoid/mesh.hpp"
#include "trajectoid/path.hpp"
#include "trajectoid/rolling.hpp"
#include "trajectoid/solver.hpp"

namespace trajectoid {

struct SupportCheck {
    double max_trace_deviation = 0.0;   ///< max |support - r| over trace directions
    double min_off_trace_margin = 0.0;  ///< min support/r - 1 far from the shaved band
    int off_trace_samples = 0;
    double trace_tol = 0.0;
    double delta = 0.0;
    bool pass_trace = false;
    bool pass_margin = false;
};

struct VerificationReport {
    double holonomy_residual = 0.0;  ///< matrix-route distance of holonomy^n from identity
    double holonomy_tol = 1e-8;
    bool holonomy_pass = false;
    std::vector<double> orientation_residual_per_period;  ///< m = 1 .. n
    bool minimality_pass = false;  ///< residual > 1e-4 for every m < n
    double replay_deviation = 0.0;
    double replay_tol = 0.0;
    bool replay_pass = false;
    double period_translation_error = 0.0;
    SupportCheck support;
    bool has_support = false;

    bool all_pass() const {
        return holonomy_pass && minimality_pass && replay_pass &&
               (!has_support || (support.pass_trace && support.pass_margin));
    }
};

/// Distance of holonomy(path, r)^n from the identity, recomputed with 3x3
/// matrix products so the check shares no code with the quaternion route.
double verify_holonomy(const PlanarPath& path, const Solution& sol);

/// Support-function checks against the carved solid: along trace directions
/// the height must equal r within 1e-5 r; for directions at least `delta`
/// beyond the shaved band the height must exceed r by a positive margin.
SupportCheck verify_trace_support(const TrajectoidSolid& solid, const SphereTrace& trace,
                                  double delta = 0.1, int samples = 2000);

/// Develop the body-frame trace back onto the plane (inverse isometry):
/// step lengths are r times the geodesic step angles, headings accumulate
/// the spherical turning. For a correct rolling map this reproduces the
/// concatenated periods of the input path.
PlanarPath replay(const PlanarPath& path, const Solution& sol, int periods);

/// Full report: holonomy closure, per-period orientation residuals with
/// minimality, replay deviation, and (when a solid is supplied) the support
/// checks.
VerificationReport verify_solution(const PlanarPath& path, const Solution& sol,
                                   const TrajectoidSolid* solid = nullptr,
                                   const SphereTrace* trace = nullptr);

}  // namespace trajectoid
