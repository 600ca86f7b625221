#pragma once

#include <optional>
#include <vector>

#include "trajectoid/geom.hpp"
#include "trajectoid/path.hpp"

namespace trajectoid {

struct ScanRow {
    double sigma = 0.0;
    double phi = 0.0;        ///< rotation angle of the one-period holonomy, in [0, pi]
    double area_norm = 0.0;  ///< normalized enclosed area mod 2*pi (NaN when antipodal)
    bool antipodal = false;
    bool vertical_axis = false;  ///< holonomy fixes (0,0,-1) within 1e-8
};

struct ScanTable {
    std::vector<ScanRow> rows;
};

/// Uniform sigma grid; rows are independent and evaluated in parallel.
ScanTable scan(const PlanarPath& path, double sigma_min, double sigma_max, int samples);

/// A certified n-path root: rolling n periods at radius r returns the body
/// to its starting orientation.
struct Solution {
    int n = 0;
    int k = 0;  ///< reduced numerator of the target angle 2*pi*k/n (0 for n = 1)
    double sigma = 0.0;
    double r = 0.0;
    double residual_angle = 0.0;     ///< |phi(sigma) - 2*pi*k/n|
    double residual_identity = 0.0;  ///< rotation angle of holonomy^n, in [0, pi]
    std::optional<double> area_deviation;  ///< |S_bar - pi| mod 2*pi, n = 2 only
    bool area_check_pass = true;
};

struct SolveOptions {
    double phi_cell = 0.3;        ///< refine the grid until phi varies at most this per cell
    int max_refine_depth = 30;
    double sigma_rel_tol = 1e-12; ///< bracket width target, relative to sigma
    double identity_tol = 1e-8;   ///< certification bound on holonomy^n
    double area_tol = 1e-6;       ///< two-path area cross-check bound
};

/// All certified n-path roots in (sigma_min, sigma_max], sorted by
/// increasing sigma (largest ball first). Transversal crossings of the
/// targets 2*pi*k/n are bracketed on the continuity-respecting angle of the
/// raw quaternion product; the n = 1 target sits at a fold of the angle and
/// is located by minimization instead. An empty result is a normal outcome.
/// Two-period roots whose trace endpoints are antipodal are excluded as
/// non-generic.
std::vector<Solution> solve_n(const PlanarPath& path, int n, double sigma_min, double sigma_max,
                              int grid, const SolveOptions& opt = {});

struct MinimalResult {
    std::optional<int> n;             ///< smallest n with a root, if any
    std::vector<Solution> solutions;  ///< the roots for that n
    bool phi_constant = false;        ///< max-min of phi over the sweep <= 1e-9
    double phi_min = 0.0;
    double phi_max = 0.0;
};

/// Smallest n <= n_max admitting a root in range. Empirical: the answer is
/// conditioned on the sigma range, the grid, and n_max.
MinimalResult minimal_n(const PlanarPath& path, double sigma_min, double sigma_max, int grid,
                        int n_max, const SolveOptions& opt = {});

/// Rotation angle of B^-1 R^-1 B R in [0, pi], where B turns by beta about
/// an axis n1 and R maps n1 to n2 with n1.n2 = axis_dot:
/// cos(gamma/2) = cos^2(beta/2) + axis_dot * sin^2(beta/2).
/// Implies gamma <= 2*beta, with equality when the axes are opposite.
double rodrigues_angle(double beta, double axis_dot);

/// n1.n2 for the wedge family: z_hat . (holonomy(w, r) z_hat) at
/// r = L(w)/(2*pi*sigma). Returns 1 exactly when the holonomy is a rotation
/// about the vertical axis (the excluded degenerate case).
double wedge_axis_dot(const PlanarPath& w, double sigma);

}  // namespace trajectoid
