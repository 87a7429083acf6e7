#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "loewner/field.hpp"
#include "loewner/geometry.hpp"

namespace loewner {

enum class SingularityPolicy {
    /// integrate declared t^{-alpha} windows in the regularizing variable
    /// u = (t - t0)^{1-alpha}, which makes the right-hand side bounded
    substitute,
    /// start such windows at a small offset instead (kept as the naive
    /// fallback; noticeably less accurate)
    offset,
};

struct SolverConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double max_step = 0.0125;
    /// boundary-distance threshold of the escape detector
    double escape_margin = 1e-8;
    /// Kobayashi distance from the start point that qualifies a stalled
    /// boundary approach as escape
    double escape_kobayashi_threshold = 5.0;
    SingularityPolicy singularity_policy = SingularityPolicy::substitute;
};

enum class IntegrationStatus { completed, escaped, step_underflow };

/// One accepted step. States and derivatives are stored in the step's own
/// integration parameter u; u equals t except on windows that were
/// reparametrized around a declared singularity, where t = anchor + u^stretch.
struct Segment {
    double t_begin = 0.0, t_end = 0.0;
    double u_begin = 0.0, u_end = 0.0;
    bool reparam = false;
    double anchor = 0.0;
    double stretch = 1.0;
    CVector y_begin, y_end;
    CVector dy_begin, dy_end; // d state / d u

    double u_of_t(double t) const;
    CVector eval(double t) const; // cubic Hermite in u
};

/// Time-stamped solution curve of the Loewner ODE.
struct Trajectory {
    double start_time = 0.0;
    CVector initial_point;
    IntegrationStatus status = IntegrationStatus::completed;
    std::optional<double> escape_time;
    std::vector<std::pair<double, CVector>> samples; // (t_i, x_i), t_i increasing
    std::vector<Segment> segments;

    double end_time() const;
    const CVector& end_point() const;
    /// Dense evaluation; clamps outside the covered window.
    CVector eval(double t) const;
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) integration of
/// dx/dt = G(x, t) from (s, z0) to t_end, with mandatory sub-stepping at
/// every time-vocabulary breakpoint and regularized windows at declared
/// singularities. Escape is flagged only when the controller stalls against
/// the boundary with diverging Kobayashi distance from z0.
Trajectory integrate(const FieldSpec& field, const Domain& domain, double s, const CVector& z0,
                     double t_end, const SolverConfig& cfg = {});

/// Picard fixed-point iteration of x(t) = z0 + int_s^t G(x, tau) dtau on a
/// fixed composite Gauss-Legendre discretization (8 nodes per panel, panels
/// aligned to breakpoints). Independent of `integrate` by construction.
/// Throws PicardError when successive differences stop contracting.
Trajectory picard_iterate(const FieldSpec& field, double s, const CVector& z0, double delta,
                          std::size_t n_max = 64, double tol = 1e-12);

/// Largest delta <= horizon - s with int_s^{s+delta} C <= r and
/// int_s^{s+delta} C~ <= r, where C is the bound certificate on the closed
/// ball of radius r and C~ the Cauchy Lipschitz certificate on P.
double local_existence_delta(const FieldSpec& field, double s, double r, const CompactSet& P,
                             double horizon);

enum class GronwallDirection { forward, backward };

struct GronwallResult {
    bool satisfied = true;
    std::size_t witness_index = 0; // meaningful when !satisfied
};

/// Checks theta(t_i) <= C exp(int k) + tol pointwise on the sample grid,
/// assuming the Gronwall hypothesis holds there.
GronwallResult gronwall_check(std::span<const double> times, std::span<const double> theta,
                              const TimeFunction& k, double bound, GronwallDirection direction,
                              double tol);

} // namespace loewner
