#pragma once

// Internal adaptive-stepper driver shared by the point solver and the
// variational transport; not part of the installed API.

#include <functional>
#include <utility>
#include <vector>

#include "loewner/field.hpp"
#include "loewner/solver.hpp"

namespace loewner::detail {

/// right-hand side in absolute time; returning false marks the stage
/// infeasible (state left the domain, evaluation failed, non-finite result)
using RhsFn = std::function<bool(double, const CVector&, CVector&)>;

/// classifies a controller stall at the last accepted state
using StallFn = std::function<IntegrationStatus(double, const CVector&)>;

struct CorePath {
    IntegrationStatus status = IntegrationStatus::completed;
    std::vector<Segment> segments;
    std::vector<std::pair<double, CVector>> samples;
    double last_time = 0.0;
    CVector state;
};

/// Window planning (breakpoints + singular reparametrization) and DOPRI5
/// stepping for dy/dt = rhs(t, y) from (s, y0) to t_end. The field supplies
/// only the time structure; the state may be any flattened system.
CorePath integrate_core(const FieldSpec& field, double s, const CVector& y0, double t_end,
                        const SolverConfig& cfg, const RhsFn& rhs_t, const StallFn& stall);

} // namespace loewner::detail
