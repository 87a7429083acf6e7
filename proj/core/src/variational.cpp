#include "loewner/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "loewner/errors.hpp"
#include "rk_internal.hpp"

namespace loewner {

namespace {

// flattened layout: [x_0..x_{n-1}, H_00, H_01, ..., H_{n-1,n-1}]
CVector flatten(const CVector& x, const CMatrix& h) {
    CVector y = x;
    y.insert(y.end(), h.data().begin(), h.data().end());
    return y;
}

void split(const CVector& y, int n, CVector& x, CMatrix& h) {
    x.assign(y.begin(), y.begin() + n);
    h = CMatrix(static_cast<std::size_t>(n));
    std::copy(y.begin() + n, y.end(), h.data().begin());
}

} // namespace

double TransportState::end_time() const {
    return samples_.empty() ? start_ : samples_.back().first;
}

CVector TransportState::state_at(double t) const {
    if (segments_.empty() || t <= segments_.front().t_begin) return samples_.front().second;
    if (t >= segments_.back().t_end) return samples_.back().second;
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (segments_[mid].t_end < t)
            lo = mid + 1;
        else
            hi = mid;
    }
    return segments_[lo].eval(t);
}

CMatrix TransportState::transport_at(double t) const {
    CVector x;
    CMatrix h;
    split(state_at(t), n_, x, h);
    return h;
}

CVector TransportState::base_at(double t) const {
    CVector x;
    CMatrix h;
    split(state_at(t), n_, x, h);
    return x;
}

TransportState transport_matrix(const FieldSpec& field, const Domain& domain, double s, double t,
                                const CVector& z0, const SolverConfig& cfg) {
    if (!(field.domain() == domain))
        throw std::invalid_argument("transport_matrix: field and domain disagree");
    if (!domain.contains(z0))
        throw std::domain_error("transport_matrix: base point outside domain");
    if (!(0.0 <= s && s <= t)) throw std::invalid_argument("transport_matrix: need 0 <= s <= t");
    const int n = domain.dim();

    detail::RhsFn rhs = [&field, &domain, n](double time, const CVector& y, CVector& dy) {
        CVector x;
        CMatrix h;
        split(y, n, x, h);
        if (!domain.contains(x)) return false;
        CVector g;
        CMatrix jac;
        try {
            g = field.evaluate(x, time);
            jac = field.jacobian(x, time);
        } catch (const std::exception&) {
            return false;
        }
        const CMatrix dh = mat_scale(matmul(h, jac), Complex(-1.0, 0.0));
        dy = flatten(g, dh);
        return all_finite(dy);
    };
    detail::StallFn stall = [](double, const CVector&) { return IntegrationStatus::step_underflow; };

    const CVector y0 = flatten(z0, CMatrix::identity(static_cast<std::size_t>(n)));
    detail::CorePath path = detail::integrate_core(field, s, y0, t, cfg, rhs, stall);
    if (path.status != IntegrationStatus::completed)
        throw EscapeError("transport_matrix: base trajectory escaped", path.last_time);

    TransportState state;
    state.start_ = s;
    state.z0_ = z0;
    state.n_ = n;
    state.segments_ = std::move(path.segments);
    state.samples_ = std::move(path.samples);

    double max_cond = 1.0;
    for (const auto& [time, y] : state.samples_) {
        (void)time;
        CVector x;
        CMatrix h;
        split(y, n, x, h);
        const InverseResult inv = invert(h);
        if (inv.singular) {
            max_cond = std::numeric_limits<double>::infinity();
            break;
        }
        max_cond = std::max(max_cond, inv.condition);
    }
    state.max_log10_cond_ = std::log10(max_cond);
    return state;
}

FlowDerivative flow_derivative(const TransportState& state, double t) {
    if (!(state.start_time() <= t && t <= state.end_time() + 1e-12))
        throw std::invalid_argument("flow_derivative: t outside the transported path");
    const CMatrix h = state.transport_at(t);
    const InverseResult inv = invert(h);
    FlowDerivative out;
    out.matrix = inv.inverse;
    out.condition = inv.condition;
    out.ill_conditioned = inv.singular || inv.condition > kConditionThreshold;
    return out;
}

HolomorphyProbe holomorphy_residual(const EvolutionFamilyHandle& handle, double s, double t,
                                    const CVector& z0, double step) {
    const Domain& domain = handle.domain();
    if (!domain.contains(z0)) throw std::domain_error("holomorphy_residual: point outside domain");
    const double h = std::min(step, 0.25 * domain.boundary_distance(z0));
    if (!(h > 0.0)) throw std::domain_error("holomorphy_residual: probe exits domain");
    const int n = domain.dim();

    std::optional<CMatrix> d_flow;
    if (handle.is_field_backed()) {
        const TransportState state =
            transport_matrix(*handle.field(), domain, s, t, z0, handle.solver_config());
        d_flow = flow_derivative(state, t).matrix;
    }

    HolomorphyProbe probe;
    double deviation = 0.0;
    for (int j = 0; j < n; ++j) {
        CVector zp = z0, zm = z0;
        zp[j] += h;
        zm[j] -= h;
        const CVector dre = scale(sub(handle.evaluate_phi(s, t, zp), handle.evaluate_phi(s, t, zm)),
                                  Complex(1.0 / (2.0 * h), 0.0));
        zp[j] = z0[j] + Complex(0.0, h);
        zm[j] = z0[j] - Complex(0.0, h);
        const CVector dim_ = scale(sub(handle.evaluate_phi(s, t, zp), handle.evaluate_phi(s, t, zm)),
                                   Complex(0.0, -1.0 / (2.0 * h)));
        probe.cr_residual = std::max(probe.cr_residual, distance(dre, dim_) / h);
        if (d_flow) {
            CVector column(n);
            for (int i = 0; i < n; ++i) column[i] = (*d_flow)(i, j);
            deviation = std::max(deviation, distance(dre, column));
        }
    }
    if (d_flow) probe.derivative_deviation = deviation;
    return probe;
}

} // namespace loewner
