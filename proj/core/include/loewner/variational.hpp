#pragma once

#include <optional>

#include "loewner/evolution.hpp"
#include "loewner/field.hpp"
#include "loewner/solver.hpp"

namespace loewner {

/// Path of the transport matrix H solving dH/deta = -H A(eta), H(s) = Id,
/// co-integrated with the base trajectory so A is evaluated at
/// controller-consistent states. H(t)^{-1} is the complex Jacobian of
/// z -> phi_{s,t}(z) at the base point.
class TransportState {
public:
    double start_time() const { return start_; }
    double end_time() const;
    const CVector& base_point() const { return z0_; }
    int dim() const { return n_; }

    CMatrix transport_at(double t) const;
    CVector base_at(double t) const;

    /// max over the sample path of log10 cond(H)
    double max_log10_condition() const { return max_log10_cond_; }

    const std::vector<std::pair<double, CVector>>& samples() const { return samples_; }

private:
    friend TransportState transport_matrix(const FieldSpec&, const Domain&, double, double,
                                           const CVector&, const SolverConfig&);
    double start_ = 0.0;
    CVector z0_;
    int n_ = 0;
    double max_log10_cond_ = 0.0;
    std::vector<Segment> segments_;                    // flattened [x, H] states
    std::vector<std::pair<double, CVector>> samples_;  // flattened
    CVector state_at(double t) const;
};

TransportState transport_matrix(const FieldSpec& field, const Domain& domain, double s, double t,
                                const CVector& z0, const SolverConfig& cfg = {});

struct FlowDerivative {
    CMatrix matrix;          // H(t)^{-1}
    double condition = 0.0;  // condition estimate of H(t)
    bool ill_conditioned = false;
};

inline constexpr double kConditionThreshold = 1e12;

FlowDerivative flow_derivative(const TransportState& state, double t);

struct HolomorphyProbe {
    /// max over coordinate directions of the mismatch between real- and
    /// imaginary-axis central difference quotients of z -> phi_{s,t}(z),
    /// divided by the step
    double cr_residual = 0.0;
    /// deviation of the difference quotients from the transported flow
    /// derivative (field-backed handles only)
    std::optional<double> derivative_deviation;
};

HolomorphyProbe holomorphy_residual(const EvolutionFamilyHandle& handle, double s, double t,
                                    const CVector& z0, double step);

} // namespace loewner
