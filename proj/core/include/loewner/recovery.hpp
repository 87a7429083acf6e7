#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "loewner/evolution.hpp"
#include "loewner/report.hpp"
#include "loewner/sampling.hpp"

namespace loewner {

/// Forward difference quotient G_h(z, t) = (phi_{t,t+h}(z) - z) / h.
CVector difference_quotient(const EvolutionFamilyHandle& handle, const CVector& z, double t,
                            double h);

struct RecoveredValue {
    CVector value;               // extrapolated forward limit
    double error_estimate = 0.0; // from the extrapolation tableau
    bool converged = true;
    /// populated when the one-sided limits split (time-vocabulary
    /// breakpoint): forward = right limit, backward = left limit
    std::optional<CVector> forward_value;
    std::optional<CVector> backward_value;
};

/// Dyadic default sequence h_max * 2^{-j}, j = 0..length-1.
std::vector<double> default_h_sequence(double h_max = 1e-2, int length = 6);

/// Richardson-extrapolated limit of the difference quotients along the
/// decreasing h-sequence (length >= 3). A backward quotient family is run
/// alongside; disagreement of the two one-sided limits flags the value.
RecoveredValue recover_field(const EvolutionFamilyHandle& handle, const CVector& z, double t,
                             std::span<const double> h_sequence);

/// Empirical sup of |difference_quotient| over (z, t, h) in
/// K x [0, T] x (0, h_max], inflated by 1.1.
double uniform_bound(const EvolutionFamilyHandle& handle, const CompactSet& region, double horizon,
                     double h_max, std::size_t n_samples, std::uint64_t seed = kDefaultSeed);

/// Compares the recovered field against a candidate on the sample; passes
/// iff the max deviation is <= tol.
VerificationReport uniqueness_crosscheck(const EvolutionFamilyHandle& handle,
                                         const FieldSpec& candidate,
                                         std::span<const std::pair<CVector, double>> samples,
                                         double tol);

struct RecoveredSample {
    CVector z;
    double t = 0.0;
    CVector g;
    double error_estimate = 0.0;
    bool converged = true;
};

/// Grid recovery artifact: samples, the h-sequence used, and the empirical
/// uniform bound A_{T,K} dominating every stored estimate.
struct RecoveredField {
    std::vector<RecoveredSample> samples;
    std::vector<double> h_sequence;
    double bound = 0.0;
};

RecoveredField recover_on_grid(const EvolutionFamilyHandle& handle, std::span<const CVector> zs,
                               std::span<const double> ts, std::span<const double> h_sequence);

} // namespace loewner
