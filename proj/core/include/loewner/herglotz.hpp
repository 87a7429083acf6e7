#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "loewner/field.hpp"
#include "loewner/geometry.hpp"
#include "loewner/sampling.hpp"
#include "loewner/solver.hpp"

namespace loewner {

enum class Verdict { pass, fail, advisory };

struct HerglotzWitness {
    CVector z, w;
    double t = 0.0;
    double value = 0.0;
};

struct HerglotzReport {
    Verdict verdict = Verdict::pass;
    double worst_value = 0.0;
    HerglotzWitness witness;
    std::size_t samples = 0;
    double tol = 0.0;
};

/// Default time sampling: midpoints of the field's time-vocabulary pieces
/// within [0, horizon], refined `per_piece` times; breakpoints themselves
/// are never sampled.
std::vector<double> herglotz_time_samples(const FieldSpec& field, double horizon,
                                          int per_piece = 3);

/// Samples (dk_M)_{(z,w)}(G(z,t), G(w,t)) over the given pairs and times;
/// pass iff every sample is <= tol. On the polydisc the Kobayashi distance
/// is not C^1 off the diagonal, so the verdict is at most advisory.
HerglotzReport check_herglotz(const FieldSpec& field, const Domain& domain,
                              std::span<const std::pair<CVector, CVector>> pairs,
                              std::span<const double> times, double tol);

/// Same check over n_pairs low-discrepancy pairs matched pseudo-randomly
/// from the seed, sampled within radius_cap of the origin.
HerglotzReport check_herglotz(const FieldSpec& field, const Domain& domain, std::size_t n_pairs,
                              std::span<const double> times, double tol,
                              std::uint64_t seed = kDefaultSeed, double radius_cap = 0.85);

/// Derivative-free cross-check: integrates pairs from s to t and verifies
/// k(phi(z), phi(w)) <= k(z, w) + tol. Escape before t is an error.
HerglotzReport flow_contraction_check(const FieldSpec& field, const Domain& domain, double s,
                                      double t, std::size_t n_pairs, double tol,
                                      const SolverConfig& cfg = {},
                                      std::uint64_t seed = kDefaultSeed, double radius_cap = 0.85);

} // namespace loewner
