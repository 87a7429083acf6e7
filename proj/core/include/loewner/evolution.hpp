#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "loewner/field.hpp"
#include "loewner/report.hpp"
#include "loewner/solver.hpp"

namespace loewner {

struct FieldBackedFamily {
    FieldSpec field;
    SolverConfig cfg;
};

/// User-supplied closed-form maps phi_{s,t}; accepted without proof, they
/// exist mainly to exercise the verifiers (including deliberately broken
/// families as negative controls).
struct ClosedFormFamily {
    std::function<CVector(double, double, const CVector&)> map;
    std::vector<double> breaks;
};

/// An object answering phi_{s,t}(z), backed by a field + solver or by
/// closed-form maps.
class EvolutionFamilyHandle {
public:
    static EvolutionFamilyHandle field_backed(FieldSpec field, SolverConfig cfg = {});
    static EvolutionFamilyHandle closed_form(Domain domain,
                                             std::function<CVector(double, double, const CVector&)> map,
                                             double order = kOrderInf,
                                             std::vector<double> breaks = {});

    const Domain& domain() const { return domain_; }
    double order() const { return order_; }
    bool is_field_backed() const;
    const FieldSpec* field() const;             // nullptr for closed-form handles
    const SolverConfig& solver_config() const;  // defaults for closed-form handles
    const std::vector<double>& time_breaks() const;

    /// phi_{s,t}(z); throws EscapeError when the trajectory leaves the
    /// domain before t, std::invalid_argument when s > t.
    CVector evaluate_phi(double s, double t, const CVector& z) const;

private:
    EvolutionFamilyHandle(Domain d, double order,
                          std::variant<FieldBackedFamily, ClosedFormFamily> backend);
    Domain domain_;
    double order_;
    std::variant<FieldBackedFamily, ClosedFormFamily> backend_;
    std::vector<double> breaks_;
    SolverConfig default_cfg_;
};

struct TimeTriple {
    double s = 0.0, u = 0.0, t = 0.0;
};

struct PointPair {
    CVector z, w;
};

/// Checks (a) phi_{s,s} = id, (b) the composition identity
/// phi_{s,t} = phi_{u,t} o phi_{s,u}, (c) the L^d Lipschitz bound in t
/// d(phi_{s,t}(z), phi_{s,t'}(z)) <= int_{t'}^{t} c against a bound
/// certificate (field-backed) or an empirical envelope (closed-form).
VerificationReport verify_axioms(const EvolutionFamilyHandle& handle, std::span<const CVector> grid,
                                 std::span<const TimeTriple> triples, double horizon,
                                 const CompactSet& region, double tol);

/// Kobayashi contraction k(phi(z), phi(w)) <= k(z, w) + tol per pair.
VerificationReport verify_contraction(const EvolutionFamilyHandle& handle,
                                      std::span<const PointPair> pairs, double s, double t,
                                      double tol);

/// (a) pairwise distinct images with the two-point Gronwall separation
/// lower bound, (b) nonsingular flow derivative at each sample point.
VerificationReport verify_univalence(const EvolutionFamilyHandle& handle,
                                     std::span<const CVector> sample, double s, double t);

struct ContinuityProbe {
    double modulus = 0.0;
    bool shrinking = true; // modulus decreased along the shrinking radii
    std::vector<std::pair<double, double>> radius_modulus;
};

/// Empirical joint-continuity modulus: max over K-samples of
/// d(phi_{s',t'}, phi_{s,t}) for (s', t') within the radius, re-evaluated
/// along shrinking radii.
ContinuityProbe joint_continuity_probe(const EvolutionFamilyHandle& handle, double s, double t,
                                       const CompactSet& region, double radius, std::size_t n);

} // namespace loewner
