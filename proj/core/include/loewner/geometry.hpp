#pragma once

#include <cstdint>
#include <vector>

#include "loewner/linalg.hpp"

namespace loewner {

enum class DomainKind { unit_disc, unit_ball, polydisc };

/// Model complete hyperbolic domain: unit disc, unit ball or unit polydisc
/// in C^n. The ambient distance is the Euclidean one of the embedding.
class Domain {
public:
    static Domain unit_disc();
    static Domain unit_ball(int n);
    static Domain polydisc(int n);

    DomainKind kind() const { return kind_; }
    int dim() const { return n_; }

    /// Strict (open) membership. Throws on dimension mismatch.
    bool contains(const CVector& z) const;

    /// Euclidean distance to the boundary; negative outside.
    double boundary_distance(const CVector& z) const;

    bool operator==(const Domain& other) const = default;

private:
    Domain(DomainKind k, int n) : kind_(k), n_(n) {}
    DomainKind kind_;
    int n_;
};

/// Poincare distance arctanh|(a-b)/(1-conj(b)a)| on the unit disc.
double poincare_distance(Complex a, Complex b);

/// Kobayashi distance in the arctanh normalization. Ball: classical
/// automorphism-invariant formula; polydisc: max of coordinate disc
/// distances. Throws if either point is outside.
double kobayashi_distance(const Domain& domain, const CVector& z, const CVector& w);

struct DirectionalDerivative {
    double value = 0.0;
    /// false when the polydisc max is attained by more than one coordinate,
    /// in which case `value` is the upper Dini derivative.
    bool smooth = true;
};

/// d/dh k(z + h u, w + h v) at h = 0, closed form for disc and ball.
/// Requires z != w, both strictly inside.
DirectionalDerivative kobayashi_directional_derivative(const Domain& domain, const CVector& z,
                                                       const CVector& w, const CVector& u,
                                                       const CVector& v);

/// Symmetric finite-difference cross-check of the directional derivative.
/// step = 0 picks 1e-5 relative to the distance to the boundary.
double kobayashi_directional_derivative_fd(const Domain& domain, const CVector& z,
                                           const CVector& w, const CVector& u, const CVector& v,
                                           double step = 0.0);

/// Low-discrepancy (Halton) interior points with norm capped at radius_cap;
/// `skip` offsets the sequence so distinct streams do not collide.
std::vector<CVector> sample_interior_points(const Domain& domain, std::size_t count,
                                            double radius_cap, std::uint64_t skip = 0);

} // namespace loewner
