#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loewner/geometry.hpp"
#include "loewner/linalg.hpp"
#include "loewner/time_function.hpp"

namespace loewner {

class FieldSpec;

/// G(z, t) = -c(t) z.
struct RadialField {
    TimeFunction c;
};

/// G(z, t) = A(t) z; either a constant matrix or a piecewise-continuous
/// callable with declared breakpoints.
struct LinearField {
    bool constant = true;
    CMatrix a0;
    std::function<CMatrix(double)> a_fn;
    std::vector<double> breaks;

    CMatrix at(double t) const { return constant ? a0 : a_fn(t); }
};

/// Disc-only Berkson-Porta parametrization
/// G(z, t) = (z - tau(t)) (conj(tau(t)) z - 1) p(z, t), Re p >= 0.
struct BerksonPortaField {
    std::function<Complex(double)> tau;
    std::vector<double> tau_breaks;
    std::function<Complex(Complex, double)> p;
    std::vector<double> p_breaks;
    /// structured payload kept by the JSON loader so parsed fields can be
    /// re-serialized; empty for callable-backed fields
    std::string schema_hint;
};

/// One monomial a_k(t) z^k with a_k(t) = value * profile(t).
struct PolynomialCoefficient {
    int degree = 0;
    Complex value{0.0, 0.0};
    TimeFunction profile = TimeFunction::constant(1.0);
};

/// Disc-only finite power series in z.
struct PolynomialDiscField {
    std::vector<PolynomialCoefficient> coeffs;
};

/// parts[i] active on [knots[i-1], knots[i]); knots are interior.
struct PiecewiseTimeField {
    std::vector<double> knots;
    std::vector<FieldSpec> parts;
};

/// Arbitrary evaluator with declared measurability breakpoints. The declared
/// bound, when present, must dominate ||G|| on the whole domain; otherwise
/// certificates are sampled and inflated by `safety`.
struct CustomField {
    std::function<CVector(const CVector&, double)> evaluator;
    std::vector<double> breaks;
    std::optional<TimeFunction> declared_bound;
    double safety = 1.1;
};

/// Weak holomorphic vector field of declared order d: holomorphic in z for
/// each t, measurable in t by construction of the time vocabulary.
class FieldSpec {
public:
    using Variant = std::variant<RadialField, LinearField, BerksonPortaField, PolynomialDiscField,
                                 PiecewiseTimeField, CustomField>;

    static FieldSpec radial(Domain domain, TimeFunction c, double order = kOrderInf);
    static FieldSpec linear(Domain domain, CMatrix a, double order = kOrderInf);
    static FieldSpec linear(Domain domain, std::function<CMatrix(double)> a_fn,
                            std::vector<double> breaks, double order = kOrderInf);
    static FieldSpec berkson_porta(std::function<Complex(double)> tau, std::vector<double> tau_breaks,
                                   std::function<Complex(Complex, double)> p,
                                   std::vector<double> p_breaks, double order = kOrderInf);
    static FieldSpec berkson_porta(BerksonPortaField bp, double order = kOrderInf);
    static FieldSpec polynomial_disc(std::vector<PolynomialCoefficient> coeffs,
                                     double order = kOrderInf);
    static FieldSpec piecewise_time(std::vector<double> knots, std::vector<FieldSpec> parts);
    static FieldSpec custom(Domain domain, std::function<CVector(const CVector&, double)> evaluator,
                            std::vector<double> breaks = {},
                            std::optional<TimeFunction> declared_bound = std::nullopt,
                            double order = kOrderInf, double safety = 1.1);

    const Domain& domain() const { return domain_; }
    double order() const { return order_; }
    const Variant& variant() const { return v_; }

    /// G(z, t). Throws if z is outside the domain or t < 0.
    CVector evaluate(const CVector& z, double t) const;

    /// Matrix of holomorphic partials dG_i/dz_j; analytic where the variant
    /// permits, Cauchy-integral quadrature otherwise.
    CMatrix jacobian(const CVector& z, double t) const;

    /// Interior time-vocabulary breakpoints in (0, horizon).
    std::vector<double> time_breakpoints(double horizon) const;
    std::vector<SingularMark> singularities(double horizon) const;

    /// lambda * G.
    FieldSpec scaled(double lambda) const;

private:
    FieldSpec(Domain d, double order, Variant v);
    Domain domain_;
    double order_;
    Variant v_;
};

/// Closed origin-centered ball or polydisc of the given radius, the compact
/// sets K and polydiscs P of the bound machinery.
struct CompactSet {
    enum class Shape { ball, polydisc };
    Shape shape = Shape::ball;
    double radius = 0.5;

    static CompactSet ball(double r) { return {Shape::ball, r}; }
    static CompactSet polydisc(double r) { return {Shape::polydisc, r}; }

    bool contains(const CVector& z) const;
    /// sup of the Euclidean norm over the set in C^n.
    double euclidean_sup_radius(int n) const;
    /// true when the closed set lies strictly inside the domain.
    bool strictly_inside(const Domain& domain) const;
};

/// ||G(z,t)|| <= bound(t) for z in region and a.e. t in [0, horizon],
/// with ld_norm the L^order norm of the bound over [0, horizon].
struct BoundCertificate {
    CompactSet region;
    double horizon = 0.0;
    double order = kOrderInf;
    TimeFunction bound;
    double ld_norm = 0.0;
};

/// Exact for the parametric families, sampled sup (inflated by the declared
/// safety factor) for Berkson-Porta and Custom. Throws CertificateError when
/// the L^d norm diverges for the requested order.
BoundCertificate bound_certificate(const FieldSpec& field, const CompactSet& region, double horizon,
                                   double order);

/// Cauchy-formula Lipschitz certificate: |G(z,t)-G(w,t)| <= C~(t) |z-w| on
/// the polydisc P, built from a bound certificate on an enclosing polydisc.
/// enclosing_radius = 0 picks one automatically; throws when none fits.
TimeFunction lipschitz_certificate(const FieldSpec& field, const CompactSet& P, double horizon,
                                   double order, double enclosing_radius = 0.0);

/// Max over coordinate directions of the mismatch between the real- and
/// imaginary-axis central difference quotients of f at z, relative to the
/// local scale. Near zero for holomorphic maps.
double cauchy_riemann_residual(const std::function<CVector(const CVector&)>& f,
                               const Domain& domain, const CVector& z, double step = 1e-5);

/// Jacobian of a holomorphic map by trapezoid Cauchy quadrature on circles
/// of radius half the distance to the boundary.
CMatrix cauchy_jacobian(const std::function<CVector(const CVector&)>& f, const Domain& domain,
                        const CVector& z, int nodes = 64);

} // namespace loewner
