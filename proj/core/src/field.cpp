#include "loewner/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "loewner/errors.hpp"
#include "loewner/sampling.hpp"

namespace loewner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_eval_pre(const FieldSpec& f, const CVector& z, double t) {
    if (t < 0.0) throw std::invalid_argument("FieldSpec: negative time");
    if (!f.domain().contains(z)) throw std::domain_error("FieldSpec: point outside domain");
}

std::size_t piece_index(const std::vector<double>& knots, double t) {
    std::size_t i = 0;
    while (i < knots.size() && t >= knots[i]) ++i;
    return i;
}

} // namespace

FieldSpec::FieldSpec(Domain d, double order, Variant v)
    : domain_(d), order_(order), v_(std::move(v)) {
    if (!(order_ >= 1.0)) throw std::invalid_argument("FieldSpec: order must satisfy d >= 1");
}

FieldSpec FieldSpec::radial(Domain domain, TimeFunction c, double order) {
    return FieldSpec(domain, order, RadialField{std::move(c)});
}

FieldSpec FieldSpec::linear(Domain domain, CMatrix a, double order) {
    if (a.dim() != static_cast<std::size_t>(domain.dim()))
        throw std::invalid_argument("FieldSpec::linear: matrix dimension mismatch");
    LinearField lf;
    lf.constant = true;
    lf.a0 = std::move(a);
    return FieldSpec(domain, order, std::move(lf));
}

FieldSpec FieldSpec::linear(Domain domain, std::function<CMatrix(double)> a_fn,
                            std::vector<double> breaks, double order) {
    LinearField lf;
    lf.constant = false;
    lf.a_fn = std::move(a_fn);
    lf.breaks = std::move(breaks);
    return FieldSpec(domain, order, std::move(lf));
}

FieldSpec FieldSpec::berkson_porta(std::function<Complex(double)> tau, std::vector<double> tau_breaks,
                                   std::function<Complex(Complex, double)> p,
                                   std::vector<double> p_breaks, double order) {
    BerksonPortaField bp;
    bp.tau = std::move(tau);
    bp.tau_breaks = std::move(tau_breaks);
    bp.p = std::move(p);
    bp.p_breaks = std::move(p_breaks);
    return FieldSpec(Domain::unit_disc(), order, std::move(bp));
}

FieldSpec FieldSpec::berkson_porta(BerksonPortaField bp, double order) {
    return FieldSpec(Domain::unit_disc(), order, std::move(bp));
}

FieldSpec FieldSpec::polynomial_disc(std::vector<PolynomialCoefficient> coeffs, double order) {
    for (const auto& c : coeffs)
        if (c.degree < 0) throw std::invalid_argument("polynomial_disc: negative degree");
    return FieldSpec(Domain::unit_disc(), order, PolynomialDiscField{std::move(coeffs)});
}

FieldSpec FieldSpec::piecewise_time(std::vector<double> knots, std::vector<FieldSpec> parts) {
    if (parts.empty()) throw std::invalid_argument("piecewise_time: no parts");
    if (knots.size() + 1 != parts.size())
        throw std::invalid_argument("piecewise_time: need one more part than knots");
    if (!std::is_sorted(knots.begin(), knots.end()))
        throw std::invalid_argument("piecewise_time: knots must be increasing");
    const Domain d = parts.front().domain();
    double order = kInf;
    for (const auto& p : parts) {
        if (!(p.domain() == d)) throw std::invalid_argument("piecewise_time: mixed domains");
        order = std::min(order, p.order());
    }
    return FieldSpec(d, order, PiecewiseTimeField{std::move(knots), std::move(parts)});
}

FieldSpec FieldSpec::custom(Domain domain, std::function<CVector(const CVector&, double)> evaluator,
                            std::vector<double> breaks, std::optional<TimeFunction> declared_bound,
                            double order, double safety) {
    CustomField cf;
    cf.evaluator = std::move(evaluator);
    cf.breaks = std::move(breaks);
    cf.declared_bound = std::move(declared_bound);
    cf.safety = safety;
    return FieldSpec(domain, order, std::move(cf));
}

CVector FieldSpec::evaluate(const CVector& z, double t) const {
    check_eval_pre(*this, z, t);
    return std::visit(
        [&](const auto& f) -> CVector {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RadialField>) {
                return scale(z, Complex(-f.c(t), 0.0));
            } else if constexpr (std::is_same_v<T, LinearField>) {
                return matvec(f.at(t), z);
            } else if constexpr (std::is_same_v<T, BerksonPortaField>) {
                const Complex tau = f.tau(t);
                const Complex g = (z[0] - tau) * (std::conj(tau) * z[0] - 1.0) * f.p(z[0], t);
                return {g};
            } else if constexpr (std::is_same_v<T, PolynomialDiscField>) {
                Complex g(0.0, 0.0);
                for (const auto& c : f.coeffs) g += c.value * c.profile(t) * std::pow(z[0], c.degree);
                return {g};
            } else if constexpr (std::is_same_v<T, PiecewiseTimeField>) {
                return f.parts[piece_index(f.knots, t)].evaluate(z, t);
            } else {
                return f.evaluator(z, t);
            }
        },
        v_);
}

CMatrix cauchy_jacobian(const std::function<CVector(const CVector&)>& f, const Domain& domain,
                        const CVector& z, int nodes) {
    const int n = domain.dim();
    const double rho = 0.5 * domain.boundary_distance(z);
    if (!(rho > 0.0)) throw std::domain_error("cauchy_jacobian: quadrature circle exits the domain");
    CMatrix jac(n);
    for (int j = 0; j < n; ++j) {
        CVector zp = z;
        CVector acc(n, Complex(0.0, 0.0));
        for (int k = 0; k < nodes; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / nodes;
            const Complex xi = std::polar(rho, theta);
            zp[j] = z[j] + xi;
            const CVector val = f(zp);
            const Complex w = std::polar(1.0, -theta);
            for (int i = 0; i < n; ++i) acc[i] += val[i] * w;
        }
        zp[j] = z[j];
        for (int i = 0; i < n; ++i) jac(i, j) = acc[i] / (static_cast<double>(nodes) * rho);
    }
    return jac;
}

CMatrix FieldSpec::jacobian(const CVector& z, double t) const {
    check_eval_pre(*this, z, t);
    return std::visit(
        [&](const auto& f) -> CMatrix {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RadialField>) {
                return mat_scale(CMatrix::identity(z.size()), Complex(-f.c(t), 0.0));
            } else if constexpr (std::is_same_v<T, LinearField>) {
                return f.at(t);
            } else if constexpr (std::is_same_v<T, PolynomialDiscField>) {
                Complex g(0.0, 0.0);
                for (const auto& c : f.coeffs) {
                    if (c.degree == 0) continue;
                    g += c.value * c.profile(t) * static_cast<double>(c.degree) *
                         std::pow(z[0], c.degree - 1);
                }
                CMatrix m(1);
                m(0, 0) = g;
                return m;
            } else if constexpr (std::is_same_v<T, PiecewiseTimeField>) {
                return f.parts[piece_index(f.knots, t)].jacobian(z, t);
            } else {
                return cauchy_jacobian([&](const CVector& p) { return evaluate(p, t); }, domain_, z);
            }
        },
        v_);
}

std::vector<double> FieldSpec::time_breakpoints(double horizon) const {
    std::set<double> acc;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RadialField>) {
                for (double b : f.c.interior_breakpoints(horizon)) acc.insert(b);
            } else if constexpr (std::is_same_v<T, LinearField>) {
                for (double b : f.breaks)
                    if (b > 0.0 && b < horizon) acc.insert(b);
            } else if constexpr (std::is_same_v<T, BerksonPortaField>) {
                for (double b : f.tau_breaks)
                    if (b > 0.0 && b < horizon) acc.insert(b);
                for (double b : f.p_breaks)
                    if (b > 0.0 && b < horizon) acc.insert(b);
            } else if constexpr (std::is_same_v<T, PolynomialDiscField>) {
                for (const auto& c : f.coeffs)
                    for (double b : c.profile.interior_breakpoints(horizon)) acc.insert(b);
            } else if constexpr (std::is_same_v<T, PiecewiseTimeField>) {
                for (double k : f.knots)
                    if (k > 0.0 && k < horizon) acc.insert(k);
                for (const auto& part : f.parts)
                    for (double b : part.time_breakpoints(horizon)) acc.insert(b);
            } else {
                for (double b : f.breaks)
                    if (b > 0.0 && b < horizon) acc.insert(b);
            }
        },
        v_);
    return {acc.begin(), acc.end()};
}

std::vector<SingularMark> FieldSpec::singularities(double horizon) const {
    std::vector<SingularMark> out;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RadialField>) {
                out = f.c.singularities(horizon);
            } else if constexpr (std::is_same_v<T, PolynomialDiscField>) {
                for (const auto& c : f.coeffs)
                    for (const auto& s : c.profile.singularities(horizon)) out.push_back(s);
            } else if constexpr (std::is_same_v<T, PiecewiseTimeField>) {
                for (const auto& part : f.parts)
                    for (const auto& s : part.singularities(horizon)) out.push_back(s);
            }
        },
        v_);
    return out;
}

FieldSpec FieldSpec::scaled(double lambda) const {
    return std::visit(
        [&](const auto& f) -> FieldSpec {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RadialField>) {
                return FieldSpec(domain_, order_, RadialField{f.c.scaled(lambda)});
            } else if constexpr (std::is_same_v<T, LinearField>) {
                LinearField lf = f;
                if (lf.constant) {
                    lf.a0 = mat_scale(lf.a0, Complex(lambda, 0.0));
                } else {
                    auto fn = lf.a_fn;
                    lf.a_fn = [fn, lambda](double t) { return mat_scale(fn(t), Complex(lambda, 0.0)); };
                }
                return FieldSpec(domain_, order_, std::move(lf));
            } else if constexpr (std::is_same_v<T, BerksonPortaField>) {
                BerksonPortaField bp = f;
                auto p = bp.p;
                bp.p = [p, lambda](Complex z, double t) { return lambda * p(z, t); };
                return FieldSpec(domain_, order_, std::move(bp));
            } else if constexpr (std::is_same_v<T, PolynomialDiscField>) {
                PolynomialDiscField pf = f;
                for (auto& c : pf.coeffs) c.value *= lambda;
                return FieldSpec(domain_, order_, std::move(pf));
            } else if constexpr (std::is_same_v<T, PiecewiseTimeField>) {
                PiecewiseTimeField pw = f;
                for (auto& part : pw.parts) part = part.scaled(lambda);
                return FieldSpec(domain_, order_, std::move(pw));
            } else {
                CustomField cf = f;
                auto eval = cf.evaluator;
                cf.evaluator = [eval, lambda](const CVector& z, double t) {
                    return scale(eval(z, t), Complex(lambda, 0.0));
                };
                if (cf.declared_bound) cf.declared_bound = cf.declared_bound->scaled(std::fabs(lambda));
                return FieldSpec(domain_, order_, std::move(cf));
            }
        },
        v_);
}

bool CompactSet::contains(const CVector& z) const {
    if (shape == Shape::polydisc) {
        for (const auto& c : z)
            if (std::abs(c) > radius) return false;
        return true;
    }
    return norm(z) <= radius;
}

double CompactSet::euclidean_sup_radius(int n) const {
    return shape == Shape::ball ? radius : radius * std::sqrt(static_cast<double>(n));
}

bool CompactSet::strictly_inside(const Domain& domain) const {
    if (!(radius > 0.0)) return false;
    if (domain.kind() == DomainKind::polydisc)
        return radius < 1.0; // both shapes fit iff radius < 1
    // ball domain: a polydisc of radius r fits iff r sqrt(n) < 1
    return euclidean_sup_radius(domain.dim()) < 1.0;
}

namespace {

// Deterministic sample of the distinguished boundary of K, where the sup of
// ||G(.,t)|| over K is attained (maximum principle).
std::vector<CVector> boundary_sample(const Domain& domain, const CompactSet& K, std::size_t count) {
    const int n = domain.dim();
    std::vector<CVector> pts;
    pts.reserve(count);
    if (n == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / count;
            pts.push_back({std::polar(K.radius, theta)});
        }
        return pts;
    }
    const auto bases = halton_bases(2 * static_cast<std::size_t>(n));
    for (std::size_t k = 1; k <= count; ++k) {
        CVector z(n);
        if (K.shape == CompactSet::Shape::polydisc) {
            for (int j = 0; j < n; ++j) {
                const double theta = 2.0 * std::numbers::pi * halton(k, bases[j]);
                z[j] = std::polar(K.radius, theta);
            }
        } else {
            // sphere of radius K.radius via Box-Muller on Halton pairs
            for (int j = 0; j < n; ++j) {
                const double u1 = std::max(halton(k, bases[2 * j]), 1e-12);
                const double u2 = halton(k, bases[2 * j + 1]);
                const double r = std::sqrt(-2.0 * std::log(u1));
                z[j] = Complex(r * std::cos(2.0 * std::numbers::pi * u2),
                               r * std::sin(2.0 * std::numbers::pi * u2));
            }
            const double nz = norm(z);
            for (auto& c : z) c *= K.radius / nz;
        }
        pts.push_back(std::move(z));
    }
    return pts;
}

TimeFunction sampled_bound(const FieldSpec& field, const CompactSet& K, double horizon,
                           double safety) {
    auto pts = boundary_sample(field.domain(), K, field.domain().dim() == 1 ? 128 : 256);
    auto fn = [field, pts, safety](double t) {
        double sup = 0.0;
        for (const auto& z : pts) sup = std::max(sup, norm(field.evaluate(z, t)));
        return safety * sup;
    };
    return TimeFunction::smooth(std::move(fn), field.time_breakpoints(horizon));
}

// Glue per-window certificate pieces into a full cover of [0, inf).
TimeFunction glue_pieces(std::vector<TimeFunction::Piece> pieces) {
    if (pieces.empty()) return TimeFunction::constant(0.0);
    if (pieces.front().begin > 0.0) {
        TimeFunction::Piece lead;
        lead.begin = 0.0;
        lead.end = pieces.front().begin;
        pieces.insert(pieces.begin(), lead);
    }
    if (pieces.back().end != kInf) {
        TimeFunction::Piece tail;
        tail.begin = pieces.back().end;
        pieces.push_back(tail);
    }
    return TimeFunction::from_pieces(std::move(pieces));
}

TimeFunction bound_function(const FieldSpec& field, const CompactSet& K, double horizon) {
    const int n = field.domain().dim();
    return std::visit(
        [&](const auto& f) -> TimeFunction {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RadialField>) {
                return f.c.abs().scaled(K.euclidean_sup_radius(n));
            } else if constexpr (std::is_same_v<T, LinearField>) {
                const double r = K.euclidean_sup_radius(n);
                if (f.constant) return TimeFunction::constant(operator_norm(f.a0) * r);
                auto fn = f.a_fn;
                std::vector<double> breaks;
                for (double b : f.breaks)
                    if (b > 0.0) breaks.push_back(b);
                return TimeFunction::smooth([fn, r](double t) { return operator_norm(fn(t)) * r; },
                                            std::move(breaks));
            } else if constexpr (std::is_same_v<T, PolynomialDiscField>) {
                bool all_const = true;
                for (const auto& c : f.coeffs) {
                    for (const auto& p : c.profile.pieces())
                        if (p.kind != TimeFunction::Piece::Kind::constant) all_const = false;
                }
                const double r = K.radius;
                if (all_const) {
                    double s = 0.0;
                    for (const auto& c : f.coeffs)
                        s += std::abs(c.value) * std::fabs(c.profile(0.0)) * std::pow(r, c.degree);
                    return TimeFunction::constant(s);
                }
                for (const auto& c : f.coeffs)
                    if (!c.profile.singularities(horizon).empty())
                        throw CertificateError(
                            "bound_certificate: singular coefficient profiles are not supported "
                            "for polynomial fields; use a radial or custom field");
                auto coeffs = f.coeffs;
                return TimeFunction::smooth(
                    [coeffs, r](double t) {
                        double s = 0.0;
                        for (const auto& c : coeffs)
                            s += std::abs(c.value) * std::fabs(c.profile(t)) * std::pow(r, c.degree);
                        return s;
                    },
                    field.time_breakpoints(horizon));
            } else if constexpr (std::is_same_v<T, PiecewiseTimeField>) {
                std::vector<TimeFunction::Piece> pieces;
                double start = 0.0;
                for (std::size_t i = 0; i < f.parts.size(); ++i) {
                    const double end = (i < f.knots.size()) ? f.knots[i] : kInf;
                    const TimeFunction sub = bound_function(f.parts[i], K, horizon);
                    for (auto& piece : sub.clipped_pieces(start, end)) pieces.push_back(piece);
                    start = end;
                }
                return glue_pieces(std::move(pieces));
            } else if constexpr (std::is_same_v<T, CustomField>) {
                if (f.declared_bound) return *f.declared_bound;
                return sampled_bound(field, K, horizon, f.safety);
            } else {
                return sampled_bound(field, K, horizon, 1.1);
            }
        },
        field.variant());
}

} // namespace

BoundCertificate bound_certificate(const FieldSpec& field, const CompactSet& region, double horizon,
                                   double order) {
    if (!(horizon > 0.0)) throw std::invalid_argument("bound_certificate: horizon must be positive");
    if (!region.strictly_inside(field.domain()))
        throw std::invalid_argument("bound_certificate: region not strictly inside domain");
    BoundCertificate cert;
    cert.region = region;
    cert.horizon = horizon;
    cert.order = order;
    cert.bound = bound_function(field, region, horizon);
    cert.ld_norm = cert.bound.lp_norm(order, horizon); // throws when divergent
    return cert;
}

TimeFunction lipschitz_certificate(const FieldSpec& field, const CompactSet& P, double horizon,
                                   double order, double enclosing_radius) {
    if (P.shape != CompactSet::Shape::polydisc)
        throw std::invalid_argument("lipschitz_certificate: P must be a polydisc");
    if (!P.strictly_inside(field.domain()))
        throw std::invalid_argument("lipschitz_certificate: P not strictly inside domain");
    const int n = field.domain().dim();
    const double r_max = (field.domain().kind() == DomainKind::polydisc)
                             ? 1.0
                             : 1.0 / std::sqrt(static_cast<double>(n));
    double r_enc = enclosing_radius;
    if (r_enc <= 0.0) r_enc = P.radius + std::min(0.1, 0.5 * (r_max - P.radius));
    if (!(r_enc - P.radius >= 1e-6) || r_enc >= r_max - 1e-12)
        throw CertificateError("lipschitz_certificate: no enclosing polydisc fits inside the domain");

    const auto enclosing = CompactSet::polydisc(r_enc);
    const BoundCertificate outer = bound_certificate(field, enclosing, horizon, order);
    // coordinate-wise Cauchy estimate: each term contributes
    // r_enc / (r_enc - r)^2, combined over coordinates by Cauchy-Schwarz
    const double gap = r_enc - P.radius;
    const double factor = std::sqrt(static_cast<double>(n)) * r_enc / (gap * gap);
    return outer.bound.scaled(factor);
}

double cauchy_riemann_residual(const std::function<CVector(const CVector&)>& f,
                               const Domain& domain, const CVector& z, double step) {
    const int n = domain.dim();
    double h = step;
    const double bd = domain.boundary_distance(z);
    h = std::min(h, 0.25 * bd);
    if (!(h > 0.0)) throw std::domain_error("cauchy_riemann_residual: probe exits domain");
    double scale_ref = std::max(1.0, norm(f(z)));
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        CVector zp = z, zm = z;
        zp[j] += h;
        zm[j] -= h;
        const CVector dre = scale(sub(f(zp), f(zm)), Complex(1.0 / (2.0 * h), 0.0));
        zp[j] = z[j] + Complex(0.0, h);
        zm[j] = z[j] - Complex(0.0, h);
        const CVector dim_ = scale(sub(f(zp), f(zm)), Complex(0.0, -1.0 / (2.0 * h)));
        worst = std::max(worst, distance(dre, dim_) / scale_ref);
    }
    return worst;
}

} // namespace loewner
