#include "loewner/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "loewner/sampling.hpp"

namespace loewner {

Domain Domain::unit_disc() { return Domain(DomainKind::unit_disc, 1); }

Domain Domain::unit_ball(int n) {
    if (n < 1) throw std::invalid_argument("Domain: dimension must be >= 1");
    return Domain(DomainKind::unit_ball, n);
}

Domain Domain::polydisc(int n) {
    if (n < 1) throw std::invalid_argument("Domain: dimension must be >= 1");
    return Domain(DomainKind::polydisc, n);
}

namespace {

void check_dim(const Domain& d, const CVector& z) {
    if (static_cast<int>(z.size()) != d.dim())
        throw std::invalid_argument("Domain: point dimension mismatch");
}

void check_inside(const Domain& d, const CVector& z, const char* who) {
    if (!d.contains(z)) throw std::domain_error(std::string(who) + ": point outside domain");
}

} // namespace

bool Domain::contains(const CVector& z) const {
    check_dim(*this, z);
    if (!all_finite(z)) return false;
    if (kind_ == DomainKind::polydisc) {
        for (const auto& c : z)
            if (std::abs(c) >= 1.0) return false;
        return true;
    }
    return norm(z) < 1.0;
}

double Domain::boundary_distance(const CVector& z) const {
    check_dim(*this, z);
    if (kind_ == DomainKind::polydisc) {
        double d = 1.0;
        for (const auto& c : z) d = std::min(d, 1.0 - std::abs(c));
        return d;
    }
    return 1.0 - norm(z);
}

double poincare_distance(Complex a, Complex b) {
    if (a == b) return 0.0;
    const Complex m = (a - b) / (1.0 - std::conj(b) * a);
    double r = std::abs(m);
    r = std::min(r, 1.0 - 1e-17);
    return std::atanh(r);
}

namespace {

// pseudo-hyperbolic distance squared on the ball:
// rho^2 = 1 - (1-|z|^2)(1-|w|^2)/|1-<z,w>|^2
double ball_rho_sq(const CVector& z, const CVector& w) {
    const double a = 1.0 - norm(z) * norm(z);
    const double b = 1.0 - norm(w) * norm(w);
    const Complex g = Complex(1.0, 0.0) - hermitian_dot(z, w);
    const double c = std::norm(g);
    return std::max(0.0, 1.0 - a * b / c);
}

// d/dh arctanh rho(z+hu, w+hv) at h = 0 for the ball; requires rho > 0.
double ball_directional(const CVector& z, const CVector& w, const CVector& u, const CVector& v) {
    const double a = 1.0 - norm(z) * norm(z);
    const double b = 1.0 - norm(w) * norm(w);
    const Complex g = Complex(1.0, 0.0) - hermitian_dot(z, w);
    const double c = std::norm(g);
    const double rho = std::sqrt(std::max(0.0, 1.0 - a * b / c));
    if (rho <= 0.0) throw std::domain_error("kobayashi_directional_derivative: z == w");

    const double da = -2.0 * std::real(hermitian_dot(u, z)); // d/dh (1 - |z+hu|^2)
    const double db = -2.0 * std::real(hermitian_dot(v, w));
    const Complex dg = -(hermitian_dot(u, w) + hermitian_dot(z, v));
    const double dc = 2.0 * std::real(std::conj(g) * dg);

    // k = arctanh(rho), rho^2 = 1 - ab/c  =>  dk = -(da/a + db/b - dc/c) / (2 rho)
    return -(da / a + db / b - dc / c) / (2.0 * rho);
}

double disc_directional(Complex z, Complex w, Complex u, Complex v) {
    return ball_directional({z}, {w}, {u}, {v});
}

} // namespace

double kobayashi_distance(const Domain& domain, const CVector& z, const CVector& w) {
    check_inside(domain, z, "kobayashi_distance");
    check_inside(domain, w, "kobayashi_distance");
    if (domain.kind() == DomainKind::polydisc) {
        double best = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j)
            best = std::max(best, poincare_distance(z[j], w[j]));
        return best;
    }
    double rho = std::sqrt(ball_rho_sq(z, w));
    rho = std::min(rho, 1.0 - 1e-17);
    return std::atanh(rho);
}

DirectionalDerivative kobayashi_directional_derivative(const Domain& domain, const CVector& z,
                                                       const CVector& w, const CVector& u,
                                                       const CVector& v) {
    check_inside(domain, z, "kobayashi_directional_derivative");
    check_inside(domain, w, "kobayashi_directional_derivative");
    if (u.size() != z.size() || v.size() != w.size())
        throw std::invalid_argument("kobayashi_directional_derivative: direction dimension mismatch");
    if (z == w) throw std::domain_error("kobayashi_directional_derivative: z == w");

    if (domain.kind() != DomainKind::polydisc) return {ball_directional(z, w, u, v), true};

    // polydisc: derivative of a max; off ties this is the attaining
    // coordinate's derivative, on ties the upper Dini derivative
    std::vector<double> dist(z.size());
    double best = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        dist[j] = poincare_distance(z[j], w[j]);
        best = std::max(best, dist[j]);
    }
    const double tie_tol = 1e-12 * (1.0 + best);
    double value = -std::numeric_limits<double>::infinity();
    int attaining = 0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (dist[j] < best - tie_tol) continue;
        ++attaining;
        value = std::max(value, disc_directional(z[j], w[j], u[j], v[j]));
    }
    return {value, attaining == 1};
}

double kobayashi_directional_derivative_fd(const Domain& domain, const CVector& z,
                                           const CVector& w, const CVector& u, const CVector& v,
                                           double step) {
    check_inside(domain, z, "kobayashi_directional_derivative_fd");
    check_inside(domain, w, "kobayashi_directional_derivative_fd");
    double h = step;
    if (h <= 0.0) {
        const double margin = std::min(domain.boundary_distance(z), domain.boundary_distance(w));
        const double dir = std::max({1.0, norm(u), norm(v)});
        h = 1e-5 * margin / dir;
    }
    CVector zp = z, zm = z, wp = w, wm = w;
    for (std::size_t j = 0; j < z.size(); ++j) {
        zp[j] += h * u[j];
        zm[j] -= h * u[j];
        wp[j] += h * v[j];
        wm[j] -= h * v[j];
    }
    return (kobayashi_distance(domain, zp, wp) - kobayashi_distance(domain, zm, wm)) / (2.0 * h);
}

std::vector<CVector> sample_interior_points(const Domain& domain, std::size_t count,
                                            double radius_cap, std::uint64_t skip) {
    if (!(radius_cap > 0.0 && radius_cap < 1.0))
        throw std::invalid_argument("sample_interior_points: radius_cap must lie in (0,1)");
    const int n = domain.dim();
    const auto bases = halton_bases(2 * static_cast<std::size_t>(n));
    std::vector<CVector> out;
    out.reserve(count);
    std::uint64_t index = 1 + skip;
    while (out.size() < count) {
        CVector z(n);
        for (int j = 0; j < n; ++j) {
            const double re = radius_cap * (2.0 * halton(index, bases[2 * j]) - 1.0);
            const double im = radius_cap * (2.0 * halton(index, bases[2 * j + 1]) - 1.0);
            z[j] = Complex(re, im);
        }
        ++index;
        if (domain.kind() == DomainKind::polydisc) {
            bool ok = true;
            for (const auto& c : z)
                if (std::abs(c) >= radius_cap) ok = false;
            if (!ok) continue;
        } else if (norm(z) >= radius_cap) {
            continue;
        }
        out.push_back(std::move(z));
    }
    return out;
}

} // namespace loewner
