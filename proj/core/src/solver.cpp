#include "loewner/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "loewner/errors.hpp"
#include "loewner/quadrature.hpp"
#include "rk_internal.hpp"

namespace loewner {

namespace {

using detail::CorePath;
using detail::RhsFn;
using detail::StallFn;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double hermite_scalar(double theta, double y0, double y1, double m0, double m1) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
}

struct WindowPlan {
    double t0 = 0.0, t1 = 0.0;
    bool reparam = false;
    double alpha = 0.0;
};

std::vector<WindowPlan> plan_windows(const FieldSpec& field, double s, double t_end,
                                     SingularityPolicy policy) {
    std::set<double> cuts;
    for (double b : field.time_breakpoints(t_end))
        if (b > s && b < t_end) cuts.insert(b);
    std::vector<SingularMark> marks = field.singularities(t_end);
    for (const auto& m : marks)
        if (m.t > s && m.t < t_end) cuts.insert(m.t);

    std::vector<WindowPlan> windows;
    double start = s;
    auto alpha_at = [&](double t) {
        double a = 0.0;
        for (const auto& m : marks)
            if (std::fabs(m.t - t) <= 1e-14 * std::max(1.0, std::fabs(t))) a = std::max(a, m.alpha);
        return a;
    };
    for (double cut : cuts) {
        windows.push_back({start, cut, false, 0.0});
        start = cut;
    }
    windows.push_back({start, t_end, false, 0.0});
    if (policy == SingularityPolicy::substitute) {
        for (auto& w : windows) {
            const double a = alpha_at(w.t0);
            if (a > 0.0) {
                w.reparam = true;
                w.alpha = a;
            }
        }
    }
    return windows;
}

// DOPRI5 over one window in its own parameter; returns false when the run
// should stop (stall classified into path.status).
bool run_window(const RhsFn& rhs, const WindowPlan& w, double u_begin, double u_end,
                const SolverConfig& cfg, const StallFn& stall, CorePath& path) {
    const double q = w.reparam ? 1.0 / (1.0 - w.alpha) : 1.0;
    auto t_of_u = [&](double u) { return w.reparam ? w.t0 + std::pow(u, q) : u; };

    CVector y = path.state;
    const std::size_t m = y.size();
    CVector k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), ytmp(m), ynew(m);

    if (!rhs(u_begin, y, k1)) {
        path.status = stall(t_of_u(u_begin), y);
        path.last_time = t_of_u(u_begin);
        path.state = y;
        return false;
    }

    double u = u_begin;
    double h = std::min({cfg.max_step, u_end - u_begin});
    // conservative first-step guess from the initial slope
    double slope = 0.0;
    for (const auto& k : k1) slope = std::max(slope, std::abs(k));
    if (slope > 0.0) h = std::min(h, 0.1 * (1.0 + norm(y)) / slope);
    h = std::max(h, 1e-12);
    bool fsal_fresh = true;

    const auto floor_of = [](double uu) { return std::max(1e-14, 4e-16 * std::fabs(uu)); };

    while (u < u_end - 1e-14 * std::max(1.0, std::fabs(u_end))) {
        h = std::min(h, u_end - u);
        if (h < floor_of(u)) {
            path.status = stall(t_of_u(u), y);
            path.last_time = t_of_u(u);
            path.state = y;
            return false;
        }
        if (!fsal_fresh && !rhs(u, y, k1)) {
            path.status = stall(t_of_u(u), y);
            path.last_time = t_of_u(u);
            path.state = y;
            return false;
        }
        fsal_fresh = true;

        bool feasible = true;
        auto stage = [&](CVector& k, double c, std::initializer_list<std::pair<const CVector*, double>> terms) {
            for (std::size_t i = 0; i < m; ++i) {
                Complex acc(0.0, 0.0);
                for (const auto& [kv, coef] : terms) acc += coef * (*kv)[i];
                ytmp[i] = y[i] + h * acc;
            }
            return rhs(u + c * h, ytmp, k);
        };
        feasible = stage(k2, c2, {{&k1, a21}}) && stage(k3, c3, {{&k1, a31}, {&k2, a32}}) &&
                   stage(k4, c4, {{&k1, a41}, {&k2, a42}, {&k3, a43}}) &&
                   stage(k5, c5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}}) &&
                   stage(k6, 1.0, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
        if (feasible) {
            for (std::size_t i = 0; i < m; ++i)
                ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            feasible = rhs(u + h, ynew, k7);
        }
        if (!feasible) {
            h *= 0.5;
            fsal_fresh = false;
            continue;
        }

        double err = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const Complex ec = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                    e7 * k7[i]);
            const double sc =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += std::norm(ec) / (sc * sc);
        }
        err = std::sqrt(err / static_cast<double>(m));

        if (err <= 1.0) {
            // snap onto the window end once the step reaches it
            double u_next = u + h;
            if (u_end - u_next <= 1e-14 * std::max(1.0, std::fabs(u_end))) u_next = u_end;
            Segment seg;
            seg.u_begin = u;
            seg.u_end = u_next;
            seg.t_begin = t_of_u(u);
            seg.t_end = t_of_u(u_next);
            seg.reparam = w.reparam;
            seg.anchor = w.t0;
            seg.stretch = q;
            seg.y_begin = y;
            seg.y_end = ynew;
            seg.dy_begin = k1;
            seg.dy_end = k7;
            path.segments.push_back(std::move(seg));
            u = u_next;
            y = ynew;
            k1 = k7;
            path.samples.emplace_back(t_of_u(u), y);
            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
            h = std::min(cfg.max_step, h * fac);
        } else {
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
            h *= fac;
            fsal_fresh = false;
        }
    }
    path.last_time = t_of_u(u_end);
    path.state = y;
    return true;
}

} // namespace

namespace detail {

CorePath integrate_core(const FieldSpec& field, double s, const CVector& y0, double t_end,
                        const SolverConfig& cfg, const RhsFn& rhs_t, const StallFn& stall) {
    CorePath path;
    path.state = y0;
    path.last_time = s;
    path.samples.emplace_back(s, y0);
    if (t_end <= s) return path;

    const auto windows = plan_windows(field, s, t_end, cfg.singularity_policy);
    for (const auto& w : windows) {
        // time-piece evaluations stay one-sided within the window: a stage
        // that lands exactly on the right breakpoint must not read the next
        // piece
        const double t_cap = w.t1 - 1e-13 * std::max(1.0, std::fabs(w.t1));
        if (w.reparam) {
            const double e = 1.0 - w.alpha;
            const double u_len = std::pow(w.t1 - w.t0, e);
            const double u_eps = 1e-9 * u_len;
            const double q = 1.0 / e;
            RhsFn rhs_u = [&rhs_t, w, q, t_cap](double u, const CVector& y, CVector& dy) {
                const double t = std::min(w.t0 + std::pow(u, q), t_cap);
                if (!rhs_t(t, y, dy)) return false;
                const double factor = q * std::pow(u, q - 1.0);
                for (auto& d : dy) d *= factor;
                return all_finite(dy);
            };
            if (!run_window(rhs_u, w, u_eps, u_len, cfg, stall, path)) return path;
        } else {
            double start = w.t0;
            if (cfg.singularity_policy == SingularityPolicy::offset) {
                // naive fallback: nudge off a declared singular anchor
                for (const auto& mark : field.singularities(t_end))
                    if (std::fabs(mark.t - w.t0) <= 1e-14 * std::max(1.0, std::fabs(w.t0)))
                        start = w.t0 + std::min(1e-10, 0.5 * (w.t1 - w.t0));
            }
            RhsFn rhs_capped = [&rhs_t, t_cap](double t, const CVector& y, CVector& dy) {
                return rhs_t(std::min(t, t_cap), y, dy);
            };
            WindowPlan affine = w;
            affine.reparam = false;
            if (!run_window(rhs_capped, affine, start, w.t1, cfg, stall, path)) return path;
        }
    }
    return path;
}

} // namespace detail

double Segment::u_of_t(double t) const {
    if (!reparam) return t;
    return std::pow(std::max(0.0, t - anchor), 1.0 / stretch);
}

CVector Segment::eval(double t) const {
    const double u = u_of_t(t);
    const double len = u_end - u_begin;
    const double theta = std::clamp(len > 0.0 ? (u - u_begin) / len : 0.0, 0.0, 1.0);
    CVector out(y_begin.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double re = hermite_scalar(theta, y_begin[i].real(), y_end[i].real(),
                                         dy_begin[i].real() * len, dy_end[i].real() * len);
        const double im = hermite_scalar(theta, y_begin[i].imag(), y_end[i].imag(),
                                         dy_begin[i].imag() * len, dy_end[i].imag() * len);
        out[i] = Complex(re, im);
    }
    return out;
}

double Trajectory::end_time() const {
    return samples.empty() ? start_time : samples.back().first;
}

const CVector& Trajectory::end_point() const {
    return samples.empty() ? initial_point : samples.back().second;
}

CVector Trajectory::eval(double t) const {
    if (segments.empty() || t <= segments.front().t_begin) return initial_point;
    if (t >= segments.back().t_end) return samples.back().second;
    // binary search over segment end times
    std::size_t lo = 0, hi = segments.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (segments[mid].t_end < t)
            lo = mid + 1;
        else
            hi = mid;
    }
    return segments[lo].eval(t);
}

Trajectory integrate(const FieldSpec& field, const Domain& domain, double s, const CVector& z0,
                     double t_end, const SolverConfig& cfg) {
    if (!(field.domain() == domain))
        throw std::invalid_argument("integrate: field and domain disagree");
    if (!domain.contains(z0)) throw std::domain_error("integrate: initial point outside domain");
    if (s < 0.0 || t_end < s) throw std::invalid_argument("integrate: need 0 <= s <= t_end");

    RhsFn rhs_t = [&field, &domain](double t, const CVector& y, CVector& dy) {
        if (!domain.contains(y)) return false;
        try {
            dy = field.evaluate(y, t);
        } catch (const std::exception&) {
            return false;
        }
        return all_finite(dy);
    };
    StallFn stall = [&domain, &cfg, &z0](double, const CVector& y) {
        if (domain.boundary_distance(y) < cfg.escape_margin &&
            kobayashi_distance(domain, y, z0) > cfg.escape_kobayashi_threshold)
            return IntegrationStatus::escaped;
        return IntegrationStatus::step_underflow;
    };

    CorePath path = detail::integrate_core(field, s, z0, t_end, cfg, rhs_t, stall);

    Trajectory traj;
    traj.start_time = s;
    traj.initial_point = z0;
    traj.status = path.status;
    traj.samples = std::move(path.samples);
    traj.segments = std::move(path.segments);
    if (traj.status == IntegrationStatus::escaped) traj.escape_time = path.last_time;
    return traj;
}

// ---------------------------------------------------------------------------
// Picard iteration on a fixed composite Gauss-Legendre grid
// ---------------------------------------------------------------------------

namespace {

struct Panel {
    double t0 = 0.0, t1 = 0.0; // time window
    double u0 = 0.0, u1 = 0.0; // parameter window
    bool reparam = false;
    double anchor = 0.0, q = 1.0;
    std::vector<double> node_u;  // 8 Gauss-Legendre nodes in parameter space
    std::vector<double> node_t;
    std::vector<double> node_w;  // quadrature weights in parameter space
    std::vector<double> bary_w;  // barycentric weights over node_u

    double t_of_u(double u) const { return reparam ? anchor + std::pow(u, q) : u; }
    double du_factor(double u) const { return reparam ? q * std::pow(u, q - 1.0) : 1.0; }
};

std::vector<Panel> build_panels(const FieldSpec& field, double s, double delta) {
    const auto windows = plan_windows(field, s, s + delta, SingularityPolicy::substitute);
    const QuadRule& rule = gauss_legendre(8);
    std::vector<Panel> panels;
    const double target = delta / 8.0;
    for (const auto& w : windows) {
        double u_lo, u_len;
        double q = 1.0;
        if (w.reparam) {
            const double e = 1.0 - w.alpha;
            q = 1.0 / e;
            u_lo = 0.0;
            u_len = std::pow(w.t1 - w.t0, e);
        } else {
            u_lo = w.t0;
            u_len = w.t1 - w.t0;
        }
        const int count = std::max(1, static_cast<int>(std::ceil((w.t1 - w.t0) / target)));
        for (int i = 0; i < count; ++i) {
            Panel p;
            p.reparam = w.reparam;
            p.anchor = w.t0;
            p.q = q;
            p.u0 = u_lo + u_len * i / count;
            p.u1 = u_lo + u_len * (i + 1) / count;
            p.t0 = p.t_of_u(p.u0);
            p.t1 = p.t_of_u(p.u1);
            const double mid = 0.5 * (p.u0 + p.u1);
            const double half = 0.5 * (p.u1 - p.u0);
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                p.node_u.push_back(mid + half * rule.nodes[j]);
                p.node_w.push_back(half * rule.weights[j]);
                p.node_t.push_back(p.t_of_u(p.node_u.back()));
            }
            // barycentric weights for the 8 distinct nodes
            p.bary_w.assign(p.node_u.size(), 1.0);
            for (std::size_t j = 0; j < p.node_u.size(); ++j)
                for (std::size_t l = 0; l < p.node_u.size(); ++l)
                    if (l != j) p.bary_w[j] /= (p.node_u[j] - p.node_u[l]);
            panels.push_back(std::move(p));
        }
    }
    return panels;
}

CVector bary_interp(const Panel& p, const std::vector<CVector>& values, double u) {
    for (std::size_t j = 0; j < p.node_u.size(); ++j)
        if (u == p.node_u[j]) return values[j];
    Complex denom(0.0, 0.0);
    CVector num(values.front().size(), Complex(0.0, 0.0));
    for (std::size_t j = 0; j < p.node_u.size(); ++j) {
        const double wj = p.bary_w[j] / (u - p.node_u[j]);
        denom += wj;
        for (std::size_t i = 0; i < num.size(); ++i) num[i] += wj * values[j][i];
    }
    for (auto& c : num) c /= denom;
    return num;
}

} // namespace

Trajectory picard_iterate(const FieldSpec& field, double s, const CVector& z0, double delta,
                          std::size_t n_max, double tol) {
    if (s < 0.0 || delta < 0.0) throw std::invalid_argument("picard_iterate: bad time window");
    if (!field.domain().contains(z0))
        throw std::domain_error("picard_iterate: initial point outside domain");

    Trajectory traj;
    traj.start_time = s;
    traj.initial_point = z0;
    traj.samples.emplace_back(s, z0);
    if (delta == 0.0) return traj;

    auto panels = build_panels(field, s, delta);
    const std::size_t nn = z0.size();

    auto rhs_u = [&](const Panel& p, double u, const CVector& x, CVector& out) {
        try {
            out = field.evaluate(x, p.t_of_u(u));
        } catch (const std::domain_error&) {
            throw PicardError("picard_iterate: iterate left the domain (no contraction at this delta)");
        }
        const double f = p.du_factor(u);
        for (auto& c : out) c *= f;
    };

    // node values of the current iterate, initialized to the constant z0
    std::vector<std::vector<CVector>> x(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) x[i].assign(panels[i].node_u.size(), z0);

    const QuadRule& rule8 = gauss_legendre(8);
    double prev_diff = kInf;
    std::size_t bad_steps = 0;
    bool converged = false;

    for (std::size_t iter = 0; iter < n_max; ++iter) {
        // panel integrals of the current iterate
        std::vector<CVector> panel_integral(panels.size(), CVector(nn, Complex(0.0, 0.0)));
        CVector g(nn);
        for (std::size_t i = 0; i < panels.size(); ++i) {
            for (std::size_t j = 0; j < panels[i].node_u.size(); ++j) {
                rhs_u(panels[i], panels[i].node_u[j], x[i][j], g);
                for (std::size_t c = 0; c < nn; ++c)
                    panel_integral[i][c] += panels[i].node_w[j] * g[c];
            }
        }
        // prefix sums give the iterate at panel starts
        std::vector<CVector> start_value(panels.size(), z0);
        for (std::size_t i = 1; i < panels.size(); ++i)
            start_value[i] = add(start_value[i - 1], panel_integral[i - 1]);

        double diff = 0.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            const Panel& p = panels[i];
            for (std::size_t j = 0; j < p.node_u.size(); ++j) {
                // integral over [u0, node_j] with the integrand interpolated
                // from the panel's own nodes
                CVector acc = start_value[i];
                const double mid = 0.5 * (p.u0 + p.node_u[j]);
                const double half = 0.5 * (p.node_u[j] - p.u0);
                for (std::size_t q8 = 0; q8 < rule8.nodes.size(); ++q8) {
                    const double uq = mid + half * rule8.nodes[q8];
                    const CVector xq = bary_interp(p, x[i], uq);
                    rhs_u(p, uq, xq, g);
                    const double wq = half * rule8.weights[q8];
                    for (std::size_t c = 0; c < nn; ++c) acc[c] += wq * g[c];
                }
                diff = std::max(diff, distance(acc, x[i][j]));
                x[i][j] = std::move(acc);
            }
        }

        if (diff < tol) {
            converged = true;
            break;
        }
        if (iter >= 2 && diff > 0.95 * prev_diff) {
            if (++bad_steps >= 2)
                throw PicardError("picard_iterate: successive differences are not contracting");
        } else {
            bad_steps = 0;
        }
        prev_diff = diff;
    }
    if (!converged && n_max > 0) {
        // ran out of iterations; report the state anyway if it is finite
        for (const auto& panel_values : x)
            for (const auto& v : panel_values)
                if (!all_finite(v)) throw PicardError("picard_iterate: diverged");
    }

    // assemble the trajectory: panel boundaries + nodes, Hermite segments in u
    std::vector<CVector> start_value(panels.size(), z0);
    {
        CVector g(nn);
        std::vector<CVector> panel_integral(panels.size(), CVector(nn, Complex(0.0, 0.0)));
        for (std::size_t i = 0; i < panels.size(); ++i)
            for (std::size_t j = 0; j < panels[i].node_u.size(); ++j) {
                rhs_u(panels[i], panels[i].node_u[j], x[i][j], g);
                for (std::size_t c = 0; c < nn; ++c)
                    panel_integral[i][c] += panels[i].node_w[j] * g[c];
            }
        for (std::size_t i = 1; i < panels.size(); ++i)
            start_value[i] = add(start_value[i - 1], panel_integral[i - 1]);

        CVector final_value = add(start_value.back(), panel_integral.back());

        for (std::size_t i = 0; i < panels.size(); ++i) {
            const Panel& p = panels[i];
            // points along this panel: start, nodes, end
            std::vector<double> us = {p.u0};
            std::vector<CVector> ys = {start_value[i]};
            for (std::size_t j = 0; j < p.node_u.size(); ++j) {
                us.push_back(p.node_u[j]);
                ys.push_back(x[i][j]);
            }
            us.push_back(p.u1);
            ys.push_back(i + 1 < panels.size() ? start_value[i + 1] : final_value);

            // endpoint derivatives stay one-sided within the panel
            const double u_lo_guard = p.u0 + 1e-9 * (p.u1 - p.u0);
            const double u_hi_guard = p.u1 - 1e-9 * (p.u1 - p.u0);
            for (std::size_t j = 0; j + 1 < us.size(); ++j) {
                Segment seg;
                seg.u_begin = us[j];
                seg.u_end = us[j + 1];
                seg.reparam = p.reparam;
                seg.anchor = p.anchor;
                seg.stretch = p.q;
                seg.t_begin = p.t_of_u(us[j]);
                seg.t_end = p.t_of_u(us[j + 1]);
                seg.y_begin = ys[j];
                seg.y_end = ys[j + 1];
                rhs_u(p, std::clamp(us[j], u_lo_guard, u_hi_guard), ys[j], g);
                seg.dy_begin = g;
                rhs_u(p, std::clamp(us[j + 1], u_lo_guard, u_hi_guard), ys[j + 1], g);
                seg.dy_end = g;
                traj.segments.push_back(std::move(seg));
                traj.samples.emplace_back(p.t_of_u(us[j + 1]), ys[j + 1]);
            }
        }
    }
    return traj;
}

double local_existence_delta(const FieldSpec& field, double s, double r, const CompactSet& P,
                             double horizon) {
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("local_existence_delta: need 0 < r < 1");
    if (!(horizon > s)) throw std::invalid_argument("local_existence_delta: horizon <= s");
    if (P.shape != CompactSet::Shape::polydisc || !(r <= P.radius))
        throw std::invalid_argument("local_existence_delta: P must be a polydisc containing the r-ball");

    const TimeFunction bound = bound_certificate(field, CompactSet::ball(r), horizon, field.order()).bound;
    const TimeFunction lip = lipschitz_certificate(field, P, horizon, field.order());

    auto admissible = [&](double delta) {
        return bound.integrate(s, s + delta) <= r && lip.integrate(s, s + delta) <= r;
    };
    const double span = horizon - s;
    if (admissible(span)) return span;
    double lo = 0.0, hi = span;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (admissible(mid))
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, span)) break;
    }
    return lo;
}

GronwallResult gronwall_check(std::span<const double> times, std::span<const double> theta,
                              const TimeFunction& k, double bound, GronwallDirection direction,
                              double tol) {
    if (times.size() != theta.size() || times.empty())
        throw std::invalid_argument("gronwall_check: mismatched samples");
    const double a = times.front();
    const double b = times.back();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double integral = direction == GronwallDirection::forward
                                    ? k.integrate(a, times[i])
                                    : k.integrate(times[i], b);
        const double envelope = bound * std::exp(integral);
        if (theta[i] > envelope + tol) return {false, i};
    }
    return {true, 0};
}

} // namespace loewner
