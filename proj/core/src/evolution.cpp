#include "loewner/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "loewner/errors.hpp"
#include "loewner/geometry.hpp"
#include "loewner/sampling.hpp"
#include "loewner/variational.hpp"

namespace loewner {

EvolutionFamilyHandle::EvolutionFamilyHandle(Domain d, double order,
                                             std::variant<FieldBackedFamily, ClosedFormFamily> backend)
    : domain_(d), order_(order), backend_(std::move(backend)) {
    if (const auto* fb = std::get_if<FieldBackedFamily>(&backend_)) {
        breaks_ = fb->field.time_breakpoints(std::numeric_limits<double>::max());
        default_cfg_ = fb->cfg;
    } else {
        breaks_ = std::get<ClosedFormFamily>(backend_).breaks;
    }
}

EvolutionFamilyHandle EvolutionFamilyHandle::field_backed(FieldSpec field, SolverConfig cfg) {
    const Domain d = field.domain();
    const double order = field.order();
    return EvolutionFamilyHandle(d, order, FieldBackedFamily{std::move(field), cfg});
}

EvolutionFamilyHandle EvolutionFamilyHandle::closed_form(
    Domain domain, std::function<CVector(double, double, const CVector&)> map, double order,
    std::vector<double> breaks) {
    ClosedFormFamily cf;
    cf.map = std::move(map);
    cf.breaks = std::move(breaks);
    return EvolutionFamilyHandle(domain, order, std::move(cf));
}

bool EvolutionFamilyHandle::is_field_backed() const {
    return std::holds_alternative<FieldBackedFamily>(backend_);
}

const FieldSpec* EvolutionFamilyHandle::field() const {
    const auto* fb = std::get_if<FieldBackedFamily>(&backend_);
    return fb ? &fb->field : nullptr;
}

const SolverConfig& EvolutionFamilyHandle::solver_config() const { return default_cfg_; }

const std::vector<double>& EvolutionFamilyHandle::time_breaks() const { return breaks_; }

CVector EvolutionFamilyHandle::evaluate_phi(double s, double t, const CVector& z) const {
    if (!(0.0 <= s && s <= t)) throw std::invalid_argument("evaluate_phi: need 0 <= s <= t");
    if (!domain_.contains(z)) throw std::domain_error("evaluate_phi: point outside domain");
    if (const auto* fb = std::get_if<FieldBackedFamily>(&backend_)) {
        if (t == s) return z;
        const Trajectory traj = integrate(fb->field, domain_, s, z, t, fb->cfg);
        if (traj.status != IntegrationStatus::completed)
            throw EscapeError("evaluate_phi: escape before t", traj.end_time());
        return traj.end_point();
    }
    const CVector out = std::get<ClosedFormFamily>(backend_).map(s, t, z);
    if (!domain_.contains(out))
        throw EscapeError("evaluate_phi: closed-form map left the domain", t);
    return out;
}

namespace {

void add_check(VerificationReport& report, std::string name, double worst, double tol,
               CheckWitness witness) {
    CheckResult res;
    res.name = std::move(name);
    res.passed = worst <= tol;
    res.worst_violation = worst;
    res.tolerance = tol;
    res.witness = std::move(witness);
    report.checks.push_back(std::move(res));
}

// Smallest origin-centered ball certificate region that covers the observed
// flow, with headroom toward the boundary.
CompactSet covering_region(double max_norm) {
    const double r = std::min(max_norm + 0.3 * (1.0 - max_norm), 0.999);
    return CompactSet::ball(r);
}

} // namespace

VerificationReport verify_axioms(const EvolutionFamilyHandle& handle, std::span<const CVector> grid,
                                 std::span<const TimeTriple> triples, double horizon,
                                 const CompactSet& region, double tol) {
    VerificationReport report;
    if (grid.empty() || triples.empty())
        throw std::invalid_argument("verify_axioms: empty grid or triples");
    for (const auto& tr : triples)
        if (!(0.0 <= tr.s && tr.s <= tr.u && tr.u <= tr.t && tr.t <= horizon))
            throw std::invalid_argument("verify_axioms: triples must satisfy 0 <= s <= u <= t <= T");

    // (a) identity at s = t
    {
        double worst = 0.0;
        CheckWitness witness;
        for (const auto& tr : triples) {
            for (const auto& z : grid) {
                const double d = distance(handle.evaluate_phi(tr.s, tr.s, z), z);
                if (d > worst) {
                    worst = d;
                    witness = {{z}, {tr.s}, d, "d(phi_{s,s}(z), z)"};
                }
            }
        }
        add_check(report, "identity", worst, std::max(tol, 1e-12), std::move(witness));
    }

    // (b) composition phi_{s,t} = phi_{u,t} o phi_{s,u}
    double max_norm_seen = 0.0;
    {
        double worst = 0.0;
        CheckWitness witness;
        for (const auto& tr : triples) {
            for (const auto& z : grid) {
                const CVector direct = handle.evaluate_phi(tr.s, tr.t, z);
                const CVector inner = handle.evaluate_phi(tr.s, tr.u, z);
                const CVector composed = handle.evaluate_phi(tr.u, tr.t, inner);
                max_norm_seen = std::max({max_norm_seen, norm(direct), norm(inner)});
                const double d = distance(direct, composed);
                if (d > worst) {
                    worst = d;
                    witness = {{z, direct, composed}, {tr.s, tr.u, tr.t}, d,
                               "d(phi_{s,t}(z), phi_{u,t}(phi_{s,u}(z)))"};
                }
            }
        }
        add_check(report, "composition", worst, tol, std::move(witness));
    }

    // (c) Lipschitz in t against the L^d certificate of Eq-style
    // d(phi_{s,t}, phi_{s,t'}) <= int_{t'}^{t} c
    {
        double worst = 0.0;
        CheckWitness witness;
        if (handle.is_field_backed()) {
            const CompactSet cover = covering_region(std::max(max_norm_seen, region.radius));
            const BoundCertificate cert =
                bound_certificate(*handle.field(), cover, horizon, handle.order());
            for (const auto& tr : triples) {
                for (const auto& z : grid) {
                    const CVector a = handle.evaluate_phi(tr.s, tr.u, z);
                    const CVector b = handle.evaluate_phi(tr.s, tr.t, z);
                    const double lhs = distance(a, b);
                    const double rhs = cert.bound.integrate(tr.u, tr.t);
                    const double excess = lhs - rhs;
                    if (excess > worst) {
                        worst = excess;
                        witness = {{z}, {tr.s, tr.u, tr.t}, lhs, "d(phi_{s,u}(z), phi_{s,t}(z)) vs certificate"};
                    }
                }
            }
        } else {
            // empirical L^inf envelope from dyadic finite differences in t
            double envelope = 0.0;
            const int grid_n = 64;
            const double dt = horizon / grid_n;
            for (const auto& z : grid) {
                for (int i = 0; i < grid_n; ++i) {
                    const double t0 = i * dt;
                    const double t1 = t0 + dt;
                    const double d = distance(handle.evaluate_phi(0.0, t1, z),
                                              handle.evaluate_phi(0.0, t0, z));
                    envelope = std::max(envelope, d / dt);
                }
            }
            envelope *= 1.05;
            for (const auto& tr : triples) {
                for (const auto& z : grid) {
                    const CVector a = handle.evaluate_phi(tr.s, tr.u, z);
                    const CVector b = handle.evaluate_phi(tr.s, tr.t, z);
                    const double lhs = distance(a, b);
                    const double excess = lhs - envelope * (tr.t - tr.u);
                    if (excess > worst) {
                        worst = excess;
                        witness = {{z}, {tr.s, tr.u, tr.t}, lhs, "empirical Lipschitz envelope"};
                    }
                }
            }
        }
        add_check(report, "lipschitz_in_t", worst, tol, std::move(witness));
    }

    return report;
}

VerificationReport verify_contraction(const EvolutionFamilyHandle& handle,
                                      std::span<const PointPair> pairs, double s, double t,
                                      double tol) {
    if (!(s <= t)) throw std::invalid_argument("verify_contraction: need s <= t");
    VerificationReport report;
    double worst = -std::numeric_limits<double>::infinity();
    CheckWitness witness;
    const Domain& domain = handle.domain();
    for (const auto& [z, w] : pairs) {
        if (z == w) throw std::invalid_argument("verify_contraction: pairs must be distinct");
        const double before = kobayashi_distance(domain, z, w);
        const double after =
            kobayashi_distance(domain, handle.evaluate_phi(s, t, z), handle.evaluate_phi(s, t, w));
        const double excess = after - before;
        if (excess > worst) {
            worst = excess;
            witness = {{z, w}, {s, t}, after, "k(phi(z), phi(w)) - k(z, w)"};
        }
    }
    add_check(report, "kobayashi_contraction", worst, tol, std::move(witness));
    return report;
}

VerificationReport verify_univalence(const EvolutionFamilyHandle& handle,
                                     std::span<const CVector> sample, double s, double t) {
    VerificationReport report;
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j)
            if (sample[i] == sample[j])
                throw std::invalid_argument("verify_univalence: sample points must be distinct");

    std::vector<CVector> images;
    images.reserve(sample.size());
    double max_norm = 0.0;
    for (const auto& z : sample) {
        images.push_back(handle.evaluate_phi(s, t, z));
        max_norm = std::max({max_norm, norm(z), norm(images.back())});
    }

    // separation floor exp(-int C~) from the two-point Gronwall argument
    double separation_factor = 1e-9;
    if (handle.is_field_backed()) {
        const int n = handle.domain().dim();
        const double r_max = (handle.domain().kind() == DomainKind::polydisc)
                                 ? 1.0
                                 : 1.0 / std::sqrt(static_cast<double>(n));
        const double r_p = std::min(max_norm + 0.1 * (r_max - max_norm), 0.98 * r_max);
        try {
            const TimeFunction lip =
                lipschitz_certificate(*handle.field(), CompactSet::polydisc(r_p),
                                      std::max(t, 1e-9), handle.order());
            separation_factor = 0.9 * std::exp(-lip.integrate(s, t));
        } catch (const CertificateError&) {
            separation_factor = 1e-9; // fall back to bare distinctness
        }
    }

    {
        double worst = -std::numeric_limits<double>::infinity();
        CheckWitness witness;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            for (std::size_t j = i + 1; j < sample.size(); ++j) {
                const double input_gap = distance(sample[i], sample[j]);
                const double image_gap = distance(images[i], images[j]);
                const double deficit = separation_factor * input_gap - image_gap;
                if (deficit > worst) {
                    worst = deficit;
                    witness = {{sample[i], sample[j], images[i], images[j]},
                               {s, t},
                               image_gap,
                               "image separation vs Gronwall floor"};
                }
            }
        }
        add_check(report, "distinct_images", worst, 0.0, std::move(witness));
    }

    {
        double worst = -std::numeric_limits<double>::infinity();
        CheckWitness witness;
        for (const auto& z : sample) {
            double det_mod = 0.0;
            if (handle.is_field_backed()) {
                const TransportState state =
                    transport_matrix(*handle.field(), handle.domain(), s, t, z, handle.solver_config());
                det_mod = std::abs(determinant(flow_derivative(state, t).matrix));
            } else {
                const CMatrix jac = cauchy_jacobian(
                    [&](const CVector& p) { return handle.evaluate_phi(s, t, p); }, handle.domain(),
                    z);
                det_mod = std::abs(determinant(jac));
            }
            const double deficit = 1e-12 - det_mod;
            if (deficit > worst) {
                worst = deficit;
                witness = {{z}, {s, t}, det_mod, "|det d phi|"};
            }
        }
        add_check(report, "nonsingular_derivative", worst, 0.0, std::move(witness));
    }

    return report;
}

ContinuityProbe joint_continuity_probe(const EvolutionFamilyHandle& handle, double s, double t,
                                       const CompactSet& region, double radius, std::size_t n) {
    if (!(0.0 <= s && s <= t)) throw std::invalid_argument("joint_continuity_probe: need 0 <= s <= t");
    ContinuityProbe probe;
    auto pts = sample_interior_points(handle.domain(), std::max<std::size_t>(n, 1),
                                      std::min(0.9, region.radius));
    std::vector<CVector> base;
    base.reserve(pts.size());
    for (const auto& z : pts) base.push_back(handle.evaluate_phi(s, t, z));

    auto modulus_at = [&](double rad) {
        if (rad == 0.0) return 0.0;
        double modulus = 0.0;
        const int dirs = 8;
        for (int k = 0; k < dirs; ++k) {
            // perturb (s, t) on a deterministic stencil, clamped to 0 <= s' <= t'
            const double ang = 2.0 * std::numbers::pi * k / dirs;
            double sp = s + rad * std::cos(ang);
            double tp = t + rad * std::sin(ang);
            sp = std::max(0.0, sp);
            tp = std::max(sp, tp);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double d = distance(handle.evaluate_phi(sp, tp, pts[i]), base[i]);
                modulus = std::max(modulus, d);
            }
        }
        return modulus;
    };

    double rad = radius;
    double prev = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 4; ++level) {
        const double m = modulus_at(rad);
        probe.radius_modulus.emplace_back(rad, m);
        if (level == 0) probe.modulus = m;
        if (level > 0 && m > 0.75 * prev && m > 1e-10) probe.shrinking = false;
        prev = m;
        rad *= 0.5;
        if (rad == 0.0) break;
    }
    return probe;
}

} // namespace loewner
