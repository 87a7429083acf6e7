#include "loewner/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "loewner/errors.hpp"

namespace loewner {

std::vector<double> herglotz_time_samples(const FieldSpec& field, double horizon, int per_piece) {
    if (!(horizon > 0.0)) throw std::invalid_argument("herglotz_time_samples: horizon <= 0");
    std::vector<double> cuts = field.time_breakpoints(horizon);
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(horizon);
    std::vector<double> times;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        for (int j = 0; j < per_piece; ++j)
            times.push_back(a + (b - a) * (2.0 * j + 1.0) / (2.0 * per_piece));
    }
    return times;
}

namespace {

std::vector<std::pair<CVector, CVector>> matched_pairs(const Domain& domain, std::size_t n_pairs,
                                                       std::uint64_t seed, double radius_cap) {
    auto pts = sample_interior_points(domain, 2 * n_pairs, radius_cap);
    const auto order = shuffled_indices(pts.size(), seed);
    std::vector<std::pair<CVector, CVector>> pairs;
    pairs.reserve(n_pairs);
    for (std::size_t i = 0; i + 1 < order.size(); i += 2) {
        CVector z = pts[order[i]];
        CVector w = pts[order[i + 1]];
        if (distance(z, w) < 1e-9) w[0] += Complex(1e-3, -1e-3); // Halton points never collide, but stay safe
        pairs.emplace_back(std::move(z), std::move(w));
    }
    return pairs;
}

} // namespace

HerglotzReport check_herglotz(const FieldSpec& field, const Domain& domain,
                              std::span<const std::pair<CVector, CVector>> pairs,
                              std::span<const double> times, double tol) {
    if (pairs.empty() || times.empty())
        throw std::invalid_argument("check_herglotz: need at least one pair and one time");
    for (const auto& [z, w] : pairs)
        if (z == w) throw std::invalid_argument("check_herglotz: sampled points must be distinct");

    HerglotzReport report;
    report.tol = tol;
    report.worst_value = -std::numeric_limits<double>::infinity();
    for (const auto& [z, w] : pairs) {
        for (double t : times) {
            const CVector gz = field.evaluate(z, t);
            const CVector gw = field.evaluate(w, t);
            const double value = kobayashi_directional_derivative(domain, z, w, gz, gw).value;
            ++report.samples;
            if (value > report.worst_value) {
                report.worst_value = value;
                report.witness = {z, w, t, value};
            }
        }
    }
    if (domain.kind() == DomainKind::polydisc)
        report.verdict = Verdict::advisory;
    else
        report.verdict = report.worst_value > tol ? Verdict::fail : Verdict::pass;
    return report;
}

HerglotzReport check_herglotz(const FieldSpec& field, const Domain& domain, std::size_t n_pairs,
                              std::span<const double> times, double tol, std::uint64_t seed,
                              double radius_cap) {
    if (n_pairs < 1) throw std::invalid_argument("check_herglotz: n_pairs must be >= 1");
    const auto pairs = matched_pairs(domain, n_pairs, seed, radius_cap);
    return check_herglotz(field, domain, pairs, times, tol);
}

HerglotzReport flow_contraction_check(const FieldSpec& field, const Domain& domain, double s,
                                      double t, std::size_t n_pairs, double tol,
                                      const SolverConfig& cfg, std::uint64_t seed,
                                      double radius_cap) {
    if (!(s <= t)) throw std::invalid_argument("flow_contraction_check: need s <= t");
    const auto pairs = matched_pairs(domain, n_pairs, seed, radius_cap);

    HerglotzReport report;
    report.tol = tol;
    report.worst_value = -std::numeric_limits<double>::infinity();
    for (const auto& [z, w] : pairs) {
        const Trajectory tz = integrate(field, domain, s, z, t, cfg);
        const Trajectory tw = integrate(field, domain, s, w, t, cfg);
        if (tz.status != IntegrationStatus::completed)
            throw EscapeError("flow_contraction_check: escape before t", tz.end_time());
        if (tw.status != IntegrationStatus::completed)
            throw EscapeError("flow_contraction_check: escape before t", tw.end_time());
        const double before = kobayashi_distance(domain, z, w);
        const double after = kobayashi_distance(domain, tz.end_point(), tw.end_point());
        const double value = after - before;
        ++report.samples;
        if (value > report.worst_value) {
            report.worst_value = value;
            report.witness = {z, w, t, value};
        }
    }
    report.verdict = report.worst_value > tol ? Verdict::fail : Verdict::pass;
    return report;
}

} // namespace loewner
