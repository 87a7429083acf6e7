#include "loewner/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "loewner/errors.hpp"
#include "loewner/geometry.hpp"

namespace loewner {

CVector difference_quotient(const EvolutionFamilyHandle& handle, const CVector& z, double t,
                            double h) {
    if (!(h > 0.0)) throw std::invalid_argument("difference_quotient: h must be positive");
    const CVector image = handle.evaluate_phi(t, t + h, z);
    return scale(sub(image, z), Complex(1.0 / h, 0.0));
}

std::vector<double> default_h_sequence(double h_max, int length) {
    std::vector<double> hs(length);
    double h = h_max;
    for (int j = 0; j < length; ++j, h *= 0.5) hs[j] = h;
    return hs;
}

namespace {

struct Tableau {
    CVector value;
    double error = 0.0;
    bool converged = true;
};

// Aitken-Neville polynomial extrapolation to h = 0 for quotients with an
// error expansion in powers of h.
Tableau extrapolate(const std::vector<CVector>& raw, const std::vector<double>& hs) {
    const std::size_t m = raw.size();
    std::vector<CVector> row = raw;
    std::vector<CVector> prev_row;
    for (std::size_t k = 1; k < m; ++k) {
        prev_row = row;
        for (std::size_t j = m - 1; j >= k; --j) {
            const double denom = hs[j - k] / hs[j] - 1.0;
            CVector next(row[j].size());
            for (std::size_t c = 0; c < next.size(); ++c)
                next[c] = row[j][c] + (row[j][c] - row[j - 1][c]) / denom;
            row[j] = std::move(next);
            if (j == k) break;
        }
    }
    Tableau out;
    out.value = row[m - 1];
    out.error = distance(row[m - 1], prev_row[m - 1]);

    // raw quotient differences should shrink along the sequence
    double prev_diff = std::numeric_limits<double>::infinity();
    int grows = 0;
    for (std::size_t j = 1; j < m; ++j) {
        const double d = distance(raw[j], raw[j - 1]);
        if (j >= 2 && d > prev_diff * 1.5 && d > 1e-12) ++grows;
        prev_diff = d;
    }
    out.converged = grows < 2;
    return out;
}

} // namespace

RecoveredValue recover_field(const EvolutionFamilyHandle& handle, const CVector& z, double t,
                             std::span<const double> h_sequence) {
    if (h_sequence.size() < 3)
        throw std::invalid_argument("recover_field: h_sequence must have length >= 3");
    for (std::size_t i = 1; i < h_sequence.size(); ++i)
        if (!(h_sequence[i] < h_sequence[i - 1]))
            throw std::invalid_argument("recover_field: h_sequence must decrease");

    std::vector<double> hs(h_sequence.begin(), h_sequence.end());
    std::vector<CVector> forward;
    forward.reserve(hs.size());
    for (double h : hs) forward.push_back(difference_quotient(handle, z, t, h));
    const Tableau fwd = extrapolate(forward, hs);

    RecoveredValue out;
    out.value = fwd.value;
    out.error_estimate = fwd.error;
    out.converged = fwd.converged;

    // backward quotients (phi_{t-h,t}(z) - z)/h converge to the left limit
    if (t - hs.front() >= 0.0) {
        std::vector<CVector> backward;
        backward.reserve(hs.size());
        bool ok = true;
        try {
            for (double h : hs) {
                const CVector image = handle.evaluate_phi(t - h, t, z);
                backward.push_back(scale(sub(image, z), Complex(1.0 / h, 0.0)));
            }
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok) {
            const Tableau bwd = extrapolate(backward, hs);
            const double gap = distance(fwd.value, bwd.value);
            const double budget = 50.0 * (fwd.error + bwd.error) + 1e-9 * (1.0 + norm(fwd.value));
            if (gap > budget) {
                out.converged = false;
                out.forward_value = fwd.value;
                out.backward_value = bwd.value;
            }
        }
    }
    return out;
}

double uniform_bound(const EvolutionFamilyHandle& handle, const CompactSet& region, double horizon,
                     double h_max, std::size_t n_samples, std::uint64_t seed) {
    if (!region.strictly_inside(handle.domain()))
        throw std::invalid_argument("uniform_bound: region not strictly inside domain");
    if (!(h_max > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("uniform_bound: need positive horizon and h_max");
    auto pts = sample_interior_points(handle.domain(), n_samples, region.radius, seed % 977);
    double sup = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        // deterministic stratified (t, h) companion sample
        const double ft = halton(i + 1, 2);
        const double fh = halton(i + 1, 3);
        const double t = horizon * ft;
        const double h = h_max * (0.05 + 0.95 * fh);
        sup = std::max(sup, norm(difference_quotient(handle, pts[i], t, h)));
    }
    return 1.1 * sup;
}

VerificationReport uniqueness_crosscheck(const EvolutionFamilyHandle& handle,
                                         const FieldSpec& candidate,
                                         std::span<const std::pair<CVector, double>> samples,
                                         double tol) {
    if (samples.empty()) throw std::invalid_argument("uniqueness_crosscheck: empty sample");
    for (const auto& [z, t] : samples)
        for (double b : handle.time_breaks())
            if (std::fabs(t - b) < 1e-12)
                throw std::invalid_argument("uniqueness_crosscheck: sample hits a time breakpoint");

    const auto hs = default_h_sequence();
    VerificationReport report;
    double worst = 0.0;
    CheckWitness witness;
    for (const auto& [z, t] : samples) {
        const RecoveredValue rec = recover_field(handle, z, t, hs);
        const CVector cand = candidate.evaluate(z, t);
        const double dev = distance(rec.value, cand);
        if (dev > worst) {
            worst = dev;
            witness = {{z, rec.value, cand}, {t}, dev, "recovered vs candidate"};
        }
    }
    CheckResult res;
    res.name = "uniqueness";
    res.passed = worst <= tol;
    res.worst_violation = worst;
    res.tolerance = tol;
    res.witness = std::move(witness);
    report.checks.push_back(std::move(res));
    return report;
}

RecoveredField recover_on_grid(const EvolutionFamilyHandle& handle, std::span<const CVector> zs,
                               std::span<const double> ts, std::span<const double> h_sequence) {
    RecoveredField out;
    out.h_sequence.assign(h_sequence.begin(), h_sequence.end());
    double max_norm = 0.0;
    double max_t = 0.0;
    for (const auto& z : zs) max_norm = std::max(max_norm, norm(z));
    for (double t : ts) max_t = std::max(max_t, t);
    for (const auto& z : zs) {
        for (double t : ts) {
            const RecoveredValue rec = recover_field(handle, z, t, h_sequence);
            out.samples.push_back({z, t, rec.value, rec.error_estimate, rec.converged});
        }
    }
    const double r = std::min(0.95, max_norm + 0.05);
    out.bound = uniform_bound(handle, CompactSet::ball(r), max_t + h_sequence.front(),
                              h_sequence.front(), 200);
    return out;
}

} // namespace loewner
