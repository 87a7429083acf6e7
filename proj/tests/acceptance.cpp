// Acceptance suite: one closed-form or property criterion per line.
// Exit code 0 iff every criterion holds at its stated tolerance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "builtin_fields.hpp"
#include "loewner/errors.hpp"
#include "loewner/evolution.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/recovery.hpp"
#include "loewner/sampling.hpp"
#include "loewner/solver.hpp"
#include "loewner/variational.hpp"

using namespace loewner;
using namespace loewner::testsupport;

namespace {

CVector pt(double re, double im = 0.0) { return {Complex(re, im)}; }
const Domain kDisc = Domain::unit_disc();

int failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %02d %-38s %s\n", ok ? "PASS" : "FAIL", index, name.c_str(), detail.c_str());
    if (!ok) ++failures;
}

std::string num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

// 1. closed-form flow accuracy at default tolerances, under one second
void criterion_flow_accuracy() {
    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = integrate(radial_unit(), kDisc, 0.0, pt(0.5), 1.0, SolverConfig{});
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double err = std::abs(traj.end_point()[0] - 0.5 * std::exp(-1.0));
    report(1, "closed-form flow accuracy", err <= 1e-8 && elapsed < 1.0,
           "|x(1) - 0.5/e| = " + num(err) + ", " + num(elapsed) + " s");
}

// 2. boundary-fixed-point flow x' = 1 - x^2
void criterion_boundary_fixed_point() {
    const Trajectory traj = integrate(poly_tanh(), kDisc, 0.0, pt(0.0), 1.0, SolverConfig{});
    const double err = std::abs(traj.end_point()[0] - std::tanh(1.0));
    report(2, "boundary-fixed-point flow", err <= 1e-6, "|x(1) - tanh 1| = " + num(err));
}

// 3. order-d robustness across the integrable singularity
void criterion_order_d() {
    const Trajectory traj = integrate(radial_singular(), kDisc, 0.0, pt(0.5), 1.0, SolverConfig{});
    const double err = std::abs(traj.end_point()[0] - 0.5 * std::exp(-1.0));
    report(3, "order-d singular rate", err <= 1e-5, "|x(1) - 0.5 e^{-sqrt 1}| = " + num(err));
}

// 4. escape detection for the expanding flow
void criterion_escape() {
    const Trajectory traj = integrate(expanding_radial(), kDisc, 0.0, pt(0.5), 2.0, SolverConfig{});
    const bool escaped = traj.status == IntegrationStatus::escaped && traj.escape_time.has_value();
    const double err = escaped ? std::fabs(*traj.escape_time - std::log(2.0)) : 1.0;
    report(4, "escape detection", escaped && err <= 1e-4, "|T - ln 2| = " + num(err));
}

// 5. Picard iteration agrees with the integrator on the existence window
void criterion_picard_agreement() {
    double worst = 0.0;
    std::string worst_name = "-";
    bool ok = true;
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const int n = f.domain().dim();
        const CVector z0(n, Complex(0.2, 0.05));
        double delta;
        try {
            delta = local_existence_delta(f, 0.0, 0.5, CompactSet::polydisc(0.5), 2.0);
        } catch (const CertificateError&) {
            ok = false;
            worst_name = named.name + " (no certificate)";
            continue;
        }
        delta = std::min(delta, 0.5);
        const Trajectory fixed_point = picard_iterate(f, 0.0, z0, delta, 64, 1e-12);
        const Trajectory reference = integrate(f, f.domain(), 0.0, z0, delta, SolverConfig{});
        double sup = 0.0;
        for (const auto& [t, x] : fixed_point.samples)
            sup = std::max(sup, distance(x, reference.eval(t)));
        if (sup > worst) {
            worst = sup;
            worst_name = named.name;
        }
    }
    report(5, "picard / integrator agreement", ok && worst <= 1e-6,
           "sup diff = " + num(worst) + " (" + worst_name + ")");
}

// 6. evolution-family axioms for every built-in field + negative control
void criterion_axioms() {
    bool ok = true;
    double worst = 0.0;
    std::string detail_name = "-";
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const auto handle = EvolutionFamilyHandle::field_backed(f);
        const auto grid = sample_interior_points(f.domain(), 20, 0.5);
        std::vector<TimeTriple> triples;
        for (int i = 0; i < 10; ++i) {
            const double t = 0.1 + 0.09 * i;
            triples.push_back({0.05 * i, 0.05 * i + 0.4 * t, 0.05 * i + t});
        }
        const auto report_ax =
            verify_axioms(handle, grid, triples, 1.5, CompactSet::ball(0.5), 1e-6);
        for (const auto& c : report_ax.checks) {
            if (!c.passed) ok = false;
            if (c.worst_violation > worst) {
                worst = c.worst_violation;
                detail_name = named.name + "/" + c.name;
            }
        }
    }
    // negative control: broken composition must fail with a witness
    const auto grid = sample_interior_points(kDisc, 5, 0.5);
    const std::vector<TimeTriple> triples{{0.0, 0.5, 1.0}};
    const auto broken =
        verify_axioms(broken_composition_family(), grid, triples, 1.0, CompactSet::ball(0.5), 1e-6);
    const bool control_fails =
        !broken.overall() && !broken.find("composition")->passed &&
        !broken.find("composition")->witness.points.empty();
    report(6, "evolution-family axiom suite", ok && control_fails,
           "worst residual = " + num(worst) + " (" + detail_name + "), control " +
               (control_fails ? "fails as required" : "DID NOT FAIL"));
}

// 7. Kobayashi contraction over 10^3 pairs per backend; expanding control
// must fail
void criterion_contraction() {
    bool ok = true;
    double worst = -1.0;
    std::string worst_name = "-";
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const auto handle = EvolutionFamilyHandle::field_backed(f);
        const auto pts = sample_interior_points(f.domain(), 2000, 0.8);
        std::vector<PointPair> pairs;
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) pairs.push_back({pts[i], pts[i + 1]});
        const auto rep = verify_contraction(handle, pairs, 0.0, 1.0, 1e-9);
        if (!rep.overall()) ok = false;
        if (rep.checks.front().worst_violation > worst) {
            worst = rep.checks.front().worst_violation;
            worst_name = named.name;
        }
    }
    const auto pts = sample_interior_points(kDisc, 16, 0.3);
    std::vector<PointPair> pairs;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) pairs.push_back({pts[i], pts[i + 1]});
    const bool control_fails =
        !verify_contraction(expanding_family(), pairs, 0.0, 0.3, 1e-9).overall();
    report(7, "kobayashi contraction", ok && control_fails,
           "worst excess = " + num(worst) + " (" + worst_name + "), expanding control " +
               (control_fails ? "fails as required" : "DID NOT FAIL"));
}

// 8. Herglotz classification with the hand-computed witness
void criterion_herglotz() {
    bool ok = true;
    std::string detail;
    for (const FieldSpec& f : {radial_unit(), bp_boundary(), linear_contract()}) {
        const auto times = herglotz_time_samples(f, 1.0);
        if (check_herglotz(f, f.domain(), 32, times, 1e-9).verdict != Verdict::pass) ok = false;
    }
    const std::vector<std::pair<CVector, CVector>> canon{{pt(0.5), pt(0.0)}};
    const auto bad =
        check_herglotz(expanding_radial(), kDisc, canon, std::vector<double>{0.25}, 1e-9);
    const double witness_err = std::fabs(bad.worst_value - 2.0 / 3.0);
    const bool control = bad.verdict == Verdict::fail && witness_err <= 1e-6;
    report(8, "herglotz classification", ok && control,
           "witness value 2/3 within " + num(witness_err));
}

// 9. variational accuracy: flow derivative vs central differences, tanh case
void criterion_variational() {
    double worst_rel = 0.0;
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const int n = f.domain().dim();
        const CVector z0(n, Complex(0.25, 0.1));
        const auto handle = EvolutionFamilyHandle::field_backed(f);
        const CMatrix deriv =
            flow_derivative(transport_matrix(f, f.domain(), 0.0, 0.8, z0, {}), 0.8).matrix;
        const double h = 1e-5;
        for (int j = 0; j < n; ++j) {
            CVector zp = z0, zm = z0;
            zp[j] += h;
            zm[j] -= h;
            const CVector quot = scale(
                sub(handle.evaluate_phi(0.0, 0.8, zp), handle.evaluate_phi(0.0, 0.8, zm)),
                Complex(1.0 / (2.0 * h), 0.0));
            for (int i = 0; i < n; ++i)
                worst_rel = std::max(worst_rel, std::abs(quot[i] - deriv(i, j)) /
                                                    std::max(1.0, std::abs(deriv(i, j))));
        }
    }
    const CMatrix d =
        flow_derivative(transport_matrix(poly_tanh(), kDisc, 0.0, 1.0, pt(0.0), {}), 1.0).matrix;
    const double sech2 = 1.0 / (std::cosh(1.0) * std::cosh(1.0));
    const double tanh_err = std::abs(d(0, 0) - sech2);
    report(9, "variational accuracy", worst_rel <= 1e-5 && tanh_err <= 1e-6,
           "fd mismatch = " + num(worst_rel) + ", |dphi - sech^2 1| = " + num(tanh_err));
}

// 10. round-trip field recovery on a 5x5 grid + uniqueness crosscheck
void criterion_recovery() {
    const auto hs = default_h_sequence();
    double worst_rel = 0.0;
    std::string worst_name = "-";
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const auto handle = EvolutionFamilyHandle::field_backed(f);
        const auto zs = sample_interior_points(f.domain(), 5, 0.5);
        for (const auto& z : zs) {
            for (double t : {0.11, 0.31, 0.56, 0.72, 0.93}) { // away from breakpoints
                const auto rec = recover_field(handle, z, t, hs);
                const CVector truth = f.evaluate(z, t);
                const double rel = distance(rec.value, truth) / std::max(1.0, norm(truth));
                if (rel > worst_rel) {
                    worst_rel = rel;
                    worst_name = named.name;
                }
            }
        }
    }
    const auto handle = EvolutionFamilyHandle::field_backed(poly_tanh());
    std::vector<std::pair<CVector, double>> samples;
    for (double re : {-0.3, 0.0, 0.3})
        for (double t : {0.2, 0.6}) samples.emplace_back(pt(re, 0.1), t);
    const bool pass_true = uniqueness_crosscheck(handle, poly_tanh(), samples, 1e-4).overall();
    const bool fail_scaled =
        !uniqueness_crosscheck(handle, poly_tanh().scaled(2.0), samples, 1e-4).overall();
    report(10, "round-trip field recovery", worst_rel <= 1e-4 && pass_true && fail_scaled,
           "worst rel err = " + num(worst_rel) + " (" + worst_name + ")");
}

// 11. univalence on 50-point samples; the even map is the failing control
void criterion_univalence() {
    bool ok = true;
    std::string bad_name;
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const auto handle = EvolutionFamilyHandle::field_backed(f);
        const auto sample = sample_interior_points(f.domain(), 50, 0.6);
        const auto rep = verify_univalence(handle, sample, 0.0, 1.0);
        if (!rep.overall()) {
            ok = false;
            bad_name = named.name;
        }
    }
    std::vector<CVector> saddle{pt(0.4), pt(-0.4), pt(0.0), pt(0.2, 0.2)};
    const bool control_fails = !verify_univalence(square_family(), saddle, 0.0, 1.0).overall();
    report(11, "univalence of the family maps", ok && control_fails,
           ok ? (control_fails ? "50-point samples, z^2 control fails" : "control DID NOT FAIL")
              : ("failed on " + bad_name));
}

// 12. global existence: no escape on [0, 10] from 100 sampled starts
void criterion_global_existence() {
    bool ok = true;
    std::string bad_name;
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const auto starts = sample_interior_points(f.domain(), 100, 0.8);
        for (const auto& z0 : starts) {
            const Trajectory traj = integrate(f, f.domain(), 0.0, z0, 10.0, SolverConfig{});
            if (traj.status != IntegrationStatus::completed) {
                ok = false;
                bad_name = named.name;
                break;
            }
        }
        if (!ok) break;
    }
    report(12, "global existence for herglotz fields", ok,
           ok ? "100 starts x [0,10] per field" : ("escape flagged for " + bad_name));
}

} // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion_flow_accuracy();
    criterion_boundary_fixed_point();
    criterion_order_d();
    criterion_escape();
    criterion_picard_agreement();
    criterion_axioms();
    criterion_contraction();
    criterion_herglotz();
    criterion_variational();
    criterion_recovery();
    criterion_univalence();
    criterion_global_existence();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/12 criteria passed in %.1f s\n", 12 - failures, elapsed);
    return failures == 0 ? 0 : 1;
}
