#include <doctest.h>

#include <cmath>

#include "builtin_fields.hpp"
#include "loewner/errors.hpp"
#include "loewner/herglotz.hpp"

using namespace loewner;
using namespace loewner::testsupport;

namespace {
CVector pt(double re, double im = 0.0) { return {Complex(re, im)}; }
const Domain kDisc = Domain::unit_disc();
}

TEST_CASE("check_herglotz: radial field passes with the hand-computed witness value") {
    const std::vector<std::pair<CVector, CVector>> pairs{{pt(0.5), pt(0.0)}};
    const std::vector<double> times{0.25};
    const auto report = check_herglotz(radial_unit(), kDisc, pairs, times, 1e-9);
    CHECK(report.verdict == Verdict::pass);
    // at (0.5, 0): dk(G(z), G(w)) = -2/3
    CHECK(report.worst_value == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));

    // sign flip for G(z) = +z
    const auto bad = check_herglotz(expanding_radial(), kDisc, pairs, times, 1e-9);
    CHECK(bad.verdict == Verdict::fail);
    CHECK(bad.worst_value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(bad.witness.z == pairs[0].first);
    CHECK(bad.witness.t == times[0]);
}

TEST_CASE("check_herglotz: zero field passes with worst value 0") {
    const FieldSpec zero = FieldSpec::radial(kDisc, TimeFunction::constant(0.0));
    const auto report = check_herglotz(zero, kDisc, 16, std::vector<double>{0.1, 0.9}, 1e-12);
    CHECK(report.verdict == Verdict::pass);
    CHECK(report.worst_value == doctest::Approx(0.0));
}

TEST_CASE("check_herglotz: every built-in field passes on sampled pairs") {
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const auto times = herglotz_time_samples(f, 1.0);
        const auto report = check_herglotz(f, f.domain(), 48, times, 1e-9);
        CHECK_MESSAGE(report.verdict == Verdict::pass, named.name);
        // witness reproduces the recorded worst value
        const auto& w = report.witness;
        const double again = kobayashi_directional_derivative(
                                 f.domain(), w.z, w.w, f.evaluate(w.z, w.t), f.evaluate(w.w, w.t))
                                 .value;
        CHECK(again == doctest::Approx(w.value).epsilon(1e-12));
    }
}

TEST_CASE("check_herglotz: scaling leaves the verdict unchanged") {
    for (double lambda : {0.5, 2.0, 7.0}) {
        const auto base = check_herglotz(poly_tanh(), kDisc, 24, std::vector<double>{0.3}, 1e-9);
        const auto scaled =
            check_herglotz(poly_tanh().scaled(lambda), kDisc, 24, std::vector<double>{0.3}, 1e-9);
        CHECK(base.verdict == scaled.verdict);
        // dk is linear in the direction pair
        CHECK(scaled.worst_value == doctest::Approx(lambda * base.worst_value).epsilon(1e-9));
    }
}

TEST_CASE("check_herglotz: polydisc verdict is at most advisory") {
    const Domain poly = Domain::polydisc(2);
    CMatrix a = CMatrix::identity(2);
    a(0, 0) = a(1, 1) = Complex(-1.0, 0.0);
    const FieldSpec f = FieldSpec::linear(poly, a);
    const auto report = check_herglotz(f, poly, 16, std::vector<double>{0.5}, 1e-9);
    CHECK(report.verdict == Verdict::advisory);
}

TEST_CASE("check_herglotz: default time samples skip breakpoints") {
    const auto times = herglotz_time_samples(radial_piecewise(), 1.0, 2);
    CHECK(times.size() == 4);
    for (double t : times) CHECK(t != 0.5);
}

TEST_CASE("flow_contraction_check: contracting flow passes, expanding fails") {
    const auto good = flow_contraction_check(radial_unit(), kDisc, 0.0, 1.0, 16, 1e-9);
    CHECK(good.verdict == Verdict::pass);
    // k(phi(z), phi(w)) strictly below k(z, w) for the radial flow
    CHECK(good.worst_value < 0.0);

    // t = s: equality within 1e-12
    const auto id = flow_contraction_check(radial_unit(), kDisc, 0.5, 0.5, 8, 1e-12);
    CHECK(id.verdict == Verdict::pass);
    CHECK(std::fabs(id.worst_value) <= 1e-12);

    // pairs kept in a small ball so the expanding flow stays inside up to t
    const auto bad = flow_contraction_check(expanding_radial(), kDisc, 0.0, 0.3, 16, 1e-9,
                                            SolverConfig{}, kDefaultSeed, 0.3);
    CHECK(bad.verdict == Verdict::fail);
    CHECK(bad.worst_value > 0.0);
}

TEST_CASE("flow_contraction_check: escape before t is propagated") {
    CHECK_THROWS_AS(flow_contraction_check(expanding_radial(), kDisc, 0.0, 1.0, 4, 1e-9),
                    EscapeError);
}

TEST_CASE("flow_contraction_check: radial closed-form drop") {
    // k(0.5, 0) = 0.5493 drops to arctanh(0.5 e^{-1}) = 0.1861
    const double k0 = kobayashi_distance(kDisc, pt(0.5), pt(0.0));
    const double k1 = std::atanh(0.5 * std::exp(-1.0));
    CHECK(k0 == doctest::Approx(0.5493061).epsilon(1e-6));
    CHECK(k1 == doctest::Approx(0.1860).epsilon(1e-3));
    const Trajectory traj = integrate(radial_unit(), kDisc, 0.0, pt(0.5), 1.0, SolverConfig{});
    CHECK(kobayashi_distance(kDisc, traj.end_point(), pt(0.0)) ==
          doctest::Approx(k1).epsilon(1e-8));
}

TEST_CASE("herglotz consistency: dk verdict implies flow contraction on the same sample") {
    // 1 - z^2 generates hyperbolic automorphisms: dk is identically 0 there,
    // so "tolerance 0" is realized as a rounding-level tolerance
    for (const FieldSpec& f : {radial_unit(), poly_tanh(), bp_boundary()}) {
        const auto dk = check_herglotz(f, kDisc, 24, std::vector<double>{0.2, 0.6}, 1e-12);
        REQUIRE(dk.verdict == Verdict::pass);
        const auto flow = flow_contraction_check(f, kDisc, 0.0, 0.8, 24, 1e-9);
        CHECK(flow.verdict == Verdict::pass);
    }
}

TEST_CASE("check_herglotz: precondition violations") {
    const std::vector<std::pair<CVector, CVector>> same{{pt(0.3), pt(0.3)}};
    CHECK_THROWS_AS(check_herglotz(radial_unit(), kDisc, same, std::vector<double>{0.1}, 1e-9),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        check_herglotz(radial_unit(), kDisc, std::size_t{0}, std::vector<double>{0.1}, 1e-9),
        std::invalid_argument);
}
