#include <doctest.h>

#include <cmath>

#include "builtin_fields.hpp"
#include "loewner/field.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/recovery.hpp"

using namespace loewner;
using namespace loewner::testsupport;

namespace {
CVector pt(double re, double im = 0.0) { return {Complex(re, im)}; }
const Domain kDisc = Domain::unit_disc();
}

TEST_CASE("difference quotient: closed forms") {
    // zero field: quotient 0 for every h
    const FieldSpec zero = FieldSpec::radial(kDisc, TimeFunction::constant(0.0));
    const auto zero_handle = EvolutionFamilyHandle::field_backed(zero);
    CHECK(norm(difference_quotient(zero_handle, pt(0.4, 0.2), 0.3, 0.05)) < 1e-12);

    // radial: 0.5 (e^{-h} - 1)/h at h = 0.01
    const auto radial = EvolutionFamilyHandle::field_backed(radial_unit());
    const CVector q = difference_quotient(radial, pt(0.5), 0.2, 0.01);
    const double expected = 0.5 * (std::exp(-0.01) - 1.0) / 0.01;
    CHECK(q[0].real() == doctest::Approx(expected).epsilon(1e-9));

    // tanh family at z = 0: tanh(h)/h -> 1
    const CVector qt = difference_quotient(tanh_family(), pt(0.0), 0.5, 0.01);
    CHECK(qt[0].real() == doctest::Approx(std::tanh(0.01) / 0.01).epsilon(1e-12));
    CHECK(qt[0].real() == doctest::Approx(0.9999667).epsilon(1e-7));

    CHECK_THROWS_AS(difference_quotient(radial, pt(0.5), 0.2, 0.0), std::invalid_argument);
}

TEST_CASE("recover_field: reproduces the generating field") {
    const auto hs = default_h_sequence();
    REQUIRE(hs.size() == 6);
    CHECK(hs.front() == doctest::Approx(1e-2));

    const auto radial = EvolutionFamilyHandle::field_backed(radial_unit());
    const auto r1 = recover_field(radial, pt(0.5), 0.4, hs);
    CHECK(r1.converged);
    // the extrapolated limit clears the quotient truncation by many orders
    CHECK(std::abs(r1.value[0] - Complex(-0.5, 0.0)) < 1e-9);
    CHECK(r1.error_estimate < 1e-6);

    const auto poly = EvolutionFamilyHandle::field_backed(poly_tanh());
    const auto r2 = recover_field(poly, pt(0.3), 0.4, hs);
    CHECK(std::abs(r2.value[0] - Complex(0.91, 0.0)) < 1e-9);
}

TEST_CASE("recover_field: round trip over every built-in herglotz field") {
    const auto hs = default_h_sequence();
    for (const auto& named : builtin_herglotz_fields()) {
        const FieldSpec& f = named.field;
        const int n = f.domain().dim();
        const auto handle = EvolutionFamilyHandle::field_backed(f);
        const CVector z(n, Complex(0.3, -0.1));
        for (double t : {0.21, 0.7}) { // away from the piecewise breakpoint at 0.5
            const auto rec = recover_field(handle, z, t, hs);
            const CVector truth = f.evaluate(z, t);
            const double rel = distance(rec.value, truth) / std::max(1.0, norm(truth));
            CHECK_MESSAGE(rel < 1e-4, named.name);
        }
    }
}

TEST_CASE("recover_field: breakpoint is flagged with both one-sided limits") {
    const auto handle = EvolutionFamilyHandle::field_backed(radial_piecewise());
    const auto rec = recover_field(handle, pt(0.4), 0.5, default_h_sequence());
    CHECK(!rec.converged);
    REQUIRE(rec.forward_value.has_value());
    REQUIRE(rec.backward_value.has_value());
    // right limit: c = 2, left limit: c = 1
    CHECK(std::abs((*rec.forward_value)[0] - Complex(-0.8, 0.0)) < 1e-4);
    CHECK(std::abs((*rec.backward_value)[0] - Complex(-0.4, 0.0)) < 1e-4);

    // away from the breakpoint both limits agree and nothing is flagged
    const auto smooth = recover_field(handle, pt(0.4), 0.25, default_h_sequence());
    CHECK(smooth.converged);
    CHECK(!smooth.forward_value.has_value());
}

TEST_CASE("recover_field: validates the h sequence") {
    const auto handle = EvolutionFamilyHandle::field_backed(radial_unit());
    CHECK_THROWS_AS(recover_field(handle, pt(0.1), 0.3, std::vector<double>{1e-2, 1e-3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(recover_field(handle, pt(0.1), 0.3, std::vector<double>{1e-2, 1e-3, 1e-2}),
                    std::invalid_argument);
}

TEST_CASE("uniform bound dominates the quotients") {
    // zero field: bound 0
    const FieldSpec zero = FieldSpec::radial(kDisc, TimeFunction::constant(0.0));
    CHECK(uniform_bound(EvolutionFamilyHandle::field_backed(zero), CompactSet::ball(0.5), 1.0,
                        1e-2, 50) == doctest::Approx(0.0));

    // radial c = 1 on K = ball(0.5): sup |quotient| close to 0.5, inflated to ~0.55
    const double b1 = uniform_bound(EvolutionFamilyHandle::field_backed(radial_unit()),
                                    CompactSet::ball(0.5), 1.0, 1e-2, 200);
    CHECK(b1 > 0.50);
    CHECK(b1 < 0.552);

    // radial c = 2 on K = ball(0.25): sup |G| = 0.5 again
    const FieldSpec c2 = FieldSpec::radial(kDisc, TimeFunction::constant(2.0));
    const double b2 = uniform_bound(EvolutionFamilyHandle::field_backed(c2),
                                    CompactSet::ball(0.25), 1.0, 1e-2, 200);
    CHECK(b2 > 0.49);
    CHECK(b2 < 0.552);
}

TEST_CASE("quotient boundedness and holomorphy in z") {
    const auto handle = EvolutionFamilyHandle::field_backed(poly_tanh());
    const double bound = uniform_bound(handle, CompactSet::ball(0.6), 1.0, 1e-2, 100);
    for (double h : {1e-2, 1e-3}) {
        for (double t : {0.1, 0.8}) {
            const CVector q = difference_quotient(handle, pt(0.35, 0.2), t, h);
            CHECK(norm(q) <= bound * (1.0 + 1e-9));
            // z -> G_h(z, t) is holomorphic (Cauchy-Riemann residual small)
            const double res = cauchy_riemann_residual(
                [&](const CVector& z) { return difference_quotient(handle, z, t, h); }, kDisc,
                pt(0.35, 0.2), 1e-4);
            CHECK(res < 1e-6);
        }
    }
}

TEST_CASE("uniqueness crosscheck: true field passes, 2x scaling fails") {
    const auto handle = EvolutionFamilyHandle::field_backed(poly_tanh());
    std::vector<std::pair<CVector, double>> samples;
    for (double re : {-0.3, 0.0, 0.3})
        for (double t : {0.2, 0.6}) samples.emplace_back(pt(re, 0.1), t);

    const auto pass = uniqueness_crosscheck(handle, poly_tanh(), samples, 1e-4);
    CHECK(pass.overall());

    const auto fail = uniqueness_crosscheck(handle, poly_tanh().scaled(2.0), samples, 1e-4);
    CHECK(!fail.overall());
    // deviation is |G| at the witness, roughly
    CHECK(fail.checks.front().worst_violation > 0.5);

    // zero family vs zero field: deviation 0
    const FieldSpec zero = FieldSpec::radial(kDisc, TimeFunction::constant(0.0));
    const auto zh = EvolutionFamilyHandle::field_backed(zero);
    const auto zrep = uniqueness_crosscheck(zh, zero, samples, 1e-8);
    CHECK(zrep.overall());
    CHECK(zrep.checks.front().worst_violation < 1e-10);
}

TEST_CASE("recovered field re-passes the herglotz check through a custom wrapper") {
    const auto handle = EvolutionFamilyHandle::field_backed(radial_unit());
    const auto hs = default_h_sequence();
    const FieldSpec wrapped = FieldSpec::custom(
        kDisc,
        [handle, hs](const CVector& z, double t) { return recover_field(handle, z, t, hs).value; },
        {});
    const std::vector<double> times{0.2, 0.7};
    const auto report = check_herglotz(wrapped, kDisc, 16, times, 1e-4);
    CHECK(report.verdict == Verdict::pass);
}

TEST_CASE("recover_on_grid bounds every stored estimate") {
    const auto handle = EvolutionFamilyHandle::field_backed(radial_unit());
    std::vector<CVector> zs{pt(0.2), pt(0.4, 0.1), pt(-0.3, 0.2)};
    std::vector<double> ts{0.2, 0.5, 0.8};
    const RecoveredField rec = recover_on_grid(handle, zs, ts, default_h_sequence());
    REQUIRE(rec.samples.size() == 9);
    for (const auto& s : rec.samples) CHECK(norm(s.g) <= rec.bound * (1.0 + 1e-6));
}
