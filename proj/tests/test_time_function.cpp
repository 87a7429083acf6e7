#include <doctest.h>

#include <cmath>

#include "loewner/errors.hpp"
#include "loewner/time_function.hpp"

using namespace loewner;

TEST_CASE("constant evaluation and integration") {
    const TimeFunction f = TimeFunction::constant(2.5);
    CHECK(f(0.0) == 2.5);
    CHECK(f(17.0) == 2.5);
    CHECK(f.integrate(1.0, 3.0) == doctest::Approx(5.0));
    CHECK(f.integrate(2.0, 2.0) == 0.0);
}

TEST_CASE("piecewise constant pieces and breakpoints") {
    const TimeFunction f = TimeFunction::piecewise_constant({0.5, 1.0}, {1.0, 2.0, 3.0});
    CHECK(f(0.0) == 1.0);
    CHECK(f(0.5) == 2.0); // pieces are [begin, end)
    CHECK(f(0.9999) == 2.0);
    CHECK(f(1.0) == 3.0);
    CHECK(f.integrate(0.0, 2.0) == doctest::Approx(0.5 * 1.0 + 0.5 * 2.0 + 1.0 * 3.0));
    const auto breaks = f.interior_breakpoints(10.0);
    REQUIRE(breaks.size() == 2);
    CHECK(breaks[0] == 0.5);
    CHECK(breaks[1] == 1.0);
    CHECK(f.interior_breakpoints(0.75).size() == 1);
}

TEST_CASE("power piece integrates in closed form") {
    // c(t) = 1/(2 sqrt(t)): integral over [0, t] is sqrt(t) exactly
    const TimeFunction f = TimeFunction::power(0.5, 0.5);
    CHECK(f.integrate(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.integrate(0.0, 0.25) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.integrate(0.25, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f(0.25) == doctest::Approx(1.0));
    CHECK(std::isinf(f(0.0)));
    const auto marks = f.singularities(1.0);
    REQUIRE(marks.size() == 1);
    CHECK(marks[0].t == 0.0);
    CHECK(marks[0].alpha == 0.5);
}

TEST_CASE("lp norms: exact values and divergence") {
    const TimeFunction c = TimeFunction::constant(0.5);
    CHECK(c.lp_norm(kOrderInf, 1.0) == doctest::Approx(0.5));
    CHECK(c.lp_norm(1.0, 1.0) == doctest::Approx(0.5));
    CHECK(c.lp_norm(2.0, 1.0) == doctest::Approx(0.5));

    const TimeFunction sing = TimeFunction::power(0.5, 0.5);
    // L^1 over [0,1]: integral of 1/(2 sqrt t) = 1
    CHECK(sing.lp_norm(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // L^2 diverges: integral of 1/(4t)
    CHECK(!sing.has_finite_lp(2.0, 1.0));
    CHECK_THROWS_AS(sing.lp_norm(2.0, 1.0), CertificateError);
    CHECK_THROWS_AS(sing.lp_norm(kOrderInf, 1.0), CertificateError);
    // L^1.9 still finite: alpha * d = 0.95 < 1
    CHECK(sing.has_finite_lp(1.9, 1.0));
}

TEST_CASE("smooth pieces integrate by quadrature") {
    const TimeFunction f = TimeFunction::smooth([](double t) { return std::sin(t); });
    CHECK(f.integrate(0.0, 3.0) == doctest::Approx(1.0 - std::cos(3.0)).epsilon(1e-12));
    CHECK(f.lp_norm(2.0, 3.1415926535897932) ==
          doctest::Approx(std::sqrt(3.1415926535897932 / 2.0)).epsilon(1e-10));
}

TEST_CASE("scaled and abs stay inside the vocabulary") {
    const TimeFunction f = TimeFunction::power(-0.5, 0.25);
    const TimeFunction g = f.scaled(-2.0);
    CHECK(g(1.0) == doctest::Approx(1.0));
    const TimeFunction h = f.abs();
    CHECK(h(1.0) == doctest::Approx(0.5));
    CHECK(h.singularities(1.0).size() == 1);
    // integral of |f| is exact
    CHECK(h.integrate(0.0, 1.0) == doctest::Approx(0.5 / 0.75).epsilon(1e-14));
}

TEST_CASE("validation rejects bad pieces") {
    CHECK_THROWS_AS(TimeFunction::power(1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::power(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::piecewise_constant({1.0, 0.5}, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::constant(1.0)(-0.5), std::invalid_argument);
}

TEST_CASE("clipped pieces keep power anchors intact") {
    const TimeFunction f = TimeFunction::power(1.0, 0.5);
    const auto clipped = f.clipped_pieces(0.25, 0.75);
    REQUIRE(clipped.size() == 1);
    // away from the anchor the clip may be re-wrapped, but values agree
    TimeFunction::Piece p = clipped[0];
    CHECK(p.begin == 0.25);
    CHECK(p.end == 0.75);
    CHECK(p.eval(0.5) == doctest::Approx(f(0.5)));
}
