#include <cmath>
#include <numbers>

#include "doctest.h"

#include "henonlab/implosion.hpp"

#include "support.hpp"

using namespace henonlab;

namespace {

const FatouEvaluator &evaluator()
{
    static const FatouEvaluator ev(testing::semi_parabolic_map());
    return ev;
}

} // namespace

TEST_CASE("alpha sequences")
{
    CHECK(alpha_epsilon(0.0, 100) == doctest::Approx(std::numbers::pi / 100.0).epsilon(1e-15));
    CHECK(alpha_epsilon(1.0, 101) == doctest::Approx(std::numbers::pi / 100.0).epsilon(1e-15));
    CHECK_THROWS_AS(alpha_epsilon(5.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(alpha_epsilon(7.5, 3), std::invalid_argument);
    // Bit-exact whenever some double epsilon achieves it; otherwise pi / eps
    // skips over n - alpha and the residual is one unit in the last place.
    for (const double alpha : {0.0, 0.25, -1.5, 3.0, 0.1}) {
        for (int n = 10; n <= 400; n += 7) {
            const double eps = alpha_epsilon(alpha, n);
            CHECK(eps > 0.0);
            const double residual = static_cast<double>(n) - std::numbers::pi / eps - alpha;
            bool representable = false;
            double e = eps;
            for (int k = 0; k < 64; ++k) {
                e = std::nextafter(e, 0.0);
            }
            for (int k = 0; k < 129; ++k, e = std::nextafter(e, 1.0)) {
                representable = representable || static_cast<double>(n) - std::numbers::pi / e == alpha;
            }
            if (representable) {
                CHECK(residual == 0.0);
            } else {
                CHECK(std::abs(residual) <= 2.0 * (std::nextafter(static_cast<double>(n), 1e300) - n));
            }
        }
    }
    const auto seq = alpha_sequence(0.5, 20, 25);
    REQUIRE(seq.size() == 6);
    CHECK(seq.front().n == 20);
    CHECK(seq.back().n == 25);
    CHECK(seq[2].epsilon == alpha_epsilon(0.5, 22));
    CHECK(seq[2].alpha == cplx(0.5));
}

TEST_CASE("Lavaurs maps")
{
    const auto &ev = evaluator();
    const auto &m = ev.map();
    const auto pts = basin_samples(ev, 10, 3);
    REQUIRE(pts.size() == 10);
    for (const cplx alpha : {cplx(0.0), cplx(0.3, 0.2), cplx(-0.7)}) {
        for (const auto &p : pts) {
            const auto l = lavaurs(ev, alpha, p);
            const auto lf = lavaurs(ev, alpha, m.forward(p));
            const auto l1 = lavaurs(ev, alpha + 1.0, p);
            REQUIRE(l.ok());
            REQUIRE(lf.ok());
            REQUIRE(l1.ok());
            CHECK(norm(m.forward(l.point) - lf.point) < 1e-6);
            CHECK(norm(l1.point - m.forward(l.point)) < 1e-6);
        }
    }
    // The image lies on the parabolic curve: a few backward steps stay on the
    // outgoing parametrization and approach the fixed point.
    const auto l = lavaurs(ev, 0.0, pts[0]);
    const cplx w = ev.incoming(pts[0]).value;
    ComplexPoint2 q = l.point;
    for (int i = 1; i <= 4; ++i) {
        q = m.inverse(q);
        CHECK(norm(q - ev.outgoing(w - static_cast<double>(i)).sigma.point) < 1e-6);
    }
    CHECK(norm(ev.outgoing(w - 60.0).sigma.point - ComplexPoint2{0.25, 0.25}) < 0.05);
    CHECK(lavaurs(ev, 0.0, {0.25, 0.25}).status == FatouStatus::out_of_domain);
}

TEST_CASE("basin samples are reproducible and inside the band")
{
    const auto &ev = evaluator();
    const auto a = basin_samples(ev, 20, 7);
    const auto b = basin_samples(ev, 20, 7);
    REQUIRE(a.size() == 20);
    CHECK(a == b);
    CHECK(basin_samples(ev, 20, 8) != a);
    for (const auto &p : a) {
        CHECK(ev.in_basin(p));
        const cplx phi = ev.incoming_natural(p).value;
        CHECK(std::abs(phi.imag()) >= 2.5);
        CHECK(std::abs(phi.real()) <= 8.0);
    }
}

TEST_CASE("implosion error")
{
    const auto &ev = evaluator();
    const auto samples = basin_samples(ev, 20, 0);
    SUBCASE("the error decreases from n = 20 to n = 80")
    {
        const auto r20 = implosion_error(ev, 0.0, 20, samples);
        const auto r80 = implosion_error(ev, 0.0, 80, samples);
        REQUIRE(r20.median_error.has_value());
        REQUIRE(r80.median_error.has_value());
        CHECK(*r80.median_error < *r20.median_error);
        CHECK(r80.epsilon == alpha_epsilon(0.0, 80));
        CHECK(r80.errors.size() == samples.size());
        CHECK(r80.evaluated + r80.excluded == static_cast<int>(samples.size()));
        CHECK(std::abs(r80.alpha_offset - ev.anchor_offset()) == 0.0);
        // Regression baseline for the default sample set.
        CHECK(*r80.median_error < 0.012);
        CHECK(*r80.median_error > 0.004);
    }
    SUBCASE("points outside the basin are all excluded")
    {
        const std::vector<ComplexPoint2> outside{{10.0, 0.0}, {0.25, 0.25}, {0.0, 5.0}};
        const auto r = implosion_error(ev, 0.0, 40, outside);
        CHECK(r.excluded == 3);
        CHECK(r.evaluated == 0);
        CHECK_FALSE(r.median_error.has_value());
        CHECK_FALSE(r.max_error.has_value());
    }
    SUBCASE("worker count does not change the statistics")
    {
        const auto a = implosion_error(ev, 0.0, 40, samples, 1);
        const auto b = implosion_error(ev, 0.0, 40, samples, 4);
        CHECK(a.median_error == b.median_error);
        CHECK(a.max_error == b.max_error);
        CHECK(a.errors == b.errors);
    }
    CHECK_THROWS_AS(implosion_error(ev, 50.0, 40, samples), std::invalid_argument);
}
