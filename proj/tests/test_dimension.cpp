#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "henonlab/dimension.hpp"

#include "support.hpp"

using namespace henonlab;

namespace {

IFSSystem system_from(const std::vector<std::vector<double>> &samples)
{
    IFSSystem s;
    for (const auto &d : samples) {
        s.branches.push_back({Island{}, 1, d});
    }
    return s;
}

std::vector<double> cantor_product(int depth)
{
    std::vector<double> line{0.0};
    double scale = 1.0;
    for (int d = 0; d < depth; ++d) {
        scale /= 3.0;
        std::vector<double> next;
        for (const double x : line) {
            next.push_back(x);
            next.push_back(x + 2.0 * scale);
        }
        line = std::move(next);
    }
    std::vector<double> coords;
    for (const double x : line) {
        for (const double y : line) {
            coords.push_back(x + 0.5 * scale);
            coords.push_back(y + 0.5 * scale);
        }
    }
    return coords;
}

std::vector<double> rotated(std::vector<double> c, double angle)
{
    for (std::size_t i = 0; i < c.size(); i += 2) {
        const double x = c[i];
        const double y = c[i + 1];
        c[i] = std::cos(angle) * x - std::sin(angle) * y;
        c[i + 1] = std::sin(angle) * x + std::cos(angle) * y;
    }
    return c;
}

} // namespace

TEST_CASE("Bowen dimension oracles")
{
    CHECK(std::abs(bowen_dimension(uniform_system(3, 1.0 / 9.0)).dimension - 0.5) < 1e-10);
    CHECK(std::abs(bowen_dimension(uniform_system(2, 1.0 / 3.0)).dimension - std::log(2.0) / std::log(3.0)) < 1e-6);
    CHECK(bowen_dimension(uniform_system(1, 0.3)).dimension == 0.0);
    CHECK(moran_root({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK_THROWS_AS(moran_root({0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(bowen_dimension(system_from({{2.0, 0.9}})), std::invalid_argument);
    CHECK_THROWS_AS(validate(IFSSystem{}), std::invalid_argument);
}

TEST_CASE("hyperbolic lower bound")
{
    CHECK(hyperbolic_lower_bound(system_from({{4.0}, {4.0}})) == doctest::Approx(0.5).epsilon(1e-15));
    const auto uniform = uniform_system(5, 0.2);
    CHECK(hyperbolic_lower_bound(uniform) == doctest::Approx(bowen_dimension(uniform).dimension).epsilon(1e-10));
}

TEST_CASE("brackets on random systems")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(1.2, 10.0);
    std::uniform_int_distribution<int> count(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<double>> samples(count(rng));
        for (auto &s : samples) {
            for (int k = 0; k < 5; ++k) {
                s.push_back(u(rng));
            }
        }
        const auto sys = system_from(samples);
        const auto b = bowen_dimension(sys);
        CHECK(b.lower <= b.dimension);
        CHECK(b.dimension <= b.upper);
        CHECK(hyperbolic_lower_bound(sys) <= b.upper + 1e-12);
    }
    // The bracket closes as the sample spread vanishes.
    double prev = INFINITY;
    for (const double spread : {1.0, 0.1, 0.01, 0.0}) {
        const auto b = bowen_dimension(system_from({{3.0, 3.0 + spread}, {5.0, 5.0 + spread}}));
        CHECK(b.upper - b.lower < prev);
        prev = b.upper - b.lower;
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("box dimension oracles")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> square(2'000'000);
    for (double &x : square) {
        x = u(rng);
    }
    CHECK(box_dimension(make_cloud(2, std::move(square)), 6).slope == doctest::Approx(2.0).epsilon(0.05));

    const auto cantor = cantor_product(8);
    const double target = std::log(4.0) / std::log(3.0);
    const auto straight = box_dimension(make_cloud(2, cantor), 6);
    CHECK(std::abs(straight.slope - target) < 0.05);
    CHECK(straight.standard_error < 0.05);
    CHECK(straight.scales.front() == 3);
    CHECK(straight.scales.back() == 9);
    for (const double angle : {std::numbers::pi / 6.0, std::numbers::pi / 4.0, 1.0}) {
        CHECK(std::abs(box_dimension(make_cloud(2, rotated(cantor, angle)), 6).slope - straight.slope) < 0.02);
    }
    CHECK(box_dimension(make_cloud(2, std::vector<double>(400, 0.25)), 4).slope == 0.0);
}

TEST_CASE("box dimension in four dimensions and across workers")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> plane;
    for (int i = 0; i < 200000; ++i) {
        // a flat 2-plane inside R^4
        const double s = u(rng);
        const double t = u(rng);
        plane.insert(plane.end(), {s, t, 0.5 * s - t, 0.3});
    }
    const auto cloud = make_cloud(4, plane);
    const auto a = box_dimension(cloud, 4, 1);
    const auto b = box_dimension(cloud, 4, 3);
    CHECK(a.slope == b.slope);
    CHECK(a.counts == b.counts);
    CHECK(a.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("box dimension input checks")
{
    CHECK_THROWS_AS(box_dimension(make_cloud(2, std::vector<double>(100, 0.0)), 6), std::invalid_argument);
    CHECK_THROWS_AS(box_dimension(make_cloud(2, std::vector<double>(400, 0.0)), 3), std::invalid_argument);
    CHECK_THROWS_AS(make_cloud(3, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_cloud(2, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_cloud(2, {1.0, NAN}), std::invalid_argument);
    const auto c = make_cloud(2, {0.0, 1.0, 2.0, -1.0});
    CHECK(c.lower == std::vector<double>{0.0, -1.0});
    CHECK(c.upper == std::vector<double>{2.0, 1.0});
}

TEST_CASE("level-set clouds")
{
    const HenonMap m(0.0625, 0.5);
    const auto grid = julia_slice(m, Slice{}, Window{-2, 2, -2, 2}, 128, 128, Direction::forward);
    const auto cloud = level_set_cloud(grid);
    CHECK(cloud.size() > 100);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(Window{-2, 2, -2, 2}.contains(cplx(cloud.coords[2 * i], cloud.coords[2 * i + 1])));
    }
}

TEST_CASE("Misiurewicz shooting")
{
    const auto family = quadratic_family();
    SUBCASE("converges to c = -2")
    {
        const auto r = misiurewicz_shoot(family, -2.1, 0.0, 1, 2.0);
        REQUIRE(r.converged);
        CHECK(std::abs(r.parameter + 2.0) < 1e-8);
        CHECK(std::abs(r.target - 2.0) < 1e-6);
        CHECK(r.residual < 1e-10);
        CHECK(r.trace.front() == cplx(-2.1));
        SUBCASE("re-running from the result returns it")
        {
            const auto again = misiurewicz_shoot(family, r.parameter, 0.0, 1, r.target);
            CHECK(again.converged);
            CHECK(again.parameter == r.parameter);
        }
        SUBCASE("tighter settings agree")
        {
            ShootOptions opt;
            opt.tolerance = 1e-13;
            opt.lambda_step = 1e-7;
            opt.z_step = 1e-7;
            const auto fine = misiurewicz_shoot(family, -2.1, 0.0, 1, 2.0, opt);
            CHECK(std::abs(fine.parameter - r.parameter) < 1e-8);
        }
    }
    SUBCASE("returns the start when the relation already holds")
    {
        const auto r = misiurewicz_shoot(family, -2.0, 0.0, 1, 2.0);
        CHECK(r.converged);
        CHECK(r.parameter == cplx(-2.0));
    }
    SUBCASE("a hopeless start reports failure")
    {
        ShootOptions opt;
        opt.max_iter = 3;
        const auto r = misiurewicz_shoot(family, cplx(5.0, 5.0), 0.0, 3, 2.0, opt);
        CHECK_FALSE(r.converged);
        CHECK_FALSE(r.message.empty());
    }
}

TEST_CASE("island systems of the horn map")
{
    const HornMap horn{FatouEvaluator(testing::semi_parabolic_map())};
    IslandSystemOptions opt;
    opt.islands.resolution = 512;
    const auto sys = island_system(horn, cplx(0.4, 2.5), 0.1, opt);
    REQUIRE_FALSE(sys.branches.empty());
    validate(sys);
    for (const auto &b : sys.branches) {
        CHECK(b.island.degree == 1);
        for (const cplx p : b.island.boundary) {
            CHECK(std::abs(p - cplx(0.4, 2.5)) < 0.1);
        }
        for (const double d : b.derivative_samples) {
            CHECK(d > 1.0);
        }
    }
    const auto bowen = bowen_dimension(sys);
    CHECK(bowen.lower <= bowen.dimension);
    CHECK(hyperbolic_lower_bound(sys) <= bowen.upper);
}
