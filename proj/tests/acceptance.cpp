// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "henonlab/app/commands.hpp"
#include "henonlab/app/config.hpp"
#include "henonlab/dimension.hpp"
#include "henonlab/green.hpp"
#include "henonlab/horn.hpp"
#include "henonlab/implosion.hpp"

#include "support.hpp"

using namespace henonlab;
using henonlab::testing::median;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string &what, const std::string &detail)
{
    std::printf("criterion %2d %s  %s: %s\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using Clock = std::chrono::steady_clock;

// Evaluator with a different stopping radius and outgoing margin. Evaluating
// f(p) with it turns the Abel residuals, which hold by construction within one
// evaluator, into a test of truncation error.
FatouEvaluator independent_evaluator(const HenonMap &m)
{
    FatouOptions opt;
    opt.stop_radius = 0.005;
    opt.outgoing_margin = 45;
    return FatouEvaluator(m, opt);
}

void incoming_abel(const FatouEvaluator &ev, const FatouEvaluator &other)
{
    const auto t0 = Clock::now();
    const auto pts = testing::random_basin_points(ev, 100, 1);
    std::vector<double> res;
    int failed = 0;
    for (const auto &p : pts) {
        const auto a = ev.incoming(p);
        const auto b = ev.incoming(ev.map().forward(p));
        if (a.ok() && b.ok()) {
            res.push_back(std::abs(b.value - a.value - 1.0));
        } else {
            ++failed;
        }
    }
    const double t = seconds_since(t0);
    std::vector<double> cross;
    for (const auto &p : pts) {
        const auto a = ev.incoming(p);
        const auto b = other.incoming(ev.map().forward(p));
        cross.push_back(a.ok() && b.ok() ? std::abs(b.value - a.value - 1.0) : INFINITY);
    }
    const double med = res.empty() ? INFINITY : median(res);
    const double med_cross = median(cross);
    report(1, failed == 0 && med < 1e-6 && med_cross < 1e-6 && t < 10.0, "incoming Abel residual",
           fmt("median %.3e over %zu points (need < 1e-6), %d failed, %.2f s (need < 10 s); "
               "against an independent evaluator: median %.3e, max %.3e",
               med, res.size(), failed, t, med_cross, *std::max_element(cross.begin(), cross.end())));
}

void outgoing_abel(const FatouEvaluator &ev)
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    int failed = 0;
    for (int i = 0; i < 13; ++i) {
        for (int j = 0; j < 9; ++j) {
            const cplx w(-3.0 + 0.5 * i, -2.0 + 0.5 * j);
            const auto a = ev.outgoing(w);
            const auto b = ev.outgoing(w + 1.0);
            if (!a.ok() || !b.ok()) {
                ++failed;
                continue;
            }
            worst = std::max(worst, norm(ev.map().forward(a.sigma.point) - b.sigma.point));
        }
    }
    const double t = seconds_since(t0);
    report(2, failed == 0 && worst < 1e-6 && t < 30.0, "outgoing Abel residual",
           fmt("max %.3e on the 13x9 grid (need < 1e-6), %d failed, %.2f s (need < 30 s)", worst, failed, t));
}

void horn_commutation(const HornMap &horn, const HornMap &other)
{
    double worst = 0.0;
    double worst_cross = 0.0;
    int failed = 0;
    for (int i = 0; i < 50; ++i) {
        const cplx z(-2.0 + 4.0 * i / 49.0, 3.0);
        const auto a = horn.evaluate(z);
        const auto b = horn.evaluate(z + 1.0);
        const auto c = other.evaluate(z + 1.0);
        if (!a.ok() || !b.ok() || !c.ok()) {
            ++failed;
            continue;
        }
        worst = std::max(worst, std::abs(b.value - a.value - 1.0));
        worst_cross = std::max(worst_cross, std::abs(c.value - a.value - 1.0));
    }
    report(3, failed == 0 && worst < 1e-6 && worst_cross < 1e-6, "horn commutation",
           fmt("max %.3e over 50 points with Im z = 3 (need < 1e-6), %d undefined; against an independent "
               "evaluator: max %.3e",
               worst, failed, worst_cross));
}

struct CircleVariation {
    double variation = 0.0;
    int undefined = 0;
};

// Diameter of the sampled image of |zeta| = radius under the cylinder horn map.
CircleVariation circle_variation(const HornMap &horn, double radius)
{
    std::vector<cplx> img;
    CircleVariation out;
    for (int k = 0; k < 64; ++k) {
        const auto p = CylinderPoint::from_zeta(std::polar(radius, 2.0 * std::numbers::pi * k / 64.0));
        const auto r = horn_cyl(horn, p);
        if (r.ok() && r.point.kind == CylinderPoint::Kind::finite) {
            img.push_back(r.point.zeta);
        } else {
            ++out.undefined;
        }
    }
    for (const cplx a : img) {
        for (const cplx b : img) {
            out.variation = std::max(out.variation, std::abs(a - b));
        }
    }
    if (out.undefined > 0) {
        out.variation = INFINITY;
    }
    return out;
}

void horn_ends(const HornMap &horn)
{
    std::string detail;
    bool pass = true;
    double prev = INFINITY;
    for (int k = 2; k <= 5; ++k) {
        const auto v = circle_variation(horn, std::pow(10.0, -k));
        detail += fmt("k=%d: %.3e (%d/64 undefined); ", k, v.variation, v.undefined);
        pass = pass && std::isfinite(v.variation) && v.variation < prev;
        prev = v.variation;
    }
    detail += "need a strictly decreasing finite sequence";
    report(4, pass, "horn map continuity at the end 0", detail);

    // Supplementary, not a criterion: the same check on circles inside the domain.
    std::string deep;
    prev = INFINITY;
    bool decreasing = true;
    for (int k = 8; k <= 11; ++k) {
        const auto v = circle_variation(horn, std::pow(10.0, -k));
        deep += fmt("k=%d: %.3e (%d/64 undefined); ", k, v.variation, v.undefined);
        decreasing = decreasing && std::isfinite(v.variation) && v.variation < prev;
        prev = v.variation;
    }
    std::printf("   diagnostic    %s at |zeta| = 10^-k, k = 8..11: %s\n", decreasing ? "decreasing" : "not decreasing",
                deep.c_str());
}

void green_equation(const HenonMap &m)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0 / std::sqrt(2.0), 10.0 / std::sqrt(2.0));
    double plus = 0.0;
    double minus = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double zr = u(rng);
        const double zi = u(rng);
        const double wr = u(rng);
        const double wi = u(rng);
        ComplexPoint2 p{cplx(zr, zi), cplx(wr, wi)};
        // Keep the Euclidean norm of p at most 10.
        const double s = norm(p) > 10.0 ? 10.0 / norm(p) : 1.0;
        p = cplx(s) * p;
        plus = std::max(plus, std::abs(green(m, m.forward(p), Direction::forward).value
                                       - 2.0 * green(m, p, Direction::forward).value));
        minus = std::max(minus, std::abs(green(m, m.inverse(p), Direction::backward).value
                                         - 2.0 * green(m, p, Direction::backward).value));
    }
    report(5, plus < 1e-8 && minus < 1e-8, "Green functional equations",
           fmt("max |G+(f p) - 2 G+(p)| = %.3e, max |G-(f^-1 p) - 2 G-(p)| = %.3e over 1000 points (need < 1e-8)",
               plus, minus));
}

void implosion_trend(const FatouEvaluator &ev)
{
    const auto t0 = Clock::now();
    const auto samples = basin_samples(ev, 20, 0);
    std::vector<double> med;
    std::string detail;
    bool ok = samples.size() == 20;
    for (const int n : {20, 40, 80}) {
        const auto rep = implosion_error(ev, 0.0, n, samples);
        ok = ok && rep.median_error.has_value();
        med.push_back(rep.median_error.value_or(INFINITY));
        detail += fmt("n=%d: median %.3e, max %.3e, %d excluded; ", n, med.back(), rep.max_error.value_or(NAN),
                      rep.excluded);
    }
    const double t = seconds_since(t0);
    const bool trend = med[1] <= 1.1 * med[0] && med[2] <= 1.1 * med[1];
    report(6, ok && trend && t < 120.0, "implosion trend",
           detail + fmt("%.1f s (need non-increasing medians with 10%% slack, < 120 s)", t));
}

void bowen_oracles()
{
    const double s3 = bowen_dimension(uniform_system(3, 1.0 / 9.0)).dimension;
    const double s2 = bowen_dimension(uniform_system(2, 1.0 / 3.0)).dimension;
    const double s1 = bowen_dimension(uniform_system(1, 0.5)).dimension;
    const bool pass = std::abs(s3 - 0.5) < 1e-10 && std::abs(s2 - 0.630930) < 1e-6 && s1 == 0.0;
    report(7, pass, "Bowen oracles",
           fmt("N=3 r=1/9: %.13f (0.5 +- 1e-10); N=2 r=1/3: %.8f (0.630930 +- 1e-6); N=1: %g (exactly 0)", s3, s2, s1));
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

void box_oracles()
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> square(2'000'000);
    for (double &x : square) {
        x = u(rng);
    }
    const double d_square = box_dimension(make_cloud(2, std::move(square)), 6).slope;
    auto cantor = cantor_product(8);
    const double d_cantor = box_dimension(make_cloud(2, cantor), 6).slope;
    const double angle = std::numbers::pi / 6.0;
    for (std::size_t i = 0; i < cantor.size(); i += 2) {
        const double x = cantor[i];
        const double y = cantor[i + 1];
        cantor[i] = std::cos(angle) * x - std::sin(angle) * y;
        cantor[i + 1] = std::sin(angle) * x + std::cos(angle) * y;
    }
    const double d_rotated = box_dimension(make_cloud(2, std::move(cantor)), 6).slope;
    const double drift = std::abs(d_rotated - d_cantor);
    const bool pass = std::abs(d_square - 2.0) <= 0.1 && std::abs(d_cantor - std::log(4.0) / std::log(3.0)) <= 0.05
                      && drift < 0.02;
    report(8, pass, "box-counting oracles",
           fmt("square %.4f (2 +- 0.1); Cantor product %.4f (1.2619 +- 0.05); drift under 30 deg rotation %.4f "
               "(need < 0.02)",
               d_square, d_cantor, drift));
}

void cycle_finder(const HornMap &horn)
{
    const auto model = cylinder_square_model();
    const auto p1 = repelling_cycles(model, 1, Window{0.0, 1.0, -0.5, 0.5}, 64);
    const auto p2 = repelling_cycles(model, 2, Window{0.0, 1.0, -0.5, 0.5}, 64);
    bool fixed_ok = false;
    for (const auto &p : p1) {
        fixed_ok = fixed_ok || (std::abs(p.zeta - 1.0) < 1e-9 && std::abs(p.multiplier - 2.0) < 1e-9);
    }
    int cube_roots = 0;
    for (const auto &p : p2) {
        const bool primitive = std::abs(p.zeta * p.zeta * p.zeta - 1.0) < 1e-9 && std::abs(p.zeta - 1.0) > 0.5;
        cube_roots += primitive && std::abs(p.multiplier - 4.0) < 1e-9 ? 1 : 0;
    }
    const auto t0 = Clock::now();
    const auto found = repelling_cycles(horn, 1, Window{0.0, 1.0, 0.05, 4.95}, 256);
    const double t = seconds_since(t0);
    int witnesses = 0;
    double best = INFINITY;
    for (const auto &p : found) {
        if (p.residual < 1e-9 && std::abs(p.multiplier) > 1.0 && p.lift.imag() > 0.0 && p.lift.imag() < 5.0) {
            ++witnesses;
            best = std::min(best, p.residual);
        }
    }
    report(9, fixed_ok && cube_roots == 2 && witnesses > 0, "cycle finder",
           fmt("model: fixed point 1 with multiplier 2 %s, %d/2 primitive cube roots with multiplier 4; horn map: "
               "%d repelling fixed points in 0 < Im z < 5 (smallest residual %.2e, %.2f s)",
               fixed_ok ? "found" : "missing", cube_roots, witnesses, best, t));
}

void island_audit(const HornMap &horn)
{
    auto audit = [](const LiftedMap &f, const std::vector<Island> &islands, int &bad) {
        for (const auto &isl : islands) {
            const auto deg = island_degree(f, isl.boundary, isl.target_center);
            if (isl.degree != 1 || !deg || *deg != 1 || !audit_injectivity(f, isl, 200, 3).passed()) {
                ++bad;
            }
        }
    };
    const auto sq = square_model();
    const auto model = find_islands(sq, 1.0, 0.1, Window{0.5, 1.5, -0.5, 0.5});
    const auto found = find_islands(horn, cplx(-17.5, 3.0), 0.2, Window{0.0, 1.0, 2.2, 2.7});
    int bad = 0;
    audit(sq, model, bad);
    audit(horn, found, bad);
    report(10, bad == 0 && !model.empty() && !found.empty(), "island audit",
           fmt("%zu model islands, %zu horn-map islands, %d failing degree or 200-pair injectivity audit", model.size(),
               found.size(), bad));
}

void shooting()
{
    const auto r = misiurewicz_shoot(quadratic_family(), -2.1, 0.0, 1, 2.0);
    const double err = std::abs(r.parameter - cplx(-2.0));
    report(11, r.converged && err < 1e-8, "shooting oracle",
           fmt("c = %.12f%+.3ei after %zu steps, |c + 2| = %.2e (need < 1e-8), residual %.2e", r.parameter.real(),
               r.parameter.imag(), r.trace.size(), err, r.residual));
}

void dimension_pipeline()
{
    using namespace henonlab::app;
    RunConfig box;
    box.epsilon = std::numbers::pi / 80.0;
    RunConfig islands;
    islands.source = "islands";
    const auto t0 = Clock::now();
    auto run = [](const std::string &cmd, RunConfig c, unsigned workers) {
        c.workers = workers;
        return run_command(cmd, resolve(cmd, c)).result;
    };
    const auto b1 = run("boxdim", box, 1);
    const auto b2 = run("boxdim", box, 2);
    const auto i1 = run("bowen", islands, 1);
    const auto i2 = run("bowen", islands, 2);
    const double t = seconds_since(t0);
    const bool deterministic = b1.dump() == b2.dump() && i1.dump() == i2.dump();
    const bool complete = b1.contains("baseline") && b1.contains("perturbed") && b1["baseline"]["dimension"].is_number()
                          && b1["perturbed"]["dimension"].is_number()
                          && b1["baseline"]["standard_error"].is_number() && i1["hyperbolic_lower_bound"].is_number();
    std::string detail =
        complete ? fmt("J+ slice box dimension %.4f +- %.4f (baseline), %.4f +- %.4f (eps = pi/80); island system with "
                       "%d branches, log N / log c = %.4f, Bowen %.4f; ",
                       b1["baseline"]["dimension"].get<double>(), b1["baseline"]["standard_error"].get<double>(),
                       b1["perturbed"]["dimension"].get<double>(), b1["perturbed"]["standard_error"].get<double>(),
                       i1["branches"].get<int>(), i1["hyperbolic_lower_bound"].get<double>(),
                       i1["dimension"].get<double>())
                 : std::string("reports incomplete; ");
    detail += fmt("identical across worker counts: %s, %.1f s", deterministic ? "yes" : "no", t);
    report(12, complete && deterministic, "dimension pipeline reports", detail);
}

} // namespace

int main()
{
    const HenonMap m = testing::semi_parabolic_map();
    const FatouEvaluator ev(m);
    const HornMap horn(ev);
    const FatouEvaluator other = independent_evaluator(m);

    incoming_abel(ev, other);
    outgoing_abel(ev);
    horn_commutation(horn, HornMap(other));
    horn_ends(horn);
    green_equation(m);
    implosion_trend(ev);
    bowen_oracles();
    box_oracles();
    cycle_finder(horn);
    island_audit(horn);
    shooting();
    dimension_pipeline();

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
