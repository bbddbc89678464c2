#include "henonlab/app/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "henonlab/app/io.hpp"
#include "henonlab/dimension.hpp"
#include "henonlab/implosion.hpp"
#include "henonlab/parallel.hpp"

namespace henonlab::app {

using nlohmann::json;

const char *version() { return HENONLAB_VERSION; }

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json pjson(const ComplexPoint2 &p) { return json::array({p.z.real(), p.z.imag(), p.w.real(), p.w.imag()}); }

json opt_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

bool ends_with(const std::string &s, const std::string &suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Fatou evaluator of the configured map; the map must be semi-parabolic.
FatouEvaluator evaluator(const RunConfig &c)
{
    const HenonMap m = make_map(c);
    try {
        return FatouEvaluator(m);
    } catch (const std::domain_error &e) {
        throw ConfigError(std::string("the map has no semi-parabolic fixed point: ") + e.what());
    }
}

CommandOutcome cmd_render(const RunConfig &c)
{
    check_output_path(c.out);
    const bool csv = ends_with(c.out, ".csv");
    const bool png = ends_with(c.out, ".png");
    if (!csv && !png) {
        throw ConfigError("render output must end in .csv or .png");
    }
    const HenonMap m = make_map(c);
    const auto [nx, ny] = *c.resolution;
    const Direction dir = c.field == "green_plus" || c.field == "escape_plus" ? Direction::forward
                                                                              : Direction::backward;
    const bool green_field = c.field.rfind("green", 0) == 0;
    const FieldGrid grid = green_field
                               ? julia_slice(m, *c.slice, *c.window, nx, ny, dir, c.max_iter, c.workers)
                               : classification_slice(m, *c.slice, *c.window, nx, ny, dir, c.max_iter, c.workers);
    CommandOutcome out;
    out.result["file"] = c.out;
    out.result["format"] = csv ? "csv" : "png16";
    out.result["nx"] = nx;
    out.result["ny"] = ny;
    out.result["rows"] = nx * ny;
    if (csv) {
        write_text(c.out, grid_csv(grid));
    } else {
        const auto s = write_png16(c.out, grid);
        out.result["value_range"] = json::array({s.lo, s.hi});
        out.result["encoding"] = "level = 1 + round((value - lo) / (hi - lo) * 65534), 0 = not finite, top row = y_max";
    }
    std::size_t finite = 0;
    for (const double v : grid.values) {
        finite += std::isfinite(v) ? 1 : 0;
    }
    out.result["finite_values"] = finite;
    return out;
}

CommandOutcome cmd_horn(const RunConfig &c)
{
    const HornMap horn(evaluator(c));
    const auto [nx, ny] = *c.resolution;
    const Window w = *c.window;
    const std::size_t count = static_cast<std::size_t>(nx) * ny;
    std::vector<HornResult> values(count);
    std::vector<double> audit(count, std::numeric_limits<double>::quiet_NaN());
    parallel_for(count, c.workers, [&](std::size_t idx) {
        const cplx z = w.node(static_cast<int>(idx % nx), static_cast<int>(idx / nx), nx, ny);
        values[idx] = horn.evaluate(z);
        if (c.commutation_audit && values[idx].ok()) {
            const auto shifted = horn.evaluate(z + 1.0);
            if (shifted.ok()) {
                audit[idx] = std::abs(shifted.value - values[idx].value - 1.0);
            }
        }
    });
    CommandOutcome out;
    json vals = json::array();
    json mask = json::array();
    int defined = 0;
    int failed = 0;
    for (const auto &v : values) {
        if (v.ok()) {
            vals.push_back(cjson(v.value));
            mask.push_back(1);
            ++defined;
        } else {
            vals.push_back(nullptr);
            mask.push_back(v.status == FatouStatus::out_of_domain ? 0 : -1);
            failed += v.status == FatouStatus::not_converged ? 1 : 0;
        }
    }
    out.result["nx"] = nx;
    out.result["ny"] = ny;
    out.result["layout"] = "row-major, index j * nx + i, node (i, j) of the window";
    out.result["mask_codes"] = {{"1", "in domain"}, {"0", "out of domain"}, {"-1", "not converged"}};
    out.result["values"] = std::move(vals);
    out.result["mask"] = std::move(mask);
    out.result["defined"] = defined;
    out.result["out_of_domain"] = static_cast<int>(count) - defined - failed;
    out.result["not_converged"] = failed;
    if (c.commutation_audit) {
        double mx = 0.0;
        int audited = 0;
        for (const double a : audit) {
            if (std::isfinite(a)) {
                mx = std::max(mx, a);
                ++audited;
            }
        }
        out.result["commutation_audit"] = {{"points", audited}, {"max_error", audited > 0 ? json(mx) : json(nullptr)}};
    }
    return out;
}

json island_json(const LiftedMap &f, const Island &isl, std::uint64_t seed)
{
    json b = json::array();
    for (const cplx p : isl.boundary) {
        b.push_back(cjson(p));
    }
    const auto audit = audit_injectivity(f, isl, 200, seed);
    return {{"boundary", b},
            {"target_center", cjson(isl.target_center)},
            {"target_radius", isl.target_radius},
            {"degree", isl.degree},
            {"boundary_error", isl.boundary_error},
            {"area", polygon_area(isl.boundary)},
            {"injectivity_audit", {{"pairs", audit.pairs}, {"collisions", audit.collisions}, {"passed", audit.passed()}}}};
}

CommandOutcome cmd_islands(const RunConfig &c)
{
    if (!c.boundary_csv.empty()) {
        check_output_path(c.boundary_csv);
    }
    IslandOptions opt;
    opt.resolution = (*c.resolution)[0];
    opt.workers = c.workers;
    std::vector<Island> islands;
    json list = json::array();
    auto run = [&](const LiftedMap &f) {
        islands = find_islands(f, *c.target, *c.radius, *c.window, opt);
        for (const auto &isl : islands) {
            list.push_back(island_json(f, isl, c.seed));
        }
    };
    if (c.model == "square") {
        run(square_model());
    } else {
        run(HornMap(evaluator(c)));
    }
    if (!c.boundary_csv.empty()) {
        std::string csv = "island,node,x,y\n";
        for (std::size_t k = 0; k < islands.size(); ++k) {
            for (std::size_t i = 0; i < islands[k].boundary.size(); ++i) {
                const cplx p = islands[k].boundary[i];
                csv += std::to_string(k) + ',' + std::to_string(i) + ',' + format_double(p.real()) + ','
                       + format_double(p.imag()) + '\n';
            }
        }
        write_text(c.boundary_csv, csv);
    }
    CommandOutcome out;
    out.result["count"] = islands.size();
    out.result["islands"] = std::move(list);
    return out;
}

CommandOutcome cmd_cycles(const RunConfig &c)
{
    CycleOptions opt;
    opt.workers = c.workers;
    std::vector<PeriodicPoint> points;
    if (c.model == "square") {
        points = repelling_cycles(cylinder_square_model(), c.period, *c.window, c.seeds, opt);
    } else {
        points = repelling_cycles(HornMap(evaluator(c)), c.period, *c.window, c.seeds, opt);
    }
    json list = json::array();
    for (const auto &p : points) {
        list.push_back({{"zeta", cjson(p.zeta)},
                        {"lift", cjson(p.lift)},
                        {"period", p.period},
                        {"multiplier", cjson(p.multiplier)},
                        {"abs_multiplier", std::abs(p.multiplier)},
                        {"residual", p.residual}});
    }
    CommandOutcome out;
    out.result["count"] = points.size();
    out.result["cycles"] = std::move(list);
    return out;
}

CommandOutcome cmd_implosion(const RunConfig &c)
{
    const FatouEvaluator ev = evaluator(c);
    const auto samples = basin_samples(ev, c.samples, c.seed);
    const auto rep = implosion_error(ev, c.alpha, *c.n, samples, c.workers);
    CommandOutcome out;
    out.result = {{"alpha", rep.alpha},
                  {"n", rep.n},
                  {"epsilon", rep.epsilon},
                  {"max_error", opt_json(rep.max_error)},
                  {"median_error", opt_json(rep.median_error)},
                  {"excluded", rep.excluded},
                  {"evaluated", rep.evaluated},
                  {"samples", samples.size()},
                  {"alpha_offset", cjson(rep.alpha_offset)},
                  {"alpha_offset_note",
                   "f_eps^n is compared with the Lavaurs map of phase alpha + alpha_offset in the anchored "
                   "normalization of the incoming coordinate"}};
    json errs = json::array();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        errs.push_back({{"point", pjson(samples[i])}, {"error", opt_json(rep.errors[i])}});
    }
    out.result["per_sample"] = std::move(errs);
    return out;
}

json ifs_json(const IFSSystem &s)
{
    json out;
    out["branches"] = s.branches.size();
    if (s.branches.empty()) {
        out["dimension"] = nullptr;
        out["bracket"] = nullptr;
        out["hyperbolic_lower_bound"] = nullptr;
        return out;
    }
    const auto b = bowen_dimension(s);
    out["dimension"] = b.dimension;
    out["bracket"] = json::array({b.lower, b.upper});
    out["hyperbolic_lower_bound"] = hyperbolic_lower_bound(s);
    json br = json::array();
    for (const auto &branch : s.branches) {
        const auto [lo, hi] = std::minmax_element(branch.derivative_samples.begin(), branch.derivative_samples.end());
        json item{{"return_time", branch.return_time},
                  {"derivative_min", *lo},
                  {"derivative_max", *hi},
                  {"samples", branch.derivative_samples.size()}};
        if (!branch.island.boundary.empty()) {
            item["target_center"] = cjson(branch.island.target_center);
            item["area"] = polygon_area(branch.island.boundary);
        }
        br.push_back(item);
    }
    out["branch_summary"] = std::move(br);
    return out;
}

CommandOutcome cmd_bowen(const RunConfig &c)
{
    CommandOutcome out;
    if (c.source == "uniform") {
        out.result = ifs_json(uniform_system(c.branches, c.ratio));
        return out;
    }
    const HornMap horn(evaluator(c));
    IslandSystemOptions opt;
    opt.islands.resolution = (*c.resolution)[0];
    opt.islands.workers = c.workers;
    opt.seed = c.seed;
    out.result = ifs_json(island_system(horn, *c.target, *c.radius, opt));
    return out;
}

PointCloud read_cloud(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open input '" + path + "'");
    }
    std::vector<double> coords;
    int dim = 0;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                numeric = numeric && used == cell.size();
            } catch (const std::exception &) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw ConfigError("non-numeric row in '" + path + "': " + line);
        }
        first = false;
        if (dim == 0) {
            dim = static_cast<int>(row.size());
        }
        if (static_cast<int>(row.size()) != dim) {
            throw ConfigError("rows of '" + path + "' have different lengths");
        }
        coords.insert(coords.end(), row.begin(), row.end());
    }
    try {
        return make_cloud(dim, std::move(coords));
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("input '") + path + "': " + e.what());
    }
}

json box_json(const BoxDimension &b, std::size_t points)
{
    json counts = json::array();
    for (std::size_t i = 0; i < b.scales.size(); ++i) {
        counts.push_back({{"k", b.scales[i]}, {"boxes", b.counts[i]}});
    }
    return {{"dimension", b.slope}, {"standard_error", b.standard_error}, {"points", points}, {"counts", counts}};
}

CommandOutcome cmd_boxdim(const RunConfig &c)
{
    CommandOutcome out;
    if (c.source == "file") {
        const auto cloud = read_cloud(c.input);
        out.result = box_json(box_dimension(cloud, *c.scale_count, c.workers), cloud.size());
        return out;
    }
    const HenonMap m = make_map(c);
    const auto [nx, ny] = *c.resolution;
    auto slice_dimension = [&](const HenonMap &map) {
        const auto grid = julia_slice(map, *c.slice, *c.window, nx, ny, Direction::forward, c.max_iter, c.workers);
        const auto cloud = level_set_cloud(grid);
        return box_json(box_dimension(cloud, *c.scale_count, c.workers), cloud.size());
    };
    out.result["slice_note"] = "box-counting of the J+ level set on a complex line; a trend proxy only";
    out.result["baseline"] = slice_dimension(m);
    if (c.epsilon > 0.0) {
        out.result["perturbed"] = slice_dimension(perturbed_family(m, c.epsilon));
        out.result["perturbed"]["epsilon"] = c.epsilon;
    }
    return out;
}

CommandOutcome cmd_shoot(const RunConfig &c)
{
    ShootOptions opt;
    opt.period = c.period;
    ShootResult r;
    if (c.family == "quadratic") {
        r = misiurewicz_shoot(quadratic_family(), *c.lambda0, *c.critical_point, *c.n, *c.target_guess, opt);
    } else {
        const HornMap horn(evaluator(c));
        r = misiurewicz_shoot(horn_family(horn), *c.lambda0, *c.critical_point, *c.n, *c.target_guess, opt);
    }
    CommandOutcome out;
    json trace = json::array();
    for (const cplx l : r.trace) {
        trace.push_back(cjson(l));
    }
    out.result = {{"parameter", cjson(r.parameter)},
                  {"target", cjson(r.target)},
                  {"residual", r.residual},
                  {"converged", r.converged},
                  {"trace", trace},
                  {"message", r.message}};
    out.exit_code = r.converged ? 0 : 3;
    return out;
}

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

CommandOutcome run_command(const std::string &command, const RunConfig &c)
{
    if (command == "render") {
        return cmd_render(c);
    }
    if (command == "horn") {
        return cmd_horn(c);
    }
    if (command == "islands") {
        return cmd_islands(c);
    }
    if (command == "cycles") {
        return cmd_cycles(c);
    }
    if (command == "implosion") {
        return cmd_implosion(c);
    }
    if (command == "bowen") {
        return cmd_bowen(c);
    }
    if (command == "boxdim") {
        return cmd_boxdim(c);
    }
    if (command == "shoot") {
        return cmd_shoot(c);
    }
    throw ConfigError("unknown command '" + command + "'");
}

json make_report(const std::string &command, const RunConfig &config, const json &result,
                 const std::string &started_at, double seconds)
{
    return {{"tool", "henonlab"},
            {"version", version()},
            {"command", command},
            {"config", to_json(config)},
            {"started_at", started_at},
            {"wall_clock_seconds", seconds},
            {"result", result}};
}

int execute(const std::string &command, const RunConfig &config)
{
    try {
        const RunConfig resolved = resolve(command, config);
        if (command != "render" && !resolved.out.empty()) {
            check_output_path(resolved.out);
        }
        const std::string started = utc_now();
        const auto t0 = std::chrono::steady_clock::now();
        const CommandOutcome outcome = run_command(command, resolved);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const json report = make_report(command, resolved, outcome.result, started, seconds);
        write_json(command == "render" ? resolved.out + ".json" : resolved.out, report);
        if (outcome.exit_code != 0) {
            std::cerr << "henonlab " << command << ": numerical failure\n";
        }
        return outcome.exit_code;
    } catch (const ConfigError &e) {
        std::cerr << "henonlab: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "henonlab: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "henonlab: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "henonlab: numerical failure: " << e.what() << '\n';
        return 3;
    }
}

} // namespace henonlab::app
