#include "henonlab/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace henonlab::app {

using nlohmann::json;

const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names{"render", "horn", "islands", "cycles",
                                                "implosion", "bowen", "boxdim", "shoot"};
    return names;
}

namespace {

const std::set<std::string> known_keys{
    "map_a",   "map_c",  "window",      "resolution",  "alpha",        "n",
    "period",  "seeds",  "out",         "workers",     "seed",         "field",
    "slice",   "max_iter", "commutation_audit", "model", "target",     "radius",
    "boundary_csv", "samples", "source", "branches",   "ratio",        "epsilon",
    "scale_count", "input", "family",   "lambda0",     "critical_point", "target_guess"};

[[noreturn]] void fail(const std::string &key, const std::string &what)
{
    throw ConfigError("config key '" + key + "': " + what);
}

double get_number(const json &v, const std::string &key)
{
    if (!v.is_number()) {
        fail(key, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(key, "must be finite");
    }
    return x;
}

int get_int(const json &v, const std::string &key)
{
    if (!v.is_number_integer()) {
        fail(key, "expected an integer");
    }
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        fail(key, "out of range");
    }
    return static_cast<int>(x);
}

cplx get_complex(const json &v, const std::string &key)
{
    if (v.is_number()) {
        return {get_number(v, key), 0.0};
    }
    if (!v.is_array() || v.size() != 2) {
        fail(key, "expected a number or [re, im]");
    }
    return {get_number(v[0], key), get_number(v[1], key)};
}

ComplexPoint2 get_point(const json &v, const std::string &key)
{
    if (!v.is_array() || v.size() != 4) {
        fail(key, "expected [z_re, z_im, w_re, w_im]");
    }
    return {{get_number(v[0], key), get_number(v[1], key)}, {get_number(v[2], key), get_number(v[3], key)}};
}

std::string get_string(const json &v, const std::string &key)
{
    if (!v.is_string()) {
        fail(key, "expected a string");
    }
    return v.get<std::string>();
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json point_json(const ComplexPoint2 &p) { return json::array({p.z.real(), p.z.imag(), p.w.real(), p.w.imag()}); }

std::vector<std::string> split(const std::string &text, const std::string &separators)
{
    std::vector<std::string> parts;
    std::string cur;
    for (const char ch : text) {
        if (separators.find(ch) != std::string::npos) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

double to_double(const std::string &s, const std::string &what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw ConfigError("cannot parse " + what + " from '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw ConfigError("cannot parse " + what + " from '" + s + "'");
    }
    return v;
}

int to_int(const std::string &s, const std::string &what)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception &) {
        throw ConfigError("cannot parse " + what + " from '" + s + "'");
    }
    if (used != s.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError("cannot parse " + what + " from '" + s + "'");
    }
    return static_cast<int>(v);
}

} // namespace

cplx parse_complex(const std::string &text)
{
    const auto parts = split(text, ",");
    if (parts.size() == 1) {
        return {to_double(parts[0], "a number"), 0.0};
    }
    if (parts.size() == 2) {
        return {to_double(parts[0], "a real part"), to_double(parts[1], "an imaginary part")};
    }
    throw ConfigError("expected 're' or 're,im', got '" + text + "'");
}

Window parse_window(const std::string &text)
{
    const auto parts = split(text, ",");
    if (parts.size() != 4) {
        throw ConfigError("expected 'x_min,x_max,y_min,y_max', got '" + text + "'");
    }
    return {to_double(parts[0], "x_min"), to_double(parts[1], "x_max"), to_double(parts[2], "y_min"),
            to_double(parts[3], "y_max")};
}

std::array<int, 2> parse_resolution(const std::string &text)
{
    const auto parts = split(text, ",xX");
    if (parts.size() == 1) {
        const int n = to_int(parts[0], "resolution");
        return {n, n};
    }
    if (parts.size() == 2) {
        return {to_int(parts[0], "resolution"), to_int(parts[1], "resolution")};
    }
    throw ConfigError("expected 'n', 'nx,ny' or 'nxXny', got '" + text + "'");
}

RunConfig parse_config(const json &j, RunConfig c)
{
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    for (const auto &[key, v] : j.items()) {
        if (known_keys.count(key) == 0) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        if (key == "map_a") {
            c.map_a = get_number(v, key);
        } else if (key == "map_c") {
            c.map_c = get_complex(v, key);
        } else if (key == "window") {
            if (!v.is_array() || v.size() != 4) {
                fail(key, "expected [x_min, x_max, y_min, y_max]");
            }
            c.window = Window{get_number(v[0], key), get_number(v[1], key), get_number(v[2], key),
                              get_number(v[3], key)};
        } else if (key == "resolution") {
            if (v.is_number_integer()) {
                const int n = get_int(v, key);
                c.resolution = {n, n};
            } else if (v.is_array() && v.size() == 2) {
                c.resolution = {get_int(v[0], key), get_int(v[1], key)};
            } else {
                fail(key, "expected an integer or [nx, ny]");
            }
        } else if (key == "alpha") {
            c.alpha = get_number(v, key);
        } else if (key == "n") {
            c.n = get_int(v, key);
        } else if (key == "period") {
            c.period = get_int(v, key);
        } else if (key == "seeds") {
            c.seeds = get_int(v, key);
        } else if (key == "out") {
            c.out = get_string(v, key);
        } else if (key == "workers") {
            const int w = get_int(v, key);
            if (w < 1) {
                fail(key, "must be >= 1");
            }
            c.workers = static_cast<unsigned>(w);
        } else if (key == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
                fail(key, "expected a non-negative integer");
            }
            c.seed = v.get<std::uint64_t>();
        } else if (key == "field") {
            c.field = get_string(v, key);
        } else if (key == "slice") {
            if (!v.is_object()) {
                fail(key, "expected {\"base\": [...], \"direction\": [...]}");
            }
            Slice s;
            for (const auto &[k2, v2] : v.items()) {
                if (k2 == "base") {
                    s.base = get_point(v2, "slice.base");
                } else if (k2 == "direction") {
                    s.direction = get_point(v2, "slice.direction");
                } else {
                    throw ConfigError("unknown config key 'slice." + k2 + "'");
                }
            }
            c.slice = s;
        } else if (key == "max_iter") {
            c.max_iter = get_int(v, key);
        } else if (key == "commutation_audit") {
            if (!v.is_boolean()) {
                fail(key, "expected true or false");
            }
            c.commutation_audit = v.get<bool>();
        } else if (key == "model") {
            c.model = get_string(v, key);
        } else if (key == "target") {
            c.target = get_complex(v, key);
        } else if (key == "radius") {
            c.radius = get_number(v, key);
        } else if (key == "boundary_csv") {
            c.boundary_csv = get_string(v, key);
        } else if (key == "samples") {
            c.samples = get_int(v, key);
        } else if (key == "source") {
            c.source = get_string(v, key);
        } else if (key == "branches") {
            c.branches = get_int(v, key);
        } else if (key == "ratio") {
            c.ratio = get_number(v, key);
        } else if (key == "epsilon") {
            c.epsilon = get_number(v, key);
        } else if (key == "scale_count") {
            c.scale_count = get_int(v, key);
        } else if (key == "input") {
            c.input = get_string(v, key);
        } else if (key == "family") {
            c.family = get_string(v, key);
        } else if (key == "lambda0") {
            c.lambda0 = get_complex(v, key);
        } else if (key == "critical_point") {
            c.critical_point = get_complex(v, key);
        } else if (key == "target_guess") {
            c.target_guess = get_complex(v, key);
        }
    }
    return c;
}

RunConfig load_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig &c)
{
    json j;
    j["map_a"] = c.map_a;
    if (c.map_c) {
        j["map_c"] = complex_json(*c.map_c);
    }
    if (c.window) {
        j["window"] = json::array({c.window->x_min, c.window->x_max, c.window->y_min, c.window->y_max});
    }
    if (c.resolution) {
        j["resolution"] = json::array({(*c.resolution)[0], (*c.resolution)[1]});
    }
    j["alpha"] = c.alpha;
    if (c.n) {
        j["n"] = *c.n;
    }
    j["period"] = c.period;
    j["seeds"] = c.seeds;
    j["out"] = c.out;
    j["workers"] = c.workers;
    j["seed"] = c.seed;
    j["field"] = c.field;
    if (c.slice) {
        j["slice"] = {{"base", point_json(c.slice->base)}, {"direction", point_json(c.slice->direction)}};
    }
    j["max_iter"] = c.max_iter;
    j["commutation_audit"] = c.commutation_audit;
    j["model"] = c.model;
    if (c.target) {
        j["target"] = complex_json(*c.target);
    }
    if (c.radius) {
        j["radius"] = *c.radius;
    }
    j["boundary_csv"] = c.boundary_csv;
    j["samples"] = c.samples;
    j["source"] = c.source;
    j["branches"] = c.branches;
    j["ratio"] = c.ratio;
    j["epsilon"] = c.epsilon;
    if (c.scale_count) {
        j["scale_count"] = *c.scale_count;
    }
    j["input"] = c.input;
    j["family"] = c.family;
    if (c.lambda0) {
        j["lambda0"] = complex_json(*c.lambda0);
    }
    if (c.critical_point) {
        j["critical_point"] = complex_json(*c.critical_point);
    }
    if (c.target_guess) {
        j["target_guess"] = complex_json(*c.target_guess);
    }
    return j;
}

namespace {

void require(bool ok, const std::string &message)
{
    if (!ok) {
        throw ConfigError(message);
    }
}

void default_window(RunConfig &c, Window w)
{
    if (!c.window) {
        c.window = w;
    }
}

void default_resolution(RunConfig &c, int nx, int ny)
{
    if (!c.resolution) {
        c.resolution = std::array<int, 2>{nx, ny};
    }
}

bool one_of(const std::string &s, std::initializer_list<const char *> options)
{
    return std::any_of(options.begin(), options.end(), [&](const char *o) { return s == o; });
}

} // namespace

RunConfig resolve(const std::string &command, RunConfig c)
{
    const auto &names = command_names();
    require(std::find(names.begin(), names.end(), command) != names.end(), "unknown command '" + command + "'");
    require(c.map_a != 0.0, "map_a must be nonzero");
    require(c.workers >= 1, "workers must be >= 1");

    if (command == "render") {
        require(one_of(c.field, {"green_plus", "green_minus", "escape_plus", "escape_minus"}),
                "field must be green_plus, green_minus, escape_plus or escape_minus");
        require(!c.out.empty(), "render needs an output path (--out)");
        default_window(c, {-2.0, 2.0, -2.0, 2.0});
        default_resolution(c, 256, 256);
        if (!c.slice) {
            c.slice = Slice{};
        }
        require(c.max_iter >= 1, "max_iter must be >= 1");
    } else if (command == "horn") {
        default_window(c, {0.0, 1.0, 2.2, 3.2});
        default_resolution(c, 64, 64);
    } else if (command == "islands") {
        require(one_of(c.model, {"henon", "square"}), "model must be henon or square");
        if (c.model == "square") {
            default_window(c, {0.5, 1.5, -0.5, 0.5});
            if (!c.target) {
                c.target = cplx(1.0, 0.0);
            }
            if (!c.radius) {
                c.radius = 0.1;
            }
        } else {
            default_window(c, {0.0, 1.0, 2.2, 2.7});
            if (!c.target) {
                c.target = cplx(-17.5, 3.0);
            }
            if (!c.radius) {
                c.radius = 0.2;
            }
        }
        default_resolution(c, 256, 256);
        require(*c.radius > 0.0, "radius must be positive");
    } else if (command == "cycles") {
        require(one_of(c.model, {"henon", "square"}), "model must be henon or square");
        default_window(c, c.model == "square" ? Window{0.0, 1.0, -0.5, 0.5} : Window{0.0, 1.0, 2.2, 3.2});
        require(c.period >= 1, "period must be >= 1");
        require(c.seeds >= 1, "seeds must be >= 1");
    } else if (command == "implosion") {
        if (!c.n) {
            c.n = 80;
        }
        require(static_cast<double>(*c.n) > c.alpha, "n must exceed alpha");
        require(c.samples >= 1, "samples must be >= 1");
    } else if (command == "bowen") {
        if (c.source.empty()) {
            c.source = "uniform";
        }
        require(one_of(c.source, {"uniform", "islands"}), "source must be uniform or islands");
        if (c.source == "uniform") {
            require(c.branches >= 1, "branches must be >= 1");
            require(c.ratio > 0.0 && c.ratio < 1.0, "ratio must lie in (0, 1)");
        } else {
            if (!c.target) {
                c.target = cplx(0.4, 2.5);
            }
            if (!c.radius) {
                c.radius = 0.1;
            }
            default_resolution(c, 1024, 1024);
            require(*c.radius > 0.0, "radius must be positive");
        }
    } else if (command == "boxdim") {
        if (c.source.empty()) {
            c.source = "julia";
        }
        require(one_of(c.source, {"julia", "file"}), "source must be julia or file");
        if (!c.scale_count) {
            // At the default resolution finer scales fall below a few grid spacings.
            c.scale_count = c.source == "file" ? 6 : 4;
        }
        require(*c.scale_count >= 4, "scale_count must be >= 4");
        if (c.source == "file") {
            require(!c.input.empty(), "boxdim with source file needs an input CSV");
        } else {
            default_window(c, {-2.0, 2.0, -2.0, 2.0});
            default_resolution(c, 512, 512);
            if (!c.slice) {
                c.slice = Slice{};
            }
            require(c.epsilon >= 0.0 && c.epsilon <= 0.5, "epsilon must lie in [0, 0.5]");
        }
    } else if (command == "shoot") {
        require(one_of(c.family, {"quadratic", "horn"}), "family must be quadratic or horn");
        if (c.family == "quadratic") {
            if (!c.lambda0) {
                c.lambda0 = cplx(-2.1, 0.0);
            }
            if (!c.critical_point) {
                c.critical_point = cplx(0.0, 0.0);
            }
            if (!c.target_guess) {
                c.target_guess = cplx(2.0, 0.0);
            }
        }
        if (!c.n) {
            c.n = 1;
        }
        require(c.lambda0 && c.critical_point && c.target_guess,
                "shoot needs lambda0, critical_point and target_guess");
        require(*c.n >= 0, "n must be >= 0");
        require(c.period >= 1, "period must be >= 1");
    }

    if (c.window) {
        require(c.window->valid(), "window must satisfy x_min < x_max and y_min < y_max");
    }
    if (c.resolution) {
        require((*c.resolution)[0] >= 2 && (*c.resolution)[1] >= 2, "resolution must be >= 2");
    }
    return c;
}

HenonMap make_map(const RunConfig &c)
{
    const cplx a(c.map_a, 0.0);
    if (c.map_c) {
        return HenonMap(*c.map_c, a);
    }
    if (!(std::abs(c.map_a) < 1.0)) {
        throw ConfigError("map_c is required when |map_a| >= 1");
    }
    return HenonMap(semi_parabolic_parameter(a), a);
}

} // namespace henonlab::app
