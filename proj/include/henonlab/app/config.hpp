#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "henonlab/green.hpp"

namespace henonlab::app {

/// Invalid usage or configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation that did not produce a result (exit code 3).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a run depends on. Optional fields take a per-command default in
/// resolve(); a resolved configuration has every field the command reads set.
struct RunConfig {
    double map_a = 0.5;
    std::optional<cplx> map_c;

    std::optional<Window> window;
    std::optional<std::array<int, 2>> resolution;
    double alpha = 0.0;
    std::optional<int> n;
    int period = 1;
    int seeds = 64;
    std::string out;
    unsigned workers = 1;
    std::uint64_t seed = 0;

    // render
    std::string field = "green_plus";
    std::optional<Slice> slice;
    int max_iter = 200;
    // horn
    bool commutation_audit = false;
    // islands, cycles, bowen
    std::string model = "henon";
    std::optional<cplx> target;
    std::optional<double> radius;
    std::string boundary_csv;
    // implosion
    int samples = 20;
    // bowen
    std::string source;
    int branches = 3;
    double ratio = 1.0 / 9.0;
    // boxdim
    double epsilon = 0.0;
    std::optional<int> scale_count;
    std::string input;
    // shoot
    std::string family = "quadratic";
    std::optional<cplx> lambda0;
    std::optional<cplx> critical_point;
    std::optional<cplx> target_guess;
};

/// Subcommands of the tool.
const std::vector<std::string> &command_names();

/// Parses a configuration object; unknown keys and ill-typed values throw ConfigError.
RunConfig parse_config(const nlohmann::json &j, RunConfig base = {});
RunConfig load_config_file(const std::string &path);

nlohmann::json to_json(const RunConfig &c);

/// Fills command defaults and validates; throws ConfigError.
RunConfig resolve(const std::string &command, RunConfig c);

/// Parsers for flag values: "re" or "re,im"; "x0,x1,y0,y1"; "n", "nx,ny" or "nxXny".
cplx parse_complex(const std::string &text);
Window parse_window(const std::string &text);
std::array<int, 2> parse_resolution(const std::string &text);

/// The map the configuration describes: c defaults to the semi-parabolic value for a.
HenonMap make_map(const RunConfig &c);

} // namespace henonlab::app
