#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "henonlab/app/commands.hpp"
#include "henonlab/app/config.hpp"

using nlohmann::json;
using namespace henonlab::app;

namespace {

enum class Kind { number, complex, window, resolution, text, flag };

struct Flag {
    const char *name;
    const char *key;
    Kind kind;
    const char *help;
};

const std::vector<Flag> &flags()
{
    static const std::vector<Flag> f{
        {"--map-a", "map_a", Kind::number, "Jacobian a of the Henon map"},
        {"--map-c", "map_c", Kind::complex, "parameter c as 're' or 're,im' (default: semi-parabolic value)"},
        {"--window", "window", Kind::window, "x_min,x_max,y_min,y_max"},
        {"--resolution", "resolution", Kind::resolution, "grid size 'n', 'nx,ny' or 'nxXny'"},
        {"--alpha", "alpha", Kind::number, "Lavaurs phase"},
        {"--n", "n", Kind::number, "iteration count (implosion) or preperiod (shoot)"},
        {"--period", "period", Kind::number, "cycle period"},
        {"--seeds", "seeds", Kind::number, "number of Newton seeds"},
        {"--out", "out", Kind::text, "output path (reports go to stdout when omitted)"},
        {"--workers", "workers", Kind::number, "worker threads"},
        {"--seed", "seed", Kind::number, "random seed"},
        {"--field", "field", Kind::text, "green_plus, green_minus, escape_plus or escape_minus"},
        {"--max-iter", "max_iter", Kind::number, "iteration cap of the field"},
        {"--commutation-audit", "commutation_audit", Kind::flag, "check H(z+1) = H(z) + 1 on the grid"},
        {"--model", "model", Kind::text, "henon or square"},
        {"--target", "target", Kind::complex, "target disk center"},
        {"--radius", "radius", Kind::number, "target disk radius"},
        {"--boundary-csv", "boundary_csv", Kind::text, "write island boundaries to this CSV"},
        {"--samples", "samples", Kind::number, "number of basin samples"},
        {"--source", "source", Kind::text, "bowen: uniform or islands; boxdim: julia or file"},
        {"--branches", "branches", Kind::number, "branches of the uniform system"},
        {"--ratio", "ratio", Kind::number, "contraction ratio of the uniform system"},
        {"--epsilon", "epsilon", Kind::number, "perturbation size"},
        {"--scale-count", "scale_count", Kind::number, "number of box scales"},
        {"--input", "input", Kind::text, "CSV point cloud"},
        {"--family", "family", Kind::text, "quadratic or horn"},
        {"--lambda0", "lambda0", Kind::complex, "starting parameter"},
        {"--critical-point", "critical_point", Kind::complex, "critical point of the family"},
        {"--target-guess", "target_guess", Kind::complex, "initial guess of the periodic point"},
    };
    return f;
}

json flag_value(const Flag &f, const std::string &text)
{
    switch (f.kind) {
    case Kind::number: {
        json v = json::parse(text, nullptr, false);
        if (v.is_discarded() || !v.is_number()) {
            throw ConfigError(std::string(f.name) + ": expected a number, got '" + text + "'");
        }
        return v;
    }
    case Kind::complex: {
        const auto z = parse_complex(text);
        return json::array({z.real(), z.imag()});
    }
    case Kind::window: {
        const auto w = parse_window(text);
        return json::array({w.x_min, w.x_max, w.y_min, w.y_max});
    }
    case Kind::resolution: {
        const auto r = parse_resolution(text);
        return json::array({r[0], r[1]});
    }
    case Kind::flag:
        return true;
    case Kind::text:
        break;
    }
    return text;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Semi-parabolic Henon dynamics: Green fields, horn maps, implosion and dimension estimates"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    std::map<std::string, std::string> raw;
    std::map<std::string, bool> switches;
    std::string config_path;
    std::map<std::string, std::vector<CLI::Option *>> options;

    for (const auto &name : command_names()) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration; flags override its keys");
        for (const auto &f : flags()) {
            CLI::Option *o = f.kind == Kind::flag ? sub->add_flag(f.name, switches[f.key], f.help)
                                                  : sub->add_option(f.name, raw[f.key], f.help);
            options[f.key].push_back(o);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig config;
    try {
        json overlay = json::object();
        if (!config_path.empty()) {
            config = load_config_file(config_path);
        }
        for (const auto &f : flags()) {
            bool given = false;
            for (const CLI::Option *o : options[f.key]) {
                given = given || o->count() > 0;
            }
            if (given) {
                overlay[f.key] = flag_value(f, raw[f.key]);
            }
        }
        config = parse_config(overlay, config);
    } catch (const ConfigError &e) {
        std::cerr << "henonlab: " << e.what() << '\n';
        return 2;
    }
    return execute(command, config);
}
