#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dipolarqc/sweep.hpp"

namespace dqc {

namespace {

SweepSpec make_spec(SweepAxis axis, double min, double max, int steps, ModelParams fixed) {
    SweepSpec s;
    s.axis = axis;
    s.range = {min, max, steps};
    s.fixed = fixed;
    return s;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// "key = value" lines become "--key value" tokens; "key = true" for flags.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty() || key == "config")
            throw UsageError(path + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
        if (key == "oracle-check") {
            if (value == "true" || value == "1") tokens.push_back("--oracle-check");
            else if (value != "false" && value != "0")
                throw UsageError(path + ":" + std::to_string(lineno) + ": oracle-check must be true or false");
            continue;
        }
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    return tokens;
}

std::vector<MeasureKind> parse_measures(const std::string& list) {
    bool want_lqu = false, want_lqfi = false;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "lqu") want_lqu = true;
        else if (item == "lqfi") want_lqfi = true;
        else throw UsageError("unknown measure '" + item + "' (expected lqu, lqfi)");
    }
    std::vector<MeasureKind> out;
    if (want_lqu) out.push_back(MeasureKind::lqu);
    if (want_lqfi) out.push_back(MeasureKind::lqfi);
    if (out.empty()) throw UsageError("--measures must name at least one of lqu, lqfi");
    return out;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = [] {
        std::vector<Preset> p;
        p.push_back({"fig1", "LQU and lQFI vs epsilon; delta=1, D=0, T=0.1 (family T in 0.1, 0.5, 1, 2)",
                     make_spec(SweepAxis::epsilon, -10, 10, 401, {1.0, 0.0, 0.0, 0.1})});
        p.push_back({"fig2", "LQU and lQFI vs delta; epsilon=2, D=0, T=0.1 (family T in 0.1, 0.5, 1, 2)",
                     make_spec(SweepAxis::delta, -10, 10, 401, {0.0, 2.0, 0.0, 0.1})});
        p.push_back({"fig3", "LQU and lQFI vs T; delta=epsilon=1, D=0 (family (1,1), (2,2), (3,3))",
                     make_spec(SweepAxis::temperature, 0.01, 5, 500, {1.0, 1.0, 0.0, 1.0})});
        p.push_back({"fig4", "LQU and lQFI vs T; delta=epsilon=2, D=0 (family D in 0, 2, 4)",
                     make_spec(SweepAxis::temperature, 0.01, 5, 500, {2.0, 2.0, 0.0, 1.0})});
        p.push_back({"fig5", "LQU and lQFI vs D; delta=epsilon=2, T=0.5 (family T in 0.5, 1, 2)",
                     make_spec(SweepAxis::dm, 0, 8, 161, {2.0, 2.0, 0.0, 0.5})});
        return p;
    }();
    return table;
}

const Preset* find_preset(std::string_view name) {
    const auto& table = presets();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Preset& p) { return p.name == name; });
    return it == table.end() ? nullptr : &*it;
}

CliOptions parse_cli(std::span<const std::string> args) {
    // Config file values go right after the subcommand so that explicit flags win.
    std::vector<std::string> argv(args.begin(), args.end());
    for (std::size_t i = 0; i < argv.size(); ++i) {
        std::string path;
        std::size_t consumed = 0;
        if (argv[i] == "--config" && i + 1 < argv.size()) {
            path = argv[i + 1];
            consumed = 2;
        } else if (argv[i].rfind("--config=", 0) == 0) {
            path = argv[i].substr(9);
            consumed = 1;
        } else {
            continue;
        }
        argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i), argv.begin() + static_cast<std::ptrdiff_t>(i + consumed));
        const auto tokens = config_tokens(path);
        const auto sub = std::find(argv.begin(), argv.end(), "sweep");
        const auto at = sub == argv.end() ? argv.begin() : sub + 1;
        argv.insert(at, tokens.begin(), tokens.end());
        break;
    }

    CLI::App app{"Thermal LQU / lQFI sweeps for a dipolar two-spin system with DM interaction", "dipolarqc"};
    app.require_subcommand(1, 1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write LQU/lQFI to CSV (and SVG)");
    sweep->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string axis_name, preset_name, measures = "lqu,lqfi", out, plot, config_unused;
    double min = 0, max = 0, delta = 0, epsilon = 0, dm = 0, temp = 0;
    int steps = 201;
    bool oracle = false;

    auto* o_axis = sweep->add_option("--axis", axis_name, "epsilon | delta | dm | temperature");
    auto* o_min = sweep->add_option("--min", min, "Start of the swept range");
    auto* o_max = sweep->add_option("--max", max, "End of the swept range");
    auto* o_steps = sweep->add_option("--steps", steps, "Number of grid points (default 201)");
    auto* o_delta = sweep->add_option("--delta", delta, "Dipolar coupling delta");
    auto* o_epsilon = sweep->add_option("--epsilon", epsilon, "Dipolar coupling epsilon");
    auto* o_dm = sweep->add_option("--dm", dm, "DM interaction strength D (z axis)");
    auto* o_temp = sweep->add_option("--temp", temp, "Temperature (k_B = 1)");
    auto* o_measures = sweep->add_option("--measures", measures, "Comma list of lqu, lqfi");
    auto* o_out = sweep->add_option("--out", out, "CSV output path");
    auto* o_plot = sweep->add_option("--plot", plot, "SVG output path");
    sweep->add_flag("--oracle-check", oracle, "Validate every 10th row against brute-force minimization");
    auto* o_preset = sweep->add_option("--preset", preset_name, "fig1 | fig2 | fig3 | fig4 | fig5");
    sweep->add_option("--config", config_unused, "File of 'key = value' lines using the flag names");

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.get_subcommands().empty() ? app.help() : sweep->help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    SweepSpec spec;
    bool from_preset = false;
    if (o_preset->count() > 0) {
        const Preset* preset = find_preset(preset_name);
        if (!preset) throw UsageError("unknown preset '" + preset_name + "'");
        spec = preset->spec;
        from_preset = true;
    }
    if (o_axis->count() > 0) {
        const auto axis = parse_axis(axis_name);
        if (!axis) throw UsageError("unknown axis '" + axis_name + "' (expected epsilon, delta, dm, temperature)");
        if (from_preset && *axis != spec.axis)
            throw UsageError("--axis conflicts with preset '" + preset_name + "'");
        spec.axis = *axis;
    } else if (!from_preset) {
        throw UsageError("missing required flag --axis");
    }

    auto take = [&](CLI::Option* opt, const char* flag, double value, double& slot) {
        if (opt->count() > 0) slot = value;
        else if (!from_preset) throw UsageError(std::string("missing required flag ") + flag);
    };
    take(o_min, "--min", min, spec.range.min);
    take(o_max, "--max", max, spec.range.max);
    if (o_steps->count() > 0) spec.range.steps = steps;
    else if (!from_preset) spec.range.steps = 201;

    struct Fixed {
        SweepAxis axis;
        CLI::Option* opt;
        const char* flag;
        double value;
        double ModelParams::*field;
    };
    const std::array<Fixed, 4> fixed{Fixed{SweepAxis::delta, o_delta, "--delta", delta, &ModelParams::delta},
                                     Fixed{SweepAxis::epsilon, o_epsilon, "--epsilon", epsilon, &ModelParams::epsilon},
                                     Fixed{SweepAxis::dm, o_dm, "--dm", dm, &ModelParams::dm},
                                     Fixed{SweepAxis::temperature, o_temp, "--temp", temp, &ModelParams::temperature}};
    for (const auto& f : fixed) {
        if (f.axis == spec.axis) {
            if (f.opt->count() > 0)
                throw UsageError(std::string(f.flag) + " cannot be set when sweeping " + to_string(spec.axis));
            continue;
        }
        take(f.opt, f.flag, f.value, spec.fixed.*f.field);
    }
    if (spec.axis == SweepAxis::temperature) spec.fixed.temperature = spec.range.min;

    spec.measures = parse_measures(o_measures->count() > 0 ? measures : std::string("lqu,lqfi"));
    spec.oracle_check = oracle;
    validate(spec);

    if (o_out->count() == 0 || out.empty()) throw UsageError("missing required flag --out");
    CliOptions options{spec, out, std::nullopt};
    if (o_plot->count() > 0) options.plot = plot;
    return options;
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CliOptions options;
    try {
        options = parse_cli(args);
    } catch (const HelpRequested& help) {
        out << help.text;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
        return 1;
    }

    try {
        const auto rows = run_sweep(options.spec);
        write_csv(rows, options.out);
        if (options.plot) emit_plot(rows, options.spec, *options.plot);
        out << "wrote " << rows.size() << " rows to " << options.out.string() << '\n';
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "io failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace dqc
