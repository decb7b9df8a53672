#pragma once

// One-dimensional parameter sweeps over the thermal state, with CSV and SVG output.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dipolarqc/correlations.hpp"
#include "dipolarqc/errors.hpp"
#include "dipolarqc/model.hpp"

namespace dqc {

enum class SweepAxis { epsilon, delta, dm, temperature };

const char* to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

struct SweepRange {
    double min = 0.0;
    double max = 1.0;
    int steps = 201;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::epsilon;
    SweepRange range;
    ModelParams fixed;  // the axis field is ignored
    std::vector<MeasureKind> measures{MeasureKind::lqu, MeasureKind::lqfi};
    bool oracle_check = false;
};

struct SweepRow {
    double x = 0.0;
    std::optional<double> lqu;
    std::optional<double> lqfi;
    double partition = 0.0;

    bool operator==(const SweepRow&) const = default;
};

// A numeric failure at one sweep point.
struct SweepPointError : NumericError {
    SweepPointError(double x, const std::string& what);
    double x;
};

// Throws UsageError when the spec violates its invariants.
void validate(const SweepSpec& spec);

// x_k = min + k (max - min) / (steps - 1), evaluated as a weighted average so the
// grid is exactly symmetric when min == -max.
double grid_point(const SweepRange& range, int k);

ModelParams params_at(const SweepSpec& spec, double x);

// Rows come back in ascending x. When spec.oracle_check is set, every tenth row is
// compared to the brute-force minimum (10^4 directions, tolerance 2e-3) and an
// OracleMismatch is thrown on disagreement. workers == 0 picks hardware concurrency.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 0);

// Header "x,lqu,lqfi,partition", shortest round-trip decimals, LF endings.
std::string format_csv(std::span<const SweepRow> rows);
void write_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);

// Self-contained SVG 1.1 with one polyline per measure present in the rows.
std::string render_svg(std::span<const SweepRow> rows, const SweepSpec& spec);
void emit_plot(std::span<const SweepRow> rows, const SweepSpec& spec, const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// ---- command line ----

struct Preset {
    std::string name;
    std::string description;
    SweepSpec spec;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

struct CliOptions {
    SweepSpec spec;
    std::filesystem::path out;
    std::optional<std::filesystem::path> plot;
};

struct HelpRequested {
    std::string text;
};

// args excludes the program name, e.g. {"sweep", "--axis", "epsilon", ...}.
// Throws UsageError, or HelpRequested for --help.
CliOptions parse_cli(std::span<const std::string> args);

// Exit codes: 0 success, 1 usage error, 2 numeric, oracle or IO failure.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dqc
