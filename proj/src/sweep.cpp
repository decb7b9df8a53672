#include "dipolarqc/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace dqc {

namespace {

constexpr std::size_t kOracleDirections = 10000;
constexpr double kOracleTolerance = 2e-3;
constexpr int kOracleStride = 10;

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw NumericError("failed to format number");
    return std::string(buf.data(), end);
}

std::string fixed(double v, int decimals = 2) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
    return buf.data();
}

void check_oracle(const ThermalState& state, MeasureKind kind, double closed_form, double x) {
    const auto oracle = brute_force_minimize(state.rho, kind, kOracleDirections);
    if (std::abs(closed_form - oracle.value) > kOracleTolerance || closed_form > oracle.value + 1e-10) {
        std::ostringstream os;
        os.precision(12);
        os << to_string(kind) << " at x=" << x << ": closed form " << closed_form << " vs brute-force "
           << oracle.value << " (direction " << oracle.direction.x() << ", " << oracle.direction.y() << ", "
           << oracle.direction.z() << ")";
        throw OracleMismatch(os.str());
    }
}

SweepRow evaluate_row(const SweepSpec& spec, int k) {
    const double x = grid_point(spec.range, k);
    try {
        const auto state = thermal_state(params_at(spec, x));
        SweepRow row{x, std::nullopt, std::nullopt, state.partition};
        for (const auto kind : spec.measures) {
            const double value = measure(state, kind).value;
            if (spec.oracle_check && k % kOracleStride == 0) check_oracle(state, kind, value, x);
            (kind == MeasureKind::lqu ? row.lqu : row.lqfi) = value;
        }
        return row;
    } catch (const OracleMismatch&) {
        throw;
    } catch (const SweepPointError&) {
        throw;
    } catch (const NumericError& e) {
        throw SweepPointError(x, e.what());
    }
}

}  // namespace

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::epsilon:
            return "epsilon";
        case SweepAxis::delta:
            return "delta";
        case SweepAxis::dm:
            return "dm";
        case SweepAxis::temperature:
            return "temperature";
    }
    return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
    for (auto axis : {SweepAxis::epsilon, SweepAxis::delta, SweepAxis::dm, SweepAxis::temperature})
        if (name == to_string(axis)) return axis;
    return std::nullopt;
}

SweepPointError::SweepPointError(double x_, const std::string& what)
    : NumericError("at x=" + format_double(x_) + ": " + what), x(x_) {}

void validate(const SweepSpec& spec) {
    const auto& r = spec.range;
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min < r.max))
        throw UsageError("sweep range requires finite min < max");
    if (r.steps < 2) throw UsageError("sweep needs at least 2 steps");
    if (spec.axis == SweepAxis::temperature && r.min < kMinTemperature)
        throw UsageError("temperature sweep must start at or above " + format_double(kMinTemperature));
    if (spec.axis != SweepAxis::temperature && !(spec.fixed.temperature >= kMinTemperature))
        throw UsageError("temperature must be at least " + format_double(kMinTemperature));
    if (spec.measures.empty()) throw UsageError("at least one measure is required");
}

double grid_point(const SweepRange& range, int k) {
    const double n = range.steps - 1;
    return (range.min * (n - k) + range.max * k) / n;
}

ModelParams params_at(const SweepSpec& spec, double x) {
    ModelParams p = spec.fixed;
    switch (spec.axis) {
        case SweepAxis::epsilon:
            p.epsilon = x;
            break;
        case SweepAxis::delta:
            p.delta = x;
            break;
        case SweepAxis::dm:
            p.dm = x;
            break;
        case SweepAxis::temperature:
            p.temperature = x;
            break;
    }
    return p;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers) {
    validate(spec);
    const int steps = spec.range.steps;
    std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
    std::vector<std::exception_ptr> errors(rows.size());

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(steps));

    auto work = [&](unsigned w) {
        for (int k = static_cast<int>(w); k < steps; k += static_cast<int>(workers)) {
            try {
                rows[static_cast<std::size_t>(k)] = evaluate_row(spec, k);
            } catch (...) {
                errors[static_cast<std::size_t>(k)] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::string format_csv(std::span<const SweepRow> rows) {
    std::string out = "x,lqu,lqfi,partition\n";
    for (const auto& row : rows) {
        out += format_double(row.x);
        out += ',';
        if (row.lqu) out += format_double(*row.lqu);
        out += ',';
        if (row.lqfi) out += format_double(*row.lqfi);
        out += ',';
        out += format_double(row.partition);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) throw IoError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

void write_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
    if (rows.empty()) throw std::invalid_argument("write_csv: no rows");
    write_file_atomic(path, format_csv(rows));
}

std::string render_svg(std::span<const SweepRow> rows, const SweepSpec& spec) {
    if (rows.empty()) throw std::invalid_argument("render_svg: no rows");

    constexpr double width = 640, height = 480;
    constexpr double left = 70, right = 610, top = 40, bottom = 420;
    const double xmin = rows.front().x, xmax = rows.back().x;
    const double xspan = xmax > xmin ? xmax - xmin : 1.0;
    // Both measures live in [0, 1].
    auto px = [&](double x) { return left + (x - xmin) / xspan * (right - left); };
    auto py = [&](double y) { return bottom - std::clamp(y, 0.0, 1.0) * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    std::ostringstream title;
    const auto& f = spec.fixed;
    title << "vs " << to_string(spec.axis) << ":";
    if (spec.axis != SweepAxis::delta) title << " delta=" << format_double(f.delta);
    if (spec.axis != SweepAxis::epsilon) title << " epsilon=" << format_double(f.epsilon);
    if (spec.axis != SweepAxis::dm) title << " D=" << format_double(f.dm);
    if (spec.axis != SweepAxis::temperature) title << " T=" << format_double(f.temperature);
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << title.str() << "</text>\n";

    // Axes and ticks.
    svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\"" << bottom << "\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left << "\" y2=\"" << top << "\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xt = left + i * (right - left) / 4, yt = bottom - i * (bottom - top) / 4;
        svg << "<line x1=\"" << fixed(xt) << "\" y1=\"" << bottom << "\" x2=\"" << fixed(xt) << "\" y2=\""
            << bottom + 5 << "\"/>\n";
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(yt) << "\" x2=\"" << left << "\" y2=\"" << fixed(yt)
            << "\"/>\n";
    }
    svg << "</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xt = left + i * (right - left) / 4, yt = bottom - i * (bottom - top) / 4;
        svg << "<text x=\"" << fixed(xt) << "\" y=\"" << bottom + 20 << "\" text-anchor=\"middle\">"
            << fixed(xmin + i * (xmax - xmin) / 4, 3) << "</text>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fixed(yt + 4) << "\" text-anchor=\"end\">" << fixed(i / 4.0)
            << "</text>\n";
    }
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\">"
        << to_string(spec.axis) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (top + bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (top + bottom) / 2 << ")\">correlation</text>\n";
    svg << "</g>\n";

    struct Series {
        MeasureKind kind;
        const char* color;
    };
    int legend = 0;
    for (const Series s : {Series{MeasureKind::lqu, "#1f77b4"}, Series{MeasureKind::lqfi, "#d62728"}}) {
        const bool present = std::any_of(rows.begin(), rows.end(), [&](const SweepRow& r) {
            return (s.kind == MeasureKind::lqu ? r.lqu : r.lqfi).has_value();
        });
        if (!present) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& r : rows) {
            const auto& v = s.kind == MeasureKind::lqu ? r.lqu : r.lqfi;
            if (!v) continue;
            svg << (first ? "" : " ") << fixed(px(r.x)) << ',' << fixed(py(*v));
            first = false;
        }
        svg << "\"/>\n";
        const double ly = top + 14 + 18 * legend++;
        svg << "<line x1=\"" << right - 90 << "\" y1=\"" << ly << "\" x2=\"" << right - 65 << "\" y2=\"" << ly
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << right - 58 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << (s.kind == MeasureKind::lqu ? "LQU" : "lQFI")
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(std::span<const SweepRow> rows, const SweepSpec& spec, const std::filesystem::path& path) {
    write_file_atomic(path, render_svg(rows, spec));
}

}  // namespace dqc
