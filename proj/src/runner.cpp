#include "berryphase/runner.hpp"

#include "berryphase/errors.hpp"
#include "berryphase/multiphoton.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace berry::cli {

namespace {

using json = nlohmann::ordered_json;
using KeyPath = std::vector<std::string>;

int line_at_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the last key in `path`, found by scanning for each quoted key in turn.
// Good enough for anchoring messages; falls back to the last key found.
int line_of(const std::string& text, const KeyPath& path) {
    std::size_t pos = 0;
    int line = 0;
    for (const auto& key : path) {
        const auto hit = text.find('"' + key + '"', pos);
        if (hit == std::string::npos) break;
        pos = hit + key.size() + 2;
        line = line_at_offset(text, hit);
    }
    return line;
}

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& message, const KeyPath& path) const {
        throw ValidationError(message, line_of(text_, path));
    }

    const json& require(const json& obj, const std::string& key, const KeyPath& path) const {
        if (!obj.contains(key)) fail("missing required field '" + key + "'", path);
        return obj.at(key);
    }

    double number(const json& v, const KeyPath& path) const {
        if (!v.is_number()) fail("field '" + path.back() + "' must be a number", path);
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail("field '" + path.back() + "' must be finite", path);
        return x;
    }

    int integer(const json& v, const KeyPath& path) const {
        if (!v.is_number_integer()) fail("field '" + path.back() + "' must be an integer", path);
        return v.get<int>();
    }

    std::string string(const json& v, const KeyPath& path) const {
        if (!v.is_string()) fail("field '" + path.back() + "' must be a string", path);
        return v.get<std::string>();
    }

    std::vector<double> numbers(const json& v, std::size_t count, const KeyPath& path) const {
        if (!v.is_array() || (count > 0 && v.size() != count)) {
            fail("field '" + path.back() + "' must be an array of " + std::to_string(count) + " numbers", path);
        }
        std::vector<double> out;
        for (const auto& x : v) out.push_back(number(x, path));
        return out;
    }

    cplx complex(const json& v, const KeyPath& path) const {
        const auto xy = numbers(v, 2, path);
        return {xy[0], xy[1]};
    }

    Coordinate coordinate(const json& v, const KeyPath& path) const {
        const auto name = string(v, path);
        try {
            return parse_coordinate(name);
        } catch (const Error&) {
            fail("unknown coordinate '" + name + "'", path);
        }
    }

    std::vector<Coordinate> coordinates(const json& v, std::size_t count, const KeyPath& path) const {
        if (!v.is_array() || (count > 0 && v.size() != count)) {
            fail("field '" + path.back() + "' must list " + std::to_string(count) + " coordinates", path);
        }
        std::vector<Coordinate> out;
        for (const auto& c : v) out.push_back(coordinate(c, path));
        return out;
    }

private:
    const std::string& text_;
};

const std::set<std::string> kTopLevelKeys = {"description", "mode", "base", "primitive", "planes", "tether",
                                             "waves",       "coords", "points", "samples", "levels", "dim",
                                             "tolerance",   "grid"};

void check_distinct(const Reader& rd, const std::vector<Coordinate>& coords, const KeyPath& path) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (std::size_t j = i + 1; j < coords.size(); ++j) {
            if (coords[i] == coords[j]) {
                rd.fail("coordinate '" + std::string(to_string(coords[i])) + "' referenced twice", path);
            }
        }
    }
}

bool moves_alpha(const std::vector<Coordinate>& coords) {
    return std::any_of(coords.begin(), coords.end(),
                       [](Coordinate c) { return c == Coordinate::alpha1 || c == Coordinate::alpha2; });
}

std::vector<Coordinate> referenced_coordinates(const LoopConfig& c) {
    std::vector<Coordinate> out;
    switch (c.primitive) {
        case Primitive::circle:
            for (const auto& p : c.planes) {
                out.push_back(p.x);
                out.push_back(p.y);
            }
            break;
        case Primitive::lissajous:
            for (const auto& w : c.waves) out.push_back(w.coordinate);
            break;
        case Primitive::polyline:
            out = c.coords;
            break;
    }
    return out;
}

std::vector<double> wilson_phases(const LoopConfig& config, const ParamLoop& loop, int dim,
                                  std::vector<std::vector<double>>* arguments = nullptr) {
    EngineOptions options;
    options.check_convergence = false;
    auto args = config.mode == Mode::oscillator ? oscillator_segment_arguments(config.levels, loop, dim, options)
                                                : multiphoton_segment_arguments(config.levels, loop, dim, options);
    std::vector<double> out;
    for (const auto& a : args) out.push_back(wilson_phase_from_arguments(a));
    if (arguments) *arguments = std::move(args);
    return out;
}

double level_weight(Mode mode, int n) { return mode == Mode::oscillator ? n + 0.5 : 2 * n + 0.5; }

void check_run_shape(int dim, int samples) {
    if (samples < ParamLoop::kMinSegments) {
        throw ValidationError("samples K = " + std::to_string(samples) + " violates K >= " +
                              std::to_string(ParamLoop::kMinSegments));
    }
    if (dim < 2 || dim > kMaxSweepDim) {
        throw ValidationError("dim = " + std::to_string(dim) + " outside [2, " + std::to_string(kMaxSweepDim) + "]");
    }
}

}  // namespace

std::string version() { return BERRYPHASE_VERSION; }

LoopConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what(), line_at_offset(text, e.byte));
    }
    const Reader rd(text);
    if (!doc.is_object()) rd.fail("config must be a JSON object", {});
    for (const auto& [key, value] : doc.items()) {
        if (!kTopLevelKeys.count(key)) rd.fail("unknown field '" + key + "'", {key});
    }

    LoopConfig c;
    c.source = doc.dump();

    if (doc.contains("mode")) {
        const auto mode = rd.string(doc["mode"], {"mode"});
        if (mode == "oscillator") c.mode = Mode::oscillator;
        else if (mode == "multiphoton") c.mode = Mode::multiphoton;
        else rd.fail("mode must be 'oscillator' or 'multiphoton', got '" + mode + "'", {"mode"});
    }

    if (doc.contains("base")) {
        const json& b = doc["base"];
        if (!b.is_object()) rd.fail("field 'base' must be an object", {"base"});
        for (const auto& [key, value] : b.items()) {
            if (key == "m") c.base.m = rd.number(value, {"base", "m"});
            else if (key == "omega") c.base.omega = rd.number(value, {"base", "omega"});
            else if (key == "alpha") c.base.alpha = rd.complex(value, {"base", "alpha"});
            else if (key == "beta") c.base.beta = rd.complex(value, {"base", "beta"});
            else rd.fail("unknown field '" + key + "' in base", {"base", key});
        }
        if (!(c.base.m > 0.0) || !(c.base.omega > 0.0)) rd.fail("base m and omega must be positive", {"base"});
    }

    const auto primitive = rd.string(rd.require(doc, "primitive", {}), {"primitive"});
    if (primitive == "circle") {
        c.primitive = Primitive::circle;
        const json& planes = rd.require(doc, "planes", {"primitive"});
        if (!planes.is_array() || planes.empty()) rd.fail("circle needs a non-empty 'planes' array", {"planes"});
        for (const auto& pl : planes) {
            if (!pl.is_object()) rd.fail("each plane must be an object", {"planes"});
            CirclePlane cp;
            const auto coords = rd.coordinates(rd.require(pl, "coords", {"planes"}), 2, {"planes", "coords"});
            cp.x = coords[0];
            cp.y = coords[1];
            if (pl.contains("center")) {
                const auto ctr = rd.numbers(pl["center"], 2, {"planes", "center"});
                cp.center_x = ctr[0];
                cp.center_y = ctr[1];
            }
            cp.radius = rd.number(rd.require(pl, "radius", {"planes"}), {"planes", "radius"});
            if (!(cp.radius >= 0.0)) rd.fail("radius must be >= 0", {"planes", "radius"});
            c.planes.push_back(cp);
        }
        if (doc.contains("tether")) {
            c.tether = rd.integer(doc["tether"], {"tether"});
            if (c.tether < 1) rd.fail("tether must be >= 1", {"tether"});
        }
    } else if (primitive == "lissajous") {
        c.primitive = Primitive::lissajous;
        const json& waves = rd.require(doc, "waves", {"primitive"});
        if (!waves.is_array() || waves.empty()) rd.fail("lissajous needs a non-empty 'waves' array", {"waves"});
        for (const auto& w : waves) {
            if (!w.is_object()) rd.fail("each wave must be an object", {"waves"});
            Wave wave;
            wave.coordinate = rd.coordinate(rd.require(w, "coord", {"waves"}), {"waves", "coord"});
            if (w.contains("center")) wave.center = rd.number(w["center"], {"waves", "center"});
            wave.amplitude = rd.number(rd.require(w, "amplitude", {"waves"}), {"waves", "amplitude"});
            if (w.contains("frequency")) wave.frequency = rd.integer(w["frequency"], {"waves", "frequency"});
            if (w.contains("phase")) wave.phase = rd.number(w["phase"], {"waves", "phase"});
            if (wave.frequency < 1) rd.fail("wave frequency must be a positive integer", {"waves", "frequency"});
            c.waves.push_back(wave);
        }
    } else if (primitive == "polyline") {
        c.primitive = Primitive::polyline;
        c.coords = rd.coordinates(rd.require(doc, "coords", {"primitive"}), 0, {"coords"});
        if (c.coords.empty()) rd.fail("polyline needs at least one coordinate", {"coords"});
        const json& pts = rd.require(doc, "points", {"primitive"});
        if (!pts.is_array() || pts.size() < 3) rd.fail("polyline needs at least 3 points", {"points"});
        for (const auto& p : pts) c.points.push_back(rd.numbers(p, c.coords.size(), {"points"}));
        if (c.points.front() != c.points.back()) {
            rd.fail("polyline must be explicitly closed (first point == last point)", {"points"});
        }
    } else {
        rd.fail("primitive must be circle, lissajous or polyline, got '" + primitive + "'", {"primitive"});
    }

    const auto coords = referenced_coordinates(c);
    const KeyPath coord_key = c.primitive == Primitive::circle      ? KeyPath{"planes"}
                              : c.primitive == Primitive::lissajous ? KeyPath{"waves"}
                                                                    : KeyPath{"coords"};
    // Composed circles may revisit a plane, each loop still needs distinct axes.
    if (c.primitive == Primitive::circle) {
        for (const auto& p : c.planes) check_distinct(rd, {p.x, p.y}, coord_key);
    } else {
        check_distinct(rd, coords, coord_key);
    }
    if (c.mode == Mode::multiphoton && (moves_alpha(coords) || c.base.alpha != cplx(0.0))) {
        rd.fail("multiphoton mode requires alpha = 0 along the loop", coord_key);
    }

    if (doc.contains("samples")) c.samples = rd.integer(doc["samples"], {"samples"});
    if (c.samples < ParamLoop::kMinSegments) {
        rd.fail("samples K = " + std::to_string(c.samples) + " violates K >= " +
                    std::to_string(ParamLoop::kMinSegments),
                {"samples"});
    }

    const json& levels = rd.require(doc, "levels", {});
    if (!levels.is_array() || levels.empty() || levels.size() > 6) {
        rd.fail("levels must be a non-empty list of at most 6 entries", {"levels"});
    }
    for (const auto& n : levels) {
        const int level = rd.integer(n, {"levels"});
        if (level < 0) rd.fail("levels must be >= 0", {"levels"});
        if (std::find(c.levels.begin(), c.levels.end(), level) != c.levels.end()) {
            rd.fail("level " + std::to_string(level) + " listed twice", {"levels"});
        }
        c.levels.push_back(level);
    }

    if (doc.contains("dim")) c.dim = rd.integer(doc["dim"], {"dim"});
    if (c.dim < 2 || c.dim > kMaxSweepDim) {
        rd.fail("dim = " + std::to_string(c.dim) + " outside [2, " + std::to_string(kMaxSweepDim) + "]", {"dim"});
    }
    const int top = *std::max_element(c.levels.begin(), c.levels.end());
    const int highest_fock = c.mode == Mode::oscillator ? top : 2 * top;
    if (highest_fock >= leading_block(c.dim)) rd.fail("dim too small for the requested levels", {"dim"});

    if (doc.contains("tolerance")) {
        c.tolerance = rd.number(doc["tolerance"], {"tolerance"});
        if (!(c.tolerance > 0.0)) rd.fail("tolerance must be positive", {"tolerance"});
    }

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        if (!g.is_object()) rd.fail("field 'grid' must be an object", {"grid"});
        GridSpec spec;
        for (const auto& [key, value] : g.items()) {
            if (key == "x_min") spec.x_min = rd.number(value, {"grid", key});
            else if (key == "x_max") spec.x_max = rd.number(value, {"grid", key});
            else if (key == "points") spec.points = rd.integer(value, {"grid", key});
            else rd.fail("unknown field '" + key + "' in grid", {"grid", key});
        }
        try {
            spec.validate();
        } catch (const Error& e) {
            rd.fail(e.what(), {"grid"});
        }
        c.grid = spec;
    }

    try {
        (void)build_loop(c);
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        rd.fail(std::string("invalid loop: ") + e.what(), {"primitive"});
    }
    return c;
}

LoopConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ParamLoop build_loop(const LoopConfig& config) { return build_loop(config, config.samples); }

ParamLoop build_loop(const LoopConfig& config, int samples) {
    switch (config.primitive) {
        case Primitive::circle: {
            const int count = static_cast<int>(config.planes.size());
            if (count == 1) {
                const auto& p = config.planes.front();
                return make_circle_loop(config.base, p.x, p.y, p.center_x, p.center_y, p.radius, samples);
            }
            // Segments left after the there-and-back tethers are shared between the circles.
            const int budget = samples - 2 * config.tether * (count - 1);
            if (budget < count * ParamLoop::kMinSegments) {
                throw ValidationError("samples K = " + std::to_string(samples) + " too small for " +
                                      std::to_string(count) + " composed circles");
            }
            std::vector<ParamLoop> loops;
            for (int i = 0; i < count; ++i) {
                const auto& p = config.planes[static_cast<std::size_t>(i)];
                const int k = budget / count + (i == 0 ? budget % count : 0);
                loops.push_back(make_circle_loop(config.base, p.x, p.y, p.center_x, p.center_y, p.radius, k));
            }
            return compose_loops(loops, config.tether);
        }
        case Primitive::lissajous:
            return make_wave_loop(config.base, config.waves, samples, "lissajous");
        case Primitive::polyline:
            return make_polyline_loop(config.base, config.coords, config.points, samples);
    }
    throw InvalidArgument("unknown loop primitive");
}

bool RunReport::passed() const {
    return std::all_of(phases.begin(), phases.end(),
                       [&](const PhaseReport& r) { return r.discrepancy <= tolerance && r.converged; });
}

RunResult run(const LoopConfig& config, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const int dim = options.dim.value_or(config.dim);
    const int samples = options.segments.value_or(config.samples);
    check_run_shape(dim, samples);

    const ParamLoop loop = build_loop(config, samples);
    std::vector<std::vector<double>> arguments;
    const auto gammas = wilson_phases(config, loop, dim, &arguments);

    // Convergence: double the dimension and, separately, the number of segments.
    RunReport report;
    const auto& levels = config.levels;
    const auto record = [&](int d, int k, const std::vector<double>& g) {
        for (std::size_t j = 0; j < levels.size(); ++j) report.convergence.push_back({levels[j], d, k, g[j]});
    };
    record(dim, samples, gammas);
    std::vector<double> by_dim;
    if (2 * dim <= kMaxSweepDim) {
        by_dim = wilson_phases(config, loop, 2 * dim);
        record(2 * dim, samples, by_dim);
    }
    const auto by_segments = wilson_phases(config, build_loop(config, 2 * samples), dim);
    record(dim, 2 * samples, by_segments);

    const auto d_chords = chord_integrals(loop, displacement_one_form);
    const auto s_chords = chord_integrals(loop, squeeze_one_form);
    double gamma_d = 0.0;
    double squeeze_unit = 0.0;
    for (double x : d_chords) gamma_d += x;
    for (double x : s_chords) squeeze_unit += x;
    if (config.mode == Mode::multiphoton) gamma_d = 0.0;

    for (std::size_t j = 0; j < levels.size(); ++j) {
        PhaseReport r;
        r.n = levels[j];
        r.gamma_wilson = gammas[j];
        r.gamma_d = gamma_d;
        r.gamma_s = level_weight(config.mode, levels[j]) * squeeze_unit;
        r.gamma_closed = r.gamma_d + r.gamma_s;
        r.discrepancy = std::abs(r.gamma_wilson - r.gamma_closed);
        r.dim = dim;
        r.segments = samples;
        r.converged = !by_dim.empty() && std::abs(by_dim[j] - gammas[j]) < EngineOptions{}.convergence_tolerance &&
                      std::abs(by_segments[j] - gammas[j]) < EngineOptions{}.convergence_tolerance;
        report.phases.push_back(r);
    }

    if (config.mode == Mode::oscillator) {
        const auto i0 = std::find(levels.begin(), levels.end(), 0);
        const auto i1 = std::find(levels.begin(), levels.end(), 1);
        if (i0 != levels.end() && i1 != levels.end()) {
            report.hannay = gammas[static_cast<std::size_t>(i0 - levels.begin())] -
                            gammas[static_cast<std::size_t>(i1 - levels.begin())];
        } else {
            EngineOptions eo;
            eo.check_convergence = false;
            report.hannay = hannay_angle(loop, dim, eo);
        }
        if (config.grid) report.grid_gamma0 = gamma0_grid(loop, *config.grid);
    }

    report.config = config.source;
    report.version = version();
    report.tolerance = config.tolerance;

    RunResult result;
    if (options.integrand) {
        for (std::size_t j = 0; j < levels.size(); ++j) {
            const double weight = level_weight(config.mode, levels[j]);
            for (int k = 0; k < loop.segments(); ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const double displacement = config.mode == Mode::oscillator ? d_chords[kk] : 0.0;
                result.integrand.push_back({levels[j], k, -arguments[j][kk], displacement + weight * s_chords[kk]});
            }
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.report = std::move(report);
    return result;
}

std::string format_number(double x) {
    char buf[64];
    if (x == 0.0) x = 0.0;  // drop the sign of negative zero
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

std::string phases_csv(const RunReport& report) {
    std::string out = "n,gamma_wilson,gamma_closed,gamma_D,gamma_S,discrepancy,dim,K,converged\n";
    for (const auto& r : report.phases) {
        out += std::to_string(r.n) + ',' + format_number(r.gamma_wilson) + ',' + format_number(r.gamma_closed) + ',' +
               format_number(r.gamma_d) + ',' + format_number(r.gamma_s) + ',' + format_number(r.discrepancy) + ',' +
               std::to_string(r.dim) + ',' + std::to_string(r.segments) + ',' + (r.converged ? "true" : "false") +
               '\n';
    }
    return out;
}

std::string report_json(const RunReport& report) {
    json doc;
    doc["version"] = report.version;
    doc["config"] = json::parse(report.config);
    json phases = json::array();
    for (const auto& r : report.phases) {
        phases.push_back({{"n", r.n},
                          {"gamma_wilson", r.gamma_wilson},
                          {"gamma_closed", r.gamma_closed},
                          {"gamma_D", r.gamma_d},
                          {"gamma_S", r.gamma_s},
                          {"discrepancy", r.discrepancy},
                          {"dim", r.dim},
                          {"K", r.segments},
                          {"converged", r.converged}});
    }
    doc["phases"] = std::move(phases);
    doc["hannay"] = report.hannay ? json(*report.hannay) : json(nullptr);
    if (report.grid_gamma0) doc["grid_gamma0"] = *report.grid_gamma0;
    json table = json::array();
    for (const auto& c : report.convergence) {
        table.push_back({{"level", c.level}, {"dim", c.dim}, {"K", c.segments}, {"gamma_wilson", c.gamma_wilson}});
    }
    doc["convergence"] = std::move(table);
    doc["tolerance"] = report.tolerance;
    doc["passed"] = report.passed();
    doc["timing"] = {{"seconds", report.seconds}};
    return doc.dump(2) + '\n';
}

std::string integrand_csv(const std::vector<SegmentContribution>& rows) {
    std::string out = "n,segment,wilson,closed\n";
    for (const auto& r : rows) {
        out += std::to_string(r.level) + ',' + std::to_string(r.segment) + ',' + format_number(r.wilson) + ',' +
               format_number(r.closed) + '\n';
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out << contents;
        out.flush();
        if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

std::vector<SweepRow> sweep(const LoopConfig& config, int doublings, const RunOptions& options) {
    if (doublings < 0 || doublings > kMaxDoublings) {
        throw ValidationError("doublings must be in [0, " + std::to_string(kMaxDoublings) + "], got " +
                              std::to_string(doublings));
    }
    const int dim = options.dim.value_or(config.dim);
    const int samples = options.segments.value_or(config.samples);
    check_run_shape(dim, samples);
    if ((dim << doublings) > kMaxSweepDim) {
        throw ValidationError("sweep would reach dim = " + std::to_string(dim << doublings) + " > " +
                              std::to_string(kMaxSweepDim));
    }

    std::vector<std::vector<double>> by_step;
    for (int i = 0; i <= doublings; ++i) {
        by_step.push_back(wilson_phases(config, build_loop(config, samples << i), dim << i));
    }
    std::vector<SweepRow> rows;
    for (std::size_t j = 0; j < config.levels.size(); ++j) {
        for (int i = 0; i <= doublings; ++i) {
            SweepRow row{config.levels[j], dim << i, samples << i, by_step[static_cast<std::size_t>(i)][j], {}};
            if (i > 0) row.delta_prev = std::abs(row.gamma_wilson - by_step[static_cast<std::size_t>(i) - 1][j]);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "level,dim,K,gamma_wilson,delta_prev\n";
    for (const auto& r : rows) {
        out += std::to_string(r.level) + ',' + std::to_string(r.dim) + ',' + std::to_string(r.segments) + ',' +
               format_number(r.gamma_wilson) + ',' + (r.delta_prev ? format_number(*r.delta_prev) : "") + '\n';
    }
    return out;
}

}  // namespace berry::cli
