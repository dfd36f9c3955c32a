#pragma once

// Configuration-driven runs, the verification suites and convergence sweeps
// behind the command-line tool.

#include "berryphase/berry_engine.hpp"
#include "berryphase/position_rep.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace berry::cli {

enum class Mode { oscillator, multiphoton };
enum class Primitive { circle, lissajous, polyline };

struct CirclePlane {
    Coordinate x = Coordinate::alpha1;
    Coordinate y = Coordinate::alpha2;
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
};

struct LoopConfig {
    Mode mode = Mode::oscillator;
    ParamPoint base;
    Primitive primitive = Primitive::circle;
    /// circle: one or more planes, composed through tethers when more than one.
    std::vector<CirclePlane> planes;
    int tether = 10;
    /// lissajous
    std::vector<Wave> waves;
    /// polyline
    std::vector<Coordinate> coords;
    std::vector<std::vector<double>> points;

    int samples = 400;
    std::vector<int> levels;
    int dim = 60;
    double tolerance = 1e-3;
    std::optional<GridSpec> grid;

    /// Canonical JSON echo of the parsed file.
    std::string source;
};

/// Parses and validates JSON config text; errors are ValidationError with a line anchor.
LoopConfig parse_config(const std::string& text);
LoopConfig load_config(const std::filesystem::path& path);

ParamLoop build_loop(const LoopConfig& config);
ParamLoop build_loop(const LoopConfig& config, int samples);

struct ConvergenceRow {
    int level = 0;
    int dim = 0;
    int segments = 0;
    double gamma_wilson = 0.0;
};

struct RunReport {
    std::string config;
    std::vector<PhaseReport> phases;
    std::optional<double> hannay;
    std::optional<double> grid_gamma0;
    double seconds = 0.0;
    std::vector<ConvergenceRow> convergence;
    std::string version;
    double tolerance = 1e-3;

    /// Every row within tolerance and converged.
    bool passed() const;
};

struct RunOptions {
    std::optional<int> dim;
    std::optional<int> segments;
    /// Also collect per-segment contributions.
    bool integrand = false;
};

struct SegmentContribution {
    int level = 0;
    int segment = 0;
    double wilson = 0.0;
    double closed = 0.0;
};

struct RunResult {
    RunReport report;
    std::vector<SegmentContribution> integrand;
};

RunResult run(const LoopConfig& config, const RunOptions& options = {});

std::string format_number(double x);
std::string phases_csv(const RunReport& report);
std::string report_json(const RunReport& report);
std::string integrand_csv(const std::vector<SegmentContribution>& rows);

/// Writes `contents` through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

struct SweepRow {
    int level = 0;
    int dim = 0;
    int segments = 0;
    double gamma_wilson = 0.0;
    std::optional<double> delta_prev;
};

inline constexpr int kMaxDoublings = 3;
inline constexpr int kMaxSweepDim = 512;

/// Reruns the loop at (dim, K), (2 dim, 2 K), ... for `doublings` steps.
std::vector<SweepRow> sweep(const LoopConfig& config, int doublings, const RunOptions& options = {});
std::string sweep_csv(const std::vector<SweepRow>& rows);

enum class Suite { algebra, phases, multiphoton, appendix, all };
Suite parse_suite(const std::string& name);

struct CheckResult {
    std::string suite;
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

std::vector<CheckResult> verify(Suite suite);
std::string format_check(const CheckResult& check);

std::string version();

}  // namespace berry::cli
