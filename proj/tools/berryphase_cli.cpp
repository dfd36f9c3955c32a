// berryphase: run loop configs, verification suites and convergence sweeps.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include "berryphase/errors.hpp"
#include "berryphase/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace berry;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct GlobalFlags {
    std::string out_dir = ".";
    std::optional<int> dim;
    std::optional<int> segments;
    bool emit_integrand = false;

    cli::RunOptions run_options() const { return {dim, segments, emit_integrand}; }
};

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
    return fs::path(dir);
}

int do_run(const std::string& config_path, const GlobalFlags& flags) {
    const auto config = cli::load_config(config_path);
    const auto result = cli::run(config, flags.run_options());
    const auto out = prepare_out_dir(flags.out_dir);
    cli::write_atomic(out / "report.json", cli::report_json(result.report));
    cli::write_atomic(out / "phases.csv", cli::phases_csv(result.report));
    if (flags.emit_integrand) cli::write_atomic(out / "integrand.csv", cli::integrand_csv(result.integrand));

    std::cout << cli::phases_csv(result.report);
    if (result.report.hannay) std::printf("hannay %s\n", cli::format_number(*result.report.hannay).c_str());
    if (!result.report.passed()) {
        std::fprintf(stderr, "numerical check failed: discrepancy above %.1e or not converged\n",
                     result.report.tolerance);
        return kExitNumerical;
    }
    return kExitOk;
}

int do_verify(const std::string& suite_name) {
    const auto checks = cli::verify(cli::parse_suite(suite_name));
    int failed = 0;
    for (const auto& c : checks) {
        std::puts(cli::format_check(c).c_str());
        if (!c.passed) ++failed;
    }
    std::printf("%zu checks, %d failed\n", checks.size(), failed);
    return failed == 0 ? kExitOk : kExitNumerical;
}

int do_sweep(const std::string& config_path, int doublings, const GlobalFlags& flags) {
    const auto config = cli::load_config(config_path);
    const auto rows = cli::sweep(config, doublings, flags.run_options());
    const auto out = prepare_out_dir(flags.out_dir);
    const auto csv = cli::sweep_csv(rows);
    cli::write_atomic(out / "sweep.csv", csv);
    std::cout << csv;

    // Deltas must shrink with every doubling and end below the convergence tolerance.
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].delta_prev) continue;
        const bool last = i + 1 == rows.size() || !rows[i + 1].delta_prev;
        if (last && !(*rows[i].delta_prev < 1e-4)) ok = false;
        if (i > 0 && rows[i - 1].delta_prev && *rows[i].delta_prev > *rows[i - 1].delta_prev + 1e-12) ok = false;
    }
    if (!ok) {
        std::fputs("sweep did not converge monotonically below 1e-4\n", stderr);
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Berry phases of the generalized harmonic oscillator"};
    app.set_version_flag("--version", cli::version());
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--out-dir", flags.out_dir, "Directory for report.json, phases.csv and sweep.csv");
    app.add_option("--dim", flags.dim, "Override the Fock dimension")->check(CLI::PositiveNumber);
    app.add_option("--segments", flags.segments, "Override the number of loop segments K")
        ->check(CLI::PositiveNumber);
    app.add_flag("--emit-integrand", flags.emit_integrand, "Also write per-segment contributions");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Compute Berry phases for a loop config");
    run->add_option("config", config_path, "JSON loop config")->required();

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run a property suite");
    verify->add_option("suite", suite, "algebra, phases, multiphoton, appendix or all");

    int doublings = 2;
    auto* sweep = app.add_subcommand("sweep", "Convergence table under doubling of (dim, K)");
    sweep->add_option("config", config_path, "JSON loop config")->required();
    sweep->add_option("--doublings", doublings, "Number of doublings (at most 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*run) return do_run(config_path, flags);
        if (*verify) return do_verify(suite);
        if (*sweep) return do_sweep(config_path, doublings, flags);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitInvalid;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitInvalid;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitOk;
}
