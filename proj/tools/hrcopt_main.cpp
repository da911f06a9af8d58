#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hrc/artifacts.hpp"
#include "hrc/evolve.hpp"
#include "hrc/feasibility.hpp"
#include "hrc/kernels.hpp"
#include "hrc/spec_io.hpp"

namespace fs = std::filesystem;
using namespace hrc;

namespace {

// Exit codes: 0 success, 2 validation failure, 3 infeasibility, 4 I/O,
// 5 internal.
int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::UnsupportedSchema:
        case ErrorCode::DimensionMismatch:
            return 2;
        case ErrorCode::InfeasibleAfterMaxTries:
        case ErrorCode::ChildGenerationStalled:
        case ErrorCode::Unreachable:
        case ErrorCode::DegenerateKpi:
        case ErrorCode::TooLarge:
            return 3;
        case ErrorCode::NotFound:
        case ErrorCode::IoError:
            return 4;
        default:
            return 5;
    }
}

struct SpecInput {
    model::WorkcellSpec spec;
    std::string content;
    std::string sha256;
};

SpecInput load_input(const std::string& path) {
    SpecInput in;
    in.content = io::read_file(path);
    in.sha256 = artifacts::sha256_hex(in.content);
    in.spec = io::parse_spec(in.content, path);
    return in;
}

std::string out_dir_or_default(const std::string& flag_value, const std::string& command) {
    if (!flag_value.empty()) return flag_value;
    const char* root = std::getenv("HRCOPT_OUT_ROOT");
    return (fs::path(root ? root : "runs") / command).string();
}

void write_output(artifacts::ManifestInfo& manifest, const fs::path& dir,
                  const std::string& label, const std::string& filename,
                  const std::string& content) {
    const fs::path path = dir / filename;
    io::write_file_atomic(path.string(), content);
    manifest.outputs.emplace_back(label, path.string());
}

int cmd_validate(const std::string& spec_path) {
    const SpecInput in = load_input(spec_path);
    const auto diags = model::validate_spec(in.spec);
    bool failed = false;
    for (const auto& d : diags) {
        const bool error = d.severity == model::Severity::Error;
        failed = failed || error;
        std::cout << (error ? "error" : "warning") << ' ' << d.code << ": " << d.message << '\n';
    }
    if (failed) {
        std::cout << in.spec.name << ": invalid\n";
        return 2;
    }
    std::cout << in.spec.name << ": ok (" << in.spec.num_operations() << " operations, "
              << in.spec.num_agents() << " agents, " << in.spec.num_resources()
              << " resources)\n";
    return 0;
}

void require_valid(const SpecInput& in) {
    for (const auto& d : model::validate_spec(in.spec))
        if (d.severity == model::Severity::Error)
            throw Error(ErrorCode::ParseError, in.spec.name + ": " + d.code + ": " + d.message);
}

int cmd_baseline(const std::string& spec_path, int samples, std::optional<uint64_t> seed,
                 const std::string& out) {
    SpecInput in = load_input(spec_path);
    require_valid(in);
    const uint64_t run_seed = seed.value_or(in.spec.ga.seed);

    artifacts::ManifestInfo manifest;
    manifest.command = "baseline";
    manifest.spec_path = spec_path;
    manifest.spec_sha256 = in.sha256;
    manifest.seed = run_seed;
    manifest.started_utc = artifacts::utc_timestamp();

    const kpi::Baseline baseline = kpi::build_baseline(in.spec, samples, run_seed);

    const fs::path dir = out_dir_or_default(out, "baseline");
    fs::create_directories(dir);
    write_output(manifest, dir, "stats", "baseline_stats.json",
                 artifacts::baseline_stats_json(baseline.stats, in.spec.name));
    write_output(manifest, dir, "kpis", "baseline_kpis.csv", artifacts::baseline_csv(baseline));
    manifest.extra.emplace_back("samples", std::to_string(samples));
    manifest.finished_utc = artifacts::utc_timestamp();
    io::write_file_atomic((dir / "manifest.json").string(),
                          artifacts::manifest_json(manifest, in.spec.ga));
    std::cout << "baseline: " << samples << " samples -> " << dir.string() << '\n';
    return 0;
}

struct GaOverrides {
    std::optional<int> n_p, n_c, n_it, jobs;
    std::optional<double> mu0, sigma0, beta;
    std::optional<std::string> weights;

    model::GaParams apply(model::GaParams p) const {
        if (n_p) p.n_p = *n_p;
        if (n_c) p.n_c = *n_c;
        if (n_it) p.n_it = *n_it;
        if (jobs) p.jobs = *jobs;
        if (mu0) p.mu0 = *mu0;
        if (sigma0) p.sigma0 = *sigma0;
        if (beta) p.beta = *beta;
        if (weights) {
            std::istringstream ss(*weights);
            std::string tok;
            for (int i = 0; i < 4; ++i) {
                if (!std::getline(ss, tok, ','))
                    throw Error(ErrorCode::ParseError, "--w expects 4 comma-separated values");
                p.weights[i] = std::stod(tok);
            }
        }
        return p;
    }
};

int cmd_optimize(const std::string& spec_path, const std::string& baseline_file,
                 int auto_baseline, std::optional<uint64_t> seed, const std::string& out,
                 const GaOverrides& overrides, bool export_traces) {
    SpecInput in = load_input(spec_path);
    require_valid(in);
    model::GaParams params = overrides.apply(in.spec.ga);
    if (seed) params.seed = *seed;

    artifacts::ManifestInfo manifest;
    manifest.command = "optimize";
    manifest.spec_path = spec_path;
    manifest.spec_sha256 = in.sha256;
    manifest.seed = params.seed;
    manifest.started_utc = artifacts::utc_timestamp();

    const fs::path dir = out_dir_or_default(out, "optimize");
    fs::create_directories(dir);

    kpi::BaselineStats stats;
    if (!baseline_file.empty()) {
        stats = artifacts::load_baseline_stats(baseline_file);
        manifest.extra.emplace_back("baseline_file", baseline_file);
    } else {
        const kpi::Baseline baseline = kpi::build_baseline(in.spec, auto_baseline, params.seed);
        stats = baseline.stats;
        write_output(manifest, dir, "baseline_kpis", "baseline_kpis.csv",
                     artifacts::baseline_csv(baseline));
    }
    write_output(manifest, dir, "baseline_stats", "baseline_stats.json",
                 artifacts::baseline_stats_json(stats, in.spec.name));

    const ga::OptimizationResult result = ga::run(in.spec, params, stats);

    write_output(manifest, dir, "evaluations", "evaluations.csv",
                 artifacts::evaluations_csv(result.evaluations));
    write_output(manifest, dir, "history", "history.csv", artifacts::history_csv(result.history));
    write_output(manifest, dir, "best_chromosome", "best_chromosome.json",
                 io::serialize_chromosome(result.best, in.spec));
    write_output(manifest, dir, "gantt", "gantt.csv",
                 artifacts::gantt_csv(result.best_gantt, in.spec));
    write_output(manifest, dir, "gantt_svg", "gantt.svg",
                 artifacts::gantt_svg(result.best_gantt, in.spec));
    write_output(manifest, dir, "layout_svg", "layout.svg",
                 artifacts::layout_svg(in.spec, result.best));
    if (export_traces) {
        const auto plan = sim::plan_all(in.spec, result.best);
        write_output(manifest, dir, "traces", "traces.csv",
                     artifacts::trace_csv(in.spec, result.best, result.best_schedule,
                                          plan.traces));
    }
    manifest.extra.emplace_back("evaluations_count", std::to_string(result.evaluations.size()));
    manifest.extra.emplace_back("best_fitness", artifacts::fmt(result.best_fitness));
    manifest.extra.emplace_back("best_makespan", artifacts::fmt(result.best_makespan));
    manifest.extra.emplace_back("kernel_backend",
                                kernels::backend_name(kernels::active_backend()));
    manifest.finished_utc = artifacts::utc_timestamp();
    io::write_file_atomic((dir / "manifest.json").string(),
                          artifacts::manifest_json(manifest, params));

    std::cout << "optimize: " << result.evaluations.size() << " evaluations, best fitness "
              << artifacts::fmt(result.best_fitness) << ", makespan "
              << artifacts::fmt(result.best_makespan) << " s -> " << dir.string() << '\n';
    return 0;
}

int cmd_schedule(const std::string& spec_path, const std::string& chromosome_file, bool exact,
                 int max_ops, const std::string& out) {
    SpecInput in = load_input(spec_path);
    require_valid(in);
    const model::Chromosome x = io::load_chromosome(chromosome_file, in.spec);

    const auto report = feas::check(in.spec, x);
    if (!report.ok) {
        for (const auto& v : report.violations)
            std::cout << "violation " << feas::constraint_name(v.constraint) << ": " << v.detail
                      << '\n';
        std::cout << "chromosome: infeasible\n";
        return 3;
    }

    const auto plan = sim::plan_all(in.spec, x);
    const sched::Schedule schedule =
        exact ? sched::schedule_exact(in.spec, x.allocation, plan.tau, max_ops)
              : sched::schedule_list(in.spec, x.allocation, plan.tau);
    const sched::GanttTable table = sched::gantt(schedule, x.allocation, in.spec);

    artifacts::ManifestInfo manifest;
    manifest.command = "schedule";
    manifest.spec_path = spec_path;
    manifest.spec_sha256 = in.sha256;
    manifest.seed = in.spec.ga.seed;
    manifest.started_utc = artifacts::utc_timestamp();

    const fs::path dir = out_dir_or_default(out, "schedule");
    fs::create_directories(dir);
    write_output(manifest, dir, "gantt", "gantt.csv", artifacts::gantt_csv(table, in.spec));
    write_output(manifest, dir, "gantt_svg", "gantt.svg", artifacts::gantt_svg(table, in.spec));
    manifest.extra.emplace_back("chromosome_file", chromosome_file);
    manifest.extra.emplace_back("scheduler", exact ? "exact" : "list");
    manifest.extra.emplace_back("makespan", artifacts::fmt(schedule.makespan));
    manifest.finished_utc = artifacts::utc_timestamp();
    io::write_file_atomic((dir / "manifest.json").string(),
                          artifacts::manifest_json(manifest, in.spec.ga));

    std::cout << "makespan: " << artifacts::fmt(schedule.makespan) << " s (" << (exact ? "exact" : "list")
              << " scheduler) -> " << dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Work-cell layout, allocation and scheduling optimizer"};
    app.require_subcommand(1);

    std::string spec_path, out_dir, baseline_file, chromosome_file;
    std::optional<uint64_t> seed;
    int samples = 124;
    int auto_baseline = 124;
    bool exact = false;
    bool export_traces = false;
    int max_ops = 16;
    GaOverrides overrides;

    auto* validate = app.add_subcommand("validate", "Check a work-cell spec file");
    validate->add_option("spec", spec_path, "spec file")->required();

    auto* baseline = app.add_subcommand("baseline", "Random-search baseline KPI distribution");
    baseline->add_option("spec", spec_path, "spec file")->required();
    baseline->add_option("--samples", samples, "number of feasible samples");
    baseline->add_option("--seed", seed, "random seed");
    baseline->add_option("--out", out_dir, "output directory");

    auto* optimize = app.add_subcommand("optimize", "Run the genetic optimization");
    optimize->add_option("spec", spec_path, "spec file")->required();
    optimize->add_option("--baseline", baseline_file, "baseline stats file");
    optimize->add_option("--auto-baseline", auto_baseline,
                         "build a baseline of N samples before optimizing");
    optimize->add_option("--seed", seed, "random seed");
    optimize->add_option("--out", out_dir, "output directory");
    optimize->add_option("--np", overrides.n_p, "parent population size");
    optimize->add_option("--nc", overrides.n_c, "children per iteration (even)");
    optimize->add_option("--nit", overrides.n_it, "iterations");
    optimize->add_option("--mu0", overrides.mu0, "initial mutation rate");
    optimize->add_option("--sigma0", overrides.sigma0, "initial mutation step (length units)");
    optimize->add_option("--beta", overrides.beta, "Boltzmann temperature");
    optimize->add_option("--w", overrides.weights, "KPI weights, e.g. 0.5,0.3,0.1,0.1");
    optimize->add_option("--jobs", overrides.jobs, "parallel evaluation width");
    optimize->add_flag("--export-traces", export_traces, "write best-solution motion traces CSV");

    auto* schedule = app.add_subcommand("schedule", "Schedule a stored chromosome");
    schedule->add_option("spec", spec_path, "spec file")->required();
    schedule->add_option("--chromosome", chromosome_file, "chromosome file")->required();
    schedule->add_flag("--exact", exact, "branch-and-bound instead of the list heuristic");
    schedule->add_option("--max-ops", max_ops, "exact-solver size guard");
    schedule->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(spec_path);
        if (baseline->parsed()) return cmd_baseline(spec_path, samples, seed, out_dir);
        if (optimize->parsed())
            return cmd_optimize(spec_path, baseline_file, auto_baseline, seed, out_dir, overrides,
                                export_traces);
        if (schedule->parsed())
            return cmd_schedule(spec_path, chromosome_file, exact, max_ops, out_dir);
    } catch (const Error& e) {
        std::cerr << "error " << error_code_name(e.code()) << ": " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 5;
    }
    return 5;
}
