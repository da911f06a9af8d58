// Acceptance suite: every release gate runs here, one line per criterion.
// Usage: acceptance --fixture <spec.json> --cli <hrcopt> --workdir <dir> [--only <name>]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hrc/artifacts.hpp"
#include "hrc/evolve.hpp"
#include "hrc/feasibility.hpp"
#include "hrc/spec_io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace hrc;
using testing_support::enumerate_min_makespan;
using testing_support::mc_overlap;
using testing_support::random_convex_pair;
using testing_support::random_instance;

namespace {

struct Context {
    std::string fixture;
    std::string cli;
    fs::path workdir;
    model::WorkcellSpec spec;
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

int run_cli(const Context& ctx, const std::string& args, const std::string& log_name) {
    const std::string log = (ctx.workdir / (log_name + ".log")).string();
    const std::string cmd = ctx.cli + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

long csv_data_rows(const std::string& path) {
    std::istringstream lines(io::read_file(path));
    std::string line;
    long rows = -1;  // skip header
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    return rows;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- criteria -------------------------------------------------------------

Outcome budget_identity(const Context& ctx) {
    const auto dir = ctx.workdir / "budget";
    fs::remove_all(dir);
    const auto t0 = std::chrono::steady_clock::now();
    if (run_cli(ctx, "baseline " + ctx.fixture + " --samples 124 --seed 42 --out " +
                         (dir / "base").string(),
                "budget_base") != 0)
        return {false, "baseline command failed"};
    if (run_cli(ctx,
                "optimize " + ctx.fixture + " --baseline " +
                    (dir / "base" / "baseline_stats.json").string() + " --seed 1 --out " +
                    (dir / "opt").string(),
                "budget_opt") != 0)
        return {false, "optimize command failed"};
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const long rows = csv_data_rows((dir / "opt" / "evaluations.csv").string());
    if (rows != 124) return {false, "expected 124 evaluations, counted " + std::to_string(rows)};
    if (secs >= 60.0) return {false, "took " + std::to_string(secs) + " s (budget 60 s)"};
    return {true, "6*20 + 4 = 124 evaluations logged"};
}

Outcome scheduler_oracle(const Context&) {
    Rng rng(515151);
    int equal = 0;
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        auto inst = random_instance(rng, 8, 3);
        const auto list = sched::schedule_list(inst.spec, inst.allocation, inst.tau);
        const auto exact = sched::schedule_exact(inst.spec, inst.allocation, inst.tau);
        if (exact.makespan > list.makespan + 1e-9)
            return {false, "exact exceeded list makespan on instance " + std::to_string(trial)};
        if (!sched::feasibility_violation(inst.spec, inst.allocation, inst.tau, exact).empty())
            return {false, "exact schedule infeasible on instance " + std::to_string(trial)};
        if (std::abs(exact.makespan - list.makespan) <= 1e-9 * std::max(1.0, list.makespan))
            ++equal;
    }
    Rng rng2(626262);
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = random_instance(rng2, 6, 3);
        const auto exact = sched::schedule_exact(inst.spec, inst.allocation, inst.tau);
        const double brute = enumerate_min_makespan(inst.spec, inst.allocation, inst.tau);
        if (std::abs(exact.makespan - brute) > 1e-9)
            return {false, "exact disagrees with exhaustive enumeration on t<=6 instance " +
                               std::to_string(trial)};
    }
    const double rate = 100.0 * equal / trials;
    std::ostringstream detail;
    detail << "list==exact on " << equal << "/" << trials << " (" << rate
           << "%); enumeration verified on 200 instances";
    return {true, detail.str()};
}

Outcome sat_correctness(const Context&) {
    Rng rng(2024);
    Rng mc_rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto pair = random_convex_pair(rng);
        if (std::abs(pair.gap) <= 1e-6) continue;
        const bool sat_separated = geom::separated(pair.a, pair.b).separated;
        const bool overlap = mc_overlap(pair.a, pair.b, mc_rng);
        if (sat_separated == overlap)
            return {false, "SAT and sampling oracle disagree on pair " + std::to_string(trial)};
    }
    return {true, "1000 pairs agree with the point-sampling oracle"};
}

Outcome constraint_soundness(const Context& ctx) {
    const auto baseline = kpi::build_baseline(ctx.spec, 124, 900);
    long total = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        model::GaParams params = ctx.spec.ga;
        params.seed = seed;
        const auto result = ga::run(ctx.spec, params, baseline.stats);
        for (const auto& rec : result.evaluations) {
            ++total;
            if (!feas::check(ctx.spec, rec.chromosome).ok)
                return {false, "infeasible chromosome evaluated in run seed " +
                                   std::to_string(seed)};
        }
    }
    return {true, std::to_string(total) + " evaluated chromosomes all satisfy the constraints"};
}

Outcome selection_distribution(const Context&) {
    const std::vector<double> fitness = {1.0, 3.0, 2.0, 5.0};
    const auto probs = ga::boltzmann_probs(fitness, 1.0);
    Rng rng(31415);
    std::vector<long> hits(fitness.size(), 0);
    const long draws = 100000;
    for (long i = 0; i < draws / 2; ++i) {
        const auto [a, b] = ga::select_parents(fitness, 1.0, rng);
        ++hits[a];
        ++hits[b];
    }
    double worst = 0.0;
    for (size_t i = 0; i < fitness.size(); ++i) {
        const double freq = static_cast<double>(hits[i]) / draws;
        worst = std::max(worst, std::abs(freq - probs[i]));
    }
    std::ostringstream detail;
    detail << "max |empirical - theoretical| = " << worst << " over 1e5 draws";
    return {worst < 0.01, detail.str()};
}

Outcome adaptive_mutation(const Context& ctx) {
    model::GaParams params = ctx.spec.ga;
    if (params.mu0 != 0.25 || params.sigma0 != 100.0)
        return {false, "fixture does not carry the reference mutation parameters"};
    ga::GaState state;
    state.mu = params.mu0;
    state.sigma = params.sigma0;
    state.incumbent_fitness = 0.0;
    Rng sample_rng = Rng::master(17).substream(rng_purpose::kParentSampling);
    for (int i = 0; i < params.n_p; ++i) {
        state.parents.push_back(feas::sample(ctx.spec, sample_rng, 10000));
        state.parent_fitness.push_back(1.0);
    }
    state.incumbent = state.parents.front();

    const ga::Evaluator stagnant = [](const model::Chromosome&) {
        kpi::Evaluation e;
        e.fitness = 0.0;  // never beats the incumbent
        return e;
    };
    Rng op_rng = Rng::master(17).substream(rng_purpose::kGaOperators);
    std::vector<double> mu_seen;
    for (int it = 0; it < 4; ++it) {
        ga::step(state, ctx.spec, params, stagnant, op_rng);
        mu_seen.push_back(state.mu);
    }
    const double mu1 = 0.25 * 1.05;
    const double mu2 = (0.25 * 1.05) * 1.05;
    if (!(mu_seen[0] == 0.25 && mu_seen[1] == 0.25 && mu_seen[2] == mu1 && mu_seen[3] == mu2))
        return {false, "stagnation schedule mismatch"};

    int countdown = 2;
    const ga::Evaluator improving = [&countdown](const model::Chromosome&) {
        kpi::Evaluation e;
        e.fitness = --countdown <= 0 ? -1.0 : 0.0;
        return e;
    };
    ga::step(state, ctx.spec, params, improving, op_rng);
    if (!(state.mu == 0.25 && state.sigma == 100.0))
        return {false, "improvement did not reset mu/sigma to their initial values"};
    return {true, "mu: 0.25 -> 0.2625 -> 0.275625 under stagnation, reset on improvement"};
}

Outcome effectiveness(const Context& ctx) {
    const kpi::Weights w = ctx.spec.ga.weights;
    int fitness_wins = 0;
    int median_wins = 0;
    for (int i = 1; i <= 20; ++i) {
        const auto baseline = kpi::build_baseline(ctx.spec, 124, 1000 + i);
        double baseline_best = std::numeric_limits<double>::infinity();
        std::vector<double> baseline_ct;
        for (const auto& row : baseline.rows) {
            baseline_best = std::min(baseline_best, kpi::fitness(row.kpi, w));
            baseline_ct.push_back(row.kpi.raw[kpi::kCycleTime]);
        }

        model::GaParams params = ctx.spec.ga;
        params.seed = 2000 + i;
        const auto result = ga::run(ctx.spec, params, baseline.stats);
        std::vector<double> ga_ct;
        for (const auto& rec : result.evaluations) ga_ct.push_back(rec.kpi.raw[kpi::kCycleTime]);

        if (result.best_fitness <= baseline_best) ++fitness_wins;
        if (median(ga_ct) < median(baseline_ct)) ++median_wins;
    }
    std::ostringstream detail;
    detail << "best-fitness wins " << fitness_wins << "/20, median cycle-time wins "
           << median_wins << "/20 (gate: >= 16 each)";
    return {fitness_wins >= 16 && median_wins >= 16, detail.str()};
}

Outcome determinism(const Context& ctx) {
    const auto dir = ctx.workdir / "determinism";
    fs::remove_all(dir);
    auto same_bytes = [&](const fs::path& a, const fs::path& b) {
        return io::read_file(a.string()) == io::read_file(b.string());
    };

    for (const char* tag : {"a", "b"})
        if (run_cli(ctx,
                    "baseline " + ctx.fixture + " --samples 124 --seed 9 --out " +
                        (dir / ("base_" + std::string(tag))).string(),
                    std::string("det_base_") + tag) != 0)
            return {false, "baseline command failed"};
    if (!same_bytes(dir / "base_a" / "baseline_kpis.csv", dir / "base_b" / "baseline_kpis.csv"))
        return {false, "baseline CSVs differ between identical runs"};

    for (const char* tag : {"a", "b"})
        if (run_cli(ctx,
                    "optimize " + ctx.fixture + " --baseline " +
                        (dir / "base_a" / "baseline_stats.json").string() + " --seed 7 --out " +
                        (dir / ("opt_" + std::string(tag))).string(),
                    std::string("det_opt_") + tag) != 0)
            return {false, "optimize command failed"};
    for (const char* file : {"evaluations.csv", "history.csv", "gantt.csv",
                             "best_chromosome.json", "gantt.svg", "layout.svg"})
        if (!same_bytes(dir / "opt_a" / file, dir / "opt_b" / file))
            return {false, std::string(file) + " differs between identical runs"};

    for (const char* tag : {"a", "b"})
        if (run_cli(ctx,
                    "schedule " + ctx.fixture + " --chromosome " +
                        (dir / "opt_a" / "best_chromosome.json").string() + " --out " +
                        (dir / ("sched_" + std::string(tag))).string(),
                    std::string("det_sched_") + tag) != 0)
            return {false, "schedule command failed"};
    if (!same_bytes(dir / "sched_a" / "gantt.csv", dir / "sched_b" / "gantt.csv"))
        return {false, "schedule CSVs differ between identical runs"};

    // cross-artifact consistency: replaying the stored best chromosome
    // reproduces the makespan recorded by the optimizer
    const std::string opt_manifest = io::read_file((dir / "opt_a" / "manifest.json").string());
    const std::string sched_manifest = io::read_file((dir / "sched_a" / "manifest.json").string());
    auto extract = [](const std::string& json, const std::string& key) {
        const auto pos = json.find("\"" + key + "\"");
        if (pos == std::string::npos) return std::string();
        const auto colon = json.find(':', pos);
        const auto q1 = json.find('"', colon + 1);
        const auto q2 = json.find('"', q1 + 1);
        return json.substr(q1 + 1, q2 - q1 - 1);
    };
    const std::string recorded = extract(opt_manifest, "best_makespan");
    const std::string replayed = extract(sched_manifest, "makespan");
    if (recorded.empty() || recorded != replayed)
        return {false, "replayed makespan '" + replayed + "' != recorded '" + recorded + "'"};
    return {true, "byte-identical CSV/SVG artifacts; replayed makespan " + replayed};
}

Outcome fitness_ordering(const Context& ctx) {
    const auto baseline = kpi::build_baseline(ctx.spec, 124, 4242);
    model::GaParams params = ctx.spec.ga;
    params.seed = 4242;
    const auto result = ga::run(ctx.spec, params, baseline.stats);
    if (result.evaluations.size() != 124) return {false, "expected a 124-row evaluation log"};

    const kpi::Weights w = params.weights;
    auto argmin_for = [&](const kpi::BaselineStats& stats, std::vector<double>* out) {
        int arg = -1;
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < result.evaluations.size(); ++i) {
            kpi::KpiVector v;
            v.raw = result.evaluations[i].kpi.raw;
            v.safety = result.evaluations[i].kpi.safety;
            const double f = kpi::fitness(kpi::normalize(v, stats), w);
            out->push_back(f);
            if (f < best) {
                best = f;
                arg = static_cast<int>(i);
            }
        }
        return arg;
    };

    std::vector<double> f_base;
    const int arg_base = argmin_for(baseline.stats, &f_base);

    // power-of-two scale: fitness must scale by exactly 1/c
    kpi::BaselineStats scaled4 = baseline.stats;
    for (double& s : scaled4.stddev) s *= 4.0;
    std::vector<double> f4;
    const int arg4 = argmin_for(scaled4, &f4);
    if (arg4 != arg_base) return {false, "argmin changed under sigma x4"};
    for (size_t i = 0; i < f4.size(); ++i) {
        if (std::isinf(f_base[i])) {
            if (!std::isinf(f4[i])) return {false, "safety sentinel lost under scaling"};
        } else if (f4[i] != f_base[i] / 4.0) {
            return {false, "fitness did not scale by exactly 1/4 at row " + std::to_string(i)};
        }
    }

    kpi::BaselineStats scaled3 = baseline.stats;
    for (double& s : scaled3.stddev) s *= 3.0;
    std::vector<double> f3;
    if (argmin_for(scaled3, &f3) != arg_base) return {false, "argmin changed under sigma x3"};

    return {true, "argmin invariant under sigma x3 and x4; x4 scales fitness bit-exactly"};
}

}  // namespace

int main(int argc, char** argv) {
    Context ctx;
    std::string only;
    for (int i = 1; i < argc - 1; ++i) {
        const std::string arg = argv[i];
        if (arg == "--fixture") ctx.fixture = argv[++i];
        else if (arg == "--cli") ctx.cli = argv[++i];
        else if (arg == "--workdir") ctx.workdir = argv[++i];
        else if (arg == "--only") only = argv[++i];
    }
    if (ctx.fixture.empty() || ctx.cli.empty() || ctx.workdir.empty()) {
        std::cerr << "usage: acceptance --fixture <spec> --cli <hrcopt> --workdir <dir> "
                     "[--only <criterion>]\n";
        return 2;
    }
    fs::create_directories(ctx.workdir);
    ctx.spec = io::load_spec(ctx.fixture);

    using Criterion = std::pair<std::string, std::function<Outcome(const Context&)>>;
    const std::vector<Criterion> criteria = {
        {"budget_identity", budget_identity},
        {"scheduler_oracle", scheduler_oracle},
        {"sat_correctness", sat_correctness},
        {"constraint_soundness", constraint_soundness},
        {"selection_distribution", selection_distribution},
        {"adaptive_mutation", adaptive_mutation},
        {"effectiveness", effectiveness},
        {"determinism", determinism},
        {"fitness_ordering", fitness_ordering},
    };

    int failures = 0;
    int executed = 0;
    for (const auto& [name, fn] : criteria) {
        if (!only.empty() && name != only) continue;
        ++executed;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = fn(ctx);
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << " — " << outcome.detail
                  << " (" << std::fixed << std::setprecision(1) << secs << " s)\n";
        std::cout.unsetf(std::ios::fixed);
        failures += outcome.pass ? 0 : 1;
    }
    if (executed == 0) {
        std::cerr << "unknown criterion: " << only << "\n";
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
