#include "hrc/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace hrc::ga {

std::vector<double> sanitize_fitness(const std::vector<double>& fitness) {
    double max_finite = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int finite = 0;
    for (double f : fitness) {
        if (std::isfinite(f)) {
            max_finite = std::max(max_finite, f);
            sum += f;
            ++finite;
        }
    }
    if (finite == 0) return std::vector<double>(fitness.size(), 1.0);
    const double mean = sum / finite;
    double ss = 0.0;
    for (double f : fitness)
        if (std::isfinite(f)) ss += (f - mean) * (f - mean);
    const double stddev = std::sqrt(ss / finite);
    std::vector<double> out = fitness;
    for (double& f : out)
        if (!std::isfinite(f)) f = max_finite + stddev;
    return out;
}

std::vector<double> boltzmann_probs(const std::vector<double>& fitness, double beta) {
    const size_t n = fitness.size();
    const double mean = std::accumulate(fitness.begin(), fitness.end(), 0.0) / n;
    double max_abs = 0.0;
    for (double f : fitness) max_abs = std::max(max_abs, std::abs(f));
    const double denom = std::abs(mean);
    if (denom <= max_abs * 1e-15 || denom == 0.0)
        return std::vector<double>(n, 1.0 / n);

    std::vector<double> logit(n);
    double top = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        logit[i] = -beta * fitness[i] / denom;
        top = std::max(top, logit[i]);
    }
    std::vector<double> probs(n);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        // shifted for range; the -700 floor keeps weights strictly positive
        probs[i] = std::exp(std::max(logit[i] - top, -700.0));
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

std::pair<int, int> select_parents(const std::vector<double>& fitness, double beta, Rng& rng) {
    const std::vector<double> probs = boltzmann_probs(fitness, beta);
    auto draw = [&]() {
        const double u = rng.uniform();
        double cum = 0.0;
        for (size_t i = 0; i < probs.size(); ++i) {
            cum += probs[i];
            if (u < cum) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;
    };
    const int a = draw();
    const int b = draw();
    return {a, b};
}

std::pair<model::Chromosome, model::Chromosome> crossover(const model::Chromosome& parent_a,
                                                          const model::Chromosome& parent_b,
                                                          const model::WorkcellSpec& spec,
                                                          Rng& rng) {
    model::Chromosome child_a, child_b;
    const size_t z_bar = parent_a.layout.size();
    child_a.layout.resize(z_bar);
    child_b.layout.resize(z_bar);
    for (size_t k = 0; k < z_bar; ++k) {
        const bool keep = rng.bernoulli(0.5);  // mask bit v_k
        child_a.layout[k] = keep ? parent_a.layout[k] : parent_b.layout[k];
        child_b.layout[k] = keep ? parent_b.layout[k] : parent_a.layout[k];
    }
    for (const model::Operation& op : spec.operations) {
        if (op.kind == model::OpKind::Collaborative) {
            child_a.allocation.push_back(op.eligible);
            child_b.allocation.push_back(op.eligible);
        } else {
            // Uniform pick between the parents' genes, mirroring the layout
            // mask; both satisfy S_i since the parents are feasible.
            const bool from_a = rng.bernoulli(0.5);
            child_a.allocation.push_back(from_a ? parent_a.allocation[op.id]
                                                : parent_b.allocation[op.id]);
            child_b.allocation.push_back(from_a ? parent_b.allocation[op.id]
                                                : parent_a.allocation[op.id]);
        }
    }
    return {std::move(child_a), std::move(child_b)};
}

model::Chromosome mutate(const model::Chromosome& child, const model::WorkcellSpec& spec,
                         double mu, double sigma, Rng& rng) {
    model::Chromosome out = child;
    for (double& gene : out.layout)
        if (rng.uniform() < mu) gene += sigma * rng.normal();
    for (const model::Operation& op : spec.operations) {
        for (int slot = 0; slot < op.required; ++slot) {
            const bool selected = rng.uniform() < mu;
            if (!selected || op.kind == model::OpKind::Collaborative) continue;
            if (op.eligible.size() < 2) continue;  // no alternative value
            const AgentId current = out.allocation[op.id][slot];
            // Uniform over S_i minus the current agent.
            size_t pick = rng.uniform_int(op.eligible.size() - 1);
            for (size_t j = 0; j <= pick; ++j)
                if (op.eligible[j] == current) {
                    ++pick;
                    break;
                }
            out.allocation[op.id][slot] = op.eligible[pick];
        }
    }
    return out;
}

std::vector<model::Chromosome> make_children(const GaState& state,
                                             const model::WorkcellSpec& spec,
                                             const model::GaParams& params, Rng& rng) {
    std::vector<model::Chromosome> children;
    children.reserve(params.n_c);
    const std::vector<double> selectable = sanitize_fitness(state.parent_fitness);
    int attempts = 0;
    while (static_cast<int>(children.size()) < params.n_c) {
        if (attempts >= params.max_child_attempts)
            throw Error(ErrorCode::ChildGenerationStalled,
                        "no " + std::to_string(params.n_c) + " valid children after " +
                            std::to_string(attempts) + " attempts");
        const auto [ia, ib] = select_parents(selectable, params.beta, rng);
        auto [child_a, child_b] = crossover(state.parents[ia], state.parents[ib], spec, rng);
        for (model::Chromosome* child : {&child_a, &child_b}) {
            if (static_cast<int>(children.size()) >= params.n_c) break;
            model::Chromosome mutated = mutate(*child, spec, state.mu, state.sigma, rng);
            ++attempts;
            if (feas::check(spec, mutated).ok) children.push_back(std::move(mutated));
        }
    }
    return children;
}

std::vector<kpi::Evaluation> evaluate_batch(const std::vector<model::Chromosome>& batch,
                                            const Evaluator& evaluate, int jobs) {
    std::vector<kpi::Evaluation> results(batch.size());
    if (jobs <= 1 || batch.size() <= 1) {
        for (size_t i = 0; i < batch.size(); ++i) results[i] = evaluate(batch[i]);
        return results;
    }
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < batch.size(); i = next.fetch_add(1))
            results[i] = evaluate(batch[i]);
    };
    std::vector<std::thread> pool;
    const int width = std::min<int>(jobs, static_cast<int>(batch.size()));
    pool.reserve(width);
    for (int w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

namespace {

struct Evaluated {
    model::Chromosome chromosome;
    kpi::Evaluation eval;
};

void record(std::vector<EvalRecord>* log, int iteration, bool parent, const Evaluated& e) {
    if (!log) return;
    log->push_back({iteration, parent, e.chromosome, e.eval.kpi, e.eval.fitness, e.eval.makespan});
}

}  // namespace

void step_with_log(GaState& state, const model::WorkcellSpec& spec,
                   const model::GaParams& params, const Evaluator& evaluate, Rng& rng,
                   std::vector<EvalRecord>* log) {
    std::vector<model::Chromosome> children = make_children(state, spec, params, rng);
    const std::vector<kpi::Evaluation> evals = evaluate_batch(children, evaluate, params.jobs);
    state.evaluations += static_cast<long>(children.size());
    state.iteration += 1;

    std::vector<Evaluated> pool(children.size());
    for (size_t i = 0; i < children.size(); ++i) {
        pool[i] = {std::move(children[i]), evals[i]};
        record(log, state.iteration, false, pool[i]);
    }
    const bool improved =
        std::min_element(pool.begin(), pool.end(),
                         [](const Evaluated& a, const Evaluated& b) {
                             return a.eval.fitness < b.eval.fitness;
                         })
            ->eval.fitness < state.incumbent_fitness;

    // The incumbent re-enters the replacement sort (already evaluated, so the
    // budget is untouched); children win ties to keep fresh material.
    pool.push_back({state.incumbent,
                    {state.incumbent_kpi, state.incumbent_fitness, state.incumbent_makespan}});
    std::stable_sort(pool.begin(), pool.end(), [](const Evaluated& a, const Evaluated& b) {
        return a.eval.fitness < b.eval.fitness;
    });

    state.parents.clear();
    state.parent_fitness.clear();
    for (int i = 0; i < params.n_p; ++i) {
        state.parents.push_back(pool[i].chromosome);
        state.parent_fitness.push_back(pool[i].eval.fitness);
    }

    if (improved) {
        state.incumbent = pool.front().chromosome;
        state.incumbent_fitness = pool.front().eval.fitness;
        state.incumbent_kpi = pool.front().eval.kpi;
        state.incumbent_makespan = pool.front().eval.makespan;
        state.mu = params.mu0;
        state.sigma = params.sigma0;
        state.stagnation = 0;
    } else {
        state.stagnation += 1;
        if (state.stagnation > params.stagnation_threshold) {
            state.mu *= params.adapt_up;
            state.sigma *= params.adapt_down;
        }
    }
}

void step(GaState& state, const model::WorkcellSpec& spec, const model::GaParams& params,
          const Evaluator& evaluate, Rng& rng) {
    step_with_log(state, spec, params, evaluate, rng, nullptr);
}

OptimizationResult run(const model::WorkcellSpec& spec, const model::GaParams& params,
                       const kpi::BaselineStats& stats) {
    if (params.n_c % 2 != 0)
        throw Error(ErrorCode::Internal, "ga: n_c must be even (selection works in pairs)");
    if (params.n_p > params.n_c)
        throw Error(ErrorCode::Internal, "ga: replacement needs n_p <= n_c");

    const Rng master = Rng::master(params.seed);
    Rng parent_rng = master.substream(rng_purpose::kParentSampling);
    Rng op_rng = master.substream(rng_purpose::kGaOperators);

    const Evaluator evaluate = [&](const model::Chromosome& x) {
        return kpi::evaluate(spec, x, stats, params.weights);
    };

    OptimizationResult result;
    GaState state;
    state.mu = params.mu0;
    state.sigma = params.sigma0;
    state.incumbent_fitness = std::numeric_limits<double>::infinity();

    std::vector<model::Chromosome> parents;
    for (int i = 0; i < params.n_p; ++i)
        parents.push_back(feas::sample(spec, parent_rng, params.sample_max_tries));
    const auto evals = evaluate_batch(parents, evaluate, params.jobs);
    state.evaluations = params.n_p;
    for (int i = 0; i < params.n_p; ++i) {
        Evaluated e{parents[i], evals[i]};
        record(&result.evaluations, 0, true, e);
        state.parents.push_back(std::move(parents[i]));
        state.parent_fitness.push_back(evals[i].fitness);
        if (evals[i].fitness < state.incumbent_fitness ||
            (i == 0 && std::isinf(state.incumbent_fitness))) {
            state.incumbent = state.parents.back();
            state.incumbent_fitness = evals[i].fitness;
            state.incumbent_kpi = evals[i].kpi;
            state.incumbent_makespan = evals[i].makespan;
        }
    }

    auto mean_fitness = [](const std::vector<double>& f) {
        return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
    };
    result.history.push_back(
        {0, state.incumbent_fitness, mean_fitness(state.parent_fitness), state.mu, state.sigma});

    for (int it = 1; it <= params.n_it; ++it) {
        step_with_log(state, spec, params, evaluate, op_rng, &result.evaluations);
        result.history.push_back({it, state.incumbent_fitness, mean_fitness(state.parent_fitness),
                                  state.mu, state.sigma});
    }

    if (state.evaluations != static_cast<long>(params.n_p) + static_cast<long>(params.n_c) * params.n_it)
        throw Error(ErrorCode::Internal, "ga: evaluation budget mismatch");

    result.best = state.incumbent;
    result.best_fitness = state.incumbent_fitness;
    result.best_kpi = state.incumbent_kpi;
    result.best_makespan = state.incumbent_makespan;
    const auto plan = sim::plan_all(spec, result.best);
    result.best_tau = plan.tau;
    result.best_schedule = sched::schedule_list(spec, result.best.allocation, plan.tau);
    result.best_gantt = sched::gantt(result.best_schedule, result.best.allocation, spec);
    return result;
}

}  // namespace hrc::ga
