#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hrc/feasibility.hpp"
#include "hrc/kpi.hpp"
#include "hrc/model.hpp"
#include "hrc/rng.hpp"
#include "hrc/scheduler.hpp"

namespace hrc::ga {

// Boltzmann selection weights: pi*_i = exp(-beta * f_i / mean(f)), normalized.
// The mean enters as |mean| so lower fitness is always favored, and a
// near-zero mean degenerates to uniform selection (which is also what the
// zero-fitness baseline protocol relies on). Inputs must be finite; map
// infinities with sanitize_fitness first.
std::vector<double> boltzmann_probs(const std::vector<double>& fitness, double beta);

// Replaces infinite fitness values by (max finite) + (population std of the
// finite values), keeping collision individuals selectable but unlikely.
std::vector<double> sanitize_fitness(const std::vector<double>& fitness);

// Two roulette draws over the Boltzmann cells; the same parent may be drawn
// twice.
std::pair<int, int> select_parents(const std::vector<double>& fitness, double beta, Rng& rng);

// Mixed crossover: layout genes swap under a fresh binary mask; each
// allocation gene is inherited from a uniformly chosen parent (collaborative
// ops stay forced to their full agent set).
std::pair<model::Chromosome, model::Chromosome> crossover(const model::Chromosome& parent_a,
                                                          const model::Chromosome& parent_b,
                                                          const model::WorkcellSpec& spec,
                                                          Rng& rng);

// Per-gene mutation at rate mu: selected layout genes take a N(0, sigma^2)
// step, selected individual-op genes are redrawn from S_i minus the current
// value; collaborative genes never change.
model::Chromosome mutate(const model::Chromosome& child, const model::WorkcellSpec& spec,
                         double mu, double sigma, Rng& rng);

struct GaState {
    std::vector<model::Chromosome> parents;
    std::vector<double> parent_fitness;
    model::Chromosome incumbent;
    double incumbent_fitness = 0.0;
    kpi::KpiVector incumbent_kpi;
    double incumbent_makespan = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    int stagnation = 0;
    int iteration = 0;
    long evaluations = 0;
};

// Select -> crossover -> mutate -> constraint check, repeated until n_c valid
// children exist. Throws CHILD_GENERATION_STALLED past the attempt budget.
std::vector<model::Chromosome> make_children(const GaState& state,
                                             const model::WorkcellSpec& spec,
                                             const model::GaParams& params, Rng& rng);

using Evaluator = std::function<kpi::Evaluation(const model::Chromosome&)>;

struct EvalRecord;

// One generation: children, evaluation, elitist replacement from the child
// pool, incumbent update and the adaptive-mutation rule.
void step(GaState& state, const model::WorkcellSpec& spec, const model::GaParams& params,
          const Evaluator& evaluate, Rng& rng);
void step_with_log(GaState& state, const model::WorkcellSpec& spec, const model::GaParams& params,
                   const Evaluator& evaluate, Rng& rng, std::vector<EvalRecord>* log);

struct EvalRecord {
    int iteration = 0;      // 0 = initial parents
    bool parent = false;
    model::Chromosome chromosome;
    kpi::KpiVector kpi;
    double fitness = 0.0;
    double makespan = 0.0;
};

struct HistoryRow {
    int iteration = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;  // over the current parent population
    double mu = 0.0;
    double sigma = 0.0;
};

struct OptimizationResult {
    model::Chromosome best;
    double best_fitness = 0.0;
    kpi::KpiVector best_kpi;
    double best_makespan = 0.0;
    sched::CycleTimes best_tau;
    sched::Schedule best_schedule;
    sched::GanttTable best_gantt;
    std::vector<HistoryRow> history;
    std::vector<EvalRecord> evaluations;  // exactly n_p + n_c * n_it entries
};

// Full run: n_p sampled parents plus n_it generations, evaluating against
// the provided baseline stats. Everything derives from params.seed.
OptimizationResult run(const model::WorkcellSpec& spec, const model::GaParams& params,
                       const kpi::BaselineStats& stats);

// Evaluates a batch, optionally across threads; output order is by index, so
// parallelism never changes results.
std::vector<kpi::Evaluation> evaluate_batch(const std::vector<model::Chromosome>& batch,
                                            const Evaluator& evaluate, int jobs);

}  // namespace hrc::ga
