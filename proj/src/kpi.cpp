#include "hrc/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrc/feasibility.hpp"
#include "hrc/kernels.hpp"

namespace hrc::kpi {

KpiVector compute_raw(const model::WorkcellSpec& spec, const model::Chromosome& x,
                      const sched::Schedule& schedule,
                      const std::vector<sim::MotionTrace>& traces) {
    KpiVector out;
    out.raw[kCycleTime] = schedule.makespan;

    const auto& kern = kernels::ops();
    const double dt = spec.surrogate.dt;
    const auto& th = spec.surrogate.reach_thresholds;

    // Ergonomics: band index (1..4) of the reach distance per human sample,
    // averaged and rounded half-up. No human involvement scores 1.
    uint64_t class_sum = 0;
    uint64_t class_count = 0;
    double det_sum = 0.0;
    uint64_t det_count = 0;
    for (const model::Agent& agent : spec.agents) {
        for (const sim::MotionTrace& trace : traces) {
            if (std::find(x.allocation[trace.op].begin(), x.allocation[trace.op].end(),
                          agent.id) == x.allocation[trace.op].end())
                continue;
            if (agent.kind == model::AgentKind::Human) {
                const auto d_sq = sim::reach_distance_sq_samples(trace, agent, dt);
                class_sum += kern.band_class_sum(d_sq.data(), d_sq.size(), th[0] * th[0],
                                                 th[1] * th[1], th[2] * th[2]);
                class_count += d_sq.size();
            } else {
                const auto det = sim::manipulability_samples(trace, agent, dt);
                det_sum += kern.sum_abs(det.data(), det.size());
                det_count += det.size();
            }
        }
    }
    out.raw[kErgonomics] =
        class_count == 0
            ? 1.0
            : std::floor(static_cast<double>(class_sum) / static_cast<double>(class_count) + 0.5);

    const double det_mean = det_count == 0 ? 0.0 : det_sum / static_cast<double>(det_count);
    out.raw[kInvManipulability] = 1.0 / std::max(det_mean, kManipulabilityFloor);

    std::vector<geom::WorldPolygon> movable;
    movable.reserve(spec.movable_resources.size());
    std::vector<const geom::WorldPolygon*> ptrs;
    for (int rid : spec.movable_resources) {
        const int off = spec.layout_offset[rid];
        std::vector<double> coords(x.layout.begin() + off,
                                   x.layout.begin() + off + spec.resources[rid].dofs());
        movable.push_back(model::place(spec, rid, coords));
        ptrs.push_back(&movable.back());
    }
    const auto box = geom::bounding_box(ptrs);
    out.raw[kSurface] = box ? box->area() : 0.0;

    out.safety = sim::collision_flag(spec, x, schedule, traces);
    return out;
}

KpiVector normalize(const KpiVector& raw, const BaselineStats& stats) {
    KpiVector out = raw;
    for (int i = 0; i < 4; ++i) out.normalized[i] = (raw.raw[i] - stats.mean[i]) / stats.stddev[i];
    return out;
}

double fitness(const KpiVector& normalized, const Weights& w) {
    if (normalized.safety) return std::numeric_limits<double>::infinity();
    double f = 0.0;
    for (int i = 0; i < 4; ++i) f += w[i] * normalized.normalized[i];
    return f;
}

Baseline build_baseline(const model::WorkcellSpec& spec, int n_samples, uint64_t seed) {
    if (n_samples < 2)
        throw Error(ErrorCode::DegenerateKpi,
                    "baseline needs at least 2 samples (variance undefined)");
    Baseline baseline;
    baseline.stats.seed = seed;
    baseline.stats.sample_count = n_samples;
    baseline.rows.reserve(n_samples);

    Rng rng = Rng::master(seed).substream(rng_purpose::kBaseline);
    for (int s = 0; s < n_samples; ++s) {
        BaselineRow row;
        row.chromosome = feas::sample(spec, rng, spec.ga.sample_max_tries);
        const auto plan = sim::plan_all(spec, row.chromosome);
        const auto schedule = sched::schedule_list(spec, row.chromosome.allocation, plan.tau);
        row.kpi = compute_raw(spec, row.chromosome, schedule, plan.traces);
        baseline.rows.push_back(std::move(row));
    }

    for (int i = 0; i < 4; ++i) {
        double sum = 0.0;
        for (const auto& row : baseline.rows) sum += row.kpi.raw[i];
        const double mean = sum / n_samples;
        double ss = 0.0;
        for (const auto& row : baseline.rows) {
            const double d = row.kpi.raw[i] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (n_samples - 1));
        if (!(sd > 0.0))
            throw Error(ErrorCode::DegenerateKpi,
                        std::string("baseline KPI '") + kComponentNames[i] +
                            "' has zero variance");
        baseline.stats.mean[i] = mean;
        baseline.stats.stddev[i] = sd;
    }
    for (auto& row : baseline.rows) row.kpi = normalize(row.kpi, baseline.stats);
    return baseline;
}

Evaluation evaluate(const model::WorkcellSpec& spec, const model::Chromosome& x,
                    const BaselineStats& stats, const Weights& w) {
    const auto plan = sim::plan_all(spec, x);
    const auto schedule = sched::schedule_list(spec, x.allocation, plan.tau);
    Evaluation e;
    e.kpi = normalize(compute_raw(spec, x, schedule, plan.traces), stats);
    e.fitness = fitness(e.kpi, w);
    e.makespan = schedule.makespan;
    return e;
}

}  // namespace hrc::kpi
