#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hrc/model.hpp"
#include "hrc/rng.hpp"
#include "hrc/scheduler.hpp"
#include "hrc/surrogate.hpp"

namespace hrc::kpi {

// Component order: cycle time, ergonomics class, inverse manipulability,
// occupied surface.
enum Component : int { kCycleTime = 0, kErgonomics = 1, kInvManipulability = 2, kSurface = 3 };

inline constexpr std::array<const char*, 4> kComponentNames = {"cycle_time", "ergonomics",
                                                               "inv_manipulability", "surface"};

inline constexpr double kManipulabilityFloor = 1e-6;

struct KpiVector {
    std::array<double, 4> raw{};
    std::array<double, 4> normalized{};
    bool safety = false;  // collision flag
};

struct BaselineStats {
    std::array<double, 4> mean{};
    std::array<double, 4> stddev{};  // sample standard deviation (n-1)
    int sample_count = 0;
    uint64_t seed = 0;
};

using Weights = std::array<double, 4>;

// Raw KPIs of one evaluated chromosome:
//   cycle time        = schedule makespan,
//   ergonomics        = 1..4 posture class from mean reach-band index over
//                       human samples, rounded half-up,
//   inv manipulability = 1 / mean |det J| over robot samples (floored),
//   surface           = area of the bounding box of movable footprints.
KpiVector compute_raw(const model::WorkcellSpec& spec, const model::Chromosome& x,
                      const sched::Schedule& schedule, const std::vector<sim::MotionTrace>& traces);

// Z-score against baseline stats.
KpiVector normalize(const KpiVector& raw, const BaselineStats& stats);

// Weighted scalar fitness; +inf when the safety flag is set.
double fitness(const KpiVector& normalized, const Weights& w);

struct BaselineRow {
    model::Chromosome chromosome;
    KpiVector kpi;  // normalized fields filled once stats exist
};

struct Baseline {
    BaselineStats stats;
    std::vector<BaselineRow> rows;
};

// Random-search baseline: n_samples feasible chromosomes through the full
// pipeline (sample -> plan -> list schedule -> KPIs). Uniform selection is
// what zeroed fitness induces, so plain rejection sampling reproduces the
// protocol. Throws DEGENERATE_KPI when any component has zero variance or
// n_samples < 2.
Baseline build_baseline(const model::WorkcellSpec& spec, int n_samples, uint64_t seed);

// One full fitness evaluation (plan -> schedule -> KPIs -> normalize).
struct Evaluation {
    KpiVector kpi;
    double fitness = 0.0;
    double makespan = 0.0;
};

Evaluation evaluate(const model::WorkcellSpec& spec, const model::Chromosome& x,
                    const BaselineStats& stats, const Weights& w);

}  // namespace hrc::kpi
