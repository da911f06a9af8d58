#pragma once

#include <string>
#include <vector>

#include "hrc/model.hpp"

namespace hrc::sched {

using CycleTimes = std::vector<double>;  // tau, seconds per operation

struct Schedule {
    std::vector<double> sigma;       // start times
    std::vector<double> completion;  // c_i = sigma_i + tau_i
    double makespan = 0.0;
    std::vector<double> agent_available;  // final R_k per agent
};

// Greedy list schedule: among precedence-ready operations, always dispatch
// the one with the longest remaining critical path (ties: lower index), at
// the earliest start allowed by predecessors and agent availability.
Schedule schedule_list(const model::WorkcellSpec& spec,
                       const std::vector<std::vector<AgentId>>& allocation,
                       const CycleTimes& tau);

// Minimal-makespan schedule via branch-and-bound over dispatch orders.
// Throws TOO_LARGE when t exceeds max_ops.
Schedule schedule_exact(const model::WorkcellSpec& spec,
                        const std::vector<std::vector<AgentId>>& allocation,
                        const CycleTimes& tau, int max_ops = 12);

struct GanttBar {
    OperationId op;
    double start;
    double end;
};

struct GanttTable {
    // One row per agent; bars sorted by start. Collaborative operations
    // appear on every allocated agent's row.
    std::vector<std::vector<GanttBar>> rows;
};

GanttTable gantt(const Schedule& schedule, const std::vector<std::vector<AgentId>>& allocation,
                 const model::WorkcellSpec& spec);

// Longest remaining critical path per operation (tau_i plus the heaviest
// successor chain); the list scheduler's priority key.
std::vector<double> critical_path_lengths(const model::WorkcellSpec& spec, const CycleTimes& tau);

// Asserts Eq.-level feasibility of a schedule (start nonnegativity,
// precedence, no per-agent overlap). Returns an empty string when feasible,
// else a description of the first violation.
std::string feasibility_violation(const model::WorkcellSpec& spec,
                                  const std::vector<std::vector<AgentId>>& allocation,
                                  const CycleTimes& tau, const Schedule& s);

}  // namespace hrc::sched
