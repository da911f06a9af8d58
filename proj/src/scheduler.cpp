#include "hrc/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrc::sched {

namespace {

void require_inputs(const model::WorkcellSpec& spec,
                    const std::vector<std::vector<AgentId>>& allocation, const CycleTimes& tau) {
    const size_t t = spec.operations.size();
    if (allocation.size() != t || tau.size() != t)
        throw Error(ErrorCode::DimensionMismatch, "scheduler: allocation/tau size != t");
}

// Serial schedule generation: dispatch `order`, starting each operation at
// the exact max of predecessor completions and agent availability (Eq.-tight,
// no idle insertion).
Schedule generate(const model::WorkcellSpec& spec,
                  const std::vector<std::vector<AgentId>>& allocation, const CycleTimes& tau,
                  const std::vector<int>& order) {
    const int t = spec.num_operations();
    Schedule s;
    s.sigma.assign(t, 0.0);
    s.completion.assign(t, 0.0);
    s.agent_available.assign(spec.num_agents(), 0.0);
    for (int j : order) {
        double start = 0.0;
        for (int i : spec.precedence.predecessors[j]) start = std::max(start, s.completion[i]);
        for (AgentId k : allocation[j]) start = std::max(start, s.agent_available[k]);
        s.sigma[j] = start;
        s.completion[j] = start + tau[j];
        for (AgentId k : allocation[j]) s.agent_available[k] = s.completion[j];
        s.makespan = std::max(s.makespan, s.completion[j]);
    }
    return s;
}

}  // namespace

std::vector<double> critical_path_lengths(const model::WorkcellSpec& spec, const CycleTimes& tau) {
    const auto order = spec.precedence.topological_order();
    if (order.empty() && spec.num_operations() > 0)
        throw Error(ErrorCode::Internal, "scheduler: cyclic precedence graph");
    std::vector<double> cp(spec.num_operations(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int i = *it;
        double tail = 0.0;
        for (int j : spec.precedence.successors[i]) tail = std::max(tail, cp[j]);
        cp[i] = tau[i] + tail;
    }
    return cp;
}

Schedule schedule_list(const model::WorkcellSpec& spec,
                       const std::vector<std::vector<AgentId>>& allocation,
                       const CycleTimes& tau) {
    require_inputs(spec, allocation, tau);
    const int t = spec.num_operations();
    const auto cp = critical_path_lengths(spec, tau);

    std::vector<int> remaining_preds(t, 0);
    for (int j = 0; j < t; ++j)
        remaining_preds[j] = static_cast<int>(spec.precedence.predecessors[j].size());

    std::vector<int> order;
    order.reserve(t);
    std::vector<bool> scheduled(t, false);
    for (int step = 0; step < t; ++step) {
        int pick = -1;
        for (int j = 0; j < t; ++j) {
            if (scheduled[j] || remaining_preds[j] > 0) continue;
            if (pick < 0 || cp[j] > cp[pick]) pick = j;  // ties keep the lower index
        }
        if (pick < 0) throw Error(ErrorCode::Internal, "scheduler: cycle detected at dispatch");
        scheduled[pick] = true;
        order.push_back(pick);
        for (int j : spec.precedence.successors[pick]) --remaining_preds[j];
    }
    return generate(spec, allocation, tau, order);
}

namespace {

struct BnbContext {
    const model::WorkcellSpec& spec;
    const std::vector<std::vector<AgentId>>& allocation;
    const CycleTimes& tau;
    std::vector<double> cp;
    double best_makespan = std::numeric_limits<double>::infinity();
    std::vector<int> best_order{};
    std::vector<int> order{};
};

void bnb(BnbContext& ctx, std::vector<int>& remaining_preds, std::vector<bool>& scheduled,
         std::vector<double>& completion, std::vector<double>& agent_available,
         std::vector<double>& agent_remaining, double current_max, int depth) {
    const int t = ctx.spec.num_operations();
    if (depth == t) {
        if (current_max < ctx.best_makespan) {
            ctx.best_makespan = current_max;
            ctx.best_order = ctx.order;
        }
        return;
    }

    // Lower bounds: finished work so far, per-agent remaining load, and the
    // critical path hanging off any ready operation.
    double lb = current_max;
    for (int k = 0; k < ctx.spec.num_agents(); ++k)
        lb = std::max(lb, agent_available[k] + agent_remaining[k]);
    for (int j = 0; j < t; ++j) {
        if (scheduled[j] || remaining_preds[j] > 0) continue;
        double est = 0.0;
        for (AgentId k : ctx.allocation[j]) est = std::max(est, agent_available[k]);
        lb = std::max(lb, est + ctx.cp[j]);
    }
    if (lb >= ctx.best_makespan) return;

    for (int j = 0; j < t; ++j) {
        if (scheduled[j] || remaining_preds[j] > 0) continue;
        double start = 0.0;
        for (int i : ctx.spec.precedence.predecessors[j]) start = std::max(start, completion[i]);
        for (AgentId k : ctx.allocation[j]) start = std::max(start, agent_available[k]);
        const double finish = start + ctx.tau[j];

        scheduled[j] = true;
        ctx.order.push_back(j);
        completion[j] = finish;
        std::vector<double> saved_avail, saved_remaining;
        for (AgentId k : ctx.allocation[j]) {
            saved_avail.push_back(agent_available[k]);
            saved_remaining.push_back(agent_remaining[k]);
            agent_available[k] = finish;
            agent_remaining[k] -= ctx.tau[j];
        }
        for (int s : ctx.spec.precedence.successors[j]) --remaining_preds[s];

        bnb(ctx, remaining_preds, scheduled, completion, agent_available, agent_remaining,
            std::max(current_max, finish), depth + 1);

        for (int s : ctx.spec.precedence.successors[j]) ++remaining_preds[s];
        for (size_t q = 0; q < ctx.allocation[j].size(); ++q) {
            agent_available[ctx.allocation[j][q]] = saved_avail[q];
            agent_remaining[ctx.allocation[j][q]] = saved_remaining[q];
        }
        completion[j] = 0.0;
        ctx.order.pop_back();
        scheduled[j] = false;
    }
}

}  // namespace

Schedule schedule_exact(const model::WorkcellSpec& spec,
                        const std::vector<std::vector<AgentId>>& allocation, const CycleTimes& tau,
                        int max_ops) {
    require_inputs(spec, allocation, tau);
    const int t = spec.num_operations();
    if (t > max_ops)
        throw Error(ErrorCode::TooLarge, "schedule_exact: t = " + std::to_string(t) +
                                             " exceeds max_ops = " + std::to_string(max_ops));

    BnbContext ctx{spec, allocation, tau, critical_path_lengths(spec, tau)};
    // Seed the incumbent with the list schedule; the search can only improve it.
    const Schedule seed = schedule_list(spec, allocation, tau);
    ctx.best_makespan = seed.makespan;

    std::vector<int> remaining_preds(t, 0);
    for (int j = 0; j < t; ++j)
        remaining_preds[j] = static_cast<int>(spec.precedence.predecessors[j].size());
    std::vector<bool> scheduled(t, false);
    std::vector<double> completion(t, 0.0);
    std::vector<double> agent_available(spec.num_agents(), 0.0);
    std::vector<double> agent_remaining(spec.num_agents(), 0.0);
    for (int j = 0; j < t; ++j)
        for (AgentId k : allocation[j]) agent_remaining[k] += tau[j];

    bnb(ctx, remaining_preds, scheduled, completion, agent_available, agent_remaining, 0.0, 0);

    if (ctx.best_order.empty()) return seed;  // list schedule was already optimal
    Schedule s = generate(spec, allocation, tau, ctx.best_order);
    return s.makespan <= seed.makespan ? s : seed;
}

GanttTable gantt(const Schedule& schedule, const std::vector<std::vector<AgentId>>& allocation,
                 const model::WorkcellSpec& spec) {
    GanttTable table;
    table.rows.assign(spec.num_agents(), {});
    for (int i = 0; i < spec.num_operations(); ++i)
        for (AgentId k : allocation[i])
            table.rows[k].push_back({i, schedule.sigma[i], schedule.completion[i]});
    for (auto& row : table.rows)
        std::sort(row.begin(), row.end(), [](const GanttBar& a, const GanttBar& b) {
            return a.start < b.start || (a.start == b.start && a.op < b.op);
        });
    return table;
}

std::string feasibility_violation(const model::WorkcellSpec& spec,
                                  const std::vector<std::vector<AgentId>>& allocation,
                                  const CycleTimes& tau, const Schedule& s) {
    const int t = spec.num_operations();
    for (int i = 0; i < t; ++i) {
        if (s.sigma[i] < 0.0) return "negative start for op " + std::to_string(i + 1);
        if (std::abs(s.completion[i] - (s.sigma[i] + tau[i])) > 1e-9)
            return "completion != sigma + tau for op " + std::to_string(i + 1);
        for (int j : spec.precedence.successors[i])
            if (s.sigma[j] < s.completion[i] - 1e-9)
                return "op " + std::to_string(j + 1) + " starts before predecessor " +
                       std::to_string(i + 1) + " completes";
    }
    const GanttTable table = gantt(s, allocation, spec);
    for (int k = 0; k < spec.num_agents(); ++k) {
        const auto& row = table.rows[k];
        for (size_t b = 1; b < row.size(); ++b)
            if (row[b].start < row[b - 1].end - 1e-9)
                return "agent " + spec.agents[k].name + " executes two ops in overlapping windows";
    }
    return "";
}

}  // namespace hrc::sched
