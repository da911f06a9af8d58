#include "hrc/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrc/kernels.hpp"

namespace hrc::sim {

namespace {

constexpr double kReachTol = 1e-9;

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) return distance(p, a);
    const double u = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
    return distance(p, a + ab * u);
}

// A robot TCP segment must stay inside the arm's reachable band
// [|l1-l2|, l1+l2]. The outer radius peaks at an endpoint; the inner one at
// the closest point of the segment to the base.
void require_reachable(const model::Agent& robot, const Vec2& from, const Vec2& to) {
    const double reach = robot.l1 + robot.l2;
    const double inner = std::abs(robot.l1 - robot.l2);
    const double r_from = distance(from, robot.base);
    const double r_to = distance(to, robot.base);
    if (r_from > reach + kReachTol || r_to > reach + kReachTol)
        throw Error(ErrorCode::Unreachable,
                    robot.name + ": waypoint beyond arm reach (r = " +
                        std::to_string(std::max(r_from, r_to)) + ", reach = " +
                        std::to_string(reach) + ")");
    if (inner > 0.0 && point_segment_distance(robot.base, from, to) < inner - kReachTol)
        throw Error(ErrorCode::Unreachable, robot.name + ": path crosses inner workspace limit");
}

// Appends the steps of one task recipe starting at `start`, consuming
// waypoints for travel primitives. Returns the completion time.
double build_steps(const model::Agent& agent, const std::vector<model::Primitive>& recipe,
                   const std::vector<Vec2>& waypoints, double start, Vec2& position,
                   std::vector<PrimitiveStep>& out) {
    double t = start;
    size_t next_waypoint = 0;
    for (model::Primitive prim : recipe) {
        PrimitiveStep step;
        step.kind = prim;
        step.actor = agent.id;
        step.from = position;
        step.start = t;
        if (model::is_travel_primitive(prim)) {
            step.to = waypoints.at(next_waypoint++);
            step.duration = agent.base_time(prim) + distance(step.from, step.to) / agent.speed;
        } else {
            step.to = position;
            step.duration = agent.base_time(prim);
        }
        if (agent.kind == model::AgentKind::Robot) require_reachable(agent, step.from, step.to);
        position = step.to;
        t += step.duration;
        out.push_back(step);
    }
    return t;
}

std::vector<Vec2> world_waypoints(const model::WorkcellSpec& spec,
                                  const std::vector<ResourceId>& resources,
                                  const model::Chromosome& x) {
    std::vector<Vec2> pts;
    pts.reserve(resources.size());
    for (ResourceId r : resources) pts.push_back(model::resource_position(spec, r, x));
    return pts;
}

}  // namespace

std::optional<Vec2> MotionTrace::position(AgentId agent, double t) const {
    const PrimitiveStep* last_ended = nullptr;
    for (const PrimitiveStep& step : steps) {
        if (step.actor != agent) continue;
        if (t < step.start) {
            // Before this step: engaged only if a previous step already ran.
            if (last_ended) return last_ended->to;
            return std::nullopt;
        }
        if (t <= step.start + step.duration) {
            if (step.duration <= 0.0) return step.to;
            const double u = (t - step.start) / step.duration;
            return step.from + (step.to - step.from) * u;
        }
        last_ended = &step;
    }
    return std::nullopt;  // past the agent's last step (or agent absent)
}

JointAngles planar_ik(const Vec2& tcp_relative, double l1, double l2) {
    const double r_sq = tcp_relative.norm_sq();
    double c2 = (r_sq - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    c2 = std::clamp(c2, -1.0, 1.0);
    JointAngles q;
    q.q2 = std::acos(c2);  // elbow-up: q2 in [0, pi]
    q.q1 = std::atan2(tcp_relative.y, tcp_relative.x) -
           std::atan2(l2 * std::sin(q.q2), l1 + l2 * c2);
    return q;
}

double manipulability(const Vec2& tcp_relative, double l1, double l2) {
    const JointAngles q = planar_ik(tcp_relative, l1, l2);
    return l1 * l2 * std::abs(std::sin(q.q2));
}

MotionTrace plan_operation(const model::WorkcellSpec& spec, const model::Operation& op,
                           const model::Chromosome& x) {
    MotionTrace trace;
    trace.op = op.id;
    const auto& eta = x.allocation[op.id];

    if (op.kind == model::OpKind::Individual) {
        const model::Agent& agent = spec.agents[eta[0]];
        const model::TaskSpec& task = spec.tasks[op.task];
        Vec2 position = agent.home();
        trace.tau = build_steps(agent, task.steps_for(agent.kind),
                                world_waypoints(spec, op.waypoints, x), 0.0, position,
                                trace.steps);
        return trace;
    }

    // Collaborative: sub-tasks at prescribed offsets (default: chained after
    // the previous one); each agent's working point carries over between its
    // own sub-tasks.
    std::vector<Vec2> agent_position(spec.num_agents());
    std::vector<bool> agent_started(spec.num_agents(), false);
    double previous_completion = 0.0;
    for (const model::CollabStep& cs : op.collab) {
        const model::Agent& agent = spec.agents[eta[cs.slot]];
        if (!agent_started[agent.id]) {
            agent_position[agent.id] = agent.home();
            agent_started[agent.id] = true;
        }
        const double start = cs.offset ? *cs.offset : previous_completion;
        const model::TaskSpec& task = spec.tasks[cs.task];
        previous_completion = build_steps(agent, task.steps_for(agent.kind),
                                          world_waypoints(spec, cs.waypoints, x), start,
                                          agent_position[agent.id], trace.steps);
        trace.tau = std::max(trace.tau, previous_completion);
    }
    std::stable_sort(trace.steps.begin(), trace.steps.end(),
                     [](const PrimitiveStep& a, const PrimitiveStep& b) {
                         return a.start < b.start;
                     });
    return trace;
}

PlanResult plan_all(const model::WorkcellSpec& spec, const model::Chromosome& x) {
    PlanResult result;
    result.tau.reserve(spec.operations.size());
    result.traces.reserve(spec.operations.size());
    for (const model::Operation& op : spec.operations) {
        result.traces.push_back(plan_operation(spec, op, x));
        result.tau.push_back(result.traces.back().tau);
    }
    return result;
}

namespace {

// Engaged window [first step start, last step end] of an agent in a trace.
std::optional<std::pair<double, double>> engaged_window(const MotionTrace& trace, AgentId agent) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const PrimitiveStep& s : trace.steps) {
        if (s.actor != agent) continue;
        lo = std::min(lo, s.start);
        hi = std::max(hi, s.start + s.duration);
    }
    if (hi < lo) return std::nullopt;
    return std::make_pair(lo, hi);
}

}  // namespace

std::vector<double> reach_distance_sq_samples(const MotionTrace& trace, const model::Agent& agent,
                                              double dt) {
    std::vector<double> out;
    const auto window = engaged_window(trace, agent.id);
    if (!window) return out;
    const long k_max = static_cast<long>(std::floor(trace.tau / dt + 1e-9));
    out.reserve(k_max + 1);
    for (long k = 0; k <= k_max; ++k) {
        const double t = k * dt;
        if (t < window->first || t > window->second) continue;
        if (const auto p = trace.position(agent.id, t)) out.push_back((*p - agent.base).norm_sq());
    }
    return out;
}

std::vector<double> manipulability_samples(const MotionTrace& trace, const model::Agent& agent,
                                           double dt) {
    std::vector<double> out;
    const auto window = engaged_window(trace, agent.id);
    if (!window) return out;
    const long k_max = static_cast<long>(std::floor(trace.tau / dt + 1e-9));
    out.reserve(k_max + 1);
    for (long k = 0; k <= k_max; ++k) {
        const double t = k * dt;
        if (t < window->first || t > window->second) continue;
        if (const auto p = trace.position(agent.id, t))
            out.push_back(manipulability(*p - agent.base, agent.l1, agent.l2));
    }
    return out;
}

bool collision_flag(const model::WorkcellSpec& spec, const model::Chromosome& x,
                    const sched::Schedule& schedule, const std::vector<MotionTrace>& traces) {
    const double dt = spec.surrogate.dt;
    const double d_safe_sq = spec.surrogate.d_safe * spec.surrogate.d_safe;
    const long k_max = static_cast<long>(std::floor(schedule.makespan / dt + 1e-9));

    // Per-agent scheduled windows, ordered by start. Agents never run two
    // operations at once, so lookup is a forward walk.
    struct Window {
        double start, end;
        const MotionTrace* trace;
    };
    std::vector<std::vector<Window>> windows(spec.num_agents());
    for (const model::Operation& op : spec.operations)
        for (AgentId k : x.allocation[op.id])
            windows[k].push_back(
                {schedule.sigma[op.id], schedule.completion[op.id], &traces[op.id]});
    for (auto& w : windows)
        std::sort(w.begin(), w.end(),
                  [](const Window& a, const Window& b) { return a.start < b.start; });

    // Sampled positions on the global grid; far-apart sentinels mark samples
    // where the agent is not executing, so the min-distance kernel ignores
    // them for free.
    auto sample_agent = [&](AgentId a, double sentinel, std::vector<double>& xs,
                            std::vector<double>& ys) {
        xs.assign(k_max + 1, sentinel);
        ys.assign(k_max + 1, sentinel);
        size_t w = 0;
        for (long k = 0; k <= k_max; ++k) {
            const double t = k * dt;
            while (w < windows[a].size() && t >= windows[a][w].end) ++w;
            if (w >= windows[a].size() || t < windows[a][w].start) continue;
            if (const auto p = windows[a][w].trace->position(a, t - windows[a][w].start)) {
                xs[k] = p->x;
                ys[k] = p->y;
            }
        }
    };

    const auto& kern = kernels::ops();
    std::vector<double> hx, hy, rx, ry;
    for (const model::Agent& human : spec.agents) {
        if (human.kind != model::AgentKind::Human) continue;
        sample_agent(human.id, 1e9, hx, hy);
        for (const model::Agent& robot : spec.agents) {
            if (robot.kind != model::AgentKind::Robot) continue;
            sample_agent(robot.id, -1e9, rx, ry);
            const double min_sq =
                kern.min_dist_sq(hx.data(), hy.data(), rx.data(), ry.data(), hx.size());
            if (min_sq < d_safe_sq) return true;
        }
    }
    return false;
}

}  // namespace hrc::sim
