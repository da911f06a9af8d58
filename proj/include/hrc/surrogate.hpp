#pragma once

#include <optional>
#include <vector>

#include "hrc/model.hpp"
#include "hrc/scheduler.hpp"

namespace hrc::sim {

struct PrimitiveStep {
    model::Primitive kind;
    AgentId actor;
    Vec2 from;
    Vec2 to;
    double start = 0.0;     // relative to operation start, s
    double duration = 0.0;  // base time plus travel time
};

// Deterministic plan of one operation: its primitive steps and cycle time.
// The working point moves linearly from `from` to `to` across each step.
struct MotionTrace {
    OperationId op = 0;
    double tau = 0.0;
    std::vector<PrimitiveStep> steps;

    // Working point of `agent` at op-relative time t, or nullopt when the
    // agent is not engaged (before its first, after its last step). Gaps
    // between an agent's steps hold the previous end position.
    std::optional<Vec2> position(AgentId agent, double t) const;
};

// Planar two-link joint angles, elbow-up branch.
struct JointAngles {
    double q1 = 0.0;
    double q2 = 0.0;
};
JointAngles planar_ik(const Vec2& tcp_relative, double l1, double l2);

// |det J| = l1*l2*|sin q2| of the arm at a TCP point relative to its base.
double manipulability(const Vec2& tcp_relative, double l1, double l2);

// Plans one operation under allocation x: primitive sequence per the task
// recipe, travel durations = base + distance/speed. Collaborative operations
// chain sub-tasks serially unless an explicit offset is prescribed, and tau
// is the compound completion time. Throws UNREACHABLE when a robot segment
// leaves its arm's reachable band.
MotionTrace plan_operation(const model::WorkcellSpec& spec, const model::Operation& op,
                           const model::Chromosome& x);

struct PlanResult {
    sched::CycleTimes tau;
    std::vector<MotionTrace> traces;
};

PlanResult plan_all(const model::WorkcellSpec& spec, const model::Chromosome& x);

// Squared reach distances from the agent's base, sampled at dt while the
// agent is engaged in the operation.
std::vector<double> reach_distance_sq_samples(const MotionTrace& trace, const model::Agent& agent,
                                              double dt);

// |det J| samples for a robot agent over its engaged windows.
std::vector<double> manipulability_samples(const MotionTrace& trace, const model::Agent& agent,
                                           double dt);

// True when any concurrently executing human/robot pair comes within d_safe
// at some dt sample of the scheduled timeline.
bool collision_flag(const model::WorkcellSpec& spec, const model::Chromosome& x,
                    const sched::Schedule& schedule, const std::vector<MotionTrace>& traces);

}  // namespace hrc::sim
