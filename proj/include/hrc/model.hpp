#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrc/geometry.hpp"
#include "hrc/types.hpp"

namespace hrc::model {

// Primitive vocabulary of the static planner. Robots use the first five,
// humans the last four. A primitive either travels between waypoints or is
// executed in place.
enum class Primitive { MoveTo, Overfly, Screwing, Open, Close, Get, Put, Pose, Wait };

bool is_robot_primitive(Primitive p);
bool is_human_primitive(Primitive p);
bool is_travel_primitive(Primitive p);
const char* primitive_name(Primitive p);
std::optional<Primitive> primitive_from_name(const std::string& name);

enum class AgentKind { Human, Robot };
enum class OpKind { Individual, Collaborative };

struct Agent {
    AgentId id = 0;
    std::string name;
    AgentKind kind = AgentKind::Human;
    Vec2 base;              // fixed base position
    double d_min = 0.0;     // workspace annulus, inner radius
    double d_max = 0.0;     // outer radius
    double speed = 0.0;     // linear working-point speed, length-unit/s
    double l1 = 0.0;        // planar arm link lengths (robots)
    double l2 = 0.0;
    std::map<Primitive, double> base_times;  // seconds per primitive

    // Nominal working point when idle: humans stand at the base, a robot
    // parks its TCP mid-annulus along +x.
    Vec2 home() const;
    double base_time(Primitive p) const;
};

struct Resource {
    ResourceId id = 0;
    std::string name;
    bool movable = true;
    std::vector<double> coords;        // z_i entries; first two are the centroid
    std::vector<Vec2> footprint;       // convex CCW polygon, local frame

    int dofs() const { return static_cast<int>(coords.size()); }
    Vec2 centroid() const { return {coords[0], coords[1]}; }
};

// Recipe for instantiating an operation's task on either agent kind.
struct TaskSpec {
    TaskId id = 0;
    std::string name;
    std::vector<Primitive> robot_steps;
    std::vector<Primitive> human_steps;

    const std::vector<Primitive>& steps_for(AgentKind kind) const {
        return kind == AgentKind::Robot ? robot_steps : human_steps;
    }
};

// One entry of a collaborative operation's prescribed internal sequence.
struct CollabStep {
    TaskId task = 0;
    int slot = 0;                        // index into the operation's agent vector
    std::vector<ResourceId> waypoints;   // resources touched, in order
    std::optional<double> offset;        // start offset within the operation (s);
                                         // absent = chain after the previous sub-task
};

struct Operation {
    OperationId id = 0;
    std::string name;
    OpKind kind = OpKind::Individual;
    int required = 1;                    // m_i
    TaskId task = -1;                    // individual ops only
    std::vector<AgentId> eligible;       // S_i, ordered
    std::vector<ResourceId> waypoints;   // individual ops only
    std::vector<CollabStep> collab;      // collaborative ops only
};

// n x t binary matrix; 0 = capable, 1 = not capable.
struct CapabilityMatrix {
    int agents = 0;
    int operations = 0;
    std::vector<uint8_t> entries;  // row-major, entries[j*operations + i]

    uint8_t at(AgentId agent, OperationId op) const { return entries[agent * operations + op]; }
    bool capable(AgentId agent, OperationId op) const { return at(agent, op) == 0; }
};

struct PrecedenceGraph {
    int count = 0;
    std::vector<uint8_t> matrix;              // row-major t x t, P[i*t+j]=1: i before j
    std::vector<std::vector<int>> successors;
    std::vector<std::vector<int>> predecessors;

    bool precedes(OperationId i, OperationId j) const { return matrix[i * count + j] != 0; }
    // Topological order, or empty when the graph has a cycle.
    std::vector<int> topological_order() const;
};

PrecedenceGraph make_precedence(int count, const std::vector<std::pair<int, int>>& edges);

struct SurrogateParams {
    double dt = 0.01;                              // trace discretization step, s
    double d_safe = 0.0;                           // human-robot keep-out radius
    std::array<double, 3> reach_thresholds{};      // posture class bands, length units
};

struct GaParams {
    int n_p = 4;
    int n_c = 6;
    int n_it = 20;
    double mu0 = 0.25;
    double sigma0 = 0.0;            // layout mutation step, length units
    double beta = 1.0;              // Boltzmann temperature
    int stagnation_threshold = 2;   // iterations before adaptation kicks in
    double adapt_up = 1.05;
    double adapt_down = 0.95;
    std::array<double, 4> weights{0.5, 0.3, 0.1, 0.1};
    uint64_t seed = 1;
    int sample_max_tries = 10000;
    int max_child_attempts = 100000;
    int jobs = 1;
};

struct WorkcellSpec {
    int schema_version = 1;
    std::string name;
    std::string length_unit = "m";
    double meters_per_unit = 1.0;

    std::vector<Agent> agents;
    std::vector<Resource> resources;
    std::vector<TaskSpec> tasks;
    std::vector<Operation> operations;
    PrecedenceGraph precedence;
    CapabilityMatrix capability;
    std::vector<geom::Interval> bounds;   // one interval per movable DoF, in chromosome order
    std::vector<int> allocation_caps;     // k_j per agent
    SurrogateParams surrogate;
    GaParams ga;

    // Derived, filled by finalize().
    std::vector<int> movable_resources;      // resource ids, in chromosome order
    std::vector<int> layout_offset;          // per resource: offset into the layout vector, -1 if fixed
    std::vector<geom::WorldPolygon> local_polygons;  // per resource, local frame

    void finalize();

    int num_operations() const { return static_cast<int>(operations.size()); }
    int num_agents() const { return static_cast<int>(agents.size()); }
    int num_resources() const { return static_cast<int>(resources.size()); }
    int num_humans() const;
    int num_individual_ops() const;
};

struct Chromosome {
    std::vector<double> layout;                 // xi, movable DoFs concatenated
    std::vector<std::vector<AgentId>> allocation;  // eta_i per operation

    bool operator==(const Chromosome& o) const = default;
};

struct ChromosomeDims {
    int z_bar = 0;  // layout genes
    int m_bar = 0;  // allocation slots
    int d_bar = 0;  // total
};

ChromosomeDims chromosome_dimensions(const WorkcellSpec& spec);

enum class Severity { Error, Warning };

struct SpecDiagnostic {
    std::string code;
    Severity severity = Severity::Error;
    std::string message;
};

// Checks every structural invariant of the spec. Fixed-resource placement
// problems (annulus/overlap) are reported as warnings, not errors.
std::vector<SpecDiagnostic> validate_spec(const WorkcellSpec& spec);

// World-frame footprint of a resource. Movable resources take their centroid
// from `coords`; fixed resources use their stored coordinates regardless.
geom::WorldPolygon place(const WorkcellSpec& spec, ResourceId id,
                         const std::vector<double>& coords);

// World centroid of resource `id` under chromosome layout `x`.
Vec2 resource_position(const WorkcellSpec& spec, ResourceId id, const Chromosome& x);

}  // namespace hrc::model
