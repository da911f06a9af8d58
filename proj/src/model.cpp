#include "hrc/model.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace hrc::model {

bool is_robot_primitive(Primitive p) {
    switch (p) {
        case Primitive::MoveTo:
        case Primitive::Overfly:
        case Primitive::Screwing:
        case Primitive::Open:
        case Primitive::Close:
            return true;
        default:
            return false;
    }
}

bool is_human_primitive(Primitive p) { return !is_robot_primitive(p); }

bool is_travel_primitive(Primitive p) {
    return p == Primitive::MoveTo || p == Primitive::Overfly || p == Primitive::Get ||
           p == Primitive::Put;
}

const char* primitive_name(Primitive p) {
    switch (p) {
        case Primitive::MoveTo: return "MoveTo";
        case Primitive::Overfly: return "Overfly";
        case Primitive::Screwing: return "Screwing";
        case Primitive::Open: return "Open";
        case Primitive::Close: return "Close";
        case Primitive::Get: return "Get";
        case Primitive::Put: return "Put";
        case Primitive::Pose: return "Pose";
        case Primitive::Wait: return "Wait";
    }
    return "?";
}

std::optional<Primitive> primitive_from_name(const std::string& name) {
    static const std::map<std::string, Primitive> table = {
        {"MoveTo", Primitive::MoveTo},   {"Overfly", Primitive::Overfly},
        {"Screwing", Primitive::Screwing}, {"Open", Primitive::Open},
        {"Close", Primitive::Close},     {"Get", Primitive::Get},
        {"Put", Primitive::Put},         {"Pose", Primitive::Pose},
        {"Wait", Primitive::Wait},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

Vec2 Agent::home() const {
    if (kind == AgentKind::Human) return base;
    return base + Vec2{0.5 * (d_min + d_max), 0.0};
}

double Agent::base_time(Primitive p) const {
    auto it = base_times.find(p);
    if (it == base_times.end())
        throw Error(ErrorCode::Internal,
                    name + ": no base time for primitive " + primitive_name(p));
    return it->second;
}

std::vector<int> PrecedenceGraph::topological_order() const {
    std::vector<int> indegree(count, 0);
    for (int j = 0; j < count; ++j) indegree[j] = static_cast<int>(predecessors[j].size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < count; ++i)
        if (indegree[i] == 0) ready.push(i);
    std::vector<int> order;
    order.reserve(count);
    while (!ready.empty()) {
        const int i = ready.top();
        ready.pop();
        order.push_back(i);
        for (int j : successors[i])
            if (--indegree[j] == 0) ready.push(j);
    }
    if (static_cast<int>(order.size()) != count) return {};
    return order;
}

PrecedenceGraph make_precedence(int count, const std::vector<std::pair<int, int>>& edges) {
    PrecedenceGraph g;
    g.count = count;
    g.matrix.assign(static_cast<size_t>(count) * count, 0);
    g.successors.assign(count, {});
    g.predecessors.assign(count, {});
    for (auto [i, j] : edges) {
        if (i < 0 || i >= count || j < 0 || j >= count)
            throw Error(ErrorCode::DimensionMismatch, "precedence edge out of range");
        if (g.matrix[i * count + j]) continue;
        g.matrix[i * count + j] = 1;
        g.successors[i].push_back(j);
        g.predecessors[j].push_back(i);
    }
    return g;
}

void WorkcellSpec::finalize() {
    movable_resources.clear();
    layout_offset.assign(resources.size(), -1);
    local_polygons.clear();
    int offset = 0;
    for (const Resource& r : resources) {
        local_polygons.push_back(geom::make_polygon(r.footprint));
        if (r.movable) {
            layout_offset[r.id] = offset;
            offset += r.dofs();
            movable_resources.push_back(r.id);
        }
    }
}

int WorkcellSpec::num_humans() const {
    int h = 0;
    for (const Agent& a : agents)
        if (a.kind == AgentKind::Human) ++h;
    return h;
}

int WorkcellSpec::num_individual_ops() const {
    int v = 0;
    for (const Operation& o : operations)
        if (o.kind == OpKind::Individual) ++v;
    return v;
}

ChromosomeDims chromosome_dimensions(const WorkcellSpec& spec) {
    ChromosomeDims d;
    for (int rid : spec.movable_resources) d.z_bar += spec.resources[rid].dofs();
    for (const Operation& o : spec.operations) d.m_bar += o.required;
    d.d_bar = d.z_bar + d.m_bar;
    return d;
}

namespace {

void add(std::vector<SpecDiagnostic>& out, const std::string& code, Severity sev,
         const std::string& msg) {
    out.push_back({code, sev, msg});
}

std::string opname(const WorkcellSpec& spec, int i) { return spec.operations[i].name; }

}  // namespace

std::vector<SpecDiagnostic> validate_spec(const WorkcellSpec& spec) {
    std::vector<SpecDiagnostic> diags;
    const int t = spec.num_operations();
    const int n = spec.num_agents();

    // Agent ordering and parameters: humans first, then robots.
    bool seen_robot = false;
    for (const Agent& a : spec.agents) {
        if (a.kind == AgentKind::Robot) seen_robot = true;
        else if (seen_robot)
            add(diags, "AGENT_ORDER", Severity::Error,
                "agent " + a.name + ": humans must precede robots");
        if (!(a.d_min >= 0.0 && a.d_min < a.d_max))
            add(diags, "BAD_ANNULUS", Severity::Error,
                "agent " + a.name + ": requires 0 <= d_min < d_max");
        if (!(a.speed > 0.0))
            add(diags, "BAD_SPEED", Severity::Error, "agent " + a.name + ": speed must be > 0");
        if (a.kind == AgentKind::Robot) {
            if (!(a.l1 > 0.0 && a.l2 > 0.0))
                add(diags, "BAD_LINKS", Severity::Error,
                    "agent " + a.name + ": link lengths must be > 0");
            else if (a.d_max > a.l1 + a.l2)
                add(diags, "WORKSPACE_EXCEEDS_REACH", Severity::Error,
                    "agent " + a.name + ": d_max exceeds arm reach l1+l2");
        }
        for (auto [p, secs] : a.base_times)
            if (secs < 0.0)
                add(diags, "BAD_BASE_TIME", Severity::Error,
                    "agent " + a.name + ": negative base time for " +
                        primitive_name(p));
    }

    // Capability matrix shape and the S_i <-> b_ji duality.
    if (spec.capability.agents != n || spec.capability.operations != t) {
        add(diags, "DIM_MISMATCH", Severity::Error, "capability matrix shape != n x t");
        return diags;
    }
    for (int i = 0; i < t; ++i) {
        bool any = false;
        for (int j = 0; j < n; ++j) any = any || spec.capability.capable(j, i);
        if (!any)
            add(diags, "NO_CAPABLE_AGENT", Severity::Error,
                "operation " + opname(spec, i) + ": no capable agent (empty S_i)");
    }
    for (int i = 0; i < t; ++i) {
        const Operation& op = spec.operations[i];
        std::set<AgentId> eligible(op.eligible.begin(), op.eligible.end());
        if (eligible.size() != op.eligible.size())
            add(diags, "DUPLICATE_ELIGIBLE", Severity::Error,
                "operation " + op.name + ": repeated agent in S_i");
        for (int j = 0; j < n; ++j) {
            const bool in_set = eligible.count(j) > 0;
            if (in_set != spec.capability.capable(j, i))
                add(diags, "CAPABILITY_MISMATCH", Severity::Error,
                    "operation " + op.name + ", agent " + spec.agents[j].name +
                        ": S_i disagrees with capability matrix");
        }
    }

    // Per-operation structure.
    for (const Operation& op : spec.operations) {
        if (op.eligible.empty()) continue;  // already reported
        if (op.kind == OpKind::Individual) {
            if (op.required != 1)
                add(diags, "BAD_REQUIRED_COUNT", Severity::Error,
                    "operation " + op.name + ": individual ops require exactly one agent");
            if (op.task < 0 || op.task >= static_cast<int>(spec.tasks.size())) {
                add(diags, "UNKNOWN_REFERENCE", Severity::Error,
                    "operation " + op.name + ": missing task");
                continue;
            }
            // Travel primitives consume waypoints one-for-one, for each agent
            // kind that may execute the op.
            const TaskSpec& task = spec.tasks[op.task];
            for (AgentId a : op.eligible) {
                const auto& steps = task.steps_for(spec.agents[a].kind);
                if (steps.empty()) {
                    add(diags, "EMPTY_RECIPE", Severity::Error,
                        "operation " + op.name + ": task " + task.name + " has no steps for " +
                            spec.agents[a].name);
                    continue;
                }
                int travels = 0;
                for (Primitive p : steps) travels += is_travel_primitive(p) ? 1 : 0;
                if (travels != static_cast<int>(op.waypoints.size()))
                    add(diags, "WAYPOINT_COUNT_MISMATCH", Severity::Error,
                        "operation " + op.name + ": " + std::to_string(op.waypoints.size()) +
                            " waypoints vs " + std::to_string(travels) + " travel steps");
            }
        } else {
            if (op.required < 2)
                add(diags, "BAD_REQUIRED_COUNT", Severity::Error,
                    "operation " + op.name + ": collaborative ops require >= 2 agents");
            if (op.collab.empty())
                add(diags, "COLLAB_SEQUENCE_MISSING", Severity::Error,
                    "operation " + op.name + ": collaborative op without a sub-task sequence");
            if (static_cast<int>(op.eligible.size()) != op.required)
                add(diags, "COLLAB_REQUIRED_MISMATCH", Severity::Error,
                    "operation " + op.name + ": |S_i| must equal m_i for collaborative ops");
            for (const CollabStep& cs : op.collab) {
                if (cs.slot < 0 || cs.slot >= op.required) {
                    add(diags, "BAD_COLLAB_SLOT", Severity::Error,
                        "operation " + op.name + ": sub-task slot out of range");
                    continue;
                }
                if (cs.task < 0 || cs.task >= static_cast<int>(spec.tasks.size())) {
                    add(diags, "UNKNOWN_REFERENCE", Severity::Error,
                        "operation " + op.name + ": sub-task references missing task");
                    continue;
                }
                if (cs.offset && *cs.offset < 0.0)
                    add(diags, "BAD_COLLAB_OFFSET", Severity::Error,
                        "operation " + op.name + ": negative sub-task offset");
                if (static_cast<size_t>(cs.slot) < op.eligible.size()) {
                    const Agent& actor = spec.agents[op.eligible[cs.slot]];
                    const auto& steps = spec.tasks[cs.task].steps_for(actor.kind);
                    int travels = 0;
                    for (Primitive p : steps) travels += is_travel_primitive(p) ? 1 : 0;
                    if (travels != static_cast<int>(cs.waypoints.size()))
                        add(diags, "WAYPOINT_COUNT_MISMATCH", Severity::Error,
                            "operation " + op.name + " sub-task " + spec.tasks[cs.task].name +
                                ": waypoint/travel count mismatch");
                }
            }
        }
        for (ResourceId r : op.waypoints)
            if (r < 0 || r >= spec.num_resources())
                add(diags, "UNKNOWN_REFERENCE", Severity::Error,
                    "operation " + op.name + ": waypoint resource out of range");
    }

    // Task recipes must stay within each catalog.
    for (const TaskSpec& task : spec.tasks) {
        for (Primitive p : task.robot_steps)
            if (!is_robot_primitive(p))
                add(diags, "BAD_RECIPE", Severity::Error,
                    "task " + task.name + ": " + primitive_name(p) + " is not a robot primitive");
        for (Primitive p : task.human_steps)
            if (!is_human_primitive(p))
                add(diags, "BAD_RECIPE", Severity::Error,
                    "task " + task.name + ": " + primitive_name(p) + " is not a human action");
    }

    // Precedence must be irreflexive and acyclic.
    if (spec.precedence.count != t) {
        add(diags, "DIM_MISMATCH", Severity::Error, "precedence matrix shape != t x t");
    } else {
        for (int i = 0; i < t; ++i)
            if (spec.precedence.precedes(i, i))
                add(diags, "CYCLIC_PRECEDENCE", Severity::Error,
                    "operation " + opname(spec, i) + " precedes itself");
        if (spec.precedence.topological_order().empty() && t > 0)
            add(diags, "CYCLIC_PRECEDENCE", Severity::Error, "precedence graph has a cycle");
    }

    // Resources.
    for (const Resource& r : spec.resources) {
        if (r.dofs() < 2)
            add(diags, "BAD_DOFS", Severity::Error,
                "resource " + r.name + ": needs at least centroid (x, y)");
        if (r.footprint.size() < 3 || !geom::is_convex_ccw(r.footprint))
            add(diags, "BAD_FOOTPRINT", Severity::Error,
                "resource " + r.name + ": footprint must be convex counter-clockwise, >= 3 vertices");
    }

    // Bounds cover exactly the movable DoFs.
    int z_bar = 0;
    for (int rid : spec.movable_resources) z_bar += spec.resources[rid].dofs();
    if (static_cast<int>(spec.bounds.size()) != z_bar)
        add(diags, "DIM_MISMATCH", Severity::Error,
            "bounds count " + std::to_string(spec.bounds.size()) + " != movable DoFs " +
                std::to_string(z_bar));
    for (const auto& b : spec.bounds)
        if (!(b.lo <= b.hi))
            add(diags, "BAD_BOUNDS", Severity::Error, "bound interval with lo > hi");

    if (static_cast<int>(spec.allocation_caps.size()) != n)
        add(diags, "DIM_MISMATCH", Severity::Error, "allocation caps count != n");

    if (spec.surrogate.dt <= 0.0)
        add(diags, "BAD_DT", Severity::Error, "surrogate dt must be > 0");

    // Fixed resources are placed once and for all; report (not fail) if they
    // sit outside an agent annulus or overlap each other.
    const auto fixed_ok = [&](const Resource& r) { return !r.movable && r.dofs() >= 2; };
    for (const Resource& r : spec.resources) {
        if (!fixed_ok(r)) continue;
        for (const Agent& a : spec.agents)
            if (!geom::in_annulus(r.centroid(), a.base, a.d_min, a.d_max))
                add(diags, "FIXED_OUTSIDE_ANNULUS", Severity::Warning,
                    "fixed resource " + r.name + " outside workspace of " + a.name);
    }
    for (size_t s = 0; s < spec.resources.size(); ++s) {
        for (size_t q = s + 1; q < spec.resources.size(); ++q) {
            const Resource& rs = spec.resources[s];
            const Resource& rq = spec.resources[q];
            if (!fixed_ok(rs) || !fixed_ok(rq)) continue;
            if (rs.footprint.size() < 3 || rq.footprint.size() < 3) continue;
            const auto ps = geom::translate(spec.local_polygons[s], rs.centroid());
            const auto pq = geom::translate(spec.local_polygons[q], rq.centroid());
            if (!geom::separated(ps, pq).separated)
                add(diags, "FIXED_OVERLAP", Severity::Warning,
                    "fixed resources " + rs.name + " and " + rq.name + " overlap");
        }
    }

    return diags;
}

geom::WorldPolygon place(const WorkcellSpec& spec, ResourceId id,
                         const std::vector<double>& coords) {
    const Resource& r = spec.resources[id];
    if (!r.movable) return geom::translate(spec.local_polygons[id], r.centroid());
    if (static_cast<int>(coords.size()) != r.dofs())
        throw Error(ErrorCode::DimensionMismatch,
                    "place: resource " + r.name + " expects " + std::to_string(r.dofs()) +
                        " coords, got " + std::to_string(coords.size()));
    return geom::translate(spec.local_polygons[id], {coords[0], coords[1]});
}

Vec2 resource_position(const WorkcellSpec& spec, ResourceId id, const Chromosome& x) {
    const Resource& r = spec.resources[id];
    if (!r.movable) return r.centroid();
    const int off = spec.layout_offset[id];
    return {x.layout[off], x.layout[off + 1]};
}

}  // namespace hrc::model
