#include "hrc/spec_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace hrc::io {

using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw Error(ErrorCode::ParseError, origin + ": " + msg);
}

double unit_scale(const std::string& unit, const std::string& origin) {
    if (unit == "m") return 1.0;
    if (unit == "cm") return 0.01;
    if (unit == "mm") return 0.001;
    fail(origin, "unknown length_unit '" + unit + "' (expected m, cm or mm)");
}

// Built-in defaults, stated in meters and converted to the file's unit.
struct Defaults {
    double mpu;  // meters per unit
    double len(double meters) const { return meters / mpu; }
};

std::map<model::Primitive, double> default_base_times(model::AgentKind kind) {
    using P = model::Primitive;
    if (kind == model::AgentKind::Robot)
        return {{P::MoveTo, 0.4}, {P::Overfly, 0.3}, {P::Screwing, 1.5},
                {P::Open, 0.5},   {P::Close, 0.5}};
    return {{P::Get, 0.5}, {P::Put, 0.6}, {P::Pose, 1.0}, {P::Wait, 0.5}};
}

Vec2 parse_vec2(const ordered_json& j, const std::string& origin, const std::string& what) {
    if (!j.is_array() || j.size() != 2) fail(origin, what + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<model::Primitive> parse_steps(const ordered_json& j, const std::string& origin,
                                          const std::string& what) {
    std::vector<model::Primitive> steps;
    for (const auto& s : j) {
        auto p = model::primitive_from_name(s.get<std::string>());
        if (!p) fail(origin, what + ": unknown primitive '" + s.get<std::string>() + "'");
        steps.push_back(*p);
    }
    return steps;
}

int lookup(const std::map<std::string, int>& table, const std::string& key,
           const std::string& origin, const std::string& what) {
    auto it = table.find(key);
    if (it == table.end()) fail(origin, what + ": unknown name '" + key + "'");
    return it->second;
}

}  // namespace

model::WorkcellSpec parse_spec(const std::string& text, const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(origin, e.what());
    }

    try {
        if (!j.contains("schema_version")) fail(origin, "missing schema_version");
        if (j["schema_version"].get<int>() != kSchemaVersion)
            throw Error(ErrorCode::UnsupportedSchema,
                        origin + ": unsupported schema_version " +
                            j["schema_version"].dump());

        model::WorkcellSpec spec;
        spec.schema_version = kSchemaVersion;
        spec.name = j.value("name", std::string("workcell"));
        spec.length_unit = j.value("length_unit", std::string("m"));
        spec.meters_per_unit = unit_scale(spec.length_unit, origin);
        const Defaults dflt{spec.meters_per_unit};

        std::map<std::string, int> agent_ids, resource_ids, task_ids, op_ids;

        for (const auto& ja : j.at("agents")) {
            model::Agent a;
            a.id = static_cast<int>(spec.agents.size());
            a.name = ja.at("name").get<std::string>();
            const std::string kind = ja.at("kind").get<std::string>();
            if (kind == "human") a.kind = model::AgentKind::Human;
            else if (kind == "robot") a.kind = model::AgentKind::Robot;
            else fail(origin, "agent " + a.name + ": kind must be human or robot");
            a.base = parse_vec2(ja.at("base"), origin, "agent " + a.name + " base");
            const auto& ws = ja.at("workspace");
            if (!ws.is_array() || ws.size() != 2)
                fail(origin, "agent " + a.name + ": workspace must be [d_min, d_max]");
            a.d_min = ws[0].get<double>();
            a.d_max = ws[1].get<double>();
            a.speed = ja.value("speed",
                               a.kind == model::AgentKind::Human ? dflt.len(1.0) : dflt.len(0.25));
            if (a.kind == model::AgentKind::Robot) {
                const auto& links = ja.at("links");
                if (!links.is_array() || links.size() != 2)
                    fail(origin, "agent " + a.name + ": links must be [l1, l2]");
                a.l1 = links[0].get<double>();
                a.l2 = links[1].get<double>();
            }
            a.base_times = default_base_times(a.kind);
            if (ja.contains("base_times")) {
                for (const auto& [key, val] : ja["base_times"].items()) {
                    auto p = model::primitive_from_name(key);
                    if (!p) fail(origin, "agent " + a.name + ": unknown primitive '" + key + "'");
                    a.base_times[*p] = val.get<double>();
                }
            }
            if (agent_ids.count(a.name)) fail(origin, "duplicate agent name " + a.name);
            agent_ids[a.name] = a.id;
            spec.agents.push_back(std::move(a));
        }

        for (const auto& jr : j.at("resources")) {
            model::Resource r;
            r.id = static_cast<int>(spec.resources.size());
            r.name = jr.at("name").get<std::string>();
            r.movable = jr.value("movable", true);
            for (const auto& v : jr.at("footprint"))
                r.footprint.push_back(parse_vec2(v, origin, "resource " + r.name + " footprint"));
            if (r.movable) {
                if (!jr.contains("bounds"))
                    fail(origin, "resource " + r.name + ": movable resources need bounds");
                for (const auto& b : jr["bounds"]) {
                    if (!b.is_array() || b.size() != 2)
                        fail(origin, "resource " + r.name + ": bound must be [lo, hi]");
                    spec.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
                    r.coords.push_back(0.5 * (b[0].get<double>() + b[1].get<double>()));
                }
                if (r.coords.size() < 2)
                    fail(origin, "resource " + r.name + ": needs at least 2 DoFs");
            } else {
                if (!jr.contains("coords"))
                    fail(origin, "resource " + r.name + ": fixed resources need coords");
                for (const auto& c : jr["coords"]) r.coords.push_back(c.get<double>());
            }
            if (resource_ids.count(r.name)) fail(origin, "duplicate resource name " + r.name);
            resource_ids[r.name] = r.id;
            spec.resources.push_back(std::move(r));
        }

        for (const auto& jt : j.at("tasks")) {
            model::TaskSpec task;
            task.id = static_cast<int>(spec.tasks.size());
            task.name = jt.at("name").get<std::string>();
            if (jt.contains("robot_steps"))
                task.robot_steps = parse_steps(jt["robot_steps"], origin, "task " + task.name);
            if (jt.contains("human_steps"))
                task.human_steps = parse_steps(jt["human_steps"], origin, "task " + task.name);
            if (task_ids.count(task.name)) fail(origin, "duplicate task name " + task.name);
            task_ids[task.name] = task.id;
            spec.tasks.push_back(std::move(task));
        }

        for (const auto& jo : j.at("operations")) {
            model::Operation op;
            op.id = static_cast<int>(spec.operations.size());
            op.name = jo.at("name").get<std::string>();
            const bool collaborative = jo.value("collaborative", false);
            op.kind = collaborative ? model::OpKind::Collaborative : model::OpKind::Individual;
            for (const auto& a : jo.at("capable"))
                op.eligible.push_back(
                    lookup(agent_ids, a.get<std::string>(), origin, "operation " + op.name));
            if (collaborative) {
                op.required = jo.value("required", static_cast<int>(op.eligible.size()));
                for (const auto& js : jo.at("sequence")) {
                    model::CollabStep cs;
                    cs.task = lookup(task_ids, js.at("task").get<std::string>(), origin,
                                     "operation " + op.name);
                    cs.slot = js.at("slot").get<int>();
                    for (const auto& w : js.value("waypoints", ordered_json::array()))
                        cs.waypoints.push_back(lookup(resource_ids, w.get<std::string>(), origin,
                                                      "operation " + op.name));
                    if (js.contains("offset")) cs.offset = js["offset"].get<double>();
                    op.collab.push_back(std::move(cs));
                }
            } else {
                op.required = 1;
                op.task = lookup(task_ids, jo.at("task").get<std::string>(), origin,
                                 "operation " + op.name);
                for (const auto& w : jo.value("waypoints", ordered_json::array()))
                    op.waypoints.push_back(
                        lookup(resource_ids, w.get<std::string>(), origin, "operation " + op.name));
            }
            if (op_ids.count(op.name)) fail(origin, "duplicate operation name " + op.name);
            op_ids[op.name] = op.id;
            spec.operations.push_back(std::move(op));
        }

        const int t = spec.num_operations();
        const int n = spec.num_agents();

        std::vector<std::pair<int, int>> edges;
        for (const auto& je : j.value("precedence", ordered_json::array())) {
            if (!je.is_array() || je.size() != 2) fail(origin, "precedence edge must be a pair");
            edges.emplace_back(lookup(op_ids, je[0].get<std::string>(), origin, "precedence"),
                               lookup(op_ids, je[1].get<std::string>(), origin, "precedence"));
        }
        spec.precedence = model::make_precedence(t, edges);

        spec.capability.agents = n;
        spec.capability.operations = t;
        spec.capability.entries.assign(static_cast<size_t>(n) * t, 1);
        for (const auto& op : spec.operations)
            for (AgentId a : op.eligible) spec.capability.entries[a * t + op.id] = 0;

        spec.allocation_caps.assign(n, spec.num_individual_ops());
        if (j.contains("allocation_caps"))
            for (const auto& [name, cap] : j["allocation_caps"].items())
                spec.allocation_caps[lookup(agent_ids, name, origin, "allocation_caps")] =
                    cap.get<int>();

        spec.surrogate.dt = 0.01;
        spec.surrogate.d_safe = dflt.len(0.2);
        spec.surrogate.reach_thresholds = {dflt.len(0.4), dflt.len(0.6), dflt.len(0.8)};
        if (j.contains("surrogate")) {
            const auto& js = j["surrogate"];
            spec.surrogate.dt = js.value("dt", spec.surrogate.dt);
            spec.surrogate.d_safe = js.value("d_safe", spec.surrogate.d_safe);
            if (js.contains("reach_thresholds")) {
                const auto& rt = js["reach_thresholds"];
                if (!rt.is_array() || rt.size() != 3)
                    fail(origin, "surrogate.reach_thresholds must have 3 entries");
                for (int i = 0; i < 3; ++i)
                    spec.surrogate.reach_thresholds[i] = rt[i].get<double>();
            }
        }

        spec.ga.sigma0 = dflt.len(0.1);
        if (j.contains("ga")) {
            const auto& jg = j["ga"];
            spec.ga.n_p = jg.value("n_p", spec.ga.n_p);
            spec.ga.n_c = jg.value("n_c", spec.ga.n_c);
            spec.ga.n_it = jg.value("n_it", spec.ga.n_it);
            spec.ga.mu0 = jg.value("mu0", spec.ga.mu0);
            spec.ga.sigma0 = jg.value("sigma0", spec.ga.sigma0);
            spec.ga.beta = jg.value("beta", spec.ga.beta);
            spec.ga.stagnation_threshold =
                jg.value("stagnation_threshold", spec.ga.stagnation_threshold);
            spec.ga.adapt_up = jg.value("adapt_up", spec.ga.adapt_up);
            spec.ga.adapt_down = jg.value("adapt_down", spec.ga.adapt_down);
            spec.ga.seed = jg.value("seed", spec.ga.seed);
            spec.ga.sample_max_tries = jg.value("sample_max_tries", spec.ga.sample_max_tries);
            spec.ga.max_child_attempts =
                jg.value("max_child_attempts", spec.ga.max_child_attempts);
            if (jg.contains("weights")) {
                const auto& w = jg["weights"];
                if (!w.is_array() || w.size() != 4) fail(origin, "ga.weights must have 4 entries");
                for (int i = 0; i < 4; ++i) spec.ga.weights[i] = w[i].get<double>();
            }
        }

        spec.finalize();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        fail(origin, e.what());
    }
}

model::WorkcellSpec load_spec(const std::string& path) {
    return parse_spec(read_file(path), path);
}

std::string serialize_spec(const model::WorkcellSpec& spec) {
    ordered_json j;
    j["schema_version"] = spec.schema_version;
    j["name"] = spec.name;
    j["length_unit"] = spec.length_unit;

    j["agents"] = ordered_json::array();
    for (const auto& a : spec.agents) {
        ordered_json ja;
        ja["name"] = a.name;
        ja["kind"] = a.kind == model::AgentKind::Human ? "human" : "robot";
        ja["base"] = {a.base.x, a.base.y};
        ja["workspace"] = {a.d_min, a.d_max};
        ja["speed"] = a.speed;
        if (a.kind == model::AgentKind::Robot) ja["links"] = {a.l1, a.l2};
        ordered_json bt;
        for (auto [p, secs] : a.base_times) bt[model::primitive_name(p)] = secs;
        ja["base_times"] = bt;
        j["agents"].push_back(ja);
    }

    j["resources"] = ordered_json::array();
    size_t bound_idx = 0;
    for (const auto& r : spec.resources) {
        ordered_json jr;
        jr["name"] = r.name;
        jr["movable"] = r.movable;
        if (r.movable) {
            ordered_json jb = ordered_json::array();
            for (int d = 0; d < r.dofs(); ++d, ++bound_idx)
                jb.push_back({spec.bounds[bound_idx].lo, spec.bounds[bound_idx].hi});
            jr["bounds"] = jb;
        } else {
            jr["coords"] = r.coords;
        }
        ordered_json jf = ordered_json::array();
        for (const auto& v : r.footprint) jf.push_back({v.x, v.y});
        jr["footprint"] = jf;
        j["resources"].push_back(jr);
    }

    j["tasks"] = ordered_json::array();
    for (const auto& task : spec.tasks) {
        ordered_json jt;
        jt["name"] = task.name;
        ordered_json rs = ordered_json::array(), hs = ordered_json::array();
        for (auto p : task.robot_steps) rs.push_back(model::primitive_name(p));
        for (auto p : task.human_steps) hs.push_back(model::primitive_name(p));
        jt["robot_steps"] = rs;
        jt["human_steps"] = hs;
        j["tasks"].push_back(jt);
    }

    j["operations"] = ordered_json::array();
    for (const auto& op : spec.operations) {
        ordered_json jo;
        jo["name"] = op.name;
        ordered_json cap = ordered_json::array();
        for (AgentId a : op.eligible) cap.push_back(spec.agents[a].name);
        if (op.kind == model::OpKind::Collaborative) {
            jo["collaborative"] = true;
            jo["capable"] = cap;
            jo["required"] = op.required;
            ordered_json seq = ordered_json::array();
            for (const auto& cs : op.collab) {
                ordered_json js;
                js["task"] = spec.tasks[cs.task].name;
                js["slot"] = cs.slot;
                ordered_json w = ordered_json::array();
                for (ResourceId r : cs.waypoints) w.push_back(spec.resources[r].name);
                js["waypoints"] = w;
                if (cs.offset) js["offset"] = *cs.offset;
                seq.push_back(js);
            }
            jo["sequence"] = seq;
        } else {
            jo["task"] = spec.tasks[op.task].name;
            jo["capable"] = cap;
            ordered_json w = ordered_json::array();
            for (ResourceId r : op.waypoints) w.push_back(spec.resources[r].name);
            jo["waypoints"] = w;
        }
        j["operations"].push_back(jo);
    }

    ordered_json edges = ordered_json::array();
    const int t = spec.num_operations();
    for (int i = 0; i < t; ++i)
        for (int k : spec.precedence.successors[i])
            edges.push_back({spec.operations[i].name, spec.operations[k].name});
    j["precedence"] = edges;

    ordered_json caps;
    for (int a = 0; a < spec.num_agents(); ++a)
        caps[spec.agents[a].name] = spec.allocation_caps[a];
    j["allocation_caps"] = caps;

    j["surrogate"] = {{"dt", spec.surrogate.dt},
                      {"d_safe", spec.surrogate.d_safe},
                      {"reach_thresholds", spec.surrogate.reach_thresholds}};
    j["ga"] = {{"n_p", spec.ga.n_p},
               {"n_c", spec.ga.n_c},
               {"n_it", spec.ga.n_it},
               {"mu0", spec.ga.mu0},
               {"sigma0", spec.ga.sigma0},
               {"beta", spec.ga.beta},
               {"stagnation_threshold", spec.ga.stagnation_threshold},
               {"adapt_up", spec.ga.adapt_up},
               {"adapt_down", spec.ga.adapt_down},
               {"weights", spec.ga.weights},
               {"seed", spec.ga.seed},
               {"sample_max_tries", spec.ga.sample_max_tries},
               {"max_child_attempts", spec.ga.max_child_attempts}};

    return j.dump(2) + "\n";
}

void save_spec(const model::WorkcellSpec& spec, const std::string& path) {
    write_file_atomic(path, serialize_spec(spec));
}

model::Chromosome load_chromosome(const std::string& path, const model::WorkcellSpec& spec) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        fail(path, e.what());
    }
    try {
        if (j.value("schema_version", 1) != kSchemaVersion)
            throw Error(ErrorCode::UnsupportedSchema, path + ": unsupported schema_version");
        std::map<std::string, int> agent_ids;
        for (const auto& a : spec.agents) agent_ids[a.name] = a.id;
        model::Chromosome x;
        for (const auto& v : j.at("layout")) x.layout.push_back(v.get<double>());
        for (const auto& slot : j.at("allocation")) {
            std::vector<AgentId> eta;
            for (const auto& a : slot)
                eta.push_back(lookup(agent_ids, a.get<std::string>(), path, "allocation"));
            x.allocation.push_back(std::move(eta));
        }
        return x;
    } catch (const nlohmann::json::exception& e) {
        fail(path, e.what());
    }
}

std::string serialize_chromosome(const model::Chromosome& x, const model::WorkcellSpec& spec) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["spec"] = spec.name;
    j["layout"] = x.layout;
    ordered_json alloc = ordered_json::array();
    for (const auto& eta : x.allocation) {
        ordered_json slot = ordered_json::array();
        for (AgentId a : eta) slot.push_back(spec.agents[a].name);
        alloc.push_back(slot);
    }
    j["allocation"] = alloc;
    return j.dump(2) + "\n";
}

void save_chromosome(const model::Chromosome& x, const model::WorkcellSpec& spec,
                     const std::string& path) {
    write_file_atomic(path, serialize_chromosome(x, spec));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out << content;
        if (!out.good()) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace hrc::io
