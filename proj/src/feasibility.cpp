#include "hrc/feasibility.hpp"

#include <algorithm>

namespace hrc::feas {

const char* constraint_name(Constraint c) {
    switch (c) {
        case Constraint::Eligibility: return "ELIG";
        case Constraint::Collaboration: return "COLLAB";
        case Constraint::Cap: return "CAP";
        case Constraint::Bounds: return "BOUNDS";
        case Constraint::Annulus: return "ANNULUS";
        case Constraint::Overlap: return "OVERLAP";
    }
    return "?";
}

namespace {

void require_dims(const model::WorkcellSpec& spec, const model::Chromosome& x) {
    const auto dims = model::chromosome_dimensions(spec);
    if (static_cast<int>(x.layout.size()) != dims.z_bar)
        throw Error(ErrorCode::DimensionMismatch,
                    "chromosome layout size " + std::to_string(x.layout.size()) +
                        " != z_bar " + std::to_string(dims.z_bar));
    if (x.allocation.size() != spec.operations.size())
        throw Error(ErrorCode::DimensionMismatch, "chromosome allocation count != t");
    for (const auto& op : spec.operations)
        if (static_cast<int>(x.allocation[op.id].size()) != op.required)
            throw Error(ErrorCode::DimensionMismatch,
                        "operation " + op.name + ": allocation slot count != m_i");
}

std::vector<double> resource_coords(const model::WorkcellSpec& spec, ResourceId id,
                                    const model::Chromosome& x) {
    const model::Resource& r = spec.resources[id];
    if (!r.movable) return r.coords;
    const int off = spec.layout_offset[id];
    return std::vector<double>(x.layout.begin() + off, x.layout.begin() + off + r.dofs());
}

}  // namespace

ConstraintReport check(const model::WorkcellSpec& spec, const model::Chromosome& x) {
    require_dims(spec, x);
    ConstraintReport report;
    auto violate = [&](Constraint c, const std::string& detail) {
        report.ok = false;
        report.violations.push_back({c, detail});
    };

    // (3b) individual ops allocated inside S_i, (3c) collaborative ops forced.
    for (const auto& op : spec.operations) {
        const auto& eta = x.allocation[op.id];
        if (op.kind == model::OpKind::Individual) {
            if (std::find(op.eligible.begin(), op.eligible.end(), eta[0]) == op.eligible.end())
                violate(Constraint::Eligibility,
                        op.name + " allocated to incapable agent " + spec.agents[eta[0]].name);
        } else {
            for (size_t s = 0; s < eta.size(); ++s)
                if (eta[s] != op.eligible[s])
                    violate(Constraint::Collaboration,
                            op.name + " slot " + std::to_string(s) + " must be " +
                                spec.agents[op.eligible[s]].name);
        }
    }

    // (3d) per-agent cap over individual operations.
    std::vector<int> load(spec.num_agents(), 0);
    for (const auto& op : spec.operations)
        if (op.kind == model::OpKind::Individual) load[x.allocation[op.id][0]]++;
    for (int a = 0; a < spec.num_agents(); ++a)
        if (load[a] > spec.allocation_caps[a])
            violate(Constraint::Cap, spec.agents[a].name + " holds " + std::to_string(load[a]) +
                                         " ops, cap " + std::to_string(spec.allocation_caps[a]));

    // (3e) layout bounds.
    for (size_t k = 0; k < x.layout.size(); ++k)
        if (x.layout[k] < spec.bounds[k].lo || x.layout[k] > spec.bounds[k].hi)
            violate(Constraint::Bounds, "DoF " + std::to_string(k) + " outside its interval");

    // (3f) movable centroids inside every agent's annulus.
    for (int rid : spec.movable_resources) {
        const Vec2 p = model::resource_position(spec, rid, x);
        for (const auto& agent : spec.agents)
            if (!geom::in_annulus(p, agent.base, agent.d_min, agent.d_max))
                violate(Constraint::Annulus,
                        spec.resources[rid].name + " outside workspace of " + agent.name);
    }

    // (3g) pairwise separation; fixed-fixed pairs are a spec-load concern.
    std::vector<geom::WorldPolygon> polys(spec.resources.size());
    for (const auto& r : spec.resources)
        polys[r.id] = model::place(spec, r.id, resource_coords(spec, r.id, x));
    for (size_t s = 0; s < polys.size(); ++s) {
        for (size_t q = s + 1; q < polys.size(); ++q) {
            if (!spec.resources[s].movable && !spec.resources[q].movable) continue;
            if (!geom::separated(polys[s], polys[q]).separated)
                violate(Constraint::Overlap,
                        spec.resources[s].name + " overlaps " + spec.resources[q].name);
        }
    }

    return report;
}

model::Chromosome sample(const model::WorkcellSpec& spec, Rng& rng, int max_tries) {
    model::Chromosome x;
    const auto dims = model::chromosome_dimensions(spec);
    x.layout.assign(dims.z_bar, 0.0);

    // Sequential placement: each movable resource is resampled until it fits
    // against everything already placed (fixed resources included).
    std::vector<geom::WorldPolygon> placed;
    for (const auto& r : spec.resources)
        if (!r.movable) placed.push_back(model::place(spec, r.id, r.coords));

    for (int rid : spec.movable_resources) {
        const model::Resource& r = spec.resources[rid];
        const int off = spec.layout_offset[rid];
        bool ok = false;
        for (int attempt = 0; attempt < max_tries && !ok; ++attempt) {
            std::vector<double> coords(r.dofs());
            for (int d = 0; d < r.dofs(); ++d)
                coords[d] = rng.uniform(spec.bounds[off + d].lo, spec.bounds[off + d].hi);
            const Vec2 centroid{coords[0], coords[1]};
            ok = true;
            for (const auto& agent : spec.agents)
                ok = ok && geom::in_annulus(centroid, agent.base, agent.d_min, agent.d_max);
            if (!ok) continue;
            const geom::WorldPolygon poly = model::place(spec, rid, coords);
            for (const auto& other : placed) {
                if (!geom::separated(poly, other).separated) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                std::copy(coords.begin(), coords.end(), x.layout.begin() + off);
                placed.push_back(poly);
            }
        }
        if (!ok)
            throw Error(ErrorCode::InfeasibleAfterMaxTries,
                        "no feasible placement for " + r.name + " after " +
                            std::to_string(max_tries) + " tries");
    }

    // Allocation: uniform over S_i per operation, redrawn as a whole until
    // the per-agent caps of (3d) hold.
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        x.allocation.clear();
        std::vector<int> load(spec.num_agents(), 0);
        for (const auto& op : spec.operations) {
            if (op.kind == model::OpKind::Collaborative) {
                x.allocation.push_back(op.eligible);
            } else {
                const AgentId pick = op.eligible[rng.uniform_int(op.eligible.size())];
                ++load[pick];
                x.allocation.push_back({pick});
            }
        }
        bool ok = true;
        for (int a = 0; a < spec.num_agents(); ++a) ok = ok && load[a] <= spec.allocation_caps[a];
        if (ok) return x;
    }
    throw Error(ErrorCode::InfeasibleAfterMaxTries,
                "no cap-feasible allocation after " + std::to_string(max_tries) + " tries");
}

}  // namespace hrc::feas
