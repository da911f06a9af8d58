#pragma once

#include <string>
#include <vector>

#include "hrc/model.hpp"
#include "hrc/rng.hpp"

namespace hrc::feas {

enum class Constraint { Eligibility, Collaboration, Cap, Bounds, Annulus, Overlap };

const char* constraint_name(Constraint c);

struct Violation {
    Constraint constraint;
    std::string detail;
};

struct ConstraintReport {
    bool ok = true;
    std::vector<Violation> violations;
};

// Evaluates all six leader constraint families for a chromosome.
// Throws on dimensional mismatch; everything else is reported, not thrown.
ConstraintReport check(const model::WorkcellSpec& spec, const model::Chromosome& x);

// Uniform feasible chromosome via rejection sampling. Allocation genes are
// drawn uniformly from S_i (collaborative ops are forced); layout genes are
// placed resource by resource, resampling each until its annulus and pairwise
// separation constraints hold. Throws INFEASIBLE_AFTER_MAX_TRIES when a
// resource exhausts max_tries attempts.
model::Chromosome sample(const model::WorkcellSpec& spec, Rng& rng, int max_tries);

}  // namespace hrc::feas
