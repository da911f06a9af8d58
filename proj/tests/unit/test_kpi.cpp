#include <doctest.h>

#include <cmath>
#include <limits>

#include "hrc/feasibility.hpp"
#include "hrc/kpi.hpp"
#include "hrc/spec_io.hpp"
#include "support/toy.hpp"

using namespace hrc;
using namespace testing_support;

namespace {

const model::WorkcellSpec& estop() {
    static const model::WorkcellSpec spec = io::load_spec(HRC_FIXTURE);
    return spec;
}

kpi::KpiVector evaluate_raw(const model::WorkcellSpec& spec, const model::Chromosome& x) {
    const auto plan = sim::plan_all(spec, x);
    const auto schedule = sched::schedule_list(spec, x.allocation, plan.tau);
    return kpi::compute_raw(spec, x, schedule, plan.traces);
}

}  // namespace

TEST_CASE("stationary robot at a right-angle elbow gives F_m = 4") {
    // robot holds at a point with q2 = pi/2 (r^2 = l1^2 + l2^2 = 0.5)
    ToyBuilder b;
    const int r = b.add_robot({0, 0}, 0.25, 0.5, 0.5, 0.05, 0.95);
    const double reach = std::sqrt(0.5);
    b.add_fixed({reach, 0.0});
    b.add_task("dwell", {model::Primitive::MoveTo, model::Primitive::Screwing},
               {model::Primitive::Get, model::Primitive::Pose});
    b.add_op(0, {r}, {0});
    auto spec = b.build();
    // park the TCP home at the same radius so every sample sits at q2 = pi/2
    spec.agents[0].d_min = reach - 1e-9;
    spec.agents[0].d_max = reach + 1e-9;
    spec.finalize();
    model::Chromosome x;
    x.allocation = {{r}};
    const auto k = evaluate_raw(spec, x);
    CHECK(k.raw[kpi::kInvManipulability] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("surface is the bounding box of movable footprints") {
    ToyBuilder b;
    const int h = b.add_human({0, 0}, 1.0, 0.0, 10.0);
    b.add_movable({-5, 5}, {-5, 5}, 0.25);  // 0.5 x 0.5 footprint
    b.add_movable({-5, 5}, {-5, 5}, 0.25);
    const int t = b.add_task("wait", {}, {model::Primitive::Wait});
    b.add_op(t, {h}, {});
    const auto spec = b.build();
    model::Chromosome x;
    // touching the sides of a 1 m x 0.5 m rectangle
    x.layout = {-0.25, 0.0, 0.25, 0.0};
    x.allocation = {{h}};
    const auto k = evaluate_raw(spec, x);
    CHECK(k.raw[kpi::kSurface] == doctest::Approx(0.5));
}

TEST_CASE("human never reaching past the first band scores class 1") {
    ToyBuilder b;
    const int h = b.add_human({0, 0}, 1.0, 0.0, 10.0);
    b.add_fixed({0.2, 0.0});
    b.add_fixed({0.0, 0.2});
    b.add_task("fetch", {}, {model::Primitive::Get, model::Primitive::Put});
    b.add_op(0, {h}, {0, 1});
    const auto spec = b.build();
    model::Chromosome x;
    x.allocation = {{h}};
    const auto k = evaluate_raw(spec, x);
    CHECK(k.raw[kpi::kErgonomics] == doctest::Approx(1.0));
}

TEST_CASE("ergonomics stays in 1..4 and F_m stays positive on the fixture") {
    const auto& spec = estop();
    Rng rng = Rng::master(55).substream(rng_purpose::kBaseline);
    for (int i = 0; i < 50; ++i) {
        const auto x = feas::sample(spec, rng, 10000);
        const auto k = evaluate_raw(spec, x);
        CHECK(k.raw[kpi::kErgonomics] >= 1.0);
        CHECK(k.raw[kpi::kErgonomics] <= 4.0);
        CHECK(k.raw[kpi::kErgonomics] == std::floor(k.raw[kpi::kErgonomics]));
        CHECK(k.raw[kpi::kInvManipulability] > 0.0);
        CHECK(k.raw[kpi::kInvManipulability] <= 1.0 / kpi::kManipulabilityFloor);
    }
}

TEST_CASE("normalize centers and scales") {
    kpi::BaselineStats stats;
    stats.mean = {10, 2, 4, 100};
    stats.stddev = {2, 1, 0.5, 10};
    kpi::KpiVector raw;
    raw.raw = {10, 3, 4, 100};
    const auto z = kpi::normalize(raw, stats);
    CHECK(z.normalized[0] == 0.0);
    CHECK(z.normalized[1] == 1.0);
    CHECK(z.normalized[2] == 0.0);
    CHECK(z.normalized[3] == 0.0);
}

TEST_CASE("fitness weights, zero point, and the safety sentinel") {
    kpi::KpiVector v;
    v.normalized = {0, 0, 0, 0};
    CHECK(kpi::fitness(v, {0.5, 0.3, 0.1, 0.1}) == 0.0);
    v.normalized = {1, 1, 1, 1};
    CHECK(kpi::fitness(v, {0.5, 0.3, 0.1, 0.1}) == doctest::Approx(1.0));
    v.safety = true;
    CHECK(std::isinf(kpi::fitness(v, {0.5, 0.3, 0.1, 0.1})));
}

TEST_CASE("flagged chromosomes rank strictly above every clean one") {
    kpi::KpiVector clean;
    clean.normalized = {8, 8, 8, 8};  // terrible but finite
    kpi::KpiVector flagged;
    flagged.normalized = {-8, -8, -8, -8};
    flagged.safety = true;
    const kpi::Weights w{0.5, 0.3, 0.1, 0.1};
    CHECK(kpi::fitness(clean, w) < kpi::fitness(flagged, w));
}

TEST_CASE("baseline: row count, determinism, self-consistency") {
    const auto& spec = estop();
    const auto b1 = kpi::build_baseline(spec, 124, 42);
    const auto b2 = kpi::build_baseline(spec, 124, 42);
    REQUIRE(static_cast<int>(b1.rows.size()) == 124);
    CHECK(b1.stats.mean == b2.stats.mean);
    CHECK(b1.stats.stddev == b2.stats.stddev);

    // applying the stats to their own mean reproduces zero
    kpi::KpiVector at_mean;
    at_mean.raw = b1.stats.mean;
    const auto z = kpi::normalize(at_mean, b1.stats);
    for (double v : z.normalized) CHECK(std::abs(v) < 1e-12);

    // sample mean of normalized rows is also zero
    for (int c = 0; c < 4; ++c) {
        double acc = 0.0;
        for (const auto& row : b1.rows) acc += row.kpi.normalized[c];
        CHECK(std::abs(acc / b1.rows.size()) < 1e-12);
    }
}

TEST_CASE("baseline rejects undefined variance") {
    const auto& spec = estop();
    CHECK_THROWS_AS((void)kpi::build_baseline(spec, 1, 7), Error);
    try {
        (void)kpi::build_baseline(spec, 1, 7);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateKpi);
    }
}

TEST_CASE("a constant KPI is rejected as degenerate") {
    // one fixed resource, zero movables: surface is constantly zero
    ToyBuilder b;
    const int h = b.add_human({0, 0}, 1.0, 0.0, 10.0);
    b.add_fixed({0.3, 0.0});
    b.add_task("fetch", {}, {model::Primitive::Get, model::Primitive::Pose});
    b.add_op(0, {h}, {0});
    const auto spec = b.build();
    CHECK_THROWS_AS((void)kpi::build_baseline(spec, 8, 3), Error);
}
