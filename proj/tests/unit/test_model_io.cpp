#include <doctest.h>

#include <filesystem>

#include "hrc/feasibility.hpp"
#include "hrc/spec_io.hpp"
#include "support/toy.hpp"

using namespace hrc;
using namespace testing_support;

#ifndef HRC_FIXTURE
#error "HRC_FIXTURE must point at the bundled estop spec"
#endif

namespace {

model::WorkcellSpec estop() {
    static const model::WorkcellSpec spec = io::load_spec(HRC_FIXTURE);
    return spec;
}

bool has_code(const std::vector<model::SpecDiagnostic>& diags, const std::string& code) {
    for (const auto& d : diags)
        if (d.code == code) return true;
    return false;
}

}  // namespace

TEST_CASE("case-study fixture validates cleanly (t=13, n=2)") {
    const auto spec = estop();
    CHECK(spec.num_operations() == 13);
    CHECK(spec.num_agents() == 2);
    CHECK(model::validate_spec(spec).empty());
}

TEST_CASE("chromosome dimensions on the fixture: (14, 14, 28)") {
    const auto dims = model::chromosome_dimensions(estop());
    CHECK(dims.z_bar == 14);
    CHECK(dims.m_bar == 14);
    CHECK(dims.d_bar == 28);
}

TEST_CASE("chromosome dimensions degenerate minimum: (0, 1, 1)") {
    ToyBuilder b;
    const int h = b.add_human({0, 0});
    const int f = b.add_fixed({0.3, 0});
    const int t = b.add_task("wait", {model::Primitive::Open}, {model::Primitive::Wait});
    b.add_op(t, {h}, {});
    (void)f;
    const auto spec = b.build();
    const auto dims = model::chromosome_dimensions(spec);
    CHECK(dims.z_bar == 0);
    CHECK(dims.m_bar == 1);
    CHECK(dims.d_bar == 1);
}

TEST_CASE("cyclic precedence is diagnosed") {
    ToyBuilder b;
    const int h = b.add_human({0, 0});
    const int t = b.add_task("wait", {}, {model::Primitive::Wait});
    const int o1 = b.add_op(t, {h}, {});
    const int o2 = b.add_op(t, {h}, {});
    b.precede(o1, o2);
    b.precede(o2, o1);  // minimal 2-cycle
    const auto diags = model::validate_spec(b.build());
    CHECK(has_code(diags, "CYCLIC_PRECEDENCE"));
}

TEST_CASE("empty eligibility set is diagnosed") {
    ToyBuilder b;
    const int h = b.add_human({0, 0});
    const int t = b.add_task("wait", {}, {model::Primitive::Wait});
    b.add_op(t, {h}, {});
    auto spec = b.build();
    // knock out the only capable agent for o1
    spec.operations[0].eligible.clear();
    spec.capability.entries[0] = 1;
    const auto diags = model::validate_spec(spec);
    CHECK(has_code(diags, "NO_CAPABLE_AGENT"));
}

TEST_CASE("capability/eligibility duality holds on the fixture") {
    const auto spec = estop();
    for (const auto& op : spec.operations) {
        for (int a = 0; a < spec.num_agents(); ++a) {
            const bool in_set =
                std::find(op.eligible.begin(), op.eligible.end(), a) != op.eligible.end();
            CHECK(in_set == spec.capability.capable(a, op.id));
        }
    }
}

TEST_CASE("waypoint/travel mismatch is diagnosed") {
    ToyBuilder b;
    const int h = b.add_human({0, 0});
    const int f = b.add_fixed({0.3, 0.0});
    const int t = b.add_task("fetch", {}, {model::Primitive::Get, model::Primitive::Put});
    b.add_op(t, {h}, {f});  // two travel steps, one waypoint
    const auto diags = model::validate_spec(b.build());
    CHECK(has_code(diags, "WAYPOINT_COUNT_MISMATCH"));
}

TEST_CASE("fixed placement problems are warnings, not errors") {
    ToyBuilder b;
    const int h = b.add_human({0, 0}, 1.0, 0.2, 3.0);
    b.add_fixed({0.05, 0.0});  // inside d_min
    const int t = b.add_task("wait", {}, {model::Primitive::Wait});
    b.add_op(t, {h}, {});
    const auto diags = model::validate_spec(b.build());
    REQUIRE(has_code(diags, "FIXED_OUTSIDE_ANNULUS"));
    for (const auto& d : diags)
        if (d.code == "FIXED_OUTSIDE_ANNULUS") CHECK(d.severity == model::Severity::Warning);
}

TEST_CASE("model::place translates footprints; stored coords win for fixed") {
    const auto spec = estop();
    const int movable = spec.movable_resources.front();
    const auto poly = model::place(spec, movable, {100.0, 200.0});
    // centroid of the square footprint should sit at the passed coords
    double cx = 0, cy = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        cx += poly.vertex(i).x;
        cy += poly.vertex(i).y;
    }
    CHECK(cx / poly.size() == doctest::Approx(100.0));
    CHECK(cy / poly.size() == doctest::Approx(200.0));

    int fixed = -1;
    for (const auto& r : spec.resources)
        if (!r.movable) fixed = r.id;
    REQUIRE(fixed >= 0);
    const auto f1 = model::place(spec, fixed, {});
    const auto f2 = model::place(spec, fixed, {999.0, 999.0});
    CHECK(f1.xs == f2.xs);
    CHECK(f1.ys == f2.ys);

    CHECK_THROWS_AS((void)model::place(spec, movable, {1.0}), Error);
}

TEST_CASE("spec file round-trips bit-exactly") {
    const auto spec = estop();
    const std::string once = io::serialize_spec(spec);
    const auto reloaded = io::parse_spec(once, "roundtrip");
    const std::string twice = io::serialize_spec(reloaded);
    CHECK(once == twice);
    REQUIRE(reloaded.bounds.size() == spec.bounds.size());
    for (size_t i = 0; i < spec.bounds.size(); ++i) {
        CHECK(reloaded.bounds[i].lo == spec.bounds[i].lo);  // bit-exact
        CHECK(reloaded.bounds[i].hi == spec.bounds[i].hi);
    }
    for (size_t a = 0; a < spec.agents.size(); ++a) {
        CHECK(reloaded.agents[a].speed == spec.agents[a].speed);
        CHECK(reloaded.agents[a].d_max == spec.agents[a].d_max);
    }
}

TEST_CASE("chromosome file round-trips bit-exactly") {
    const auto spec = estop();
    Rng rng = Rng::master(3).substream(rng_purpose::kParentSampling);
    const auto x = feas::sample(spec, rng, 10000);
    const std::string once = io::serialize_chromosome(x, spec);
    const auto tmp = std::filesystem::temp_directory_path() / "hrc_chromosome_rt.json";
    io::write_file_atomic(tmp.string(), once);
    const auto back = io::load_chromosome(tmp.string(), spec);
    CHECK(back == x);
    CHECK(io::serialize_chromosome(back, spec) == once);
}

TEST_CASE("unsupported schema and missing files raise typed errors") {
    CHECK_THROWS_AS((void)io::parse_spec(R"({"schema_version": 99})", "bad"), Error);
    try {
        (void)io::parse_spec(R"({"schema_version": 99})", "bad");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedSchema);
    }
    try {
        (void)io::load_spec("/nonexistent/path.json");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFound);
    }
}
