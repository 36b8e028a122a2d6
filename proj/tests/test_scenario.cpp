#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "csf/runner.hpp"

using namespace csf;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("csf_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::ValidationError;
}

// CSV row whose first `n` fields equal `prefix`, split into numbers.
std::vector<double> find_row(const std::string& text, const std::vector<double>& prefix) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || !std::isdigit(static_cast<unsigned char>(line.back()))) continue;
        std::vector<double> v;
        std::stringstream ls(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric || v.size() < prefix.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < prefix.size(); ++i) match = match && std::abs(v[i] - prefix[i]) < 1e-12;
        if (match) return v;
    }
    return {};
}

}  // namespace

TEST(Parse, MinimalConfigTakesDefaults) {
    Scenario s = parse_scenario("[curve]\nradius = 2\n");
    EXPECT_EQ(s.surface.kind, SurfaceKind::EuclideanPlane);
    EXPECT_EQ(s.curve.shape, CurveShape::Circle);
    EXPECT_EQ(s.curve.radius, 2.0);
    EXPECT_EQ(s.curve.node_count, 256u);
    EXPECT_EQ(s.solver.cfl_factor, 0.2);
    EXPECT_EQ(s.solver.length_floor, 1e-3);
    EXPECT_EQ(s.solver.curvature_ceiling, 1e3);
    EXPECT_TRUE(std::isinf(s.solver.time_horizon));
    EXPECT_NO_THROW(validate(s));
}

TEST(Parse, ListsAndAuto) {
    Scenario s = parse_scenario(
        "[surface]\nkind = conic\ndivisor = 0, 0, -0.5; 1.5, 0.25, -0.75\nh_bump = 0.2, 0.1, 0, 0.5\n"
        "[diagnostics]\ncomparison_K = auto\nbase_point = 0.1, -0.2\n");
    ASSERT_EQ(s.surface.divisor.size(), 2u);
    EXPECT_EQ(s.surface.divisor[1].at, Point(1.5, 0.25));
    EXPECT_EQ(s.surface.divisor[1].beta, -0.75);
    ASSERT_EQ(s.surface.h_terms.size(), 1u);
    EXPECT_FALSE(s.diagnostics.comparison_K);
    EXPECT_EQ(*s.diagnostics.base_point, Point(0.1, -0.2));
}

TEST(Parse, ErrorsNameTheProblem) {
    try {
        parse_scenario("[curve]\nradius 2\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    try {
        parse_scenario("[curve]\nradius = two\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("curve.radius"), std::string::npos) << e.what();
    }
    try {
        parse_scenario("[curve]\nradious = 2\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("curve.radious"), std::string::npos) << e.what();
    }
    EXPECT_EQ(kind_of([] { parse_scenario("[flow]\ncfl = 1\n"); }), ErrorKind::ParseError);
}

TEST(Validate, RejectsBadValues) {
    Scenario s = parse_scenario("[surface]\nkind = conic\ndivisor = 0, 0, -1.5\n");
    EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::ValidationError);
    s = parse_scenario("[curve]\nnode_count = 16\n");
    EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::ValidationError);
    s = parse_scenario("[solver]\ncfl_factor = -1\n");
    EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::ValidationError);
    s = parse_scenario(
        "[surface]\nkind = conic\ndivisor = 0, 0, -0.5; 1, 0, -0.5; 0, 1, -0.5\n[cover]\nenabled = true\n"
        "branch_set = 0, 1, 2\n");
    EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::ValidationError);
}

TEST(Validate, QuarterTurnTipConfig) {
    Scenario s = parse_scenario(
        "[run]\ntip_experiment = true\n[surface]\nkind = flat_cone\ntotal_angle_rad = 1.5707963267948966\n"
        "[curve]\ncenter = 0.3, 0\nradius = 1\n[diagnostics]\ntip_tracking = true\n");
    EXPECT_NO_THROW(validate(s));
    SurfaceModel m = build_surface(s.surface);
    EXPECT_NEAR(m.cone_angle(0), pi / 2, 1e-15);
}

TEST(Emit, RoundTrip) {
    Scenario s;
    s.name = "round_trip";
    s.seed = 42;
    s.surface.kind = SurfaceKind::ConicConformal;
    s.surface.divisor = {{{0.1, 0.2}, -0.3}, {{-1.0 / 3, 0.7}, -0.6}};
    s.surface.h_terms = {QuadraticTerm{0.1, 0.2, 0.3, 0.01, 0.02, 0.03}, SphereTerm{2.0, {0.5, 0.5}},
                         BumpTerm{0.3, {0.2, 0.1}, 0.7}};
    s.surface.apex_exclusion = 1e-3;
    s.curve.shape = CurveShape::PolarGraph;
    s.curve.polar_coefficients = {1.0, 0.1, -0.05, 1.0 / 7};
    s.curve.center = {0.25, -0.125};
    s.solver.time_horizon = 0.3;
    s.solver.output_dt = 1e-2;
    s.diagnostics.comparison_K = 12.5;
    s.diagnostics.zn_grid = 8;
    s.diagnostics.base_point = Point(0.1, 0.2);
    s.cover.enabled = true;
    s.cover.branch_set = {0};
    s.cover.auxiliary = AuxiliaryPolicy::Regular;
    s.cover.auxiliary_candidates = {{3, 3}, {-3, 3}};
    s.cover.ray_direction = Point(0, 1);
    Scenario back = parse_scenario(emit_scenario(s));
    EXPECT_TRUE(back == s) << emit_scenario(s);
    EXPECT_TRUE(parse_scenario(emit_scenario(Scenario{})) == Scenario{});
}

TEST(Run, SeededRunsAreIdentical) {
    Scenario s = parse_scenario(
        "[run]\nseed = 7\n[curve]\nshape = ellipse\nnode_count = 64\n[solver]\nlength_floor = 0.3\n"
        "[diagnostics]\nzn_grid = 4\n");
    auto a = scratch("det_a"), b = scratch("det_b");
    ScenarioRun ra = run_scenario(s, {a.string(), 1.0});
    ScenarioRun rb = run_scenario(s, {b.string(), 1.0});
    EXPECT_TRUE(ra.summary.passed());
    std::string ca = slurp(a / "diagnostics.csv");
    EXPECT_EQ(ca.substr(0, ca.find('\n')), diagnostics_header());
    EXPECT_EQ(ca, slurp(b / "diagnostics.csv"));
    EXPECT_EQ(slurp(a / "snapshots.json"), slurp(b / "snapshots.json"));
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(ReferenceTables, KnownRows) {
    auto dir = scratch("tables");
    emit_reference_tables(dir.string());
    auto circle = find_row(slurp(dir / "circle_radius.csv"), {1.0, 0.25});
    ASSERT_EQ(circle.size(), 3u);
    EXPECT_NEAR(circle[2], 0.7071067811865476, 1e-15);
    auto cone = find_row(slurp(dir / "cone_distance.csv"), {1.0, 1.0, 1.0, pi / 3});
    ASSERT_EQ(cone.size(), 5u);
    EXPECT_NEAR(cone[4], 1.0, 1e-15);
    auto reaper = find_row(slurp(dir / "grim_reaper.csv"), {0.0, 0.0});
    ASSERT_EQ(reaper.size(), 4u);
    EXPECT_EQ(reaper[2], 0.0);
    EXPECT_EQ(reaper[3], 1.0);
    std::filesystem::remove_all(dir);
}
