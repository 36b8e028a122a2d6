#include <cmath>

#include <gtest/gtest.h>

#include "csf/flow.hpp"

using namespace csf;

namespace {

DiscreteCurve circle(SurfaceRef s, double r, std::size_t n, Point c = {}) {
    return sample_curve(std::move(s), [=](double t) { return c + std::polar(r, t); }, n);
}

SurfaceRef plane() { return share(SurfaceModel::euclidean_plane()); }

}  // namespace

TEST(Curvature, UnitCircleCounterclockwise) {
    auto c = circle(plane(), 1.0, 64);
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto kf = curvature_field(c);
        EXPECT_NEAR(kf[i].k, 1.0, 1e-12);
        // Inward normal.
        EXPECT_NEAR(std::abs(kf[i].normal + c.nodes()[i]), 0.0, 1e-12);
    }
}

TEST(Curvature, GrimReaperProfile) {
    auto s = SurfaceModel::euclidean_plane();
    const double h = 1e-3;
    auto graph = [](double x) { return Point(x, grim_reaper_height(x, 0.0)); };
    for (double x : {0.0, 0.3, -0.7, 1.1}) {
        NodeCurvature k = local_curvature(s, graph(x - h), graph(x), graph(x + h));
        EXPECT_NEAR(k.k, grim_reaper_curvature(x), 1e-5);
        // Translation with unit vertical speed has normal speed <e_y, N> = k.
        EXPECT_NEAR(k.k, k.normal.imag(), 1e-5);
    }
}

TEST(Curvature, GreatCircleIsGeodesic) {
    auto c = circle(share(SurfaceModel::sphere_patch(1.0)), 1.0, 64);
    for (const auto& k : curvature_field(c)) EXPECT_NEAR(k.k, 0.0, 1e-12);
}

TEST(Curvature, SphereLatitudeCircle) {
    // Chart radius r is the circle at polar angle 2 atan r; geodesic curvature cot of that angle.
    double r = 0.5;
    auto c = circle(share(SurfaceModel::sphere_patch(1.0)), r, 128);
    double expected = 1.0 / std::tan(2 * std::atan(r));
    for (const auto& k : curvature_field(c)) EXPECT_NEAR(k.k, expected, 1e-3);
}

TEST(Step, GreatCircleStationary) {
    auto c = circle(share(SurfaceModel::sphere_patch(1.0)), 1.0, 64);
    auto moved = step(c, 1e-3);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(std::abs(moved.nodes()[i] - c.nodes()[i]), 0.0, 1e-12);
}

TEST(LengthRate, CircleAndGeodesic) {
    auto c = circle(plane(), 2.0, 128);
    auto kf = curvature_field(c);
    EXPECT_NEAR(integral_k2(c, kf), 2 * pi / 2.0, 1e-6);
    auto g = circle(share(SurfaceModel::sphere_patch(1.0)), 1.0, 64);
    EXPECT_NEAR(integral_k2(g, curvature_field(g)), 0.0, 1e-20);
    auto moved = step(c, 1e-4);
    LengthRate lr = length_rate_check(c, moved);
    EXPECT_NEAR(lr.expected, -pi, 1e-4);
    EXPECT_LT(lr.residual, 1e-3);
}

TEST(Run, CircleShrinksOnSchedule) {
    FlowConfig cfg;
    cfg.length_floor = 1e-2;
    auto trace = run(circle(plane(), 1.0, 64), cfg);
    EXPECT_EQ(trace.stop_reason, StopReason::LengthFloor);
    EXPECT_NEAR(trace.T_est, 0.5, 5e-3);
    bool seen = false;
    for (const auto& snap : trace.snapshots) {
        if (std::abs(snap.t() - 0.25) > 0.01) continue;
        seen = true;
        for (const auto& z : snap.nodes()) EXPECT_NEAR(std::abs(z), circle_radius(1.0, snap.t()), 2e-3);
    }
    EXPECT_TRUE(seen);
    for (const auto& s : trace.steps) EXPECT_TRUE(s.length_decreased);
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        EXPECT_GT(trace.records[i].t, trace.records[i - 1].t);
        EXPECT_LT(trace.records[i].length, trace.records[i - 1].length);
    }
}

TEST(Run, TimeHorizonStop) {
    FlowConfig cfg;
    cfg.time_horizon = 0.05;
    auto trace = run(circle(plane(), 1.0, 64), cfg);
    EXPECT_EQ(trace.stop_reason, StopReason::TimeHorizon);
    EXPECT_NEAR(trace.records.back().t, 0.05, 1e-12);
    EXPECT_TRUE(std::isnan(trace.T_est));
}

TEST(Run, EllipseBecomesRound) {
    FlowConfig cfg;
    cfg.length_floor = 2e-2;
    auto e = sample_curve(plane(), [](double t) { return Point(2 * std::cos(t), std::sin(t)); }, 64);
    auto trace = run(e, cfg);
    EXPECT_EQ(trace.stop_reason, StopReason::LengthFloor);
    const auto& last = trace.snapshots.back();
    double rmin = infinity, rmax = 0;
    Point c{};
    for (const auto& z : last.nodes()) c += z / double(last.size());
    for (const auto& z : last.nodes()) {
        rmin = std::min(rmin, std::abs(z - c));
        rmax = std::max(rmax, std::abs(z - c));
    }
    EXPECT_LT(rmax / rmin - 1, 1e-2);
}

TEST(Remesh, KeepsFirstNodeAndEqualizes) {
    auto e = sample_curve(plane(), [](double t) { return Point(3 * std::cos(t), std::sin(t)); }, 64);
    auto r = remesh(e, 80);
    EXPECT_EQ(r.size(), 80u);
    EXPECT_EQ(r.nodes()[0], e.nodes()[0]);
    EXPECT_NEAR(r.length(), e.length(), 1e-6 * e.length());
    EXPECT_LT(r.max_segment() / r.min_segment(), 1.01);
}

TEST(Embedding, DetectsSelfIntersection) {
    std::vector<Point> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    std::vector<Point> bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    EXPECT_TRUE(is_embedded(square));
    EXPECT_FALSE(is_embedded(bowtie));
}

TEST(Winding, AroundPoint) {
    auto c = circle(plane(), 1.0, 32);
    EXPECT_EQ(winding_number(c.nodes(), {0.2, 0.1}), 1);
    EXPECT_EQ(winding_number(c.nodes(), {3.0, 0.0}), 0);
}

TEST(FitSingularTime, ExactOnLinearSquares) {
    std::vector<DiagnosticsRecord> recs;
    for (int i = 0; i < 30; ++i) {
        DiagnosticsRecord r;
        r.t = 0.01 * i;
        r.length = std::sqrt(3.0 * (0.4 - r.t));
        recs.push_back(r);
    }
    EXPECT_NEAR(fit_singular_time(recs), 0.4, 1e-12);
}

TEST(ClosedForms, ReferenceValues) {
    EXPECT_DOUBLE_EQ(circle_radius(1.0, 0.25), std::sqrt(0.5));
    EXPECT_DOUBLE_EQ(grim_reaper_curvature(0.0), 1.0);
    EXPECT_DOUBLE_EQ(grim_reaper_height(0.0, 0.7), 0.7);
}
