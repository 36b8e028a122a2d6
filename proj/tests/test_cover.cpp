#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "csf/cover.hpp"

using namespace csf;

namespace {

DiscreteCurve circle(SurfaceRef s, double r, std::size_t n, Point c = {}) {
    return sample_curve(std::move(s), [=](double t) { return c + std::polar(r, t); }, n);
}

CoverSpace cone_cover(SurfaceRef base) {
    CoverOptions co;
    co.auxiliary = AuxiliaryPolicy::Infinity;
    return build_double_cover(std::move(base), {0}, co);
}

SurfaceRef four_points() {
    std::vector<ConePoint> div = {{{1, 1}, -0.5}, {{-1, 1}, -0.5}, {{-1, -1}, -0.5}, {{1, -1}, -0.5}};
    return share(SurfaceModel::conic_conformal(div, HField{}));
}

}  // namespace

TEST(Cover, BranchAngleDoubles) {
    auto half = cone_cover(share(SurfaceModel::flat_cone(pi)));
    EXPECT_NEAR(half.branch_angle(0), two_pi, 1e-14);
    auto quarter = cone_cover(share(SurfaceModel::flat_cone(pi / 2)));
    EXPECT_NEAR(quarter.branch_angle(0), pi, 1e-14);
}

TEST(Cover, AnglePiUnfoldsFlat) {
    auto cov = cone_cover(share(SurfaceModel::flat_cone(pi)));
    ASSERT_TRUE(cov.unfolded());
    EXPECT_TRUE(cov.unfolded()->divisor().empty());
    for (Point w : {Point(0.3, 0.1), Point(-1.2, 0.7), Point(0.05, -2.0)}) {
        EXPECT_NEAR(gaussian_curvature(*cov.unfolded(), w), 0.0, 1e-12);
        EXPECT_NEAR(cov.pulled_back_lambda(w), 2.0, 1e-12);
        EXPECT_NEAR(cov.unfolded()->lambda(w), 2.0, 1e-12);
    }
}

TEST(Cover, QuarterAngleUnfoldsToHalfAngle) {
    auto cov = cone_cover(share(SurfaceModel::flat_cone(pi / 2)));
    ASSERT_TRUE(cov.unfolded());
    ASSERT_EQ(cov.unfolded()->divisor().size(), 1u);
    EXPECT_NEAR(cov.unfolded()->cone_angle(0), pi, 1e-12);
}

TEST(Cover, PullBackFactorWithField) {
    HField h({BumpTerm{0.4, {0.3, -0.2}, 0.8}});
    auto base = share(SurfaceModel::conic_conformal({{{0.5, 0.5}, -0.5}}, h));
    auto cov = cone_cover(base);
    for (double a : {0.0, 1.0, 2.5}) {
        Point w = std::polar(1.0, a);
        // |z - c| = 1 so the base weight drops out: lambda^2 = 4 e^{2h}.
        double e2h = std::exp(2 * h(Point(0.5, 0.5) + w * w).value);
        EXPECT_NEAR(std::pow(cov.pulled_back_lambda(w), 2), 4 * e2h, 1e-12);
        EXPECT_NEAR(std::pow(cov.unfolded()->lambda(w), 2), 4 * e2h, 1e-12);
    }
}

TEST(Lift, EncirclingCurveIsConnected) {
    auto base = share(SurfaceModel::flat_cone(pi));
    auto cov = cone_cover(base);
    auto c = circle(base, 1.0, 128, {0.3, 0.1});
    LiftedCurve lift = lift_curve(c, cov);
    EXPECT_TRUE(lift.connected);
    EXPECT_TRUE(lift.deck_symmetric);
    EXPECT_EQ(lift.points.size(), 2 * c.size());
    EXPECT_EQ(lift.lifted_length, 2 * c.length());
    ASSERT_TRUE(lift.upstairs);
    const auto& w = lift.upstairs->nodes();
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(std::abs(w[i] + w[i + c.size()]), 0.0, 1e-14);
    EXPECT_NEAR(lift.upstairs->length(), 2 * c.length(), 1e-6 * c.length());
}

TEST(Lift, CurveAwayFromApexSplitsIntoTwoCopies) {
    auto base = share(SurfaceModel::flat_cone(pi));
    auto cov = cone_cover(base);
    // Centre placed so the curve never meets the ray cut.
    auto c = circle(base, 0.4, 64, {-1.5, 1.5});
    LiftedCurve lift = lift_curve(c, cov);
    EXPECT_FALSE(lift.connected);
    EXPECT_EQ(lift.points.size(), c.size());
    EXPECT_EQ(lift.lifted_length, c.length());
    ASSERT_TRUE(lift.upstairs);
    // The lifted copy projects back onto the original nodes.
    DiscreteCurve down = project_curve(*lift.upstairs, cov, false);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(std::abs(down.nodes()[i] - c.nodes()[i]), 0.0, 1e-12);
}

TEST(Lift, ParityCountsEnclosedBranchPoints) {
    auto base = four_points();
    auto cov = build_double_cover(base, {0, 1, 2, 3});
    EXPECT_FALSE(cov.unfolded());
    EXPECT_TRUE(lift_curve(circle(base, 0.5, 128, {1.05, 0.95}), cov).connected);
    EXPECT_FALSE(lift_curve(circle(base, 1.8, 256, {0.0, 0.0}), cov).connected);
}

TEST(Cuts, ExplicitCrossingPairingRejected) {
    CoverOptions co;
    co.pairing = {{0, 2}, {1, 3}};
    try {
        build_double_cover(four_points(), {0, 1, 2, 3}, co);
        FAIL() << "diagonal cuts must cross";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CrossingCuts);
    }
}

TEST(Cuts, OddSetNeedsAuxiliary) {
    std::vector<ConePoint> div = {{{1, 0}, -0.5}, {{-1, 0}, -0.5}, {{0, 2}, -0.5}};
    auto base = share(SurfaceModel::conic_conformal(div, HField{}));
    try {
        build_double_cover(base, {0, 1, 2});
        FAIL() << "odd set without auxiliary point";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OddBranchSetWithoutAuxiliary);
    }
    CoverOptions co;
    co.auxiliary = AuxiliaryPolicy::Regular;
    co.auxiliary_candidates = {{0.1, 0.1}, {5.0, 5.0}};
    auto cov = build_double_cover(base, {0, 1, 2}, co);
    ASSERT_EQ(cov.branch_points().size(), 4u);
    EXPECT_TRUE(cov.branch_points().back().auxiliary);
    EXPECT_EQ(cov.branch_points().back().at, Point(5.0, 5.0));
}

TEST(Cuts, RejectsWideConePoint) {
    EXPECT_THROW(cone_cover(share(SurfaceModel::flat_cone(3 * pi / 2))), Error);
}

TEST(CoverDistance, DeckPairGoesThroughApex) {
    auto base = share(SurfaceModel::flat_cone(pi));
    auto cov = cone_cover(base);
    ConePolarChart chart = polar_from_conformal(*base, 0);
    for (Point z : {Point(0.7, 0.2), Point(-1.1, 0.4)}) {
        // Oracle: twice the radial distance to the apex.
        double to_apex = cone_distance(chart, {0.0, 0.0}, chart.to_polar(z));
        EXPECT_NEAR(cover_distance(cov, {z, 0}, {z, 1}), 2 * to_apex, 1e-9);
    }
}

TEST(CoverDistance, LocallyIsometricAndTriangle) {
    auto base = share(SurfaceModel::flat_cone(pi));
    auto cov = cone_cover(base);
    ConePolarChart chart = polar_from_conformal(*base, 0);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(0.3, 2.0), ut(-2.5, 2.5);
    for (int i = 0; i < 30; ++i) {
        Point p = std::polar(ur(rng), ut(rng)), q = std::polar(ur(rng), ut(rng));
        double down = cone_distance(chart, chart.to_polar(p), chart.to_polar(q));
        double d0 = cover_distance(cov, {p, 0}, {q, 0}), d1 = cover_distance(cov, {p, 0}, {q, 1});
        EXPECT_NEAR(std::min(d0, d1), down, 1e-9);
        double deck = cover_distance(cov, {q, 0}, {q, 1});
        EXPECT_LE(d1, d0 + deck + 1e-12);
        EXPECT_LE(d0, d1 + deck + 1e-12);
    }
}

TEST(Tip, ClassifiesSustainedWindingChange) {
    FlowTrace trace;
    for (int i = 0; i < 10; ++i) {
        DiagnosticsRecord r;
        r.t = 0.01 * i;
        r.length = 1.0 - 0.05 * i;
        r.tip_distance = 0.3 - 0.02 * i;
        r.winding = i < 5 ? 1 : 0;
        trace.records.push_back(r);
    }
    TipOutcome half = classify_tip(trace, pi / 2);
    EXPECT_EQ(half.verdict, TipVerdict::CrossesTip);
    EXPECT_TRUE(half.failed);
    EXPECT_FALSE(classify_tip(trace, two_pi).failed);
    // A two-record blip is not sustained.
    for (auto& r : trace.records) r.winding = 1;
    trace.records[4].winding = trace.records[5].winding = 0;
    TipOutcome blip = classify_tip(trace, pi / 2);
    EXPECT_EQ(blip.verdict, TipVerdict::ShrinksToTip);
    EXPECT_NEAR(blip.min_tip_distance, 0.3 - 0.18, 1e-15);
}

TEST(Tip, AvoidsWhenTipOutside) {
    FlowTrace trace;
    for (int i = 0; i < 5; ++i) {
        DiagnosticsRecord r;
        r.length = 1.0 - 0.1 * i;
        r.tip_distance = 2.0;
        trace.records.push_back(r);
    }
    TipOutcome o = classify_tip(trace, pi / 2);
    EXPECT_EQ(o.verdict, TipVerdict::AvoidsTip);
    EXPECT_EQ(o.min_tip_distance, 2.0);
}
