#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "csf/monitor.hpp"

using namespace csf;

namespace {

SurfaceRef plane() { return share(SurfaceModel::euclidean_plane()); }

DiscreteCurve circle(SurfaceRef s, double r, std::size_t n, Point c = {}, double t = 0.0) {
    return sample_curve(std::move(s), [=](double a) { return c + std::polar(r, a); }, n, t);
}

DiscreteCurve ellipse(double a, double b, std::size_t n) {
    return sample_curve(plane(), [=](double t) { return Point(a * std::cos(t), b * std::sin(t)); }, n);
}

}  // namespace

TEST(Huisken, RoundCircleIsOne) {
    for (double r : {0.01, 1.0, 30.0}) EXPECT_NEAR(huisken_ratio(circle(plane(), r, 128)), 1.0, 1e-8);
}

TEST(Huisken, EllipseAgainstBruteForce) {
    auto e = ellipse(2.0, 1.0, 128);
    double L = e.length();
    // Oracle: dense sampling of both arc positions, no refinement.
    double brute = 0;
    const int m = 400;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double x = L * i / m, y = L * j / m;
            double l = shorter_arc(x, y, L);
            double d = std::abs(e.point_at(x) - e.point_at(y));
            brute = std::max(brute, L / (pi * d) * std::sin(pi * l / L));
        }
    double h = huisken_ratio(e);
    EXPECT_GT(h, 1.0);
    EXPECT_GE(h, brute - 1e-9);
    EXPECT_NEAR(h, brute, 1e-4);
}

TEST(Huisken, LowerBoundOnEmbeddedCurves) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.15, 0.15);
    for (int trial = 0; trial < 10; ++trial) {
        double a1 = u(rng), b1 = u(rng), a2 = u(rng), b3 = u(rng);
        auto c = sample_curve(plane(), [=](double t) {
            double r = 1 + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) + b3 * std::sin(3 * t);
            return std::polar(r, t);
        }, 128);
        EXPECT_GE(huisken_ratio(c), 1 - 1e-6);
    }
}

TEST(Comparison, ReducesAndDecays) {
    auto c = circle(plane(), 1.0, 64, {}, 1.0);
    EXPECT_DOUBLE_EQ(comparison_R(c, 0.0), huisken_ratio(c));
    EXPECT_DOUBLE_EQ(comparison_R(c, 1.0), std::exp(-1.0) * huisken_ratio(c));
    EXPECT_NEAR(comparison_R(c, 1.0), std::exp(-1.0), 1e-6);
}

TEST(Comparison, ConstantsOnPlane) {
    auto s = SurfaceModel::euclidean_plane();
    ComparisonConstants k = comparison_constants(s, 2 * pi, 1.0);
    EXPECT_EQ(k.K_M, 0.0);
    EXPECT_EQ(k.rauch_constant, 0.0);
    EXPECT_GE(k.threshold_floor, 2.0);
    EXPECT_NEAR(k.threshold_floor, std::max(2 * pi / (pi * k.distance_scale), 2.0), 1e-12);
}

TEST(Zn, DiagonalLimitVanishes) {
    auto c = circle(plane(), 1.0, 64);
    EXPECT_NEAR(z_n(c, 0.7, 0.7, 5.0, 0.0).value, 0.0, 1e-12);
}

TEST(Zn, AntipodalOnUnitCircle) {
    auto c = circle(plane(), 1.0, 256);
    double L = c.length();
    for (double N : {2.0, 3.0, 10.0}) EXPECT_NEAR(z_n(c, 0.0, 0.5 * L, N, 0.0).value, 2 * N - 2, 1e-6 * N);
}

TEST(Zn, SignMatchesThreshold) {
    // On the round circle R = 1, so Z_N > 0 off the diagonal exactly when N > 1.
    auto c = circle(plane(), 1.0, 256);
    double L = c.length();
    EXPECT_GT(z_n(c, 0.1, 0.4 * L, 1.2, 0.0).value, 0.0);
    EXPECT_LT(z_n(c, 0.1, 0.4 * L, 0.8, 0.0).value, 0.0);
}

TEST(ZnOperator, CircleHandExpansion) {
    // Unit circle, flat metric, K = 0: Z = 2 (N - 1) sin(l / 2) with l = y - x.
    auto c = circle(plane(), 1.0, 512);
    double L = c.length();
    double x = 0.3, y = 0.3 + 1.9 * L / two_pi;
    double N = 3.0;
    ZnOperator op = zn_operator(c, x, y, N, 0.0);
    double l = 1.9;
    EXPECT_NEAR(op.value, 2 * (N - 1) * std::sin(l / 2), 1e-6);
    EXPECT_NEAR(op.dx, -(N - 1) * std::cos(l / 2), 1e-5);
    EXPECT_NEAR(op.dy, (N - 1) * std::cos(l / 2), 1e-5);
    EXPECT_NEAR(op.dxx, -(N - 1) / 2 * std::sin(l / 2), 1e-4);
    EXPECT_NEAR(op.dyy, -(N - 1) / 2 * std::sin(l / 2), 1e-4);
    EXPECT_NEAR(op.dxy, (N - 1) / 2 * std::sin(l / 2), 1e-4);
    EXPECT_NEAR(op.plus, op.dt - op.dxx - op.dyy + 2 * op.dxy, 1e-12);
    EXPECT_NEAR(op.minus, op.dt - op.dxx - op.dyy - 2 * op.dxy, 1e-12);
}

TEST(ZnOperator, SecondDerivativesAgainstFiniteDifferences) {
    auto e = ellipse(1.5, 1.0, 512);
    double L = e.length();
    double x = 0.2 * L, y = 0.45 * L, N = 4.0, K = 0.0;
    ZnOperator op = zn_operator(e, x, y, N, K);
    auto Z = [&](double a, double b) { return z_n(e, a, b, N, K).value; };
    double h = 1e-3 * L;
    double zxx = (Z(x + h, y) - 2 * Z(x, y) + Z(x - h, y)) / (h * h);
    double zyy = (Z(x, y + h) - 2 * Z(x, y) + Z(x, y - h)) / (h * h);
    double zxy = (Z(x + h, y + h) - Z(x + h, y - h) - Z(x - h, y + h) + Z(x - h, y - h)) / (4 * h * h);
    EXPECT_NEAR(op.dxx, zxx, 1e-4 * std::max(1.0, std::abs(zxx)) + 2e-3);
    EXPECT_NEAR(op.dyy, zyy, 1e-4 * std::max(1.0, std::abs(zyy)) + 2e-3);
    EXPECT_NEAR(op.dxy, zxy, 1e-4 * std::max(1.0, std::abs(zxy)) + 2e-3);
}

TEST(GaussBonnet, PlanarConvexCurve) {
    auto g = gauss_bonnet_residual(ellipse(2.0, 1.0, 256));
    EXPECT_LT(g.residual, 1e-3);
    EXPECT_FALSE(g.contains_apex);
}

TEST(GaussBonnet, SmallCircleOnSphere) {
    auto s = share(SurfaceModel::sphere_patch(1.0));
    auto c = circle(s, 0.4, 256, {0.1, 0.05});
    auto g = gauss_bonnet_residual(c);
    EXPECT_LT(g.residual, 1e-3);
    // Cap area from the polar angle of a circle centred at the chart origin.
    auto cap = circle(s, 0.4, 256);
    double theta = 2 * std::atan(0.4);
    EXPECT_NEAR(enclosed_area(cap), two_pi * (1 - std::cos(theta)), 2e-5);
}

TEST(GaussBonnet, AroundConeTip) {
    auto s = share(SurfaceModel::flat_cone(pi / 2));
    auto c = circle(s, 1.0, 256, {0.2, 0.0});
    auto g = gauss_bonnet_residual(c);
    EXPECT_TRUE(g.contains_apex);
    EXPECT_NEAR(g.boundary_term, pi / 2, 1e-3);
    EXPECT_LT(g.residual, 1e-3);
}

TEST(Isoperimetric, CircleEqualityEllipseStrict) {
    auto c = circle(plane(), 1.3, 256);
    auto r = isoperimetric_check(c, 1e-6);
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-5 * r.lhs);
    auto e = isoperimetric_check(ellipse(2.0, 1.0, 256));
    EXPECT_TRUE(e.holds);
    EXPECT_GT(e.lhs - e.rhs, 0.1 * e.lhs);
}

TEST(Isoperimetric, SphereDisk) {
    auto c = circle(share(SurfaceModel::sphere_patch(1.0)), 0.5, 256);
    EXPECT_TRUE(isoperimetric_check(c).holds);
}

TEST(Singularity, GeodesicHasNone) {
    FlowConfig cfg;
    cfg.time_horizon = 0.01;
    auto trace = run(circle(share(SurfaceModel::sphere_patch(1.0)), 1.0, 64), cfg);
    EXPECT_EQ(singularity_exponent(trace).classification, SingularityClass::NoSingularity);
}

TEST(Singularity, ShrinkingCircleExponentHalf) {
    FlowConfig cfg;
    cfg.length_floor = 1e-2;
    auto trace = run(circle(plane(), 1.0, 64), cfg);
    auto rep = singularity_exponent(trace);
    EXPECT_EQ(rep.classification, SingularityClass::TypeI);
    EXPECT_NEAR(rep.exponent, 0.5, 1e-2);
}

TEST(MTau, SelfSimilarCircle) {
    // Radius sqrt(2 (T - t)) is the unit circle in the rescaled frame.
    const double T = 0.5;
    // A wide cutoff keeps eta = 1 on the whole circle.
    CutoffProfile cut{10.0};
    for (double t : {0.2, 0.4, 0.49}) {
        auto c = circle(plane(), std::sqrt(2 * (T - t)), 256, {}, t);
        MTauSample m = m_tau_sample(c, {{0, 0}, T}, cut, 0.0);
        EXPECT_NEAR(m.M, two_pi * std::exp(-0.5), 1e-6);
        EXPECT_LT(m.shrinker_residual, 1e-8);
    }
}

TEST(MTau, OffCenterBaseDecays) {
    const double T = 0.5;
    CutoffProfile cut{10.0};
    double prev = infinity;
    for (double t : {0.3, 0.45, 0.49, 0.499}) {
        auto c = circle(plane(), std::sqrt(2 * (T - t)), 128, {0.5, 0.0}, t);
        double m = m_tau_sample(c, {{0, 0}, T}, cut, 0.0).M;
        EXPECT_LT(m, prev);
        prev = m;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(ShrinkerResidual, RoundShrinkerAndRadiusTwo) {
    RescaledFrame frame{{0, 0}, 0.5};  // scale 1 at t = 0
    EXPECT_NEAR(shrinker_residual(circle(plane(), 1.0, 256), frame), 0.0, 1e-10);
    // Constant integrand (1/2 - 2)^2 over length 4 pi.
    EXPECT_NEAR(shrinker_residual(circle(plane(), 2.0, 256), frame), 9 * pi, 1e-6);
}

TEST(Weight, ClosedFormAndLimit) {
    for (double tau : {0.5, 1.0, 3.0}) EXPECT_NEAR(weight_integral(tau), weight_integral_quadrature(tau), 1e-12);
    EXPECT_NEAR(weight_integral(60.0), 0.25, 1e-15);
    EXPECT_NEAR(decay_weight(60.0, 2.0), std::exp(-0.5), 1e-15);
}

TEST(Monotonicity, CalibratedConstantBoundsIncrements) {
    std::vector<MTauSample> series;
    for (int i = 0; i < 10; ++i) {
        MTauSample m;
        m.tau = 1 + 0.3 * i;
        m.weighted_M = 1 + 0.01 * std::sin(double(i));
        series.push_back(m);
    }
    double error_constant = calibrate_error_constant(series, 1.0, 1.0);
    EXPECT_TRUE(monotonicity_bound(series, 1.0, error_constant, 1.0, 1e-12).holds);
    EXPECT_FALSE(monotonicity_bound(series, 1.0, 0.5 * error_constant, 1.0, 0.0).holds);
}
