#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "csf/core.hpp"
#include "csf/flow.hpp"
#include "csf/geodesic.hpp"
#include "csf/geometry.hpp"

namespace csf {

using DistanceFn = std::function<double(Point, Point)>;

// Closed-form distance where available, otherwise the shortest-geodesic solver.
inline DistanceFn surface_distance(const SurfaceModel& s) {
    return [&s](Point p, Point q) { return distance(s, p, q); };
}

// Shorter arc length between arc positions a and b on a closed curve of length L.
inline double shorter_arc(double a, double b, double L) {
    double l = std::fmod(std::abs(a - b), L);
    return std::min(l, L - l);
}

struct ComparisonSample {
    double x = 0.0, y = 0.0;  // arc-length positions
    double l = 0.0;           // shorter arc between them
    double d = 0.0;           // surface distance
    double value = 0.0;
};

// ---------------------------------------------------------------------------
// Chord-arc ratio sup (L / (pi d)) sin(pi l / L).
// ---------------------------------------------------------------------------

struct HuiskenOptions {
    double min_arc_factor = 4.0;  // pairs need l >= factor * L / N
    std::size_t max_nodes = 0;    // subsample the node scan to at most this many nodes (0: all)
    int refine_rounds = 6;
};

namespace detail {

inline double chord_arc_ratio(double L, double l, double d) {
    if (!(d > 0)) return infinity;
    return L / (pi * d) * std::sin(pi * l / L);
}

// Maximizes f on [a, b] by golden-section search.
template <class F>
double golden_max(F f, double a, double b, int iters = 40) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

}  // namespace detail

inline ComparisonSample huisken_sup(const DiscreteCurve& c, const DistanceFn& dist, const HuiskenOptions& opt = {}) {
    const auto& z = c.nodes();
    const std::size_t n = z.size();
    const double L = c.length();
    const double lmin = opt.min_arc_factor * L / double(n);
    std::size_t stride = 1;
    if (opt.max_nodes > 0 && n > opt.max_nodes) stride = (n + opt.max_nodes - 1) / opt.max_nodes;

    ComparisonSample best;
    best.value = -infinity;
    for (std::size_t i = 0; i < n; i += stride)
        for (std::size_t j = i + stride; j < n; j += stride) {
            double l = shorter_arc(c.arc()[i], c.arc()[j], L);
            if (l < lmin) continue;
            double d = dist(z[i], z[j]);
            double v = detail::chord_arc_ratio(L, l, d);
            if (v > best.value) best = {c.arc()[i], c.arc()[j], l, d, v};
        }
    if (!(best.value > -infinity)) return best;

    // Alternate one-dimensional refinements of each endpoint around the best pair.
    auto eval = [&](double x, double y) {
        double l = shorter_arc(x, y, L);
        if (l < lmin) return -infinity;
        return detail::chord_arc_ratio(L, l, dist(c.point_at(x), c.point_at(y)));
    };
    double h = double(stride) * L / double(n);
    for (int r = 0; r < opt.refine_rounds; ++r) {
        double x = detail::golden_max([&](double u) { return eval(u, best.y); }, best.x - h, best.x + h);
        double vx = eval(x, best.y);
        if (vx > best.value) {
            best.x = x;
            best.value = vx;
        }
        double y = detail::golden_max([&](double u) { return eval(best.x, u); }, best.y - h, best.y + h);
        double vy = eval(best.x, y);
        if (vy > best.value) {
            best.y = y;
            best.value = vy;
        }
        h *= 0.5;
    }
    best.l = shorter_arc(best.x, best.y, L);
    best.d = dist(c.point_at(best.x), c.point_at(best.y));
    return best;
}

inline double huisken_ratio(const DiscreteCurve& c, const DistanceFn& dist, const HuiskenOptions& opt = {}) {
    return huisken_sup(c, dist, opt).value;
}

inline double huisken_ratio(const DiscreteCurve& c, const HuiskenOptions& opt = {}) {
    return huisken_ratio(c, surface_distance(c.surface()), opt);
}

inline double comparison_R(double huisken, double t, double K) { return std::exp(-K * t) * huisken; }

inline double comparison_R(const DiscreteCurve& c, double K, const HuiskenOptions& opt = {}) {
    return comparison_R(huisken_ratio(c, opt), c.t(), K);
}

// Constants of the comparison argument, computed from the surface bounds.
struct ComparisonConstants {
    double K_M = 0, jet_radius = infinity, d_M = infinity;
    double rauch_constant = 0;  // |J'(0) - J'(1)| <= rauch_constant d^3
    double curvature_radius = infinity;
    double comparison_radius = 0;
    double K = 0;  // exponent weight in R(t)
    double distance_scale = infinity;  // half of min(d_M, jet_radius)
    double threshold_floor = 2;        // max(L(0) / (pi distance_scale), R(0), 2)
};

inline ComparisonConstants comparison_constants(const SurfaceModel& s, double initial_length, double initial_R) {
    ComparisonConstants c;
    c.K_M = s.curvature_bound();
    c.jet_radius = s.jet_radius();
    c.d_M = s.injectivity_scale();
    c.rauch_constant = 2 * c.K_M;
    c.curvature_radius = 0.5 * c.d_M;
    if (c.K_M > 0) c.curvature_radius = std::min(c.curvature_radius, 1 / std::sqrt(c.K_M));
    c.comparison_radius = std::min(c.curvature_radius, 1 / (2 * (1 + c.K_M)));
    c.K = 4 * c.rauch_constant + 4 * pi * pi / (c.comparison_radius * c.comparison_radius) + 1;
    c.distance_scale = 0.5 * std::min(c.d_M, c.jet_radius);
    c.threshold_floor = std::max({initial_length / (pi * c.distance_scale), initial_R, 2.0});
    return c;
}

// ---------------------------------------------------------------------------
// Z_N = N d - (L / pi) sin(pi l / L) e^{-K t} and its evolution operators.
// ---------------------------------------------------------------------------

struct ZnValue {
    double value = 0.0;
    std::vector<double> branch_values;  // one per converged geodesic branch
    std::vector<int> branch_windings;
    std::size_t attained = 0;           // index of the minimizing branch
    std::size_t co_minimal = 1;         // number of tied shortest branches
};

inline double zn_arc_term(double L, double l, double t, double K) {
    return L / pi * std::sin(pi * l / L) * std::exp(-K * t);
}

// Value at arc positions x, y. With several geodesic branches the value is the
// minimum over branch values and each branch value is reported separately.
inline ZnValue z_n(const DiscreteCurve& c, double x, double y, double N, double K,
                   const GeodesicOptions& opt = {}) {
    ZnValue out;
    double L = c.length();
    double l = shorter_arc(x, y, L);
    double term = zn_arc_term(L, l, c.t(), K);
    Point p = c.point_at(x), q = c.point_at(y);
    if (p == q) {
        out.value = -term;
        out.branch_values = {out.value};
        out.branch_windings = {0};
        return out;
    }
    const SurfaceModel& s = c.surface();
    if (s.divisor().empty()) {
        out.value = N * distance(s, p, q, opt) - term;
        out.branch_values = {out.value};
        out.branch_windings = {0};
        return out;
    }
    GeodesicSolution sol = shortest_geodesic(s, p, q, opt);
    for (const auto& g : sol.candidates) {
        out.branch_values.push_back(N * g.length - term);
        out.branch_windings.push_back(g.through_apex ? 0 : g.winding);
    }
    out.attained = std::size_t(std::min_element(out.branch_values.begin(), out.branch_values.end()) -
                               out.branch_values.begin());
    out.value = out.branch_values[out.attained];
    out.co_minimal = sol.co_minimal.size();
    return out;
}

struct ZnOperator {
    double value = 0;
    double dx = 0, dy = 0, dt = 0;
    double dxx = 0, dyy = 0, dxy = 0;
    double plus = 0;           // dt - dxx - dyy + 2 dxy
    double minus = 0;          // dt - dxx - dyy - 2 dxy
    double spatial_minus = 0;  // -dxx - dyy - 2 dxy
};

// Derivatives of Z_N at arc positions x < y (mod L) with y - x <= L / 2, from the
// distance jet and the length evolution dl/dt = -int_x^y k^2, dL/dt = -int k^2.
// The curve time derivative uses the given curvature integrals.
inline ZnOperator zn_operator(const DistanceJet& jet, double L, double l, double t, double N, double K,
                              double arc_k2, double total_k2) {
    double e = std::exp(-K * t);
    double a = pi * l / L;
    double sn = std::sin(a), cs = std::cos(a);
    ZnOperator z;
    z.value = N * jet.F - L / pi * sn * e;
    z.dx = N * jet.F_s1 + cs * e;
    z.dy = N * jet.F_s2 - cs * e;
    z.dxx = N * jet.F_s1s1 + pi * e / L * sn;
    z.dyy = N * jet.F_s2s2 + pi * e / L * sn;
    z.dxy = N * jet.F_s1s2 - pi / L * sn * e;
    z.dt = N * jet.F_t + K * e * L / pi * sn + e * ((sn / pi - l / L * cs) * total_k2 + cs * arc_k2);
    z.plus = z.dt - z.dxx - z.dyy + 2 * z.dxy;
    z.minus = z.dt - z.dxx - z.dyy - 2 * z.dxy;
    z.spatial_minus = -z.dxx - z.dyy - 2 * z.dxy;
    return z;
}

// int k^2 ds over the arc from x forward to y, by spline quadrature.
inline double arc_integral_k2(const DiscreteCurve& c, double x, double y, int pieces = 64) {
    double L = c.length();
    double span = std::fmod(y - x, L);
    if (span < 0) span += L;
    double h = span / pieces, sum = 0;
    for (int i = 0; i < pieces; ++i) {
        double a = x + i * h;
        sum += boost::math::quadrature::gauss<double, 4>::integrate(
            [&](double s) {
                double k = c.at(s).k;
                return k * k;
            },
            a, a + h);
    }
    return sum;
}

inline ZnOperator zn_operator(const DiscreteCurve& c, double x, double y, double N, double K,
                              const GeodesicOptions& opt = {}) {
    double L = c.length();
    double fwd = std::fmod(y - x, L);
    if (fwd < 0) fwd += L;
    if (fwd > 0.5 * L) {
        std::swap(x, y);
        fwd = L - fwd;
    }
    DistanceJet jet = distance_jet(c.surface(), c.at(x), c.at(y), opt);
    double total = integral_k2(c, curvature_field(c));
    return zn_operator(jet, L, fwd, c.t(), N, K, arc_integral_k2(c, x, y), total);
}

// ---------------------------------------------------------------------------
// Gauss-Bonnet and isoperimetric residuals.
// ---------------------------------------------------------------------------

namespace detail {

// Signed integral of f over the region bounded by the spline, as a fan of
// triangles from the node centroid. Signed fans are exact for any closed curve.
template <class F>
double region_integral(const DiscreteCurve& c, F f, int sub = 4) {
    const auto& sp = c.spline();
    Point center{};
    for (const auto& z : c.nodes()) center += z;
    center /= double(c.size());
    using GL = boost::math::quadrature::gauss<double, 8>;
    double total = 0;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        double h = sp.gap(i);
        for (int k = 0; k < sub; ++k) {
            Point a = sp.value(i, h * k / sub), b = sp.value(i, h * (k + 1) / sub);
            double jac = cross(a - center, b - a);
            // Collapsed square: z = center + u (a - center) + u v (b - a), dA = u |jac| du dv.
            total += jac * GL::integrate(
                               [&](double u) {
                                   return u * GL::integrate(
                                                  [&](double v) { return f(center + u * (a - center) + u * v * (b - a)); },
                                                  0.0, 1.0);
                               },
                               0.0, 1.0);
        }
    }
    return total;
}

}  // namespace detail

// int k ds along the spline: k ds = (chart curvature - <grad log lambda, N>) |z'| du.
inline double total_geodesic_curvature(const DiscreteCurve& c) {
    const auto& sp = c.spline();
    const SurfaceModel& s = c.surface();
    double sum = 0;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        sum += boost::math::quadrature::gauss<double, 8>::integrate(
            [&](double u) {
                Point d1 = sp.d1(i, u), d2 = sp.d2(i, u);
                double sp1 = std::abs(d1);
                double kappa = cross(d1, d2) / (sp1 * sp1 * sp1);
                Point n = rot90(d1 / sp1);
                return (kappa - dot(s.log_factor(sp.value(i, u)).grad, n)) * sp1;
            },
            0.0, sp.gap(i));
    }
    return sum;
}

// int K dmu over the enclosed region: K lambda^2 = -Laplacian(h).
inline double total_curvature(const DiscreteCurve& c) {
    const SurfaceModel& s = c.surface();
    return detail::region_integral(c, [&](Point z) { return -s.log_factor(z).laplacian; });
}

inline double enclosed_area(const DiscreteCurve& c) {
    const SurfaceModel& s = c.surface();
    return detail::region_integral(c, [&](Point z) { return conformal_factor(s, z); });
}

struct GaussBonnet {
    double boundary_term = 0;  // int k ds
    double area_term = 0;      // int K dmu
    double expected = two_pi;  // 2 pi, or the total cone angle when an apex is enclosed
    double residual = 0;
    bool contains_apex = false;
};

// Regular Gauss-Bonnet. When the curve encloses conic points, `contains_apex`
// is set and the expected value becomes 2 pi (1 + sum of enclosed betas).
inline GaussBonnet gauss_bonnet_residual(const DiscreteCurve& c) {
    GaussBonnet g;
    const SurfaceModel& s = c.surface();
    for (const auto& p : s.divisor())
        if (winding_number(c.nodes(), p.at) != 0) {
            g.contains_apex = true;
            g.expected += two_pi * p.beta;
        }
    g.boundary_term = total_geodesic_curvature(c);
    g.area_term = total_curvature(c);
    g.residual = std::abs(g.boundary_term + g.area_term - g.expected);
    return g;
}

struct Isoperimetric {
    double lhs = 0;  // |boundary|^2
    double rhs = 0;  // 4 pi |region| - K_M |region|^2
    double area = 0;
    bool holds = false;
};

inline Isoperimetric isoperimetric_check(const DiscreteCurve& c, double tol = 1e-9) {
    Isoperimetric r;
    r.area = enclosed_area(c);
    r.lhs = c.length() * c.length();
    r.rhs = 4 * pi * r.area - c.surface().curvature_bound() * r.area * r.area;
    r.holds = r.lhs >= r.rhs - tol * r.lhs;
    return r;
}

// ---------------------------------------------------------------------------
// Blow-up rate sup k^2 (T - t).
// ---------------------------------------------------------------------------

enum class SingularityClass { NoSingularity, TypeI, TypeIISuspect };

inline const char* to_string(SingularityClass c) {
    switch (c) {
        case SingularityClass::NoSingularity: return "NoSingularity";
        case SingularityClass::TypeI: return "TypeI";
        case SingularityClass::TypeIISuspect: return "TypeII-suspect";
    }
    return "Unknown";
}

struct SingularityReport {
    double exponent = 0;  // sup over records of k_max^2 (T_est - t)
    SingularityClass classification = SingularityClass::NoSingularity;
    double last_decade_max = 0;
    double previous_decade_max = 0;
};

// TypeII-suspect when the maximum over the last decade of T - t exceeds the
// previous decade's maximum by more than `growth`.
inline SingularityReport singularity_exponent(const FlowTrace& trace, double growth = 1.5) {
    SingularityReport r;
    bool singular = trace.stop_reason == StopReason::LengthFloor || trace.stop_reason == StopReason::CurvatureCeiling;
    if (!singular || !std::isfinite(trace.T_est)) return r;
    double T = trace.T_est;
    double gap_min = infinity;
    for (const auto& rec : trace.records)
        if (T - rec.t > 0) gap_min = std::min(gap_min, T - rec.t);
    if (!std::isfinite(gap_min)) return r;
    for (const auto& rec : trace.records) {
        double gap = T - rec.t;
        if (!(gap > 0)) continue;
        double e = rec.sup_k * rec.sup_k * gap;
        r.exponent = std::max(r.exponent, e);
        if (gap <= 10 * gap_min) r.last_decade_max = std::max(r.last_decade_max, e);
        else if (gap <= 100 * gap_min) r.previous_decade_max = std::max(r.previous_decade_max, e);
    }
    bool grows = r.previous_decade_max > 0 && r.last_decade_max > growth * r.previous_decade_max;
    r.classification = grows ? SingularityClass::TypeIISuspect : SingularityClass::TypeI;
    return r;
}

// ---------------------------------------------------------------------------
// Rescaled flow around a base point.
// ---------------------------------------------------------------------------

// eta0 = 1 on [0, 1], cubic smoothstep down to 0 on [1, 2], 0 beyond.
struct CutoffProfile {
    double r_M = 1.0;

    static double eta0(double r) {
        if (r <= 1) return 1.0;
        if (r >= 2) return 0.0;
        double u = r - 1;
        return 1 - 3 * u * u + 2 * u * u * u;
    }
    static double eta0_prime(double r) {
        if (r <= 1 || r >= 2) return 0.0;
        double u = r - 1;
        return -6 * u + 6 * u * u;
    }
    // eta at rescaled distance d_tau: eta0(d_tau^2 / (2 tau^2 r_M^2)).
    double operator()(double d_tau, double tau) const { return eta0(d_tau * d_tau / (2 * tau * tau * r_M * r_M)); }
};

struct RescaledFrame {
    Point x0{};
    double T_est = 0.0;

    double tau(double t) const { return -0.5 * std::log(T_est - t); }
    double scale(double t) const { return 1.0 / (2.0 * (T_est - t)); }  // g_tau = scale * g
    double length_factor(double t) const { return std::sqrt(scale(t)); }
};

// Decay weight exp(-c int_0^tau e^{-2y} y^2 dy) for Rauch constant c, with the integral in closed form.
inline double weight_integral(double tau) {
    return 0.25 - std::exp(-2 * tau) * (0.5 * tau * tau + 0.5 * tau + 0.25);
}
inline double weight_integral_quadrature(double tau) {
    return boost::math::quadrature::gauss<double, 20>::integrate([](double y) { return std::exp(-2 * y) * y * y; },
                                                                 0.0, tau);
}
inline double decay_weight(double tau, double rauch_constant) {
    return std::exp(-rauch_constant * weight_integral(tau));
}

struct MTauSample {
    double t = 0, tau = 0;
    double M = 0;
    double weighted_M = 0;
    double sensitivity = 0;    // dM / dT_est by central difference
    double sup_k_tau = 0;
    double shrinker_residual = 0;
};

struct NodeGeodesicData {
    double d = 0;         // g-distance from x0
    double gamma_n = 0;   // <gamma'(1), n>_g with |gamma'| = d
};

namespace detail {

inline std::vector<NodeGeodesicData> base_point_data(const DiscreteCurve& c, Point x0,
                                                     const std::vector<NodeCurvature>& kf) {
    const SurfaceModel& s = c.surface();
    std::vector<NodeGeodesicData> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        Point z = c.nodes()[i];
        if (z == x0) continue;
        if (s.kind() == SurfaceKind::EuclideanPlane) {
            out[i] = {std::abs(z - x0), dot(z - x0, kf[i].normal)};
            continue;
        }
        GeodesicSegment g = shortest_geodesic(s, x0, z).best;
        out[i] = {g.length, g.length * conformal_factor(s, z) * dot(g.end_tangent, kf[i].normal)};
    }
    return out;
}

inline double m_value(const DiscreteCurve& c, const std::vector<NodeGeodesicData>& geo, double T,
                      const CutoffProfile& cut) {
    RescaledFrame f{{}, T};
    double tau = f.tau(c.t()), lf = f.length_factor(c.t());
    double sum = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double dt = geo[i].d * lf;
        sum += std::exp(-0.5 * dt * dt) * cut(dt, tau) * node_weight(c, i) * lf;
    }
    return sum;
}

}  // namespace detail

// int |k_tau + <gamma', n>_tau|^2 ds_tau with gamma the geodesic from x0.
inline double shrinker_residual(const DiscreteCurve& c, const RescaledFrame& frame) {
    auto kf = curvature_field(c);
    auto geo = detail::base_point_data(c, frame.x0, kf);
    double lf = frame.length_factor(c.t());
    double sum = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        // k scales by 1 / lf; <gamma', n> with both factors rescaled scales by lf.
        double v = kf[i].k / lf + geo[i].gamma_n * lf;
        sum += v * v * node_weight(c, i) * lf;
    }
    return sum;
}

inline MTauSample m_tau_sample(const DiscreteCurve& c, const RescaledFrame& frame, const CutoffProfile& cut,
                               double rauch_constant) {
    MTauSample m;
    m.t = c.t();
    m.tau = frame.tau(c.t());
    auto kf = curvature_field(c);
    auto geo = detail::base_point_data(c, frame.x0, kf);
    m.M = detail::m_value(c, geo, frame.T_est, cut);
    m.weighted_M = decay_weight(m.tau, rauch_constant) * m.M;
    double eps = 1e-6 * (frame.T_est - c.t());
    m.sensitivity =
        (detail::m_value(c, geo, frame.T_est + eps, cut) - detail::m_value(c, geo, frame.T_est - eps, cut)) / (2 * eps);
    double lf = frame.length_factor(c.t());
    double sum = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        m.sup_k_tau = std::max(m.sup_k_tau, std::abs(kf[i].k) / lf);
        double v = kf[i].k / lf + geo[i].gamma_n * lf;
        sum += v * v * node_weight(c, i) * lf;
    }
    m.shrinker_residual = sum;
    return m;
}

inline std::vector<MTauSample> m_tau(const FlowTrace& trace, const RescaledFrame& frame, const CutoffProfile& cut,
                                     double rauch_constant) {
    std::vector<MTauSample> out;
    for (const auto& c : trace.snapshots)
        if (c.t() < frame.T_est && frame.tau(c.t()) > 0) out.push_back(m_tau_sample(c, frame, cut, rauch_constant));
    return out;
}

// int_{a}^{b} p(tau) exp(2 tau - tau^2 r_M^2) / tau dtau
inline double error_budget(double a, double b, double rauch_constant, double r_M) {
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double tau) {
            return decay_weight(tau, rauch_constant) * std::exp(2 * tau - tau * tau * r_M * r_M) / tau;
        },
        a, b);
}

// Smallest constant C for which every increment of the weighted M stays within C * error_budget.
inline double calibrate_error_constant(const std::vector<MTauSample>& series, double rauch_constant, double r_M) {
    double error_constant = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        double inc = series[i].weighted_M - series[i - 1].weighted_M;
        double budget = error_budget(series[i - 1].tau, series[i].tau, rauch_constant, r_M);
        if (inc > 0 && budget > 0) error_constant = std::max(error_constant, inc / budget);
    }
    return error_constant;
}

struct MonotonicityCheck {
    bool holds = true;
    double worst_excess = -infinity;  // max of increment - allowed
};

inline MonotonicityCheck monotonicity_bound(const std::vector<MTauSample>& series, double rauch_constant,
                                            double error_constant, double r_M, double tol) {
    MonotonicityCheck r;
    for (std::size_t i = 1; i < series.size(); ++i) {
        double inc = series[i].weighted_M - series[i - 1].weighted_M;
        double allowed = error_constant * error_budget(series[i - 1].tau, series[i].tau, rauch_constant, r_M) + tol;
        r.worst_excess = std::max(r.worst_excess, inc - allowed);
        if (inc > allowed) r.holds = false;
    }
    return r;
}

}  // namespace csf
