#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <optional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "csf/core.hpp"
#include "csf/geometry.hpp"

namespace csf {

struct GeodesicOptions {
    int samples = 129;          // path samples including both ends
    double abs_tol = 1e-13;     // ODE tolerances
    double rel_tol = 1e-12;
    int max_newton = 40;
    double newton_tol = 1e-12;  // endpoint mismatch, relative to length
    double tie_tol = 1e-9;      // relative length gap under which branches tie
    int extra_loops = 1;        // extra turns around the apex tried in each direction
};

// Constant-speed geodesic on alpha in [0, 1]. Tangents and normals are chart
// components of g-unit vectors; (tangent, normal) is positively oriented.
struct GeodesicSegment {
    Point start{}, end{};
    double length = 0.0;
    std::vector<Point> path;
    Point start_tangent{}, end_tangent{};
    Point start_normal{}, end_normal{};
    std::optional<std::size_t> apex;  // conic point the branch was enumerated around
    double sweep = 0.0;               // chart angle swept around that apex
    int winding = 0;                  // branch label: sweep = ccw gap + 2 pi winding
    bool through_apex = false;
};

struct GeodesicSolution {
    GeodesicSegment best;
    std::vector<GeodesicSegment> co_minimal;  // includes best; size > 1 on a tie
    std::vector<GeodesicSegment> candidates;  // every converged branch, sorted by length
};

namespace detail {

using GeoState = std::array<double, 6>;  // z, dz/dalpha, J, J'

// Geodesic equation of g = e^{2 phi}|dz|^2 together with J'' + len^2 K J = 0.
struct GeodesicSystem {
    const SurfaceModel* surface;
    double len;
    std::vector<double> exclusion_r2;  // squared chart radius of each apex exclusion disk

    void operator()(const GeoState& x, GeoState& dx, double /*alpha*/) const {
        Point z(x[0], x[1]), v(x[2], x[3]);
        const auto& div = surface->divisor();
        for (std::size_t i = 0; i < div.size(); ++i)
            if (std::norm(z - div[i].at) < exclusion_r2[i])
                throw Error(ErrorKind::ApexCollision, "geodesic entered an apex exclusion disk");
        LogFactor f = surface->log_factor(z);
        Point acc = -2.0 * dot(f.grad, v) * v + std::norm(v) * f.grad;
        double k = -f.laplacian * std::exp(-2.0 * f.phi);
        dx = {v.real(), v.imag(), acc.real(), acc.imag(), x[5], -len * len * k * x[4]};
    }
};

inline std::vector<double> exclusion_radii2(const SurfaceModel& s) {
    std::vector<double> out;
    for (std::size_t i = 0; i < s.divisor().size(); ++i) {
        double beta = s.divisor()[i].beta;
        double sc = 1.0 + beta;
        double eps = s.apex_exclusion();
        double r = std::pow(eps * sc / std::exp(s.local_smooth_part(s.divisor()[i].at, i)), 1.0 / sc);
        out.push_back(r * r);
    }
    return out;
}

// Integrates from alpha = 0 to 1 and returns the state at evenly spaced samples.
inline std::vector<GeoState> integrate_geodesic(const SurfaceModel& s, GeoState x0, double len,
                                                const GeodesicOptions& opt) {
    namespace ode = boost::numeric::odeint;
    GeodesicSystem sys{&s, len, exclusion_radii2(s)};
    std::vector<double> times(opt.samples);
    for (int i = 0; i < opt.samples; ++i) times[i] = double(i) / (opt.samples - 1);
    std::vector<GeoState> out;
    out.reserve(opt.samples);
    auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<GeoState>());
    try {
        ode::integrate_times(stepper, sys, x0, times.begin(), times.end(), 1e-3,
                             [&](const GeoState& x, double) { out.push_back(x); });
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::OdeFailure, e.what());
    }
    for (const auto& x : out)
        for (double c : x)
            if (!std::isfinite(c)) throw Error(ErrorKind::OdeFailure, "non-finite geodesic state");
    return out;
}

inline Point g_unit(const SurfaceModel& s, Point z, Point v) { return v / (std::abs(v) * s.lambda(z)); }

inline GeodesicSegment segment_from_states(const SurfaceModel& s, const std::vector<GeoState>& xs, double len) {
    GeodesicSegment seg;
    seg.length = len;
    seg.path.reserve(xs.size());
    for (const auto& x : xs) seg.path.emplace_back(x[0], x[1]);
    seg.start = seg.path.front();
    seg.end = seg.path.back();
    seg.start_tangent = g_unit(s, seg.start, Point(xs.front()[2], xs.front()[3]));
    seg.end_tangent = g_unit(s, seg.end, Point(xs.back()[2], xs.back()[3]));
    seg.start_normal = rot90(seg.start_tangent);
    seg.end_normal = rot90(seg.end_tangent);
    return seg;
}

struct Shot {
    GeodesicSegment segment;
    double jacobi_end = 0.0;  // J(1) with J(0) = 0, J'(0) = len
};

inline Shot shoot_angle(const SurfaceModel& s, Point p, double angle, double len, const GeodesicOptions& opt) {
    Point v = std::polar(len / s.lambda(p), angle);
    GeoState x0{p.real(), p.imag(), v.real(), v.imag(), 0.0, len};
    auto xs = integrate_geodesic(s, x0, len, opt);
    return {segment_from_states(s, xs, len), xs.back()[4]};
}

inline double swept_angle(const std::vector<Point>& path, Point c) {
    double total = 0;
    for (std::size_t i = 1; i < path.size(); ++i) total += turn_angle(path[i - 1] - c, path[i] - c);
    return total;
}

// Newton iteration on (initial angle, length). The endpoint derivative along the
// length is the end tangent; along the angle it is J(1) times the end normal.
inline std::optional<Shot> solve_bvp(const SurfaceModel& s, Point p, Point q, double angle, double len,
                                     const GeodesicOptions& opt) {
    auto residual = [&](const Shot& sh) { return s.lambda(q) * std::abs(q - sh.segment.end); };
    std::optional<Shot> cur;
    try {
        cur = shoot_angle(s, p, angle, len, opt);
    } catch (const Error&) {
        return std::nullopt;
    }
    double err = residual(*cur);
    for (int it = 0; it < opt.max_newton; ++it) {
        double tol = opt.newton_tol * std::max(len, 1e-3);
        if (err <= tol) return cur;
        Point r = q - cur->segment.end;
        Point t2 = cur->segment.end_tangent, n2 = cur->segment.end_normal;
        if (std::abs(cur->jacobi_end) < 1e-14 * len) return std::nullopt;
        double dl = dot(r, t2) / std::norm(t2);
        double da = dot(r, n2) / (std::norm(n2) * cur->jacobi_end);
        bool improved = false;
        for (double step = 1.0; step > 1e-4; step *= 0.5) {
            double nl = len + step * dl;
            if (nl <= 0) continue;
            try {
                Shot trial = shoot_angle(s, p, angle + step * da, nl, opt);
                double e = residual(trial);
                if (e < err) {
                    angle += step * da;
                    len = nl;
                    cur = std::move(trial);
                    err = e;
                    improved = true;
                    break;
                }
            } catch (const Error&) {
            }
        }
        if (!improved) break;
    }
    if (err <= 1e3 * opt.newton_tol * std::max(len, 1e-3)) return cur;
    return std::nullopt;
}

inline double segment_distance(Point c, Point p, Point q) {
    Point d = q - p;
    double t = std::norm(d) > 0 ? std::clamp(dot(c - p, d) / std::norm(d), 0.0, 1.0) : 0.0;
    return std::abs(c - (p + t * d));
}

}  // namespace detail

// Geodesic from p with initial direction dir (any nonzero chart vector).
inline GeodesicSegment shoot(const SurfaceModel& s, Point p, Point dir, double len, const GeodesicOptions& opt = {}) {
    if (!(len > 0)) throw Error(ErrorKind::ValidationError, "shooting length must be positive");
    return detail::shoot_angle(s, p, std::arg(dir), len, opt).segment;
}

// Apex distance of z: exact polar chart when available, tangent-cone estimate otherwise.
inline double geodesic_radius(const SurfaceModel& s, std::size_t apex, Point z) {
    if (s.single_flat_apex()) return s.apex_distance(z, apex);
    ConePolarChart chart(s, apex);
    return chart.to_polar(z).rho;
}

namespace detail {

inline GeodesicSegment reversed(const GeodesicSegment& g) {
    GeodesicSegment r = g;
    std::swap(r.start, r.end);
    std::reverse(r.path.begin(), r.path.end());
    r.start_tangent = -g.end_tangent;
    r.end_tangent = -g.start_tangent;
    r.start_normal = rot90(r.start_tangent);
    r.end_normal = rot90(r.end_tangent);
    r.sweep = -g.sweep;
    r.winding = -g.winding - 1;
    return r;
}

inline GeodesicSolution shortest_geodesic_ordered(const SurfaceModel& s, Point p, Point q, const GeodesicOptions& opt) {
    std::vector<GeodesicSegment> found;

    std::optional<std::size_t> apex;
    double chord = std::abs(q - p);
    {
        double best = infinity;
        for (std::size_t i = 0; i < s.divisor().size(); ++i) {
            double d = detail::segment_distance(s.divisor()[i].at, p, q);
            if (d < best) {
                best = d;
                apex = i;
            }
        }
        if (apex && best > 3.0 * chord) apex.reset();
    }

    if (!apex) {
        Point mid = 0.5 * (p + q);
        double len = s.lambda(mid) * chord;
        if (auto sh = detail::solve_bvp(s, p, q, std::arg(q - p), len, opt)) {
            found.push_back(std::move(sh->segment));
        }
    } else {
        const ConePoint& c = s.divisor()[*apex];
        double sc = 1.0 + c.beta;
        double th1 = std::arg(p - c.at);
        double gap = wrap_angle(std::arg(q - c.at) - th1);
        double rho1 = s.apex_distance(p, *apex), rho2 = s.apex_distance(q, *apex);
        for (int k = -opt.extra_loops - 1; k <= opt.extra_loops; ++k) {
            double sweep = gap + two_pi * k;
            if (sc * std::abs(sweep) >= pi) continue;
            // Developed picture with p on the positive real axis.
            Point w2 = std::polar(rho2, sc * sweep);
            Point d = w2 - rho1;
            double angle = std::arg(d) + th1;
            auto sh = detail::solve_bvp(s, p, q, angle, std::abs(d), opt);
            if (!sh) continue;
            double sw = detail::swept_angle(sh->segment.path, c.at);
            if (std::abs(sw - sweep) > 0.5) continue;
            sh->segment.apex = apex;
            sh->segment.sweep = sw;
            sh->segment.winding = k;
            found.push_back(std::move(sh->segment));
        }
        if (c.beta > 0) {
            GeodesicSegment seg;
            seg.start = p;
            seg.end = q;
            seg.length = geodesic_radius(s, *apex, p) + geodesic_radius(s, *apex, q);
            int half = opt.samples / 2;
            for (int i = 0; i <= half; ++i) seg.path.push_back(p + (c.at - p) * (double(i) / half));
            for (int i = 1; i < opt.samples - half; ++i)
                seg.path.push_back(c.at + (q - c.at) * (double(i) / (opt.samples - 1 - half)));
            seg.start_tangent = detail::g_unit(s, p, c.at - p);
            seg.end_tangent = detail::g_unit(s, q, q - c.at);
            seg.start_normal = rot90(seg.start_tangent);
            seg.end_normal = rot90(seg.end_tangent);
            seg.apex = apex;
            seg.through_apex = true;
            found.push_back(std::move(seg));
        }
    }
    if (found.empty()) throw Error(ErrorKind::NoConvergence, "no geodesic branch converged");
    std::stable_sort(found.begin(), found.end(),
                     [](const GeodesicSegment& a, const GeodesicSegment& b) { return a.length < b.length; });
    GeodesicSolution sol;
    sol.best = found.front();
    double lim = found.front().length * (1.0 + opt.tie_tol);
    for (const auto& f : found)
        if (f.length <= lim) sol.co_minimal.push_back(f);
    sol.candidates = std::move(found);
    return sol;
}

}  // namespace detail

// Branches are always solved from the lexicographically smaller endpoint, so
// the result is symmetric in (p, q) to the last bit.
inline GeodesicSolution shortest_geodesic(const SurfaceModel& s, Point p, Point q, const GeodesicOptions& opt = {}) {
    if (p == q) throw Error(ErrorKind::ValidationError, "shortest_geodesic needs distinct endpoints");
    bool swap = q.real() < p.real() || (q.real() == p.real() && q.imag() < p.imag());
    if (!swap) return detail::shortest_geodesic_ordered(s, p, q, opt);
    GeodesicSolution sol = detail::shortest_geodesic_ordered(s, q, p, opt);
    sol.best = detail::reversed(sol.best);
    for (auto& g : sol.co_minimal) g = detail::reversed(g);
    for (auto& g : sol.candidates) g = detail::reversed(g);
    return sol;
}

// Distance in closed form where the geometry allows it: plane, sphere, and a
// single conic point with constant h (flat cones and their double covers).
inline std::optional<double> closed_form_distance(const SurfaceModel& s, Point p, Point q) {
    switch (s.kind()) {
        case SurfaceKind::EuclideanPlane: return std::abs(p - q);
        case SurfaceKind::SpherePatch: {
            auto a = sphere_embedding(s, p), b = sphere_embedding(s, q);
            std::array<double, 3> c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
            double sn = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
            double cs = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            return s.sphere_radius() * std::atan2(sn, cs);
        }
        default: break;
    }
    if (!s.single_flat_apex()) return std::nullopt;
    const ConePoint& c = s.divisor()[0];
    TangentConePoint a{s.apex_distance(p, 0), std::arg(p - c.at)};
    TangentConePoint b{s.apex_distance(q, 0), std::arg(q - c.at)};
    return cone_distance_polar(1.0 + c.beta, a, b);
}

inline double distance(const SurfaceModel& s, Point p, Point q, const GeodesicOptions& opt = {}) {
    if (p == q) return 0.0;
    if (auto d = closed_form_distance(s, p, q)) return *d;
    return shortest_geodesic(s, p, q, opt).best.length;
}

// ---------------------------------------------------------------------------
// Jacobi fields along a geodesic segment.
// ---------------------------------------------------------------------------

enum class JacobiBoundary {
    EndpointPinnedAtOne,   // J(1) = 0, J'(1) = -d
    EndpointPinnedAtZero,  // J(0) = 0, J'(0) = -d
    ApexNormalized,        // J(0) = 0, J'(0) = d
};

struct JacobiField {
    JacobiBoundary boundary{};
    double length = 0.0;
    std::vector<double> alpha, J, J_prime;
    std::vector<Point> path;

    double J_at_start() const { return J.front(); }
    double J_at_end() const { return J.back(); }
    double Jp_at_start() const { return J_prime.front(); }
    double Jp_at_end() const { return J_prime.back(); }
};

inline JacobiField jacobi_solve(const SurfaceModel& s, const GeodesicSegment& seg, JacobiBoundary kind,
                                const GeodesicOptions& opt = {}) {
    if (seg.through_apex) throw Error(ErrorKind::DegenerateJacobi, "no Jacobi field through the apex");
    if (!(seg.length > 0)) throw Error(ErrorKind::OdeFailure, "degenerate segment");
    double d = seg.length;
    bool reversed = kind == JacobiBoundary::EndpointPinnedAtOne;
    Point from = reversed ? seg.end : seg.start;
    Point dir = reversed ? -seg.end_tangent : seg.start_tangent;
    Point v = dir / std::abs(dir) * (d / s.lambda(from));
    detail::GeoState x0{from.real(), from.imag(), v.real(), v.imag(), 0.0, d};
    auto xs = detail::integrate_geodesic(s, x0, d, opt);
    int n = opt.samples;
    JacobiField f;
    f.boundary = kind;
    f.length = d;
    f.alpha.resize(n);
    f.J.resize(n);
    f.J_prime.resize(n);
    f.path.resize(n);
    for (int i = 0; i < n; ++i) {
        f.alpha[i] = double(i) / (n - 1);
        int src = reversed ? n - 1 - i : i;
        double j = xs[src][4], jp = xs[src][5];
        f.path[i] = Point(xs[src][0], xs[src][1]);
        switch (kind) {
            case JacobiBoundary::ApexNormalized:
                f.J[i] = j;
                f.J_prime[i] = jp;
                break;
            case JacobiBoundary::EndpointPinnedAtZero:
                f.J[i] = -j;
                f.J_prime[i] = -jp;
                break;
            case JacobiBoundary::EndpointPinnedAtOne:
                f.J[i] = j;
                f.J_prime[i] = -jp;
                break;
        }
    }
    // A sign change away from the pinned end means a conjugate point in range.
    for (int i = 0; i < n; ++i) {
        double a = f.alpha[i];
        bool pinned = (kind == JacobiBoundary::EndpointPinnedAtOne) ? (i == n - 1) : (i == 0);
        if (pinned) continue;
        double expected_sign = (kind == JacobiBoundary::EndpointPinnedAtZero) ? -1.0 : 1.0;
        if (!(f.J[i] * expected_sign > 0))
            throw Error(ErrorKind::DegenerateJacobi, "conjugate point at alpha = " + std::to_string(a));
    }
    return f;
}

// (J'(1) - J(1)) / J(1) for the apex-normalized field; invariant under g -> c^2 g.
inline double jx_factor(const SurfaceModel& s, const GeodesicSegment& seg, const GeodesicOptions& opt = {}) {
    JacobiField f = jacobi_solve(s, seg, JacobiBoundary::ApexNormalized, opt);
    double j1 = f.J_at_end();
    if (!(j1 > 0)) throw Error(ErrorKind::DegenerateJacobi, "J(1) vanishes");
    return (f.Jp_at_end() - j1) / j1;
}

struct RauchReport {
    bool sinh_bound = true;        // |J(a)| <= sinh(d sqrt(K_M) (1 - a)) / sqrt(K_M)
    bool derivative_bound = true;  // |J'(a) - J'(1)| <= K_M d^3 (1 - a) + K_M^2 d^5
    bool slope_bound = true;       // J'(a) <= -d + 2 d^3 K_M
    bool value_bound = true;       // J(0) >= d - 2 d^3 K_M > d / 2
    bool all() const { return sinh_bound && derivative_bound && slope_bound && value_bound; }
};

inline RauchReport rauch_check(const JacobiField& f, double curvature_bound) {
    RauchReport r;
    double d = f.length, km = curvature_bound;
    double tol = 1e-9 * d;
    double jp1 = f.Jp_at_end();
    for (std::size_t i = 0; i < f.alpha.size(); ++i) {
        double a = f.alpha[i];
        double lim = km > 0 ? std::sinh(d * std::sqrt(km) * (1 - a)) / std::sqrt(km) : d * (1 - a);
        if (std::abs(f.J[i]) > lim + tol) r.sinh_bound = false;
        if (std::abs(f.J_prime[i] - jp1) > km * d * d * d * (1 - a) + km * km * std::pow(d, 5) + tol)
            r.derivative_bound = false;
        if (f.J_prime[i] > -d + 2 * d * d * d * km + tol) r.slope_bound = false;
    }
    double j0 = f.J_at_start();
    if (j0 < d - 2 * d * d * d * km - tol || !(j0 > d / 2)) r.value_bound = false;
    return r;
}

// ---------------------------------------------------------------------------
// Distance between two moving curve points and its derivatives.
// ---------------------------------------------------------------------------

// A curve point with chart components of the g-unit tangent and the signed
// geodesic curvature; the normal is the tangent turned by +90 degrees.
struct CurvePoint {
    Point z{};
    Point tangent{};
    double k = 0.0;
    Point normal() const { return rot90(tangent); }
};

template <class C>
concept ArcSampler = requires(const C& c, double s) {
    { c.length() } -> std::convertible_to<double>;
    { c.at(s) } -> std::convertible_to<CurvePoint>;
};

struct DistanceJet {
    double F = 0, F_t = 0, F_s1 = 0, F_s2 = 0;
    double F_s1s1 = 0, F_s2s2 = 0, F_s1s2 = 0;
    double F_s2s1 = 0;  // from the second Jacobi field; equals F_s1s2
};

inline DistanceJet distance_jet(const SurfaceModel& s, const CurvePoint& a, const CurvePoint& b,
                                const GeodesicOptions& opt = {}) {
    GeodesicSolution sol = shortest_geodesic(s, a.z, b.z, opt);
    if (sol.co_minimal.size() > 1) throw Error(ErrorKind::BranchTie, "two shortest branches tie");
    const GeodesicSegment& g = sol.best;
    double d = g.length;
    if (g.through_apex || d >= s.jet_radius() || d >= s.injectivity_scale())
        throw Error(ErrorKind::TooFar, "points too far apart for the distance calculus");
    double l1 = conformal_factor(s, a.z), l2 = conformal_factor(s, b.z);
    auto ip1 = [&](Point u, Point v) { return l1 * dot(u, v); };
    auto ip2 = [&](Point u, Point v) { return l2 * dot(u, v); };

    JacobiField j1 = jacobi_solve(s, g, JacobiBoundary::EndpointPinnedAtOne, opt);
    JacobiField j2 = jacobi_solve(s, g, JacobiBoundary::EndpointPinnedAtZero, opt);

    double t1n1 = ip1(a.tangent, g.start_normal);
    double t2n2 = ip2(b.tangent, g.end_normal);
    double kn1 = ip1(g.start_tangent, a.k * a.normal());
    double kn2 = ip2(g.end_tangent, b.k * b.normal());

    DistanceJet jet;
    jet.F = d;
    jet.F_t = kn2 - kn1;
    jet.F_s1 = -ip1(g.start_tangent, a.tangent);
    jet.F_s2 = ip2(g.end_tangent, b.tangent);
    jet.F_s1s1 = -(j1.Jp_at_start() / j1.J_at_start()) / d * t1n1 * t1n1 - kn1;
    jet.F_s2s2 = (j2.Jp_at_end() / j2.J_at_end()) / d * t2n2 * t2n2 + kn2;
    jet.F_s1s2 = (j1.Jp_at_end() / j1.J_at_start()) / d * t1n1 * t2n2;
    jet.F_s2s1 = -(j2.Jp_at_start() / j2.J_at_end()) / d * t1n1 * t2n2;
    return jet;
}

template <ArcSampler C>
DistanceJet distance_jet(const SurfaceModel& s, const C& curve, double s1, double s2, const GeodesicOptions& opt = {}) {
    return distance_jet(s, curve.at(s1), curve.at(s2), opt);
}

}  // namespace csf
