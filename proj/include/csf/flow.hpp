#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "csf/core.hpp"
#include "csf/geodesic.hpp"
#include "csf/geometry.hpp"
#include "csf/spline.hpp"

namespace csf {

// Closed counterclockwise polyline on a surface. Arc lengths are g-lengths of
// the periodic cubic spline through the nodes.
class DiscreteCurve {
public:
    DiscreteCurve(SurfaceRef surface, std::vector<Point> nodes, double t)
        : surface_(std::move(surface)), spline_(std::move(nodes)), t_(t) {
        const std::size_t n = spline_.size();
        seg_.resize(n);
        arc_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            seg_[i] = partial_length(i, spline_.gap(i));
            arc_[i + 1] = arc_[i] + seg_[i];
        }
    }

    const SurfaceModel& surface() const { return *surface_; }
    const SurfaceRef& surface_ref() const { return surface_; }
    const std::vector<Point>& nodes() const { return spline_.nodes(); }
    std::size_t size() const { return spline_.size(); }
    double t() const { return t_; }
    const std::vector<double>& arc() const { return arc_; }
    double length() const { return arc_.back(); }
    double segment_length(std::size_t i) const { return seg_[i]; }
    const PeriodicSpline& spline() const { return spline_; }

    double min_segment() const { return *std::min_element(seg_.begin(), seg_.end()); }
    double max_segment() const { return *std::max_element(seg_.begin(), seg_.end()); }

    // Position at arc length s (taken modulo L).
    Point point_at(double s) const {
        auto [i, u] = locate(s);
        return spline_.value(i, u);
    }

    // Position, g-unit tangent and geodesic curvature at arc length s.
    CurvePoint at(double s) const {
        auto [i, u] = locate(s);
        Point z = spline_.value(i, u), d1 = spline_.d1(i, u), d2 = spline_.d2(i, u);
        double sp = modulus(d1);
        double kappa = cross(d1, d2) / (sp * sp * sp);
        Point te = d1 / sp;
        LogFactor f = surface_->log_factor(z);
        double lam = std::exp(f.phi);
        return {z, te / lam, (kappa - dot(f.grad, rot90(te))) / lam};
    }

private:
    double partial_length(std::size_t i, double u) const {
        auto f = [&](double v) {
            auto [z, d] = spline_.value_d1(i, v);
            return surface_->lambda(z) * modulus(d);
        };
        return boost::math::quadrature::gauss<double, 3>::integrate(f, 0.0, u);
    }

    std::pair<std::size_t, double> locate(double s) const {
        double L = length();
        s = std::fmod(s, L);
        if (s < 0) s += L;
        std::size_t i = std::upper_bound(arc_.begin(), arc_.end(), s) - arc_.begin();
        i = std::min<std::size_t>(i == 0 ? 0 : i - 1, size() - 1);
        double target = s - arc_[i];
        double h = spline_.gap(i);
        double u = h * std::clamp(target / seg_[i], 0.0, 1.0);
        for (int it = 0; it < 8; ++it) {
            double speed = surface_->lambda(spline_.value(i, u)) * modulus(spline_.d1(i, u));
            double du = (partial_length(i, u) - target) / speed;
            u = std::clamp(u - du, 0.0, h);
            if (std::abs(du) < 1e-15 * h) break;
        }
        return {i, u};
    }

    SurfaceRef surface_;
    PeriodicSpline spline_;
    double t_;
    std::vector<double> seg_;
    std::vector<double> arc_;
};

// Geodesic curvature and g-unit normal (chart components) at a node.
struct NodeCurvature {
    double k = 0.0;
    Point normal{};
};

// Curvature of the chart circle through three consecutive nodes, corrected by
// the conformal factor: k = (kappa - <grad log lambda, N>) / lambda.
inline NodeCurvature local_curvature(const SurfaceModel& s, Point a, Point z, Point b) {
    Point e1 = z - a, e2 = b - z;
    double l1 = modulus(e1), l2 = modulus(e2), l3 = modulus(b - a);
    double kappa = 2 * cross(e1, e2) / (l1 * l2 * l3);
    Point t = (l2 / l1) * e1 + (l1 / l2) * e2;
    t /= modulus(t);
    Point n = rot90(t);
    LogFactor f = s.log_factor(z);
    double lam = std::exp(f.phi);
    return {(kappa - dot(f.grad, n)) / lam, n / lam};
}

inline std::vector<NodeCurvature> curvature_field(const DiscreteCurve& c) {
    const auto& z = c.nodes();
    const std::size_t n = z.size();
    std::vector<NodeCurvature> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = local_curvature(c.surface(), z[(i + n - 1) % n], z[i], z[(i + 1) % n]);
    return out;
}

// Dual arc-length weight of node i.
inline double node_weight(const DiscreteCurve& c, std::size_t i) {
    std::size_t n = c.size();
    return 0.5 * (c.segment_length((i + n - 1) % n) + c.segment_length(i));
}

inline double integral_k2(const DiscreteCurve& c, const std::vector<NodeCurvature>& kf) {
    double sum = 0;
    for (std::size_t i = 0; i < c.size(); ++i) sum += kf[i].k * kf[i].k * node_weight(c, i);
    return sum;
}

inline double sup_abs_k(const std::vector<NodeCurvature>& kf) {
    double m = 0;
    for (const auto& k : kf) m = std::max(m, std::abs(k.k));
    return m;
}

// ---------------------------------------------------------------------------
// Embeddedness: proper intersections between non-adjacent chart edges.
// ---------------------------------------------------------------------------

namespace detail {

inline bool segments_cross(Point a, Point b, Point c, Point d) {
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace detail

inline bool is_embedded(const std::vector<Point>& z) {
    const std::size_t n = z.size();
    double lo_x = infinity, lo_y = infinity, cell = 0;
    for (std::size_t i = 0; i < n; ++i) {
        lo_x = std::min(lo_x, z[i].real());
        lo_y = std::min(lo_y, z[i].imag());
        cell = std::max(cell, modulus(z[(i + 1) % n] - z[i]));
    }
    if (!(cell > 0)) return false;
    // Bucket every edge into the grid cells its bounding box touches.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> entries;
    entries.reserve(4 * n);
    for (std::size_t i = 0; i < n; ++i) {
        Point a = z[i], b = z[(i + 1) % n];
        auto cx0 = std::uint64_t((std::min(a.real(), b.real()) - lo_x) / cell);
        auto cx1 = std::uint64_t((std::max(a.real(), b.real()) - lo_x) / cell);
        auto cy0 = std::uint64_t((std::min(a.imag(), b.imag()) - lo_y) / cell);
        auto cy1 = std::uint64_t((std::max(a.imag(), b.imag()) - lo_y) / cell);
        for (auto x = cx0; x <= cx1; ++x)
            for (auto y = cy0; y <= cy1; ++y) entries.emplace_back((x << 32) | y, std::uint32_t(i));
    }
    std::sort(entries.begin(), entries.end());
    for (std::size_t lo = 0; lo < entries.size();) {
        std::size_t hi = lo;
        while (hi < entries.size() && entries[hi].first == entries[lo].first) ++hi;
        for (std::size_t p = lo; p < hi; ++p)
            for (std::size_t q = p + 1; q < hi; ++q) {
                std::size_t i = entries[p].second, j = entries[q].second;
                std::size_t gap = i > j ? i - j : j - i;
                if (gap <= 1 || gap == n - 1) continue;
                if (detail::segments_cross(z[i], z[(i + 1) % n], z[j], z[(j + 1) % n])) return false;
            }
        lo = hi;
    }
    return true;
}

// Winding number of the closed polyline around c.
inline int winding_number(const std::vector<Point>& z, Point c) {
    double total = 0;
    for (std::size_t i = 0; i < z.size(); ++i) total += turn_angle(z[i] - c, z[(i + 1) % z.size()] - c);
    return int(std::lround(total / two_pi));
}

// ---------------------------------------------------------------------------
// Time stepping.
// ---------------------------------------------------------------------------

inline bool needs_remesh(const DiscreteCurve& c) {
    double mean = c.length() / double(c.size());
    return c.min_segment() < 0.5 * mean || c.max_segment() > 2.0 * mean;
}

// Arc-length-uniform resampling of the spline; node 0 stays in place.
inline DiscreteCurve remesh(const DiscreteCurve& c, std::size_t n = 0) {
    if (n == 0) n = c.size();
    std::vector<Point> z(n);
    double L = c.length();
    z[0] = c.nodes()[0];
    for (std::size_t j = 1; j < n; ++j) z[j] = c.point_at(L * double(j) / double(n));
    return DiscreteCurve(c.surface_ref(), std::move(z), c.t());
}

// One explicit Euler step along k n without remeshing. Throws StepRejected with
// cause ApexContact or EmbeddingLost.
inline DiscreteCurve advance(const DiscreteCurve& c, const std::vector<NodeCurvature>& kf, double dt) {
    const SurfaceModel& s = c.surface();
    std::vector<Point> z = c.nodes();
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += dt * kf[i].k * kf[i].normal;
    if (!s.divisor().empty()) {
        for (const auto& p : z)
            if (s.min_apex_distance(p) < s.apex_exclusion())
                throw Error(ErrorKind::StepRejected, ErrorKind::ApexContact, "node entered the apex exclusion disk");
    }
    if (!is_embedded(z)) throw Error(ErrorKind::StepRejected, ErrorKind::EmbeddingLost, "edges intersect");
    return DiscreteCurve(c.surface_ref(), std::move(z), c.t() + dt);
}

inline DiscreteCurve step(const DiscreteCurve& c, double dt) {
    DiscreteCurve moved = advance(c, curvature_field(c), dt);
    return needs_remesh(moved) ? remesh(moved) : moved;
}

struct LengthRate {
    double measured = 0.0;  // (L_after - L_before) / dt
    double expected = 0.0;  // -int k^2 ds, averaged over both snapshots
    double residual = 0.0;  // |measured - expected| / |expected|
};

inline LengthRate length_rate_check(const DiscreteCurve& before, const DiscreteCurve& after) {
    double dt = after.t() - before.t();
    LengthRate r;
    r.measured = (after.length() - before.length()) / dt;
    r.expected = -0.5 * (integral_k2(before, curvature_field(before)) + integral_k2(after, curvature_field(after)));
    double gap = std::abs(r.measured - r.expected);
    r.residual = r.expected != 0 ? gap / std::abs(r.expected) : (gap == 0 ? 0.0 : infinity);
    return r;
}

// Initial curve: N nodes uniformly spaced in g-arc length along a closed chart
// parametrization on [0, 2 pi).
inline DiscreteCurve sample_curve(SurfaceRef s, const std::function<Point(double)>& param, std::size_t n,
                                  double t = 0.0) {
    const std::size_t m = 64 * n;
    std::vector<double> cum(m + 1, 0.0);
    Point prev = param(0.0);
    for (std::size_t i = 1; i <= m; ++i) {
        Point cur = param(two_pi * double(i) / double(m));
        cum[i] = cum[i - 1] + s->lambda(0.5 * (prev + cur)) * modulus(cur - prev);
        prev = cur;
    }
    std::vector<Point> z(n);
    for (std::size_t j = 0; j < n; ++j) {
        double target = cum[m] * double(j) / double(n);
        std::size_t i = std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
        i = std::clamp<std::size_t>(i, 1, m);
        double f = (target - cum[i - 1]) / (cum[i] - cum[i - 1]);
        z[j] = param(two_pi * (double(i - 1) + f) / double(m));
    }
    return DiscreteCurve(std::move(s), std::move(z), t);
}

// ---------------------------------------------------------------------------
// Flow driver.
// ---------------------------------------------------------------------------

enum class StopReason { LengthFloor, CurvatureCeiling, TimeHorizon, ApexContact, EmbeddingLost };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::LengthFloor: return "LengthFloor";
        case StopReason::CurvatureCeiling: return "CurvatureCeiling";
        case StopReason::TimeHorizon: return "TimeHorizon";
        case StopReason::ApexContact: return "ApexContact";
        case StopReason::EmbeddingLost: return "EmbeddingLost";
    }
    return "Unknown";
}

inline constexpr double not_computed = std::numeric_limits<double>::quiet_NaN();

// One row per output time. Fields a run does not compute stay NaN.
struct DiagnosticsRecord {
    std::size_t step = 0;
    double t = 0.0;
    double length = 0.0;
    double sup_k = 0.0;
    double int_k2 = 0.0;
    double tip_distance = not_computed;
    int winding = 0;
    double huisken = not_computed;
    double comparison = not_computed;
    double gauss_bonnet = not_computed;
    double zn_min = not_computed;
    double lifted_length = not_computed;
};

struct StepSample {
    double t = 0.0;
    double dt = 0.0;
    double length = 0.0;
    double length_rate_residual = 0.0;
    bool remeshed = false;
    bool length_decreased = true;
};

struct FlowTrace {
    std::vector<DiscreteCurve> snapshots;  // one per record
    std::vector<DiagnosticsRecord> records;
    std::vector<StepSample> steps;
    StopReason stop_reason = StopReason::TimeHorizon;
    double T_est = not_computed;
    double initial_length = 0.0;
    std::size_t remesh_count = 0;
};

struct FlowConfig {
    double cfl = 0.2;
    double length_floor = 1e-3;       // stop when L < length_floor * L(0)
    double curvature_ceiling = 1e3;   // stop when sup|k| * L(t) > curvature_ceiling
    double time_horizon = infinity;
    double output_dt = infinity;      // record at least this often in t
    double output_length_drop = 0.02; // and whenever L fell by this fraction
    std::size_t max_steps = 20'000'000;
    int max_halvings = 8;
    bool keep_snapshots = true;
    bool track_tip = false;
    std::size_t tip_apex = 0;
    std::function<void(const DiscreteCurve&, DiagnosticsRecord&)> on_record;
};

// Least-squares fit of L^2 = a (T - t) over the last `window` records.
inline double fit_singular_time(const std::vector<DiagnosticsRecord>& recs, std::size_t window = 20) {
    if (recs.size() < 3) return not_computed;
    std::size_t from = recs.size() > window ? recs.size() - window : 0;
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = from; i < recs.size(); ++i) {
        double t = recs[i].t, y = recs[i].length * recs[i].length;
        n += 1;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    double slope = (n * sty - st * sy) / (n * stt - st * st);
    double icept = (sy - slope * st) / n;
    if (!(slope < 0)) return not_computed;
    return -icept / slope;
}

inline FlowTrace run(const DiscreteCurve& initial, const FlowConfig& cfg) {
    FlowTrace trace;
    DiscreteCurve cur = needs_remesh(initial) ? remesh(initial) : initial;
    const SurfaceModel& s = cur.surface();
    trace.initial_length = cur.length();
    std::vector<NodeCurvature> kf = curvature_field(cur);
    std::size_t step_no = 0;
    double last_record_t = cur.t(), last_record_L = cur.length();

    auto record = [&](const DiscreteCurve& c, const std::vector<NodeCurvature>& k) {
        DiagnosticsRecord r;
        r.step = step_no;
        r.t = c.t();
        r.length = c.length();
        r.sup_k = sup_abs_k(k);
        r.int_k2 = integral_k2(c, k);
        if (cfg.track_tip && cfg.tip_apex < s.divisor().size()) {
            double m = infinity;
            for (const auto& z : c.nodes()) m = std::min(m, s.apex_distance(z, cfg.tip_apex));
            r.tip_distance = m;
            r.winding = winding_number(c.nodes(), s.divisor()[cfg.tip_apex].at);
        }
        if (cfg.on_record) cfg.on_record(c, r);
        trace.records.push_back(r);
        if (cfg.keep_snapshots) trace.snapshots.push_back(c);
        last_record_t = c.t();
        last_record_L = c.length();
    };

    record(cur, kf);
    std::optional<StopReason> stop;
    while (!stop) {
        if (step_no >= cfg.max_steps || cur.t() >= cfg.time_horizon) {
            stop = StopReason::TimeHorizon;
            break;
        }
        double h = cur.min_segment();
        double dt = cfg.cfl * h * h;
        if (cur.t() + dt > cfg.time_horizon) dt = cfg.time_horizon - cur.t();
        std::optional<DiscreteCurve> moved;
        ErrorKind cause = ErrorKind::StepRejected;
        for (int attempt = 0; attempt <= cfg.max_halvings && !moved; ++attempt) {
            try {
                moved = advance(cur, kf, dt);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::StepRejected) throw;
                cause = e.cause();
                dt *= 0.5;
            }
        }
        if (!moved) {
            stop = cause == ErrorKind::ApexContact ? StopReason::ApexContact : StopReason::EmbeddingLost;
            break;
        }
        ++step_no;
        std::vector<NodeCurvature> kf_moved = curvature_field(*moved);
        double q0 = integral_k2(cur, kf), q1 = integral_k2(*moved, kf_moved);
        StepSample ss;
        ss.t = moved->t();
        ss.dt = dt;
        ss.length = moved->length();
        ss.length_decreased = moved->length() < cur.length();
        double expected = -0.5 * (q0 + q1);
        double measured = (moved->length() - cur.length()) / dt;
        ss.length_rate_residual = expected != 0 ? std::abs(measured - expected) / std::abs(expected) : 0.0;
        if (needs_remesh(*moved)) {
            moved = remesh(*moved);
            kf_moved = curvature_field(*moved);
            ss.remeshed = true;
            ++trace.remesh_count;
        }
        trace.steps.push_back(ss);
        cur = std::move(*moved);
        kf = std::move(kf_moved);

        double L = cur.length();
        if (L < cfg.length_floor * trace.initial_length) stop = StopReason::LengthFloor;
        else if (sup_abs_k(kf) * L > cfg.curvature_ceiling) stop = StopReason::CurvatureCeiling;
        else if (cur.t() >= cfg.time_horizon) stop = StopReason::TimeHorizon;

        if (stop || cur.t() - last_record_t >= cfg.output_dt || L <= (1 - cfg.output_length_drop) * last_record_L)
            record(cur, kf);
    }
    if (trace.records.back().step != step_no) record(cur, kf);
    trace.stop_reason = *stop;
    if (trace.stop_reason == StopReason::LengthFloor || trace.stop_reason == StopReason::CurvatureCeiling)
        trace.T_est = fit_singular_time(trace.records);
    return trace;
}

// ---------------------------------------------------------------------------
// Closed-form reference solutions.
// ---------------------------------------------------------------------------

// Shrinking circle: R(t) = sqrt(R0^2 - 2 t), extinct at R0^2 / 2.
inline double circle_radius(double r0, double t) { return std::sqrt(r0 * r0 - 2 * t); }

// Grim reaper y = -log cos x + t with curvature cos x.
inline double grim_reaper_height(double x, double t) { return -std::log(std::cos(x)) + t; }
inline double grim_reaper_curvature(double x) { return std::cos(x); }

}  // namespace csf
