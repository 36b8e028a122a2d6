#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "csf/core.hpp"
#include "csf/flow.hpp"
#include "csf/geodesic.hpp"
#include "csf/geometry.hpp"

namespace csf {

// A point of the double cover: base point plus sheet index.
struct CoverPoint {
    Point base{};
    int sheet = 0;
};

struct BranchPoint {
    Point at{};
    double beta = 0.0;       // base weight; the auxiliary regular point has 0
    bool auxiliary = false;
    bool at_infinity = false;
};

// A cut from branch point `from` to branch point `to`, or a ray from `from`
// to infinity along `direction` when `to` is empty.
struct BranchCut {
    std::size_t from = 0;
    std::optional<std::size_t> to;
    Point direction{};
};

enum class AuxiliaryPolicy { None, Infinity, Regular };

struct CoverOptions {
    AuxiliaryPolicy auxiliary = AuxiliaryPolicy::None;
    std::vector<Point> auxiliary_candidates;  // for Regular: pick the one farthest from the curve
    std::vector<Point> initial_curve;          // nodes used for that farthest-point pick
    std::vector<std::pair<std::size_t, std::size_t>> pairing;  // explicit cut pairs; empty means greedy
    std::optional<Point> ray_direction;        // for the cut to infinity
};

namespace detail {

inline bool open_segments_cross(Point a, Point b, Point c, Point d) { return segments_cross(a, b, c, d); }

// Far endpoint standing in for infinity on a ray cut.
inline Point ray_end(Point from, Point dir) { return from + dir * 1e6; }

}  // namespace detail

class CoverSpace {
public:
    CoverSpace(SurfaceRef base, std::vector<BranchPoint> points, std::vector<BranchCut> cuts)
        : base_(std::move(base)), points_(std::move(points)), cuts_(std::move(cuts)) {
        if (points_.size() % 2 != 0) throw Error(ErrorKind::OddBranchSetWithoutAuxiliary, "odd branch set");
        for (std::size_t i = 0; i < cuts_.size(); ++i)
            for (std::size_t j = i + 1; j < cuts_.size(); ++j)
                if (cuts_cross(cuts_[i], cuts_[j])) throw Error(ErrorKind::CrossingCuts, "branch cuts intersect");
        build_unfolded();
    }

    const SurfaceModel& base() const { return *base_; }
    const SurfaceRef& base_ref() const { return base_; }
    const std::vector<BranchPoint>& branch_points() const { return points_; }
    const std::vector<BranchCut>& cuts() const { return cuts_; }

    // Total angle at the preimage of branch point i: twice the base angle.
    double branch_angle(std::size_t i) const { return 2.0 * two_pi * (1.0 + points_.at(i).beta); }

    // For one finite branch point paired with infinity, the cover is a single
    // chart w with base point c + w^2. Nullptr otherwise.
    const SurfaceRef& unfolded() const { return unfolded_; }
    std::optional<Point> unfold_center() const { return unfold_center_; }

    Point cut_start(const BranchCut& c) const { return points_[c.from].at; }
    Point cut_end(const BranchCut& c) const {
        return c.to ? points_[*c.to].at : detail::ray_end(points_[c.from].at, c.direction);
    }

    // Number of cuts crossed by the chart segment a -> b. Throws CutTangency when
    // the segment touches a cut without crossing it transversally.
    int crossings(Point a, Point b, double tangency_tol = 1e-12) const {
        int n = 0;
        for (const auto& c : cuts_) {
            Point p = cut_start(c), q = cut_end(c);
            double d1 = cross(q - p, a - p), d2 = cross(q - p, b - p);
            double d3 = cross(b - a, p - a), d4 = cross(b - a, q - a);
            double scale = std::abs(q - p) * std::abs(b - a);
            bool straddle = (d1 > 0) != (d2 > 0) && (d3 > 0) != (d4 > 0);
            if (!straddle) continue;
            if (std::abs(d1) < tangency_tol * scale || std::abs(d2) < tangency_tol * scale)
                throw Error(ErrorKind::CutTangency, "curve node lies on a branch cut");
            ++n;
        }
        return n;
    }

    // Sheet obtained by moving from p (on `sheet`) to q along the chart segment.
    int transport(Point p, int sheet, Point q) const { return (sheet + crossings(p, q)) % 2; }

    // Unfolded coordinate of a cover point: the square root whose branch cut is
    // the ray cut, times -1 on sheet 1.
    Point to_unfolded(const CoverPoint& x) const {
        Point c = *unfold_center_;
        Point u = x.base - c;
        Point dir = cuts_.front().direction;
        // Angle measured from the cut direction, in (0, 2 pi).
        double a = wrap_angle(std::arg(u) - std::arg(dir));
        Point w = std::polar(std::sqrt(std::abs(u)), 0.5 * (a + std::arg(dir)));
        return x.sheet == 0 ? w : -w;
    }

    CoverPoint from_unfolded(Point w) const {
        Point c = *unfold_center_;
        CoverPoint x{c + w * w, 0};
        if (std::abs(to_unfolded(x) - w) > std::abs(to_unfolded({x.base, 1}) - w)) x.sheet = 1;
        return x;
    }

    // Pull-back conformal factor lambda(c + w^2) |2 w|, from the base metric directly.
    double pulled_back_lambda(Point w) const { return base_->lambda(*unfold_center_ + w * w) * std::abs(2.0 * w); }

private:
    bool cuts_cross(const BranchCut& a, const BranchCut& b) const {
        Point p = cut_start(a), q = cut_end(a), r = cut_start(b), s = cut_end(b);
        // Cuts sharing an endpoint meet only there.
        if (p == r || p == s || q == r || q == s) return false;
        return detail::open_segments_cross(p, q, r, s);
    }

    void build_unfolded() {
        std::vector<std::size_t> finite;
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (!points_[i].at_infinity) finite.push_back(i);
        if (finite.size() != 1 || cuts_.size() != 1 || cuts_.front().to) return;
        const SurfaceModel& b = *base_;
        const BranchPoint& bp = points_[finite.front()];
        unfold_center_ = bp.at;
        // Base weights away from the branch point cannot be expressed in one w chart.
        for (const auto& c : b.divisor())
            if (c.at != bp.at) return;
        double lifted_beta = 2 * bp.beta + 1;
        std::vector<ConePoint> div;
        if (lifted_beta != 0.0) div.push_back({Point{}, lifted_beta});
        HField h = b.h().pulled_back(bp.at);
        double radius = std::sqrt(b.kind() == SurfaceKind::FlatCone ? b.cone_chart_radius() : b.domain_radius());
        unfolded_ = share(SurfaceModel::conic_conformal(div, h, lifted_beta > 0, radius));
    }

    SurfaceRef base_;
    std::vector<BranchPoint> points_;
    std::vector<BranchCut> cuts_;
    SurfaceRef unfolded_;
    std::optional<Point> unfold_center_;
};

// Builds the double cover branched over the conic points with indices in
// `branch_set` (each of angle at most pi), adding an auxiliary point when the
// set is odd, pairing points greedily and uncrossing the cuts.
inline CoverSpace build_double_cover(SurfaceRef base, const std::vector<std::size_t>& branch_set,
                                     const CoverOptions& opt = {}) {
    const SurfaceModel& s = *base;
    std::vector<BranchPoint> pts;
    for (std::size_t i : branch_set) {
        if (i >= s.divisor().size()) throw Error(ErrorKind::ValidationError, "branch index out of range");
        const ConePoint& c = s.divisor()[i];
        if (two_pi * (1 + c.beta) > pi * (1 + 1e-12))
            throw Error(ErrorKind::ValidationError, "branch points need cone angle at most pi");
        pts.push_back({c.at, c.beta, false, false});
    }
    if (pts.size() % 2 == 1) {
        switch (opt.auxiliary) {
            case AuxiliaryPolicy::None:
                throw Error(ErrorKind::OddBranchSetWithoutAuxiliary, "odd branch set needs an auxiliary point");
            case AuxiliaryPolicy::Infinity: pts.push_back({{}, 0.0, true, true}); break;
            case AuxiliaryPolicy::Regular: {
                if (opt.auxiliary_candidates.empty())
                    throw Error(ErrorKind::OddBranchSetWithoutAuxiliary, "no auxiliary candidates configured");
                Point best{};
                double bd = -1;
                for (Point q : opt.auxiliary_candidates) {
                    double d = infinity;
                    for (Point z : opt.initial_curve) d = std::min(d, std::abs(z - q));
                    for (const auto& c : s.divisor()) d = std::min(d, std::abs(c.at - q));
                    if (d > bd) {
                        bd = d;
                        best = q;
                    }
                }
                pts.push_back({best, 0.0, true, false});
                break;
            }
        }
    }

    // Pairing: explicit, else nearest-neighbour greedy over finite points.
    std::vector<std::pair<std::size_t, std::size_t>> pairs = opt.pairing;
    if (pairs.empty()) {
        std::vector<bool> used(pts.size(), false);
        std::optional<std::size_t> inf;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i].at_infinity) inf = i;
        if (inf) {
            // The point at infinity takes the finite point farthest from the others.
            std::size_t pick = 0;
            double bd = -1;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i == *inf) continue;
                double d = infinity;
                for (std::size_t j = 0; j < pts.size(); ++j)
                    if (j != i && j != *inf) d = std::min(d, std::abs(pts[i].at - pts[j].at));
                if (d > bd) {
                    bd = d;
                    pick = i;
                }
            }
            pairs.emplace_back(pick, *inf);
            used[pick] = used[*inf] = true;
        }
        while (true) {
            double bd = infinity;
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    if (used[i] || used[j]) continue;
                    double d = std::abs(pts[i].at - pts[j].at);
                    if (d < bd) {
                        bd = d;
                        best = {i, j};
                    }
                }
            if (!best) break;
            pairs.push_back(*best);
            used[best->first] = used[best->second] = true;
        }
    }

    auto make_cuts = [&] {
        std::vector<BranchCut> cuts;
        for (auto [a, b] : pairs) {
            if (pts[a].at_infinity) std::swap(a, b);
            if (pts[b].at_infinity) {
                Point dir = opt.ray_direction.value_or(Point{});
                if (dir == Point{}) {
                    Point centroid{};
                    int n = 0;
                    for (const auto& p : pts)
                        if (!p.at_infinity) {
                            centroid += p.at;
                            ++n;
                        }
                    centroid /= double(n);
                    dir = pts[a].at - centroid;
                    if (std::abs(dir) == 0) dir = Point(-1, 0);
                }
                cuts.push_back({a, std::nullopt, dir / std::abs(dir)});
            } else {
                cuts.push_back({a, b, {}});
            }
        }
        return cuts;
    };

    // Crossing resolution: when cuts (p, q) and (r, s) cross, re-pair to (p, r), (q, s).
    if (opt.pairing.empty()) {
        for (int round = 0; round < 64; ++round) {
            auto cuts = make_cuts();
            bool changed = false;
            for (std::size_t i = 0; i < cuts.size() && !changed; ++i)
                for (std::size_t j = i + 1; j < cuts.size() && !changed; ++j) {
                    if (!cuts[i].to || !cuts[j].to) continue;
                    Point p = pts[cuts[i].from].at, q = pts[*cuts[i].to].at;
                    Point r = pts[cuts[j].from].at, t = pts[*cuts[j].to].at;
                    if (!detail::open_segments_cross(p, q, r, t)) continue;
                    pairs[i] = {cuts[i].from, cuts[j].from};
                    pairs[j] = {*cuts[i].to, *cuts[j].to};
                    changed = true;
                }
            if (!changed) break;
        }
    }
    return CoverSpace(std::move(base), std::move(pts), make_cuts());
}

// ---------------------------------------------------------------------------
// Lifting curves.
// ---------------------------------------------------------------------------

struct LiftedCurve {
    std::vector<CoverPoint> points;  // 2N points when connected, else N (one of the two copies)
    bool connected = false;
    bool deck_symmetric = false;     // point i + N is the deck image of point i
    double lifted_length = 0.0;      // sum of the lengths of both laps
    std::optional<DiscreteCurve> upstairs;  // on the unfolded chart, when available
};

inline LiftedCurve lift_curve(const DiscreteCurve& curve, const CoverSpace& cover) {
    const auto& z = curve.nodes();
    const std::size_t n = z.size();
    LiftedCurve out;
    std::vector<int> sheet(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) sheet[i + 1] = cover.transport(z[i], sheet[i], z[(i + 1) % n]);
    out.connected = sheet[n] == 1;
    if (out.connected) {
        out.points.resize(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            out.points[i] = {z[i], sheet[i]};
            out.points[i + n] = {z[i], 1 - sheet[i]};
        }
        out.deck_symmetric = true;
        // Each lap projects isometrically onto the whole downstairs curve.
        out.lifted_length = curve.length() + curve.length();
    } else {
        out.points.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.points[i] = {z[i], sheet[i]};
        out.lifted_length = curve.length();
    }
    if (cover.unfolded()) {
        std::vector<Point> w;
        w.reserve(out.points.size());
        for (const auto& p : out.points) w.push_back(cover.to_unfolded(p));
        out.upstairs.emplace(cover.unfolded(), std::move(w), curve.t());
    }
    return out;
}

// Projects an unfolded curve back down; for a deck-symmetric curve of 2N
// nodes the first N nodes carry the whole downstairs curve.
inline DiscreteCurve project_curve(const DiscreteCurve& up, const CoverSpace& cover, bool half = true) {
    Point c = *cover.unfold_center();
    std::size_t n = half ? up.size() / 2 : up.size();
    std::vector<Point> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = c + up.nodes()[i] * up.nodes()[i];
    return DiscreteCurve(cover.base_ref(), std::move(z), up.t());
}

// ---------------------------------------------------------------------------
// Distances on the cover.
// ---------------------------------------------------------------------------

inline double cover_distance(const CoverSpace& cover, const CoverPoint& a, const CoverPoint& b,
                             const GeodesicOptions& opt = {}) {
    if (cover.unfolded()) return distance(*cover.unfolded(), cover.to_unfolded(a), cover.to_unfolded(b), opt);
    const SurfaceModel& s = cover.base();
    int parity = (a.sheet + b.sheet) % 2;
    double best = infinity;
    // Paths through a branch point may switch sheets freely.
    for (const auto& bp : cover.branch_points()) {
        if (bp.at_infinity) continue;
        best = std::min(best, distance(s, a.base, bp.at, opt) + distance(s, bp.at, b.base, opt));
    }
    if (a.base == b.base) return parity == 0 ? 0.0 : best;
    GeodesicSolution sol = shortest_geodesic(s, a.base, b.base, opt);
    for (const auto& g : sol.candidates) {
        if (g.through_apex) continue;
        int crossed = 0;
        try {
            for (std::size_t i = 1; i < g.path.size(); ++i) crossed += cover.crossings(g.path[i - 1], g.path[i]);
        } catch (const Error&) {
            continue;
        }
        if (crossed % 2 == parity) best = std::min(best, g.length);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Tip experiment.
// ---------------------------------------------------------------------------

enum class TipVerdict { AvoidsTip, ShrinksToTip, CrossesTip };

inline const char* to_string(TipVerdict v) {
    switch (v) {
        case TipVerdict::AvoidsTip: return "AvoidsTip";
        case TipVerdict::ShrinksToTip: return "ShrinksToTip";
        case TipVerdict::CrossesTip: return "CrossesTip";
    }
    return "Unknown";
}

struct TipOutcome {
    TipVerdict verdict = TipVerdict::AvoidsTip;
    double min_tip_distance = infinity;  // c of AvoidsTip(c)
    double final_tip_distance = infinity;
    double final_length = 0.0;
    double cone_angle = 0.0;
    bool failed = false;                 // CrossesTip at cone angle <= pi
    StopReason stop_reason = StopReason::TimeHorizon;
    std::size_t records = 0;
};

// Classifies a flow run that tracked the tip. Winding changes count only when
// they persist for `sustain` consecutive records.
inline TipOutcome classify_tip(const FlowTrace& trace, double cone_angle, int sustain = 3) {
    TipOutcome o;
    o.cone_angle = cone_angle;
    o.stop_reason = trace.stop_reason;
    o.records = trace.records.size();
    const auto& recs = trace.records;
    int initial = recs.front().winding;
    int run = 0;
    bool crossed = trace.stop_reason == StopReason::ApexContact;
    for (const auto& r : recs) {
        o.min_tip_distance = std::min(o.min_tip_distance, r.tip_distance);
        run = r.winding != initial ? run + 1 : 0;
        if (run >= sustain) crossed = true;
    }
    o.final_tip_distance = recs.back().tip_distance;
    o.final_length = recs.back().length;
    if (crossed) o.verdict = TipVerdict::CrossesTip;
    else if (recs.back().winding != 0 && o.final_tip_distance <= o.final_length) o.verdict = TipVerdict::ShrinksToTip;
    else o.verdict = TipVerdict::AvoidsTip;
    o.failed = o.verdict == TipVerdict::CrossesTip && cone_angle <= pi * (1 + 1e-12);
    return o;
}

inline TipOutcome tip_experiment(const DiscreteCurve& initial, std::size_t apex, FlowConfig cfg) {
    cfg.track_tip = true;
    cfg.tip_apex = apex;
    FlowTrace trace = run(initial, cfg);
    return classify_tip(trace, initial.surface().cone_angle(apex));
}

}  // namespace csf
