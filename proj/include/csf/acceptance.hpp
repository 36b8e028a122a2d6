#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "csf/cover.hpp"
#include "csf/flow.hpp"
#include "csf/geodesic.hpp"
#include "csf/geometry.hpp"
#include "csf/monitor.hpp"
#include "csf/runner.hpp"
#include "csf/scenario.hpp"

namespace csf::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

inline std::string line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.detail << " (" << std::fixed
       << std::setprecision(1) << r.seconds << " s)";
    return os.str();
}

namespace detail {

inline std::string sci(double v, int digits = 3) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

inline double draw(std::mt19937_64& rng, double a, double b) { return a + (b - a) * csf::detail::unit_draw(rng); }

// A chart circle traversed at unit g-speed; an exact arc-length sampler for
// finite-difference checks.
class CircleArc {
public:
    CircleArc(const SurfaceModel& s, Point center, double radius, double start_angle, int orientation)
        : s_(&s), c_(center), r_(radius), a0_(start_angle), sigma_(orientation) {}

    double length() const { return arc_to(a0_ + two_pi); }

    CurvePoint at(double s) const {
        double a = angle_at(s);
        Point e = std::polar(1.0, a);
        Point z = c_ + r_ * e;
        double lam = s_->lambda(z);
        Point t0 = double(sigma_) * Point(0, 1) * e;  // chart-unit tangent
        Point n0 = rot90(t0);
        double kappa0 = double(sigma_) / r_;
        double k = (kappa0 - dot(s_->log_factor(z).grad, n0)) / lam;
        return {z, t0 / lam, k};
    }

private:
    double speed(double a) const { return s_->lambda(c_ + std::polar(r_, a)) * r_; }
    double arc_to(double a) const {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate([&](double u) { return speed(u); }, a0_, a,
                                                                             8, 1e-14);
    }
    double angle_at(double s) const {
        double a = a0_ + double(sigma_) * s / speed(a0_);
        for (int i = 0; i < 50; ++i) {
            double f = double(sigma_) * arc_to(a) - s;
            double da = f / speed(a);
            a -= double(sigma_) * da;
            if (std::abs(da) < 1e-15) break;
        }
        return a;
    }

    const SurfaceModel* s_;
    Point c_;
    double r_, a0_;
    int sigma_;
};

}  // namespace detail

// Scenario builders shared by the acceptance runs and the bundled configs.
inline Scenario circle_scenario(std::size_t n = 256) {
    Scenario s;
    s.name = "plane_circle";
    s.curve.shape = CurveShape::Circle;
    s.curve.radius = 1.0;
    s.curve.node_count = n;
    s.diagnostics.m_tau = true;
    s.diagnostics.base_point = Point(0, 0);
    return s;
}

inline Scenario ellipse_scenario(std::size_t n = 256) {
    Scenario s;
    s.name = "plane_ellipse";
    s.curve.shape = CurveShape::Ellipse;
    s.curve.semi_axis_a = 2.0;
    s.curve.semi_axis_b = 1.0;
    s.curve.node_count = n;
    return s;
}

inline Scenario tip_scenario(double total_angle, double offset) {
    Scenario s;
    s.name = "cone_tip";
    s.surface.kind = SurfaceKind::FlatCone;
    s.surface.total_angle_rad = total_angle;
    s.curve.shape = CurveShape::Circle;
    s.curve.center = Point(offset, 0.0);
    s.curve.radius = 1.0;
    s.curve.node_count = 256;
    s.solver.cfl_factor = 0.4;
    s.solver.length_floor = 1e-2;
    s.tip_experiment = true;
    s.diagnostics.tip_tracking = true;
    return s;
}

class Suite {
public:
    explicit Suite(double tolerance_scale = 1.0, std::uint64_t seed = 1) : tol_(tolerance_scale), seed_(seed) {}

    std::vector<CriterionResult> run_all(std::ostream* log = nullptr) {
        std::vector<CriterionResult> out;
        using Fn = CriterionResult (Suite::*)();
        for (Fn f : {&Suite::circle_oracle, &Suite::length_rate, &Suite::huisken, &Suite::type_one,
                     &Suite::distance_calculus, &Suite::cone_geometry, &Suite::cover, &Suite::tip_dichotomy,
                     &Suite::comparison_bound, &Suite::m_tau_stationarity}) {
            auto t0 = std::chrono::steady_clock::now();
            CriterionResult r;
            try {
                r = (this->*f)();
            } catch (const std::exception& e) {
                r.passed = false;
                r.detail = std::string("error: ") + e.what();
            }
            r.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (log) *log << line(r) << std::endl;
            out.push_back(r);
        }
        return out;
    }

    // 1. Shrinking circle against R(t) = sqrt(1 - 2t).
    CriterionResult circle_oracle() {
        CriterionResult r{1, "circle_oracle", false, {}, 0.0};
        const ScenarioRun& run = circle();
        double worst = 0;
        for (const auto& c : run.trace.snapshots) {
            if (c.t() > 0.45) break;
            double R = circle_radius(1.0, c.t());
            for (const auto& z : c.nodes()) worst = std::max(worst, std::abs(std::abs(z) - R));
        }
        double T = run.summary.T_est;
        bool ok_err = worst < 1e-3 * tol_, ok_T = T >= 0.495 && T <= 0.505, ok_time = circle_seconds_ < 30.0;
        r.passed = ok_err && ok_T && ok_time;
        r.detail = "max radius error " + detail::sci(worst) + " (< " + detail::sci(1e-3 * tol_) + "), T_est " +
                   detail::sci(T, 8) + " (in [0.495, 0.505]), run " + detail::sci(circle_seconds_) + " s (< 30 s)";
        return r;
    }

    // 2. dL/dt = -int k^2 per step, and the residual's order in N.
    CriterionResult length_rate() {
        CriterionResult r{2, "length_rate", false, {}, 0.0};
        auto worst_all = [](const FlowTrace& t) {
            double w = 0;
            for (const auto& s : t.steps) w = std::max(w, s.length_rate_residual);
            return w;
        };
        auto mean_until = [](const FlowTrace& t, double horizon) {
            double sum = 0;
            std::size_t n = 0;
            for (const auto& s : t.steps)
                if (s.t <= horizon) {
                    sum += s.length_rate_residual;
                    ++n;
                }
            return n ? sum / double(n) : not_computed;
        };
        double wc = worst_all(circle().trace), we = worst_all(ellipse().trace);
        bool ok = wc < 1e-2 * tol_ && we < 1e-2 * tol_;
        std::ostringstream os;
        os << "N=256 max residual circle " << detail::sci(wc) << ", ellipse " << detail::sci(we) << " (< "
           << detail::sci(1e-2 * tol_) << ")";
        // Convergence over the first half of each run's lifetime.
        for (int which = 0; which < 2; ++which) {
            double horizon = 0.5 * (which == 0 ? circle().summary.T_est : ellipse().summary.T_est);
            std::vector<double> means;
            for (std::size_t n : {64, 128}) {
                Scenario sc = which == 0 ? circle_scenario(n) : ellipse_scenario(n);
                sc.diagnostics.m_tau = false;
                sc.solver.time_horizon = horizon;
                means.push_back(mean_until(keep(run_scenario(sc, {"", tol_})).trace, horizon));
            }
            means.push_back(mean_until((which == 0 ? circle() : ellipse()).trace, horizon));
            double p1 = std::log2(means[0] / means[1]), p2 = std::log2(means[1] / means[2]);
            bool conv = p1 > 2 - 0.3 * tol_ && p2 > 2 - 0.3 * tol_;
            ok = ok && conv;
            os << "; " << (which == 0 ? "circle" : "ellipse") << " mean residual N=64/128/256 "
               << detail::sci(means[0]) << "/" << detail::sci(means[1]) << "/" << detail::sci(means[2]) << ", order "
               << detail::sci(p1) << ", " << detail::sci(p2) << " (> 1.7)";
        }
        r.passed = ok;
        r.detail = os.str();
        return r;
    }

    // 3. Chord-arc ratio: identically 1 on circles; non-increasing to 1 on the ellipse.
    CriterionResult huisken() {
        CriterionResult r{3, "huisken_ratio", false, {}, 0.0};
        double circle_dev = 0;
        for (const auto& rec : circle().trace.records) circle_dev = std::max(circle_dev, std::abs(rec.huisken - 1));
        const auto& recs = ellipse().trace.records;
        double worst_increase = 0;
        for (std::size_t i = 1; i < recs.size(); ++i)
            worst_increase = std::max(worst_increase, recs[i].huisken - recs[i - 1].huisken);
        double final_dev = std::abs(recs.back().huisken - 1);
        bool ok = circle_dev < 1e-6 * tol_ && worst_increase < 1e-3 * tol_ && final_dev < 1e-2 * tol_;
        r.passed = ok;
        r.detail = "circle max |R_H - 1| " + detail::sci(circle_dev) + " (< " + detail::sci(1e-6 * tol_) +
                   "); ellipse max increase " + detail::sci(worst_increase) + " (< " + detail::sci(1e-3 * tol_) +
                   "), initial " + detail::sci(recs.front().huisken, 6) + ", final |R_H - 1| " +
                   detail::sci(final_dev) + " (< " + detail::sci(1e-2 * tol_) + ")";
        return r;
    }

    // 4. sup k^2 (T - t).
    CriterionResult type_one() {
        CriterionResult r{4, "type_one_exponent", false, {}, 0.0};
        const auto& c = circle().summary.singularity;
        const auto& e = ellipse().summary.singularity;
        bool ok = std::abs(c.exponent - 0.5) < 1e-2 * tol_ && e.classification == SingularityClass::TypeI;
        r.passed = ok;
        r.detail = "circle exponent " + detail::sci(c.exponent, 6) + " (0.5 +- " + detail::sci(1e-2 * tol_) +
                   "), ellipse exponent " + detail::sci(e.exponent, 4) + " " + to_string(e.classification);
        return r;
    }

    // 5. Distance jet against central differences of the boundary-value distance; Rauch bounds.
    CriterionResult distance_calculus() {
        CriterionResult r{5, "distance_calculus", false, {}, 0.0};
        std::mt19937_64 rng(seed_ * 1000003 + 5);
        const double h_rel = 1e-2;
        double worst = 0;
        std::string worst_where;
        int configs = 0;
        SurfaceModel plane = SurfaceModel::euclidean_plane();
        SurfaceModel sphere = SurfaceModel::sphere_patch(1.0);
        for (const SurfaceModel* s : {&plane, &sphere}) {
            int done = 0;
            while (done < 50) {
                Point p1(detail::draw(rng, -0.8, 0.8), detail::draw(rng, -0.8, 0.8));
                double dmax = std::min(0.9 * s->jet_radius(), 1.0);
                double dg = detail::draw(rng, 0.05, dmax);
                Point p2 = p1 + std::polar(dg / s->lambda(p1), detail::draw(rng, 0, two_pi));
                double r1 = detail::draw(rng, 0.3, 2.0), r2 = detail::draw(rng, 0.3, 2.0);
                double a1 = detail::draw(rng, 0, two_pi), a2 = detail::draw(rng, 0, two_pi);
                int o1 = csf::detail::unit_draw(rng) < 0.5 ? 1 : -1, o2 = csf::detail::unit_draw(rng) < 0.5 ? 1 : -1;
                detail::CircleArc c1(*s, p1 - std::polar(r1, a1), r1, a1, o1);
                detail::CircleArc c2(*s, p2 - std::polar(r2, a2), r2, a2, o2);
                CurvePoint A = c1.at(0), B = c2.at(0);
                DistanceJet jet;
                try {
                    jet = distance_jet(*s, A, B);
                } catch (const Error&) {
                    continue;
                }
                double d = jet.F;
                auto F = [&](double s1, double s2) {
                    return shortest_geodesic(*s, c1.at(s1).z, c2.at(s2).z).best.length;
                };
                double kmax = std::max({std::abs(A.k), std::abs(B.k), 1e-3});
                double h = h_rel * std::min(d, 1.0 / kmax);
                // Central differences with one Richardson step: O(h^4) truncation.
                auto richardson = [&](auto diff) { return (4 * diff(0.5 * h) - diff(h)) / 3; };
                double f00 = F(0, 0);
                auto d_s1 = [&](double e) { return (F(e, 0) - F(-e, 0)) / (2 * e); };
                auto d_s2 = [&](double e) { return (F(0, e) - F(0, -e)) / (2 * e); };
                auto d_s1s1 = [&](double e) { return (F(e, 0) - 2 * f00 + F(-e, 0)) / (e * e); };
                auto d_s2s2 = [&](double e) { return (F(0, e) - 2 * f00 + F(0, -e)) / (e * e); };
                auto d_s1s2 = [&](double e) { return (F(e, e) - F(e, -e) - F(-e, e) + F(-e, -e)) / (4 * e * e); };
                auto Ft = [&](double tt) {
                    return shortest_geodesic(*s, A.z + tt * A.k * A.normal(), B.z + tt * B.k * B.normal()).best.length;
                };
                auto d_t = [&](double e) {
                    double et = e / kmax;
                    return (Ft(et) - Ft(-et)) / (2 * et);
                };
                struct Field {
                    const char* name;
                    double jet, fd, scale;
                };
                Field fields[] = {
                    {"F", jet.F, f00, d},
                    {"F_t", jet.F_t, richardson(d_t), std::max(1.0, kmax)},
                    {"F_s1", jet.F_s1, richardson(d_s1), 1.0},
                    {"F_s2", jet.F_s2, richardson(d_s2), 1.0},
                    {"F_s1s1", jet.F_s1s1, richardson(d_s1s1), 1.0 / d + kmax},
                    {"F_s2s2", jet.F_s2s2, richardson(d_s2s2), 1.0 / d + kmax},
                    {"F_s1s2", jet.F_s1s2, richardson(d_s1s2), 1.0 / d + kmax},
                };
                for (const auto& f : fields) {
                    double e = std::abs(f.jet - f.fd) / std::max(std::abs(f.fd), f.scale);
                    if (e > worst) {
                        worst = e;
                        worst_where = std::string(f.name) + (s == &plane ? " on plane" : " on sphere");
                    }
                }
                ++done;
                ++configs;
            }
        }
        // Rauch bounds on sphere segments shorter than jet_radius.
        int rauch_ok = 0, rauch_total = 0;
        while (rauch_total < 100) {
            Point p(detail::draw(rng, -1, 1), detail::draw(rng, -1, 1));
            double dg = detail::draw(rng, 0.02, 0.95 * sphere.jet_radius());
            Point q = p + std::polar(dg / sphere.lambda(p), detail::draw(rng, 0, two_pi));
            GeodesicSegment g = shortest_geodesic(sphere, p, q).best;
            if (!(g.length < sphere.jet_radius())) continue;
            ++rauch_total;
            JacobiField f = jacobi_solve(sphere, g, JacobiBoundary::EndpointPinnedAtOne);
            if (rauch_check(f, sphere.curvature_bound()).all()) ++rauch_ok;
        }
        r.passed = worst < 1e-4 * tol_ && rauch_ok == rauch_total;
        r.detail = std::to_string(configs) + " configurations, worst relative jet error " + detail::sci(worst) + " (" +
                   worst_where + ", < " + detail::sci(1e-4 * tol_) + "); Rauch bounds hold on " +
                   std::to_string(rauch_ok) + "/" + std::to_string(rauch_total) + " sphere segments";
        return r;
    }

    // 6. Shooting distance against the developed-cone formula.
    CriterionResult cone_geometry() {
        CriterionResult r{6, "cone_geometry", false, {}, 0.0};
        std::mt19937_64 rng(seed_ * 1000003 + 6);
        double worst = 0;
        int rule_mismatch = 0, pairs = 0;
        for (double a : {0.25, 0.5, 0.75, 1.0, 2.0}) {
            SurfaceModel s = SurfaceModel::flat_cone(two_pi * a);
            ConePolarChart chart = polar_from_conformal(s, 0);
            for (int i = 0; i < 200; ++i) {
                Point p = std::polar(detail::draw(rng, 0.3, 3.0), detail::draw(rng, -pi, pi));
                Point q = std::polar(detail::draw(rng, 0.3, 3.0), detail::draw(rng, -pi, pi));
                GeodesicSolution sol = shortest_geodesic(s, p, q);
                TangentConePoint tp = chart.to_polar(p), tq = chart.to_polar(q);
                double exact = cone_distance(chart, tp, tq);
                worst = std::max(worst, std::abs(sol.best.length - exact) / exact);
                double gap = std::fmod(std::abs(tp.theta - tq.theta), two_pi);
                bool apex_expected = a * std::min(gap, two_pi - gap) >= pi;
                if (sol.best.through_apex != apex_expected) ++rule_mismatch;
                ++pairs;
            }
        }
        r.passed = worst < 1e-6 * tol_ && rule_mismatch == 0;
        r.detail = std::to_string(pairs) + " pairs, worst relative error " + detail::sci(worst) + " (< " +
                   detail::sci(1e-6 * tol_) + "), through-apex rule mismatches " + std::to_string(rule_mismatch);
        return r;
    }

    // 7. Double cover of the cone of angle pi.
    CriterionResult cover() {
        CriterionResult r{7, "cover_correctness", false, {}, 0.0};
        std::mt19937_64 rng(seed_ * 1000003 + 7);
        SurfaceRef base = share(SurfaceModel::flat_cone(pi));
        DiscreteCurve down =
            sample_curve(base, [](double t) { return Point(0.3, 0.1) + std::polar(1.0, t); }, 256);
        CoverOptions co;
        co.auxiliary = AuxiliaryPolicy::Infinity;
        co.initial_curve = down.nodes();
        CoverSpace cov = build_double_cover(base, {0}, co);
        const SurfaceModel& up_surface = *cov.unfolded();
        double kmax = 0;
        for (int i = 0; i < 200; ++i) {
            Point w = std::polar(detail::draw(rng, 0.1, 2.0), detail::draw(rng, -pi, pi));
            kmax = std::max({kmax, std::abs(gaussian_curvature_numeric(up_surface, w)),
                             std::abs(gaussian_curvature(up_surface, w))});
        }
        LiftedCurve lift0 = lift_curve(down, cov);
        double dt = 0.1 * std::pow(std::min(down.min_segment(), lift0.upstairs->min_segment()), 2);
        DiscreteCurve up_stepped = step(*lift0.upstairs, dt);
        LiftedCurve lift1 = lift_curve(step(down, dt), cov);
        double commute = 0;
        for (std::size_t i = 0; i < up_stepped.size(); ++i) {
            Point a = up_stepped.nodes()[i], b = lift1.upstairs->nodes()[i];
            commute = std::max(commute, cov.pulled_back_lambda(0.5 * (a + b)) * std::abs(a - b));
        }
        double L = down.length();
        bool exact = lift0.connected && lift0.lifted_length == 2 * L;
        double measured = std::abs(lift0.upstairs->length() - 2 * L) / (2 * L);
        r.passed = kmax < 1e-8 * tol_ && commute < 1e-6 * tol_ && exact && measured < 1e-6 * tol_;
        r.detail = "max |K| upstairs " + detail::sci(kmax) + " (< " + detail::sci(1e-8 * tol_) +
                   "), step/lift commutator " + detail::sci(commute) + " (< " + detail::sci(1e-6 * tol_) +
                   "), connected lift " + (lift0.connected ? "yes" : "no") + ", lap length 2L " +
                   (exact ? "exact" : "mismatch") + ", upstairs spline length vs 2L " + detail::sci(measured);
        return r;
    }

    // 8. Cone angle pi/2 never lets the curve cross the tip; the flat control does.
    CriterionResult tip_dichotomy() {
        CriterionResult r{8, "tip_dichotomy", false, {}, 0.0};
        auto t0 = std::chrono::steady_clock::now();
        std::ostringstream os;
        bool ok = true;
        os << "angle pi/2:";
        for (double off : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            const ScenarioRun& run = keep(run_scenario(tip_scenario(pi / 2, off), {"", tol_}));
            const auto& tip = *run.summary.tip;
            bool good = tip.verdict != TipVerdict::CrossesTip && !run.summary.aborted;
            if (tip.verdict == TipVerdict::AvoidsTip) good = good && tip.min_tip_distance > 0;
            ok = ok && good;
            os << " " << off << "->" << to_string(tip.verdict);
            if (tip.verdict == TipVerdict::AvoidsTip) os << "(" << detail::sci(tip.min_tip_distance) << ")";
        }
        bool crossed = false;
        os << "; angle 2pi control:";
        for (double off : {0.5, 0.3}) {
            const ScenarioRun& run = keep(run_scenario(tip_scenario(two_pi, off), {"", tol_}));
            os << " " << off << "->" << to_string(run.summary.tip->verdict);
            if (run.summary.tip->verdict == TipVerdict::CrossesTip) {
                crossed = true;
                break;
            }
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.passed = ok && crossed && secs < 300.0;
        os << "; " << detail::sci(secs) << " s (< 300 s)";
        r.detail = os.str();
        return r;
    }

    // 9. R(t) never exceeds max(threshold_floor, R(0)) on any run made above.
    CriterionResult comparison_bound() {
        CriterionResult r{9, "comparison_bound", false, {}, 0.0};
        circle();
        ellipse();
        double worst_ratio = 0;
        int runs = 0;
        bool ok = true;
        for (const auto& run : runs_) {
            for (const auto& rec : run->trace.records) {
                if (!std::isfinite(rec.comparison)) continue;
                double ratio = rec.comparison / run->summary.comparison_N;
                worst_ratio = std::max(worst_ratio, ratio);
                if (ratio > 1 + 1e-12 * tol_) ok = false;
            }
            ++runs;
        }
        r.passed = ok && runs > 0;
        r.detail = std::to_string(runs) + " runs, max R(t) / max(threshold_floor, R(0)) = " + detail::sci(worst_ratio) +
                   " (<= 1)";
        return r;
    }

    // 10. Weighted length in the rescaled frame around the centre of a shrinking circle.
    CriterionResult m_tau_stationarity() {
        CriterionResult r{10, "m_tau_stationarity", false, {}, 0.0};
        const auto& series = circle().m_tau;
        const double target = two_pi * std::exp(-0.5);
        double worst = 0, res_at_4 = infinity, tau_at_4 = 0;
        int samples = 0;
        for (const auto& m : series) {
            if (m.tau < 1 || m.tau > 4) continue;
            worst = std::max(worst, std::abs(m.M - target));
            ++samples;
            if (std::abs(m.tau - 4) < std::abs(tau_at_4 - 4)) {
                tau_at_4 = m.tau;
                res_at_4 = m.shrinker_residual;
            }
        }
        r.passed = samples > 0 && worst < 1e-2 * tol_ && res_at_4 < 1e-3 * tol_ && std::abs(tau_at_4 - 4) < 0.1;
        r.detail = std::to_string(samples) + " samples on tau in [1, 4], max |M - 2 pi e^-1/2| " + detail::sci(worst) +
                   " (< " + detail::sci(1e-2 * tol_) + "), shrinker residual " + detail::sci(res_at_4) + " at tau " +
                   detail::sci(tau_at_4, 4) + " (< " + detail::sci(1e-3 * tol_) + ")";
        return r;
    }

private:
    const ScenarioRun& keep(ScenarioRun run) {
        runs_.push_back(std::make_unique<ScenarioRun>(std::move(run)));
        return *runs_.back();
    }
    const ScenarioRun& circle() {
        if (!circle_) {
            auto t0 = std::chrono::steady_clock::now();
            circle_ = &keep(run_scenario(circle_scenario(), {"", tol_}));
            circle_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        return *circle_;
    }
    const ScenarioRun& ellipse() {
        if (!ellipse_) ellipse_ = &keep(run_scenario(ellipse_scenario(), {"", tol_}));
        return *ellipse_;
    }

    double tol_;
    std::uint64_t seed_;
    std::vector<std::unique_ptr<ScenarioRun>> runs_;
    const ScenarioRun* circle_ = nullptr;
    const ScenarioRun* ellipse_ = nullptr;
    double circle_seconds_ = 0.0;
};

}  // namespace csf::acceptance
