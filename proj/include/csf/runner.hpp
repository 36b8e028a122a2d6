#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "csf/cover.hpp"
#include "csf/flow.hpp"
#include "csf/monitor.hpp"
#include "csf/scenario.hpp"

namespace csf {

// ---------------------------------------------------------------------------
// Run summary.
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool passed = true;
    std::string note;
};

struct RunSummary {
    std::string scenario;
    std::uint64_t seed = 1;
    std::optional<std::string> aborted;  // error message when the run stopped on an exception
    StopReason stop_reason = StopReason::TimeHorizon;
    double T_est = not_computed;
    std::size_t steps = 0;
    std::size_t remesh_count = 0;
    DiagnosticsRecord initial;
    DiagnosticsRecord final;
    ComparisonConstants constants;
    double comparison_K = 0.0;
    double comparison_N = 0.0;  // threshold max(threshold_floor, R(0))
    SingularityReport singularity;
    std::optional<TipOutcome> tip;
    std::optional<bool> cover_connected;
    std::vector<double> branch_angles;
    std::optional<double> m_tau_error_constant;
    std::optional<double> m_tau_final_shrinker_residual;
    std::vector<CheckResult> checks;

    bool passed() const {
        if (aborted) return false;
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

struct ScenarioRun {
    RunSummary summary;
    FlowTrace trace;
    std::vector<MTauSample> m_tau;
};

struct RunOptions {
    std::string out_dir;           // empty: nothing is written
    double tolerance_scale = 1.0;  // multiplies every check tolerance
};

// ---------------------------------------------------------------------------
// Emission helpers.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline nlohmann::json to_json(const DiagnosticsRecord& r) {
    return {{"step", r.step},
            {"t", json_number(r.t)},
            {"length", json_number(r.length)},
            {"sup_k", json_number(r.sup_k)},
            {"int_k2", json_number(r.int_k2)},
            {"tip_distance", json_number(r.tip_distance)},
            {"winding", r.winding},
            {"huisken", json_number(r.huisken)},
            {"comparison", json_number(r.comparison)},
            {"gauss_bonnet", json_number(r.gauss_bonnet)},
            {"zn_min", json_number(r.zn_min)},
            {"lifted_length", json_number(r.lifted_length)}};
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw Error(ErrorKind::IoError, "cannot write " + p.string());
    return f;
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
}

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double unit_draw(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

inline const char* diagnostics_header() {
    return "step,t,length,sup_k,int_k2,tip_distance,winding,huisken,comparison,gauss_bonnet,zn_min,lifted_length";
}

inline std::string diagnostics_row(const DiagnosticsRecord& r) {
    using detail::csv_number;
    std::string s = std::to_string(r.step);
    for (double v : {r.t, r.length, r.sup_k, r.int_k2, r.tip_distance}) s += "," + csv_number(v);
    s += "," + std::to_string(r.winding);
    for (double v : {r.huisken, r.comparison, r.gauss_bonnet, r.zn_min, r.lifted_length}) s += "," + csv_number(v);
    return s;
}

inline void write_diagnostics_csv(const std::filesystem::path& p, const std::vector<DiagnosticsRecord>& recs) {
    auto f = detail::open_out(p);
    f << diagnostics_header() << "\n";
    for (const auto& r : recs) f << diagnostics_row(r) << "\n";
}

inline void write_snapshots_json(const std::filesystem::path& p, const std::string& name, const FlowTrace& trace) {
    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
        const auto& c = trace.snapshots[i];
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& z : c.nodes()) nodes.push_back({z.real(), z.imag()});
        snaps.push_back({{"step", trace.records[i].step}, {"t", c.t()}, {"length", c.length()}, {"nodes", nodes}});
    }
    nlohmann::json doc = {{"scenario", name}, {"surface", to_string(trace.snapshots.front().surface().kind())},
                          {"snapshots", snaps}};
    auto f = detail::open_out(p);
    f << doc.dump(1) << "\n";
}

inline void write_m_tau_csv(const std::filesystem::path& p, const std::vector<MTauSample>& series) {
    auto f = detail::open_out(p);
    f << "t,tau,M,weighted_M,sensitivity,sup_k_tau,shrinker_residual\n";
    using detail::csv_number;
    for (const auto& m : series)
        f << csv_number(m.t) << "," << csv_number(m.tau) << "," << csv_number(m.M) << ","
          << csv_number(m.weighted_M) << "," << csv_number(m.sensitivity) << "," << csv_number(m.sup_k_tau) << "," << csv_number(m.shrinker_residual)
          << "\n";
}

inline nlohmann::json to_json(const RunSummary& s) {
    using detail::json_number;
    nlohmann::json j;
    j["scenario"] = s.scenario;
    j["seed"] = s.seed;
    j["passed"] = s.passed();
    j["aborted"] = s.aborted ? nlohmann::json(*s.aborted) : nlohmann::json(nullptr);
    j["stop_reason"] = to_string(s.stop_reason);
    j["T_est"] = json_number(s.T_est);
    j["steps"] = s.steps;
    j["remesh_count"] = s.remesh_count;
    j["initial"] = detail::to_json(s.initial);
    j["final"] = detail::to_json(s.final);
    const ComparisonConstants& k = s.constants;
    j["constants"] = {{"K_M", json_number(k.K_M)},
                      {"jet_radius", json_number(k.jet_radius)},
                      {"d_M", json_number(k.d_M)},
                      {"rauch_constant", json_number(k.rauch_constant)},
                      {"curvature_radius", json_number(k.curvature_radius)},
                      {"comparison_radius", json_number(k.comparison_radius)},
                      {"K", json_number(s.comparison_K)},
                      {"distance_scale", json_number(k.distance_scale)},
                      {"threshold_floor", json_number(k.threshold_floor)},
                      {"threshold", json_number(s.comparison_N)}};
    j["singularity"] = {{"exponent", json_number(s.singularity.exponent)},
                        {"classification", to_string(s.singularity.classification)},
                        {"last_decade_max", json_number(s.singularity.last_decade_max)},
                        {"previous_decade_max", json_number(s.singularity.previous_decade_max)}};
    if (s.tip)
        j["tip"] = {{"verdict", to_string(s.tip->verdict)},
                    {"min_tip_distance", json_number(s.tip->min_tip_distance)},
                    {"final_tip_distance", json_number(s.tip->final_tip_distance)},
                    {"final_length", json_number(s.tip->final_length)},
                    {"cone_angle", json_number(s.tip->cone_angle)},
                    {"failed", s.tip->failed}};
    if (s.cover_connected) j["cover"] = {{"connected_lift", *s.cover_connected}, {"branch_angles", s.branch_angles}};
    if (s.m_tau_error_constant)
        j["m_tau"] = {{"error_constant", json_number(*s.m_tau_error_constant)},
                      {"final_shrinker_residual", json_number(s.m_tau_final_shrinker_residual.value_or(not_computed))}};
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : s.checks)
        checks.push_back({{"name", c.name},
                          {"value", json_number(c.value)},
                          {"limit", json_number(c.limit)},
                          {"passed", c.passed},
                          {"note", c.note}});
    j["checks"] = checks;
    return j;
}

// ---------------------------------------------------------------------------
// Orchestration.
// ---------------------------------------------------------------------------

namespace detail {

inline Point centroid(const std::vector<Point>& z) {
    Point c{};
    for (const auto& p : z) c += p;
    return c / double(z.size());
}

inline HuiskenOptions huisken_options(const SurfaceModel& s, const DiagnosticsSpec& dg) {
    HuiskenOptions h;
    // Surfaces without a closed-form distance go through the geodesic solver; subsample there.
    if (!closed_form_distance(s, Point(0.1, 0.2), Point(0.3, 0.1)).has_value()) h.max_nodes = dg.distance_nodes;
    return h;
}

}  // namespace detail

inline ScenarioRun run_scenario(const Scenario& sc, const RunOptions& ro = {}) {
    validate(sc);
    ScenarioRun out;
    RunSummary& sum = out.summary;
    sum.scenario = sc.name;
    sum.seed = sc.seed;
    const double tol = ro.tolerance_scale;

    SurfaceRef surface = share(build_surface(sc.surface));
    const SurfaceModel& s = *surface;
    DiscreteCurve initial = build_initial_curve(sc, surface);
    const auto& dg = sc.diagnostics;
    DistanceFn dist = surface_distance(s);
    HuiskenOptions hopt = detail::huisken_options(s, dg);

    double R0 = huisken_ratio(initial, dist, hopt);
    sum.constants = comparison_constants(s, initial.length(), R0);
    sum.comparison_K = dg.comparison_K.value_or(sum.constants.K);
    sum.comparison_N = std::max(sum.constants.threshold_floor, R0);

    std::optional<CoverSpace> cover;
    if (sc.cover.enabled) {
        CoverOptions co;
        co.auxiliary = sc.cover.auxiliary;
        co.auxiliary_candidates = sc.cover.auxiliary_candidates;
        co.initial_curve = initial.nodes();
        co.ray_direction = sc.cover.ray_direction;
        cover.emplace(build_double_cover(surface, sc.cover.branch_set, co));
        for (std::size_t i = 0; i < cover->branch_points().size(); ++i)
            sum.branch_angles.push_back(cover->branch_angle(i));
    }

    std::mt19937_64 rng(sc.seed);
    const double zn_u = detail::unit_draw(rng), zn_v = detail::unit_draw(rng);
    bool gb_apex_seen = false;

    FlowConfig cfg = flow_config(sc);
    cfg.on_record = [&](const DiscreteCurve& c, DiagnosticsRecord& r) {
        bool need_huisken = dg.huisken || dg.comparison;
        if (need_huisken) {
            double h = huisken_ratio(c, dist, hopt);
            if (dg.huisken) r.huisken = h;
            if (dg.comparison) r.comparison = comparison_R(h, c.t(), sum.comparison_K);
        }
        if (dg.gauss_bonnet) {
            GaussBonnet g = gauss_bonnet_residual(c);
            r.gauss_bonnet = g.residual;
            gb_apex_seen = gb_apex_seen || g.contains_apex;
        }
        if (dg.zn_grid > 0) {
            double L = c.length(), m = infinity;
            const std::size_t g = dg.zn_grid;
            for (std::size_t i = 0; i < g; ++i)
                for (std::size_t j = 0; j < g; ++j) {
                    double x = (double(i) + zn_u) * L / double(g);
                    double y = (double(j) + zn_v) * L / double(g);
                    if (x == y) continue;
                    m = std::min(m, z_n(c, x, y, sum.comparison_N, sum.comparison_K).value);
                }
            r.zn_min = m;
        }
        if (cover) {
            try {
                LiftedCurve up = lift_curve(c, *cover);
                r.lifted_length = up.upstairs ? up.upstairs->length() : up.lifted_length;
                if (!sum.cover_connected) sum.cover_connected = up.connected;
            } catch (const Error&) {
                r.lifted_length = not_computed;
            }
        }
    };

    try {
        out.trace = run(initial, cfg);
    } catch (const Error& e) {
        sum.aborted = e.what();
    }
    FlowTrace& trace = out.trace;

    if (!trace.records.empty()) {
        sum.stop_reason = trace.stop_reason;
        sum.T_est = trace.T_est;
        sum.steps = trace.steps.size();
        sum.remesh_count = trace.remesh_count;
        sum.initial = trace.records.front();
        sum.final = trace.records.back();
        sum.singularity = singularity_exponent(trace);

        // Length strictly decreasing across snapshots.
        std::size_t bad = 0;
        for (std::size_t i = 1; i < trace.records.size(); ++i)
            if (!(trace.records[i].length < trace.records[i - 1].length)) ++bad;
        sum.checks.push_back({"length_decreasing", double(bad), 0.0, bad == 0, "non-decreasing snapshot pairs"});

        sum.checks.push_back({"singularity_type", sum.singularity.exponent, not_computed,
                              sum.singularity.classification != SingularityClass::TypeIISuspect,
                              to_string(sum.singularity.classification)});

        if (dg.comparison) {
            double worst = 0;
            for (const auto& r : trace.records)
                if (std::isfinite(r.comparison)) worst = std::max(worst, r.comparison);
            sum.checks.push_back({"comparison_bound", worst, sum.comparison_N, worst <= sum.comparison_N * (1 + 1e-9 * tol),
                                  "max R(t) against max(threshold_floor, R(0))"});
        }
        if (dg.zn_grid > 0) {
            double worst = infinity;
            for (const auto& r : trace.records)
                if (std::isfinite(r.zn_min)) worst = std::min(worst, r.zn_min);
            sum.checks.push_back({"zn_nonnegative", worst, 0.0, worst >= -1e-9 * tol * sum.comparison_N,
                                  "min of Z_N over the sampled grid"});
        }
        if (dg.gauss_bonnet) {
            double worst = 0;
            for (const auto& r : trace.records)
                if (std::isfinite(r.gauss_bonnet)) worst = std::max(worst, r.gauss_bonnet);
            sum.checks.push_back({"gauss_bonnet", worst, 1e-3 * tol, worst < 1e-3 * tol,
                                  gb_apex_seen ? "expected value includes enclosed cone angle defects" : ""});
        }
        if (cfg.track_tip) {
            sum.tip = classify_tip(trace, s.cone_angle(dg.tip_apex));
            sum.checks.push_back({"tip_dichotomy", sum.tip->min_tip_distance, not_computed, !sum.tip->failed,
                                  to_string(sum.tip->verdict)});
        }
        if (dg.m_tau && std::isfinite(trace.T_est)) {
            RescaledFrame frame{dg.base_point.value_or(detail::centroid(trace.snapshots.back().nodes())), trace.T_est};
            CutoffProfile cut{dg.cutoff_r_M};
            try {
                out.m_tau = m_tau(trace, frame, cut, sum.constants.rauch_constant);
                sum.m_tau_error_constant = calibrate_error_constant(out.m_tau, sum.constants.rauch_constant, cut.r_M);
                if (!out.m_tau.empty()) sum.m_tau_final_shrinker_residual = out.m_tau.back().shrinker_residual;
            } catch (const Error& e) {
                sum.aborted = std::string("m_tau: ") + e.what();
            }
        }
    }

    if (!ro.out_dir.empty()) {
        detail::ensure_dir(ro.out_dir);
        std::filesystem::path dir(ro.out_dir);
        write_diagnostics_csv(dir / "diagnostics.csv", trace.records);
        if (!trace.snapshots.empty()) write_snapshots_json(dir / "snapshots.json", sc.name, trace);
        if (!out.m_tau.empty()) write_m_tau_csv(dir / "m_tau.csv", out.m_tau);
        auto f = detail::open_out(dir / "summary.json");
        f << to_json(sum).dump(2) << "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form reference tables.
// ---------------------------------------------------------------------------

inline void emit_reference_tables(const std::string& out_dir) {
    detail::ensure_dir(out_dir);
    std::filesystem::path dir(out_dir);
    using detail::csv_number;
    {
        auto f = detail::open_out(dir / "circle_radius.csv");
        f << "# derivation: a round circle of radius R0 in the plane shrinks as R(t) = sqrt(R0^2 - 2 t), "
             "vanishing at t = R0^2 / 2\n";
        f << "R0,t,R\n";
        for (int i = 0; i <= 20; ++i) {
            double t = 0.025 * i;
            f << "1," << csv_number(t) << "," << csv_number(circle_radius(1.0, t)) << "\n";
        }
    }
    {
        auto f = detail::open_out(dir / "grim_reaper.csv");
        f << "# derivation: y = -log(cos x) + t translates upward with unit speed; its curvature is k = cos x\n";
        f << "x,t,y,k\n";
        for (int i = -8; i <= 8; ++i) {
            double x = i * (pi / 2) / 9;
            for (double t : {0.0, 0.5}) f << csv_number(x) << "," << csv_number(t) << ","
                                          << csv_number(grim_reaper_height(x, t)) << ","
                                          << csv_number(grim_reaper_curvature(x)) << "\n";
        }
    }
    {
        auto f = detail::open_out(dir / "cone_distance.csv");
        f << "# derivation: unroll the cone of total angle 2 pi a into a flat sector; the developed angle is "
             "a * dtheta; below pi the law of cosines applies, otherwise the shortest path runs through the apex "
             "with length rho1 + rho2\n";
        f << "angle_scale,rho1,rho2,dtheta,distance\n";
        for (double a : {0.25, 0.5, 0.75, 1.0, 2.0})
            for (double r1 : {0.5, 1.0})
                for (double r2 : {0.5, 1.0, 2.0})
                    for (int k = 0; k <= 6; ++k) {
                        double dth = k * pi / 6;
                        f << csv_number(a) << "," << csv_number(r1) << "," << csv_number(r2) << ","
                          << csv_number(dth) << ","
                          << csv_number(cone_distance_polar(a, {r1, 0.0}, {r2, dth})) << "\n";
                    }
    }
}

}  // namespace csf
