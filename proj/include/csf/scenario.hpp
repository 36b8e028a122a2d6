#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "csf/core.hpp"
#include "csf/cover.hpp"
#include "csf/flow.hpp"
#include "csf/geometry.hpp"

namespace csf {

// ---------------------------------------------------------------------------
// Scenario description. Lengths are in chart units; angles in radians.
// ---------------------------------------------------------------------------

struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::EuclideanPlane;
    double sphere_radius = 1.0;
    double total_angle_rad = two_pi;
    double cone_chart_radius = 10.0;
    std::vector<ConePoint> divisor;
    std::vector<HTerm> h_terms;
    bool generalized = false;
    double domain_radius = 10.0;
    std::optional<double> apex_exclusion;
    bool operator==(const SurfaceSpec&) const = default;
};

enum class CurveShape { Circle, Ellipse, PolarGraph, Nodes };

struct CurveSpec {
    CurveShape shape = CurveShape::Circle;
    Point center{};
    double radius = 1.0;
    double semi_axis_a = 2.0, semi_axis_b = 1.0;
    double rotation_rad = 0.0;
    std::vector<double> polar_coefficients{1.0};  // a0, a1, b1, a2, b2, ...
    std::vector<Point> nodes;
    std::size_t node_count = 256;
    bool operator==(const CurveSpec&) const = default;
};

struct SolverSpec {
    double cfl_factor = 0.2;
    double length_floor = 1e-3;
    double curvature_ceiling = 1e3;
    double time_horizon = infinity;
    double output_dt = infinity;
    double output_length_drop = 0.02;
    std::size_t max_steps = 20'000'000;
    bool operator==(const SolverSpec&) const = default;
};

struct DiagnosticsSpec {
    bool huisken = true;
    bool comparison = true;
    std::optional<double> comparison_K;  // empty: computed from the surface
    std::size_t zn_grid = 0;             // Z_N sampled on zn_grid^2 arc pairs; 0 disables
    bool m_tau = false;
    std::optional<Point> base_point;     // empty: centroid of the last snapshot
    double cutoff_r_M = 1.0;
    bool gauss_bonnet = true;
    bool tip_tracking = false;
    std::size_t tip_apex = 0;
    std::size_t distance_nodes = 64;     // node subsample for solver-based distances
    bool operator==(const DiagnosticsSpec&) const = default;
};

struct CoverSpec {
    bool enabled = false;
    std::vector<std::size_t> branch_set;
    AuxiliaryPolicy auxiliary = AuxiliaryPolicy::None;
    std::vector<Point> auxiliary_candidates;
    std::optional<Point> ray_direction;
    bool operator==(const CoverSpec&) const = default;
};

struct Scenario {
    std::string name = "scenario";
    SurfaceSpec surface;
    CurveSpec curve;
    SolverSpec solver;
    DiagnosticsSpec diagnostics;
    CoverSpec cover;
    bool tip_experiment = false;
    std::uint64_t seed = 1;
    bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------
// Text helpers.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

inline double to_double(const std::string& field, const std::string& text) {
    std::string t = trim(text);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw Error(ErrorKind::ParseError, "field '" + field + "': not a number: '" + text + "'");
    return v;
}

inline std::vector<double> to_doubles(const std::string& field, const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(to_double(field, p));
    return out;
}

// Groups "a,b,c; d,e,f" into tuples of fixed arity.
inline std::vector<std::vector<double>> to_tuples(const std::string& field, const std::string& text,
                                                  std::size_t arity) {
    std::vector<std::vector<double>> out;
    for (const auto& g : split(text, ';')) {
        auto v = to_doubles(field, g);
        if (v.size() != arity)
            throw Error(ErrorKind::ParseError,
                        "field '" + field + "': expected " + std::to_string(arity) + " values per entry");
        out.push_back(std::move(v));
    }
    return out;
}

inline bool to_bool(const std::string& field, const std::string& text) {
    std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw Error(ErrorKind::ParseError, "field '" + field + "': not a boolean: '" + text + "'");
}

inline std::string join_points(const std::vector<Point>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += "; ";
        s += fmt(pts[i].real()) + ", " + fmt(pts[i].imag());
    }
    return s;
}

inline std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

inline const char* shape_name(CurveShape s) {
    switch (s) {
        case CurveShape::Circle: return "circle";
        case CurveShape::Ellipse: return "ellipse";
        case CurveShape::PolarGraph: return "polar";
        case CurveShape::Nodes: return "nodes";
    }
    return "circle";
}

inline const char* auxiliary_name(AuxiliaryPolicy p) {
    switch (p) {
        case AuxiliaryPolicy::None: return "none";
        case AuxiliaryPolicy::Infinity: return "infinity";
        case AuxiliaryPolicy::Regular: return "regular";
    }
    return "none";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

inline Scenario parse_scenario(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    {
        std::istringstream is(text);
        try {
            pt::read_ini(is, tree);
        } catch (const pt::ini_parser_error& e) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(e.line()) + ": " + e.message());
        }
    }
    static const std::vector<std::pair<std::string, std::vector<std::string>>> known = {
        {"run", {"name", "seed", "tip_experiment"}},
        {"surface",
         {"kind", "radius", "total_angle_rad", "cone_chart_radius", "divisor", "h_quadratic", "h_sphere", "h_bump",
          "generalized", "domain_radius", "apex_exclusion"}},
        {"curve",
         {"shape", "center", "radius", "semi_axis_a", "semi_axis_b", "rotation_rad", "polar_coefficients", "nodes",
          "node_count"}},
        {"solver",
         {"cfl_factor", "length_floor", "curvature_ceiling", "time_horizon", "output_dt", "output_length_drop",
          "max_steps"}},
        {"diagnostics",
         {"huisken", "comparison", "comparison_K", "zn_grid", "m_tau", "base_point", "cutoff_r_M", "gauss_bonnet",
          "tip_tracking", "tip_apex", "distance_nodes"}},
        {"cover", {"enabled", "branch_set", "auxiliary", "auxiliary_candidates", "ray_direction"}},
    };
    for (const auto& [section, body] : tree) {
        auto it = std::find_if(known.begin(), known.end(), [&](const auto& k) { return k.first == section; });
        if (it == known.end()) throw Error(ErrorKind::ParseError, "unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            (void)value;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                throw Error(ErrorKind::ParseError, "unknown field '" + section + "." + key + "'");
        }
    }

    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
        return std::nullopt;
    };
    auto num = [&](const std::string& path, double& out) {
        if (auto v = get(path)) out = detail::to_double(path, *v);
    };
    auto count = [&](const std::string& path, std::size_t& out) {
        if (auto v = get(path)) {
            double d = detail::to_double(path, *v);
            if (!(d >= 0) || d != std::floor(d))
                throw Error(ErrorKind::ParseError, "field '" + path + "': not a non-negative integer");
            out = std::size_t(d);
        }
    };
    auto flag = [&](const std::string& path, bool& out) {
        if (auto v = get(path)) out = detail::to_bool(path, *v);
    };
    auto point = [&](const std::string& path) -> std::optional<Point> {
        auto v = get(path);
        if (!v) return std::nullopt;
        auto xs = detail::to_doubles(path, *v);
        if (xs.size() != 2) throw Error(ErrorKind::ParseError, "field '" + path + "': expected x, y");
        return Point(xs[0], xs[1]);
    };
    auto points = [&](const std::string& path, std::vector<Point>& out) {
        if (auto v = get(path)) {
            out.clear();
            for (const auto& t : detail::to_tuples(path, *v, 2)) out.emplace_back(t[0], t[1]);
        }
    };

    Scenario s;
    if (auto v = get("run.name")) s.name = detail::trim(*v);
    if (auto v = get("run.seed")) {
        double d = detail::to_double("run.seed", *v);
        if (!(d >= 0) || d != std::floor(d)) throw Error(ErrorKind::ParseError, "field 'run.seed': not an integer");
        s.seed = std::uint64_t(d);
    }
    flag("run.tip_experiment", s.tip_experiment);

    SurfaceSpec& sf = s.surface;
    if (auto v = get("surface.kind")) {
        std::string k = detail::trim(*v);
        if (k == "plane") sf.kind = SurfaceKind::EuclideanPlane;
        else if (k == "sphere") sf.kind = SurfaceKind::SpherePatch;
        else if (k == "flat_cone") sf.kind = SurfaceKind::FlatCone;
        else if (k == "conic") sf.kind = SurfaceKind::ConicConformal;
        else throw Error(ErrorKind::ParseError, "field 'surface.kind': unknown kind '" + k + "'");
    }
    num("surface.radius", sf.sphere_radius);
    num("surface.total_angle_rad", sf.total_angle_rad);
    num("surface.cone_chart_radius", sf.cone_chart_radius);
    num("surface.domain_radius", sf.domain_radius);
    flag("surface.generalized", sf.generalized);
    if (auto v = get("surface.apex_exclusion")) sf.apex_exclusion = detail::to_double("surface.apex_exclusion", *v);
    if (auto v = get("surface.divisor"))
        for (const auto& t : detail::to_tuples("surface.divisor", *v, 3)) sf.divisor.push_back({{t[0], t[1]}, t[2]});
    if (auto v = get("surface.h_quadratic"))
        for (const auto& t : detail::to_tuples("surface.h_quadratic", *v, 6))
            sf.h_terms.push_back(QuadraticTerm{t[0], t[1], t[2], t[3], t[4], t[5]});
    if (auto v = get("surface.h_sphere"))
        for (const auto& t : detail::to_tuples("surface.h_sphere", *v, 3))
            sf.h_terms.push_back(SphereTerm{t[0], {t[1], t[2]}});
    if (auto v = get("surface.h_bump"))
        for (const auto& t : detail::to_tuples("surface.h_bump", *v, 4))
            sf.h_terms.push_back(BumpTerm{t[0], {t[1], t[2]}, t[3]});

    CurveSpec& cv = s.curve;
    if (auto v = get("curve.shape")) {
        std::string k = detail::trim(*v);
        if (k == "circle") cv.shape = CurveShape::Circle;
        else if (k == "ellipse") cv.shape = CurveShape::Ellipse;
        else if (k == "polar") cv.shape = CurveShape::PolarGraph;
        else if (k == "nodes") cv.shape = CurveShape::Nodes;
        else throw Error(ErrorKind::ParseError, "field 'curve.shape': unknown shape '" + k + "'");
    }
    if (auto p = point("curve.center")) cv.center = *p;
    num("curve.radius", cv.radius);
    num("curve.semi_axis_a", cv.semi_axis_a);
    num("curve.semi_axis_b", cv.semi_axis_b);
    num("curve.rotation_rad", cv.rotation_rad);
    if (auto v = get("curve.polar_coefficients")) cv.polar_coefficients = detail::to_doubles("curve.polar_coefficients", *v);
    points("curve.nodes", cv.nodes);
    count("curve.node_count", cv.node_count);

    SolverSpec& so = s.solver;
    num("solver.cfl_factor", so.cfl_factor);
    num("solver.length_floor", so.length_floor);
    num("solver.curvature_ceiling", so.curvature_ceiling);
    num("solver.time_horizon", so.time_horizon);
    num("solver.output_dt", so.output_dt);
    num("solver.output_length_drop", so.output_length_drop);
    count("solver.max_steps", so.max_steps);

    DiagnosticsSpec& dg = s.diagnostics;
    flag("diagnostics.huisken", dg.huisken);
    flag("diagnostics.comparison", dg.comparison);
    if (auto v = get("diagnostics.comparison_K")) {
        if (detail::trim(*v) != "auto") dg.comparison_K = detail::to_double("diagnostics.comparison_K", *v);
    }
    count("diagnostics.zn_grid", dg.zn_grid);
    flag("diagnostics.m_tau", dg.m_tau);
    if (auto p = point("diagnostics.base_point")) dg.base_point = p;
    num("diagnostics.cutoff_r_M", dg.cutoff_r_M);
    flag("diagnostics.gauss_bonnet", dg.gauss_bonnet);
    flag("diagnostics.tip_tracking", dg.tip_tracking);
    count("diagnostics.tip_apex", dg.tip_apex);
    count("diagnostics.distance_nodes", dg.distance_nodes);

    CoverSpec& co = s.cover;
    flag("cover.enabled", co.enabled);
    if (auto v = get("cover.branch_set"))
        for (double d : detail::to_doubles("cover.branch_set", *v)) {
            if (!(d >= 0) || d != std::floor(d))
                throw Error(ErrorKind::ParseError, "field 'cover.branch_set': indices must be non-negative integers");
            co.branch_set.push_back(std::size_t(d));
        }
    if (auto v = get("cover.auxiliary")) {
        std::string k = detail::trim(*v);
        if (k == "none") co.auxiliary = AuxiliaryPolicy::None;
        else if (k == "infinity") co.auxiliary = AuxiliaryPolicy::Infinity;
        else if (k == "regular") co.auxiliary = AuxiliaryPolicy::Regular;
        else throw Error(ErrorKind::ParseError, "field 'cover.auxiliary': unknown policy '" + k + "'");
    }
    points("cover.auxiliary_candidates", co.auxiliary_candidates);
    if (auto p = point("cover.ray_direction")) co.ray_direction = p;
    return s;
}

// ---------------------------------------------------------------------------
// Validation and construction.
// ---------------------------------------------------------------------------

inline SurfaceModel build_surface(const SurfaceSpec& sf) {
    SurfaceModel m = SurfaceModel::euclidean_plane();
    switch (sf.kind) {
        case SurfaceKind::EuclideanPlane: break;
        case SurfaceKind::SpherePatch: m = SurfaceModel::sphere_patch(sf.sphere_radius); break;
        case SurfaceKind::FlatCone: m = SurfaceModel::flat_cone(sf.total_angle_rad, sf.cone_chart_radius); break;
        case SurfaceKind::ConicConformal:
            m = SurfaceModel::conic_conformal(sf.divisor, HField(sf.h_terms), sf.generalized, sf.domain_radius);
            break;
    }
    if (sf.apex_exclusion) m.set_apex_exclusion(*sf.apex_exclusion);
    return m;
}

// Chart parametrization of the initial curve on [0, 2 pi), counterclockwise.
inline std::function<Point(double)> curve_parametrization(const CurveSpec& cv) {
    switch (cv.shape) {
        case CurveShape::Circle: return [cv](double t) { return cv.center + std::polar(cv.radius, t); };
        case CurveShape::Ellipse:
            return [cv](double t) {
                Point e(cv.semi_axis_a * std::cos(t), cv.semi_axis_b * std::sin(t));
                return cv.center + e * std::polar(1.0, cv.rotation_rad);
            };
        case CurveShape::PolarGraph:
            return [cv](double t) {
                const auto& c = cv.polar_coefficients;
                double r = c.empty() ? 0.0 : c[0];
                for (std::size_t k = 1; 2 * k - 1 < c.size(); ++k) {
                    r += c[2 * k - 1] * std::cos(double(k) * t);
                    if (2 * k < c.size()) r += c[2 * k] * std::sin(double(k) * t);
                }
                return cv.center + std::polar(r, t);
            };
        case CurveShape::Nodes: break;
    }
    return {};
}

// Field-level validation; collects every violated constraint.
inline void validate(const Scenario& s) {
    std::vector<std::string> errs;
    auto positive = [&](const char* field, double v) {
        if (!(v > 0)) errs.push_back(std::string(field) + " must be positive");
    };
    const auto& sf = s.surface;
    if (sf.kind == SurfaceKind::SpherePatch) positive("surface.radius", sf.sphere_radius);
    if (sf.kind == SurfaceKind::FlatCone) {
        positive("surface.total_angle_rad", sf.total_angle_rad);
        positive("surface.cone_chart_radius", sf.cone_chart_radius);
    }
    if (sf.kind == SurfaceKind::ConicConformal) {
        positive("surface.domain_radius", sf.domain_radius);
        for (const auto& c : sf.divisor) {
            bool ok = sf.generalized ? c.beta > -1 : (c.beta > -1 && c.beta < 0);
            if (!ok) errs.push_back("surface.divisor: beta out of (-1,0)");
        }
    }
    if (sf.apex_exclusion) positive("surface.apex_exclusion", *sf.apex_exclusion);
    const auto& cv = s.curve;
    if (cv.shape == CurveShape::Nodes) {
        if (cv.nodes.size() < 32) errs.push_back("curve.nodes: N must be at least 32");
    } else if (cv.node_count < 32) {
        errs.push_back("curve.node_count: N must be at least 32");
    }
    if (cv.shape == CurveShape::Circle) positive("curve.radius", cv.radius);
    if (cv.shape == CurveShape::Ellipse) {
        positive("curve.semi_axis_a", cv.semi_axis_a);
        positive("curve.semi_axis_b", cv.semi_axis_b);
    }
    if (cv.shape == CurveShape::PolarGraph) {
        auto f = curve_parametrization(cv);
        for (int i = 0; i < 720; ++i)
            if (!(std::abs(f(two_pi * i / 720) - cv.center) > 0)) {
                errs.push_back("curve.polar_coefficients: radius must stay positive");
                break;
            }
    }
    const auto& so = s.solver;
    positive("solver.cfl_factor", so.cfl_factor);
    positive("solver.length_floor", so.length_floor);
    positive("solver.curvature_ceiling", so.curvature_ceiling);
    positive("solver.time_horizon", so.time_horizon);
    positive("solver.output_dt", so.output_dt);
    positive("solver.output_length_drop", so.output_length_drop);
    const auto& dg = s.diagnostics;
    positive("diagnostics.cutoff_r_M", dg.cutoff_r_M);
    if (dg.tip_tracking || s.tip_experiment) {
        std::size_t apexes = sf.kind == SurfaceKind::FlatCone ? 1 : sf.divisor.size();
        if (dg.tip_apex >= apexes) errs.push_back("diagnostics.tip_apex: no such conic point");
    }
    if (s.cover.enabled) {
        std::size_t apexes = sf.kind == SurfaceKind::FlatCone ? 1 : sf.divisor.size();
        for (auto i : s.cover.branch_set)
            if (i >= apexes) errs.push_back("cover.branch_set: index out of range");
        if (s.cover.branch_set.size() % 2 == 1 && s.cover.auxiliary == AuxiliaryPolicy::None)
            errs.push_back("cover.auxiliary: odd branch set needs an auxiliary point");
    }
    if (!errs.empty()) {
        std::string msg;
        for (std::size_t i = 0; i < errs.size(); ++i) msg += (i ? "; " : "") + errs[i];
        throw Error(ErrorKind::ValidationError, msg);
    }
}

inline DiscreteCurve build_initial_curve(const Scenario& s, SurfaceRef surface) {
    if (s.curve.shape == CurveShape::Nodes) return DiscreteCurve(std::move(surface), s.curve.nodes, 0.0);
    return sample_curve(std::move(surface), curve_parametrization(s.curve), s.curve.node_count);
}

inline FlowConfig flow_config(const Scenario& s) {
    FlowConfig c;
    c.cfl = s.solver.cfl_factor;
    c.length_floor = s.solver.length_floor;
    c.curvature_ceiling = s.solver.curvature_ceiling;
    c.time_horizon = s.solver.time_horizon;
    c.output_dt = s.solver.output_dt;
    c.output_length_drop = s.solver.output_length_drop;
    c.max_steps = s.solver.max_steps;
    c.track_tip = s.diagnostics.tip_tracking || s.tip_experiment;
    c.tip_apex = s.diagnostics.tip_apex;
    return c;
}

// ---------------------------------------------------------------------------
// Emission: the inverse of parse_scenario.
// ---------------------------------------------------------------------------

inline std::string emit_scenario(const Scenario& s) {
    using detail::fmt;
    std::ostringstream os;
    auto b = [](bool v) { return v ? "true" : "false"; };
    os << "[run]\n";
    os << "name = " << s.name << "\n";
    os << "seed = " << s.seed << "\n";
    os << "tip_experiment = " << b(s.tip_experiment) << "\n\n";

    const auto& sf = s.surface;
    os << "[surface]\n";
    os << "kind = " << to_string(sf.kind) << "\n";
    os << "radius = " << fmt(sf.sphere_radius) << "\n";
    os << "total_angle_rad = " << fmt(sf.total_angle_rad) << "\n";
    os << "cone_chart_radius = " << fmt(sf.cone_chart_radius) << "\n";
    os << "domain_radius = " << fmt(sf.domain_radius) << "\n";
    os << "generalized = " << b(sf.generalized) << "\n";
    if (sf.apex_exclusion) os << "apex_exclusion = " << fmt(*sf.apex_exclusion) << "\n";
    if (!sf.divisor.empty()) {
        os << "divisor = ";
        for (std::size_t i = 0; i < sf.divisor.size(); ++i)
            os << (i ? "; " : "") << fmt(sf.divisor[i].at.real()) << ", " << fmt(sf.divisor[i].at.imag()) << ", "
               << fmt(sf.divisor[i].beta);
        os << "\n";
    }
    // Terms are grouped by type; the parser reads them back in this order.
    std::vector<std::string> quad, sph, bump;
    for (const auto& t : sf.h_terms) {
        if (auto* q = std::get_if<QuadraticTerm>(&t))
            quad.push_back(detail::join({q->c0, q->cx, q->cy, q->cxx, q->cxy, q->cyy}));
        else if (auto* p = std::get_if<SphereTerm>(&t))
            sph.push_back(detail::join({p->radius, p->center.real(), p->center.imag()}));
        else if (auto* g = std::get_if<BumpTerm>(&t))
            bump.push_back(detail::join({g->amplitude, g->center.real(), g->center.imag(), g->sigma}));
    }
    auto list = [&](const char* key, const std::vector<std::string>& v) {
        if (v.empty()) return;
        os << key << " = ";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "; " : "") << v[i];
        os << "\n";
    };
    list("h_quadratic", quad);
    list("h_sphere", sph);
    list("h_bump", bump);
    os << "\n";

    const auto& cv = s.curve;
    os << "[curve]\n";
    os << "shape = " << detail::shape_name(cv.shape) << "\n";
    os << "center = " << fmt(cv.center.real()) << ", " << fmt(cv.center.imag()) << "\n";
    os << "radius = " << fmt(cv.radius) << "\n";
    os << "semi_axis_a = " << fmt(cv.semi_axis_a) << "\n";
    os << "semi_axis_b = " << fmt(cv.semi_axis_b) << "\n";
    os << "rotation_rad = " << fmt(cv.rotation_rad) << "\n";
    os << "polar_coefficients = " << detail::join(cv.polar_coefficients) << "\n";
    if (!cv.nodes.empty()) os << "nodes = " << detail::join_points(cv.nodes) << "\n";
    os << "node_count = " << cv.node_count << "\n\n";

    const auto& so = s.solver;
    os << "[solver]\n";
    os << "cfl_factor = " << fmt(so.cfl_factor) << "\n";
    os << "length_floor = " << fmt(so.length_floor) << "\n";
    os << "curvature_ceiling = " << fmt(so.curvature_ceiling) << "\n";
    os << "time_horizon = " << fmt(so.time_horizon) << "\n";
    os << "output_dt = " << fmt(so.output_dt) << "\n";
    os << "output_length_drop = " << fmt(so.output_length_drop) << "\n";
    os << "max_steps = " << so.max_steps << "\n\n";

    const auto& dg = s.diagnostics;
    os << "[diagnostics]\n";
    os << "huisken = " << b(dg.huisken) << "\n";
    os << "comparison = " << b(dg.comparison) << "\n";
    os << "comparison_K = " << (dg.comparison_K ? fmt(*dg.comparison_K) : std::string("auto")) << "\n";
    os << "zn_grid = " << dg.zn_grid << "\n";
    os << "m_tau = " << b(dg.m_tau) << "\n";
    if (dg.base_point) os << "base_point = " << fmt(dg.base_point->real()) << ", " << fmt(dg.base_point->imag()) << "\n";
    os << "cutoff_r_M = " << fmt(dg.cutoff_r_M) << "\n";
    os << "gauss_bonnet = " << b(dg.gauss_bonnet) << "\n";
    os << "tip_tracking = " << b(dg.tip_tracking) << "\n";
    os << "tip_apex = " << dg.tip_apex << "\n";
    os << "distance_nodes = " << dg.distance_nodes << "\n\n";

    const auto& co = s.cover;
    os << "[cover]\n";
    os << "enabled = " << b(co.enabled) << "\n";
    if (!co.branch_set.empty()) {
        os << "branch_set = ";
        for (std::size_t i = 0; i < co.branch_set.size(); ++i) os << (i ? ", " : "") << co.branch_set[i];
        os << "\n";
    }
    os << "auxiliary = " << detail::auxiliary_name(co.auxiliary) << "\n";
    if (!co.auxiliary_candidates.empty())
        os << "auxiliary_candidates = " << detail::join_points(co.auxiliary_candidates) << "\n";
    if (co.ray_direction)
        os << "ray_direction = " << fmt(co.ray_direction->real()) << ", " << fmt(co.ray_direction->imag()) << "\n";
    return os.str();
}

}  // namespace csf
