#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "csf/core.hpp"

namespace csf {

// ---------------------------------------------------------------------------
// Smooth part h of a conformal metric, as a sum of analytic terms.
// ---------------------------------------------------------------------------

// c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2
struct QuadraticTerm {
    double c0 = 0, cx = 0, cy = 0, cxx = 0, cxy = 0, cyy = 0;
    bool operator==(const QuadraticTerm&) const = default;
};

// log(2 a^2 / (a^2 + |z - c|^2)): the round sphere of radius a in a stereographic chart.
struct SphereTerm {
    double radius = 1.0;
    Point center{};
    bool operator==(const SphereTerm&) const = default;
};

// amplitude * exp(-|z - c|^2 / (2 sigma^2))
struct BumpTerm {
    double amplitude = 0.0;
    Point center{};
    double sigma = 1.0;
    bool operator==(const BumpTerm&) const = default;
};

using HTerm = std::variant<QuadraticTerm, SphereTerm, BumpTerm>;

// Value, gradient (as x + i y) and Laplacian of a scalar field at a point.
struct FieldJet {
    double value = 0.0;
    Point grad{};
    double laplacian = 0.0;
};

class HField {
public:
    HField() = default;
    explicit HField(std::vector<HTerm> terms) : terms_(std::move(terms)) {}

    FieldJet operator()(Point z) const {
        if (!pull_center_) return eval_terms(z);
        // h(c + w^2) + log 2, chain rule through the holomorphic map w -> c + w^2.
        Point xi = *pull_center_ + z * z;
        FieldJet b = eval_terms(xi);
        Point dxi = 2.0 * z;
        return {b.value + std::log(2.0), b.grad * std::conj(dxi), std::norm(dxi) * b.laplacian};
    }

    // The smooth part of the pull-back metric under z -> center + w^2, including the factor 4.
    HField pulled_back(Point center) const {
        if (pull_center_) throw Error(ErrorKind::ValidationError, "nested pull-backs are not supported");
        HField out = *this;
        out.pull_center_ = center;
        return out;
    }

    bool is_constant() const {
        for (const auto& t : terms_) {
            const auto* q = std::get_if<QuadraticTerm>(&t);
            if (!q) return false;
            if (q->cx != 0 || q->cy != 0 || q->cxx != 0 || q->cxy != 0 || q->cyy != 0) return false;
        }
        return true;
    }

    const std::vector<HTerm>& terms() const { return terms_; }
    std::optional<Point> pullback_center() const { return pull_center_; }

    bool operator==(const HField&) const = default;

private:
    FieldJet eval_terms(Point z) const {
        FieldJet out;
        for (const auto& t : terms_) {
            std::visit([&](const auto& term) { accumulate(term, z, out); }, t);
        }
        return out;
    }

    static void accumulate(const QuadraticTerm& q, Point z, FieldJet& out) {
        double x = z.real(), y = z.imag();
        out.value += q.c0 + q.cx * x + q.cy * y + q.cxx * x * x + q.cxy * x * y + q.cyy * y * y;
        out.grad += Point(q.cx + 2 * q.cxx * x + q.cxy * y, q.cy + q.cxy * x + 2 * q.cyy * y);
        out.laplacian += 2 * q.cxx + 2 * q.cyy;
    }
    static void accumulate(const SphereTerm& s, Point z, FieldJet& out) {
        double a2 = s.radius * s.radius;
        Point u = z - s.center;
        double q = a2 + std::norm(u);
        out.value += std::log(2 * a2 / q);
        out.grad += -2.0 * u / q;
        out.laplacian += -4 * a2 / (q * q);
    }
    static void accumulate(const BumpTerm& b, Point z, FieldJet& out) {
        Point u = z - b.center;
        double s2 = b.sigma * b.sigma;
        double v = b.amplitude * std::exp(-std::norm(u) / (2 * s2));
        out.value += v;
        out.grad += -u / s2 * v;
        out.laplacian += v * (std::norm(u) / (s2 * s2) - 2 / s2);
    }

    std::vector<HTerm> terms_;
    std::optional<Point> pull_center_;
};

// ---------------------------------------------------------------------------
// Surface models. Every model is a conformal metric g = lambda^2 |dz|^2 on one
// global chart, with log lambda = sum_i beta_i log|z - p_i| + h(z).
// ---------------------------------------------------------------------------

enum class SurfaceKind { EuclideanPlane, SpherePatch, FlatCone, ConicConformal };

inline const char* to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::EuclideanPlane: return "plane";
        case SurfaceKind::SpherePatch: return "sphere";
        case SurfaceKind::FlatCone: return "flat_cone";
        case SurfaceKind::ConicConformal: return "conic";
    }
    return "unknown";
}

struct ConePoint {
    Point at{};
    double beta = 0.0;
    bool operator==(const ConePoint&) const = default;
};

// phi = log lambda with its gradient and Laplacian.
struct LogFactor {
    double phi = 0.0;
    Point grad{};
    double laplacian = 0.0;
};

class SurfaceModel {
public:
    static SurfaceModel euclidean_plane() {
        SurfaceModel m;
        m.kind_ = SurfaceKind::EuclideanPlane;
        m.finish();
        return m;
    }

    // Round sphere of radius a, stereographic chart from the north pole.
    static SurfaceModel sphere_patch(double radius) {
        if (!(radius > 0)) throw Error(ErrorKind::ValidationError, "sphere radius must be positive");
        SurfaceModel m;
        m.kind_ = SurfaceKind::SpherePatch;
        m.sphere_radius_ = radius;
        m.h_ = HField({SphereTerm{radius, {}}});
        m.finish();
        return m;
    }

    // Flat cone of total angle theta: g = |z|^{2 beta}|dz|^2 with theta = 2 pi (1 + beta).
    static SurfaceModel flat_cone(double total_angle, double cone_chart_radius = 10.0) {
        if (!(total_angle > 0) || !std::isfinite(total_angle))
            throw Error(ErrorKind::ValidationError, "cone total angle must be in (0, inf)");
        if (!(cone_chart_radius > 0)) throw Error(ErrorKind::ValidationError, "cone chart radius must be positive");
        SurfaceModel m;
        m.kind_ = SurfaceKind::FlatCone;
        double beta = total_angle / two_pi - 1.0;
        m.divisor_ = {ConePoint{{}, beta}};
        m.generalized_ = beta > 0;
        m.cone_chart_radius_ = cone_chart_radius;
        m.finish();
        return m;
    }

    static SurfaceModel conic_conformal(std::vector<ConePoint> divisor, HField h, bool generalized = false,
                                        double domain_radius = 10.0) {
        for (const auto& c : divisor) {
            bool ok = generalized ? (c.beta > -1.0) : (c.beta > -1.0 && c.beta < 0.0);
            if (!ok) throw Error(ErrorKind::ValidationError, "beta out of (-1,0)");
        }
        for (std::size_t i = 0; i < divisor.size(); ++i)
            for (std::size_t j = i + 1; j < divisor.size(); ++j)
                if (std::abs(divisor[i].at - divisor[j].at) == 0.0)
                    throw Error(ErrorKind::ValidationError, "divisor points must be distinct");
        if (!(domain_radius > 0)) throw Error(ErrorKind::ValidationError, "domain radius must be positive");
        SurfaceModel m;
        m.kind_ = SurfaceKind::ConicConformal;
        m.divisor_ = std::move(divisor);
        m.h_ = std::move(h);
        m.generalized_ = generalized;
        m.domain_radius_ = domain_radius;
        m.finish();
        return m;
    }

    SurfaceKind kind() const { return kind_; }
    double sphere_radius() const { return sphere_radius_; }
    const std::vector<ConePoint>& divisor() const { return divisor_; }
    const HField& h() const { return h_; }
    bool generalized() const { return generalized_; }
    double domain_radius() const { return domain_radius_; }

    // Total angle 2 pi (1 + beta) of divisor point i.
    double cone_angle(std::size_t i = 0) const { return two_pi * (1.0 + divisor_.at(i).beta); }

    double curvature_bound() const { return curvature_bound_; }
    double injectivity_scale() const { return injectivity_scale_; }
    double cone_chart_radius() const { return cone_chart_radius_; }
    double apex_exclusion() const { return apex_exclusion_; }
    // Radius below which the Rauch estimates give 2 d^3 K_M < d / 2.
    double jet_radius() const { return curvature_bound_ > 0 ? 0.5 / std::sqrt(curvature_bound_) : infinity; }

    void set_curvature_bound(double k) { curvature_bound_ = k; }
    void set_apex_exclusion(double eps) { apex_exclusion_ = eps; }

    // True for a single conic point with constant h: distances then have a closed form.
    bool single_flat_apex() const { return divisor_.size() == 1 && h_.is_constant(); }

    LogFactor log_factor(Point z) const {
        LogFactor out;
        for (const auto& c : divisor_) {
            Point u = z - c.at;
            double r2 = std::norm(u);
            if (r2 == 0.0) throw Error(ErrorKind::ApexEvaluation, "evaluation at a conic point");
            out.phi += 0.5 * c.beta * std::log(r2);
            out.grad += c.beta * u / r2;
        }
        FieldJet hj = h_(z);
        out.phi += hj.value;
        out.grad += hj.grad;
        out.laplacian = hj.laplacian;
        return out;
    }

    double lambda(Point z) const { return std::exp(log_factor(z).phi); }

    // K = -Delta(log lambda) / lambda^2; the log|z - p| terms are harmonic off the divisor.
    double curvature(Point z) const {
        LogFactor f = log_factor(z);
        return -f.laplacian * std::exp(-2.0 * f.phi);
    }

    // The smooth part h_i = log lambda - beta_i log|z - p_i| around divisor point i.
    double local_smooth_part(Point z, std::size_t i) const {
        double v = h_(z).value;
        for (std::size_t j = 0; j < divisor_.size(); ++j) {
            if (j == i) continue;
            v += divisor_[j].beta * std::log(std::abs(z - divisor_[j].at));
        }
        return v;
    }

    // Geodesic distance from z to divisor point i: exact when single_flat_apex(),
    // otherwise the tangent-cone estimate e^{h_i(p_i)} r^{1+beta} / (1+beta).
    double apex_distance(Point z, std::size_t i) const {
        const ConePoint& c = divisor_.at(i);
        double s = 1.0 + c.beta;
        double r = std::abs(z - c.at);
        return std::exp(local_smooth_part(c.at, i)) * std::pow(r, s) / s;
    }

    std::optional<std::size_t> nearest_apex(Point z) const {
        std::optional<std::size_t> best;
        double bd = infinity;
        for (std::size_t i = 0; i < divisor_.size(); ++i) {
            double d = std::abs(z - divisor_[i].at);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return best;
    }

    // Smallest estimated geodesic distance to any divisor point.
    double min_apex_distance(Point z) const {
        double best = infinity;
        for (std::size_t i = 0; i < divisor_.size(); ++i) best = std::min(best, apex_distance(z, i));
        return best;
    }

private:
    SurfaceModel() = default;

    void finish() {
        switch (kind_) {
            case SurfaceKind::EuclideanPlane:
                curvature_bound_ = 0;
                injectivity_scale_ = infinity;
                cone_chart_radius_ = infinity;
                break;
            case SurfaceKind::SpherePatch:
                curvature_bound_ = 1.0 / (sphere_radius_ * sphere_radius_);
                injectivity_scale_ = pi * sphere_radius_;
                cone_chart_radius_ = infinity;
                break;
            case SurfaceKind::FlatCone:
                curvature_bound_ = 0;
                injectivity_scale_ = cone_chart_radius_ / 4;
                break;
            case SurfaceKind::ConicConformal: {
                curvature_bound_ = sampled_curvature_bound();
                cone_chart_radius_ = estimated_chart_radius();
                double inj = cone_chart_radius_ / 4;
                if (curvature_bound_ > 0) inj = std::min(inj, pi / std::sqrt(curvature_bound_));
                injectivity_scale_ = inj;
                break;
            }
        }
        apex_exclusion_ = std::isfinite(cone_chart_radius_) ? 1e-6 * cone_chart_radius_ : 1e-6;
    }

    double sampled_curvature_bound() const {
        double kmax = 0;
        auto probe = [&](Point z) {
            for (const auto& c : divisor_)
                if (std::abs(z - c.at) < 1e-9) return;
            kmax = std::max(kmax, std::abs(curvature(z)));
        };
        const int n = 121;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double x = -domain_radius_ + 2 * domain_radius_ * i / (n - 1);
                double y = -domain_radius_ + 2 * domain_radius_ * j / (n - 1);
                probe({x, y});
            }
        for (const auto& c : divisor_)
            for (int k = 0; k <= 40; ++k) {
                double r = 1e-4 * std::pow(10.0, 4.0 * k / 40);
                for (int a = 0; a < 48; ++a) probe(c.at + std::polar(r, two_pi * a / 48));
            }
        return 1.25 * kmax;
    }

    double estimated_chart_radius() const {
        if (divisor_.empty()) return infinity;
        double best = infinity;
        for (std::size_t i = 0; i < divisor_.size(); ++i) {
            double r0 = domain_radius_;
            for (std::size_t j = 0; j < divisor_.size(); ++j)
                if (j != i) r0 = std::min(r0, 0.5 * std::abs(divisor_[i].at - divisor_[j].at));
            best = std::min(best, apex_distance(divisor_[i].at + r0, i));
        }
        return best;
    }

    SurfaceKind kind_ = SurfaceKind::EuclideanPlane;
    double sphere_radius_ = 0.0;
    std::vector<ConePoint> divisor_;
    HField h_;
    bool generalized_ = false;
    double domain_radius_ = 10.0;
    double curvature_bound_ = 0.0;
    double injectivity_scale_ = infinity;
    double cone_chart_radius_ = infinity;
    double apex_exclusion_ = 1e-6;
};

using SurfaceRef = std::shared_ptr<const SurfaceModel>;

inline SurfaceRef share(SurfaceModel m) { return std::make_shared<const SurfaceModel>(std::move(m)); }

// lambda^2 at p, so that g = lambda^2 |dz|^2.
inline double conformal_factor(const SurfaceModel& s, Point p) { return std::exp(2.0 * s.log_factor(p).phi); }

inline double gaussian_curvature(const SurfaceModel& s, Point p) { return s.curvature(p); }

// Curvature from a five-point finite-difference Laplacian of log lambda.
// Independent of the analytic Laplacian; used to cross-check pull-back metrics.
inline double gaussian_curvature_numeric(const SurfaceModel& s, Point p, double h = 1e-3) {
    auto phi = [&](Point z) { return s.log_factor(z).phi; };
    double c = phi(p);
    double lap = (phi(p + h) + phi(p - h) + phi(p + Point(0, h)) + phi(p - Point(0, h)) - 4 * c) / (h * h);
    return -lap * std::exp(-2 * c);
}

// Inverse stereographic projection onto the sphere of radius a (SpherePatch only).
inline std::array<double, 3> sphere_embedding(const SurfaceModel& s, Point z) {
    double a = s.sphere_radius();
    double a2 = a * a;
    double q = a2 + std::norm(z);
    return {2 * a2 * z.real() / q, 2 * a2 * z.imag() / q, a * (std::norm(z) - a2) / q};
}

inline Point sphere_chart(const SurfaceModel& s, const std::array<double, 3>& x) {
    double a = s.sphere_radius();
    return Point(x[0], x[1]) * (a / (a - x[2]));
}

// ---------------------------------------------------------------------------
// Geodesic polar coordinates around a conic point.
// ---------------------------------------------------------------------------

struct TangentConePoint {
    double rho = 0.0;
    double theta = 0.0;
};

class ConePolarChart {
public:
    ConePolarChart(SurfaceModel surface, std::size_t apex_index) : surface_(std::move(surface)), index_(apex_index) {
        const ConePoint& c = surface_.divisor().at(index_);
        apex_ = c.at;
        beta_ = c.beta;
        exact_ = surface_.single_flat_apex();
        if (surface_.kind() == SurfaceKind::FlatCone) {
            rho_max_ = surface_.cone_chart_radius();
            r_max_ = r_of_rho(rho_max_, 0.0);
        } else {
            double r0 = surface_.domain_radius();
            for (std::size_t j = 0; j < surface_.divisor().size(); ++j)
                if (j != index_) r0 = std::min(r0, 0.5 * std::abs(apex_ - surface_.divisor()[j].at));
            r_max_ = r0;
            rho_max_ = infinity;
            for (int k = 0; k < 32; ++k) rho_max_ = std::min(rho_max_, rho_of_r(r0, two_pi * k / 32));
        }
    }

    Point apex() const { return apex_; }
    double beta() const { return beta_; }
    double angle_scale() const { return 1.0 + beta_; }
    double rho_max() const { return rho_max_; }
    const SurfaceModel& surface() const { return surface_; }

    // rho(r, theta) = int_0^r s^beta e^{h(s, theta)} ds. With u = s^{1+beta} the
    // integrand becomes e^h / (1+beta), which is smooth at the apex.
    double rho_of_r(double r, double theta = 0.0) const {
        double s = angle_scale();
        if (r <= 0) return 0.0;
        if (exact_) return std::exp(surface_.local_smooth_part(apex_ + 1.0, index_)) * std::pow(r, s) / s;
        Point dir = std::polar(1.0, theta);
        auto f = [&](double u) {
            double rr = std::pow(u, 1.0 / s);
            return std::exp(surface_.local_smooth_part(apex_ + rr * dir, index_));
        };
        double err = 0;
        double upper = std::pow(r, s);
        double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, upper, 15, 1e-13, &err);
        if (!(err <= 1e-9 * std::abs(val) + 1e-300))
            throw Error(ErrorKind::QuadratureFailure, "geodesic radius integral did not converge");
        return val / s;
    }

    double r_of_rho(double rho, double theta = 0.0) const {
        if (rho <= 0) return 0.0;
        double s = angle_scale();
        if (exact_) return std::pow(rho * s / std::exp(surface_.local_smooth_part(apex_ + 1.0, index_)), 1.0 / s);
        if (rho > rho_max_) throw Error(ErrorKind::OutOfChart, "geodesic radius beyond the chart");
        auto f = [&](double r) { return rho_of_r(r, theta) - rho; };
        std::uintmax_t iters = 200;
        auto tol = boost::math::tools::eps_tolerance<double>(50);
        auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, r_max_, -rho, f(r_max_), tol, iters);
        return 0.5 * (lo + hi);
    }

    // Angular metric coefficient phi(rho, theta) of d rho^2 + phi^2 d theta^2.
    double circumference_density(double rho, double theta) const {
        double r = r_of_rho(rho, theta);
        return r * surface_.lambda(apex_ + std::polar(r, theta));
    }

    TangentConePoint to_polar(Point z) const {
        Point u = z - apex_;
        double theta = wrap_angle(std::arg(u));
        return {rho_of_r(std::abs(u), theta), theta};
    }

private:
    SurfaceModel surface_;
    std::size_t index_;
    Point apex_{};
    double beta_ = 0.0;
    bool exact_ = false;
    double rho_max_ = infinity;
    double r_max_ = infinity;
};

inline ConePolarChart polar_from_conformal(const SurfaceModel& s, std::size_t apex_index) {
    if (apex_index >= s.divisor().size()) throw Error(ErrorKind::ValidationError, "no such divisor point");
    return ConePolarChart(s, apex_index);
}

// Flat-cone distance from the development: law of cosines when the developed
// angle is below pi, otherwise the path through the apex.
inline double cone_distance_polar(double angle_scale, TangentConePoint a, TangentConePoint b) {
    double gap = std::abs(a.theta - b.theta);
    gap = std::fmod(gap, two_pi);
    double dtheta = angle_scale * std::min(gap, two_pi - gap);
    if (dtheta >= pi) return a.rho + b.rho;
    double s = std::sin(0.5 * dtheta);
    double dr = a.rho - b.rho;
    return std::sqrt(dr * dr + 4 * a.rho * b.rho * s * s);
}

inline double cone_distance(const ConePolarChart& chart, TangentConePoint a, TangentConePoint b) {
    if (a.rho > chart.rho_max() || b.rho > chart.rho_max())
        throw Error(ErrorKind::OutOfChart, "point beyond the cone chart");
    return cone_distance_polar(chart.angle_scale(), a, b);
}

inline Point exp_map_cone(const ConePolarChart& chart, TangentConePoint v) {
    if (v.rho >= chart.rho_max()) throw Error(ErrorKind::OutOfChart, "tangent vector beyond the cone chart");
    if (v.rho == 0.0) return chart.apex();
    return chart.apex() + std::polar(chart.r_of_rho(v.rho, v.theta), v.theta);
}

}  // namespace csf
