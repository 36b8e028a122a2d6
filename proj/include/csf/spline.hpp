#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "csf/core.hpp"

namespace csf {

// Closed interpolating cubic spline through chart points, parametrized by
// chord length. Segment i runs from node i to node i+1 (cyclically) over
// u in [0, gap(i)].
class PeriodicSpline {
public:
    PeriodicSpline() = default;

    explicit PeriodicSpline(std::vector<Point> nodes) : y_(std::move(nodes)) {
        const std::size_t n = y_.size();
        if (n < 3) throw Error(ErrorKind::ValidationError, "a closed spline needs at least 3 nodes");
        h_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            h_[i] = modulus(y_[next(i)] - y_[i]);
            if (!(h_[i] > 0)) throw Error(ErrorKind::ValidationError, "repeated spline node");
        }
        // h_{i-1} M_{i-1} + 2 (h_{i-1} + h_i) M_i + h_i M_{i+1} = 6 (slope_i - slope_{i-1})
        std::vector<double> a(n), b(n), c(n);
        std::vector<Point> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t p = prev(i);
            a[i] = h_[p];
            b[i] = 2 * (h_[p] + h_[i]);
            c[i] = h_[i];
            r[i] = 6.0 * ((y_[next(i)] - y_[i]) / h_[i] - (y_[i] - y_[p]) / h_[p]);
        }
        m_ = solve_cyclic(a, b, c, r);
    }

    std::size_t size() const { return y_.size(); }
    double gap(std::size_t i) const { return h_[i]; }
    const std::vector<Point>& nodes() const { return y_; }

    Point value(std::size_t i, double u) const {
        double h = h_[i], v = h - u;
        std::size_t j = next(i);
        return m_[i] * (v * v * v / (6 * h)) + m_[j] * (u * u * u / (6 * h)) + (y_[i] / h - m_[i] * (h / 6)) * v +
               (y_[j] / h - m_[j] * (h / 6)) * u;
    }
    Point d1(std::size_t i, double u) const {
        double h = h_[i], v = h - u;
        std::size_t j = next(i);
        return -m_[i] * (v * v / (2 * h)) + m_[j] * (u * u / (2 * h)) - (y_[i] / h - m_[i] * (h / 6)) +
               (y_[j] / h - m_[j] * (h / 6));
    }
    // Position and first derivative together.
    std::pair<Point, Point> value_d1(std::size_t i, double u) const {
        double h = h_[i], v = h - u;
        std::size_t j = next(i);
        Point a = y_[i] / h - m_[i] * (h / 6), b = y_[j] / h - m_[j] * (h / 6);
        Point p = m_[i] * (v * v * v / (6 * h)) + m_[j] * (u * u * u / (6 * h)) + a * v + b * u;
        Point d = -m_[i] * (v * v / (2 * h)) + m_[j] * (u * u / (2 * h)) - a + b;
        return {p, d};
    }
    Point d2(std::size_t i, double u) const {
        double h = h_[i];
        return m_[i] * ((h - u) / h) + m_[next(i)] * (u / h);
    }

private:
    std::size_t next(std::size_t i) const { return i + 1 == y_.size() ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const { return i == 0 ? y_.size() - 1 : i - 1; }

    static std::vector<Point> solve_tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                                                const std::vector<double>& c, std::vector<Point> r) {
        const std::size_t n = b.size();
        std::vector<double> cp(n);
        double den = b[0];
        cp[0] = c[0] / den;
        r[0] /= den;
        for (std::size_t i = 1; i < n; ++i) {
            den = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / den;
            r[i] = (r[i] - a[i] * r[i - 1]) / den;
        }
        for (std::size_t i = n - 1; i-- > 0;) r[i] -= cp[i] * r[i + 1];
        return r;
    }

    // Sherman-Morrison reduction of the cyclic system to two tridiagonal solves.
    static std::vector<Point> solve_cyclic(const std::vector<double>& a, std::vector<double> b,
                                           const std::vector<double>& c, const std::vector<Point>& r) {
        const std::size_t n = b.size();
        double alpha = c[n - 1], beta = a[0];
        double gamma = -b[0];
        b[0] -= gamma;
        b[n - 1] -= alpha * beta / gamma;
        std::vector<Point> x = solve_tridiagonal(a, b, c, r);
        std::vector<Point> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = alpha;
        std::vector<Point> z = solve_tridiagonal(a, b, c, u);
        Point fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
        for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
        return x;
    }

    std::vector<Point> y_;
    std::vector<double> h_;
    std::vector<Point> m_;
};

}  // namespace csf
