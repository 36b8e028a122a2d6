#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace csf {

// Chart points and chart tangent vectors are both complex numbers.
using Point = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }
inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline Point rot90(Point a) { return {-a.imag(), a.real()}; }
// |a| without the overflow guards of std::abs (hypot), which dominate hot loops.
inline double modulus(Point a) { return std::sqrt(std::norm(a)); }

// Angle of b relative to a, in (-pi, pi].
inline double turn_angle(Point a, Point b) { return std::atan2(cross(a, b), dot(a, b)); }

// Wraps an angle into [0, 2pi).
inline double wrap_angle(double a) {
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w -= two_pi;
    return w;
}

enum class ErrorKind {
    ApexEvaluation,
    QuadratureFailure,
    OutOfChart,
    ApexCollision,
    NoConvergence,
    OdeFailure,
    DegenerateJacobi,
    BranchTie,
    TooFar,
    StepRejected,
    ApexContact,
    EmbeddingLost,
    RegionContainsApex,
    OddBranchSetWithoutAuxiliary,
    CrossingCuts,
    CutTangency,
    ParseError,
    ValidationError,
    IoError,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::ApexEvaluation: return "ApexEvaluation";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::OutOfChart: return "OutOfChart";
        case ErrorKind::ApexCollision: return "ApexCollision";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::OdeFailure: return "OdeFailure";
        case ErrorKind::DegenerateJacobi: return "DegenerateJacobi";
        case ErrorKind::BranchTie: return "BranchTie";
        case ErrorKind::TooFar: return "TooFar";
        case ErrorKind::StepRejected: return "StepRejected";
        case ErrorKind::ApexContact: return "ApexContact";
        case ErrorKind::EmbeddingLost: return "EmbeddingLost";
        case ErrorKind::RegionContainsApex: return "RegionContainsApex";
        case ErrorKind::OddBranchSetWithoutAuxiliary: return "OddBranchSetWithoutAuxiliary";
        case ErrorKind::CrossingCuts: return "CrossingCuts";
        case ErrorKind::CutTangency: return "CutTangency";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

// Every failure in the library is reported through this one exception type.
// `cause` refines StepRejected into ApexContact or EmbeddingLost.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), cause_(kind) {}
    Error(ErrorKind kind, ErrorKind cause, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " (" + to_string(cause) + "): " + what),
          kind_(kind),
          cause_(cause) {}

    ErrorKind kind() const noexcept { return kind_; }
    ErrorKind cause() const noexcept { return cause_; }

private:
    ErrorKind kind_;
    ErrorKind cause_;
};

}  // namespace csf
