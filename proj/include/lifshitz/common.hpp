#pragma once

#include <array>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace lifshitz {

using cplx = std::complex<double>;
using CVec3 = std::array<cplx, 3>;
using CMat3 = std::array<CVec3, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr cplx kI{0.0, 1.0};

// Non-finite or out-of-range argument.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation at (or numerically at) a pole. Carries the offending point.
class SingularityError : public std::runtime_error {
public:
    SingularityError(const std::string& what, cplx where)
        : std::runtime_error(what), s(where) {}
    cplx s;
};

// Malformed input data; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line_no)
        : std::runtime_error(what), line(line_no) {}
    int line;
};

// Iterative method or quadrature failed to reach its target.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline CVec3 cross(const CVec3& a, const CVec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Bilinear (non-conjugating) dot product.
inline cplx dot(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline CVec3 scale(const CVec3& a, cplx c) { return {a[0] * c, a[1] * c, a[2] * c}; }

inline CVec3 add(const CVec3& a, const CVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline CMat3 zero_mat() { return CMat3{}; }

// coth(beta*omega/2); beta = inf means zero temperature (sign(omega)).
double coth_half(double beta, double omega);

// 2/(exp(beta*omega)-1) = coth(beta*omega/2) - 1 for omega > 0.
double thermal_part(double beta, double omega);

std::string format_double(double x);

}  // namespace lifshitz
