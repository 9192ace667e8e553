#include "lifshitz/common.hpp"

#include <charconv>
#include <cmath>

namespace lifshitz {

double coth_half(double beta, double omega) {
    if (omega == 0.0) throw DomainError("coth_half: omega = 0");
    if (std::isinf(beta)) return omega > 0 ? 1.0 : -1.0;
    const double x = 0.5 * beta * omega;
    if (std::abs(x) > 20.0) return x > 0 ? 1.0 + 2.0 * std::exp(-2.0 * x) : -1.0 - 2.0 * std::exp(2.0 * x);
    return 1.0 / std::tanh(x);
}

double thermal_part(double beta, double omega) {
    if (std::isinf(beta)) return 0.0;
    const double x = beta * omega;
    if (x > 700.0) return 0.0;
    return 2.0 / std::expm1(x);
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace lifshitz
