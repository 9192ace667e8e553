#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. None of these call into the library's numerics.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "lifshitz/material.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Lorentz oscillator with an ohmic bath: eps(omega) = 1 + lambda^2 / (W^2 - omega^2 - i gamma omega).
inline cplx lorentz_eps(double lambda0, double omega0, double gamma, double omega) {
    return 1.0 + lambda0 * lambda0 / cplx(omega0 * omega0 - omega * omega, -gamma * omega);
}

// Same oscillator at imaginary frequency xi (real and > 1).
inline double lorentz_eps_imag(double lambda0, double omega0, double gamma, double xi) {
    return 1.0 + lambda0 * lambda0 / (omega0 * omega0 + xi * xi + gamma * xi);
}

// Impulse response of x'' + gamma x' + W^2 x = delta(t), any damping.
inline double damped_oscillator(double omega0, double gamma, double t) {
    const cplx wd = std::sqrt(cplx(omega0 * omega0 - 0.25 * gamma * gamma));
    const double decay = std::exp(-0.5 * gamma * t);
    if (std::abs(wd) * t < 1e-6) return decay * t;
    return decay * (std::sin(wd * t) / wd).real();
}

// Scalar layered problem -g'' + q(z)^2 g = delta(z - zs) with q = qL for
// z < -l/2, q0 in the gap and qR for z > l/2; g continuous with continuous
// derivative at both interfaces and decaying at +-infinity. Returns g(z) for a
// field point z in the gap. Solved as a dense linear system for the six
// exponential amplitudes.
inline cplx layered_scalar(double l, cplx qL, cplx q0, cplx qR, double z, double zs) {
    const double zl = -0.5 * l, zr = 0.5 * l;
    Eigen::Matrix<cplx, 6, 6> M = Eigen::Matrix<cplx, 6, 6>::Zero();
    Eigen::Matrix<cplx, 6, 1> rhs = Eigen::Matrix<cplx, 6, 1>::Zero();
    auto e = [](cplx q, double x) { return std::exp(q * x); };
    if (zs < zl) {
        // L: a0 e^{qL z} below zs, a1 e^{qL z} + a2 e^{-qL z} above; gap: b e^{q0 z} + c e^{-q0 z}; R: d e^{-qR z}.
        M(0, 0) = e(qL, zs);
        M(0, 1) = -e(qL, zs);
        M(0, 2) = -e(-qL, zs);
        M(1, 0) = -qL * e(qL, zs);
        M(1, 1) = qL * e(qL, zs);
        M(1, 2) = -qL * e(-qL, zs);
        rhs(1) = -1.0;
        M(2, 1) = e(qL, zl);
        M(2, 2) = e(-qL, zl);
        M(2, 3) = -e(q0, zl);
        M(2, 4) = -e(-q0, zl);
        M(3, 1) = qL * e(qL, zl);
        M(3, 2) = -qL * e(-qL, zl);
        M(3, 3) = -q0 * e(q0, zl);
        M(3, 4) = q0 * e(-q0, zl);
        M(4, 3) = e(q0, zr);
        M(4, 4) = e(-q0, zr);
        M(4, 5) = -e(-qR, zr);
        M(5, 3) = q0 * e(q0, zr);
        M(5, 4) = -q0 * e(-q0, zr);
        M(5, 5) = qR * e(-qR, zr);
        const Eigen::Matrix<cplx, 6, 1> x = M.fullPivLu().solve(rhs);
        return x(3) * e(q0, z) + x(4) * e(-q0, z);
    }
    // Source in the gap. L: a e^{qL z}; gap below zs: b1 e^{q0 z} + c1 e^{-q0 z};
    // gap above zs: b2 e^{q0 z} + c2 e^{-q0 z}; R: d e^{-qR z}.
    M(0, 0) = e(qL, zl);
    M(0, 1) = -e(q0, zl);
    M(0, 2) = -e(-q0, zl);
    M(1, 0) = qL * e(qL, zl);
    M(1, 1) = -q0 * e(q0, zl);
    M(1, 2) = q0 * e(-q0, zl);
    M(2, 1) = e(q0, zs);
    M(2, 2) = e(-q0, zs);
    M(2, 3) = -e(q0, zs);
    M(2, 4) = -e(-q0, zs);
    M(3, 1) = -q0 * e(q0, zs);
    M(3, 2) = q0 * e(-q0, zs);
    M(3, 3) = q0 * e(q0, zs);
    M(3, 4) = -q0 * e(-q0, zs);
    rhs(3) = -1.0;
    M(4, 3) = e(q0, zr);
    M(4, 4) = e(-q0, zr);
    M(4, 5) = -e(-qR, zr);
    M(5, 3) = q0 * e(q0, zr);
    M(5, 4) = -q0 * e(-q0, zr);
    M(5, 5) = qR * e(-qR, zr);
    const Eigen::Matrix<cplx, 6, 1> x = M.fullPivLu().solve(rhs);
    return z < zs ? x(1) * e(q0, z) + x(2) * e(-q0, z) : x(3) * e(q0, z) + x(4) * e(-q0, z);
}

// Ideal-mirror zero-temperature Casimir pressure.
inline double ideal_mirror(double l) {
    const double pi = 3.14159265358979323846;
    return -pi * pi / (240.0 * l * l * l * l);
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

inline double log_uniform(std::mt19937_64& g, double a, double b) {
    return std::exp(uniform(g, std::log(a), std::log(b)));
}

// Random lossy Lorentz-ohmic material.
inline lifshitz::Material random_lossy(std::mt19937_64& g) {
    lifshitz::Material m;
    m.omega0 = uniform(g, 0.3, 3.0);
    m.lambda0 = uniform(g, 0.2, 2.0);
    m.bath.kind = lifshitz::BathKind::ohmic;
    m.bath.gamma = uniform(g, 0.05, 1.0);
    return m;
}

}  // namespace oracle
