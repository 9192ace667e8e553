#include "lifshitz/material.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lifshitz {

void BathModel::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("bath: gamma must be finite and >= 0");
    if (kind == BathKind::ohmic_lorentz_cutoff && !(cutoff > 0.0 && std::isfinite(cutoff)))
        throw DomainError("bath: cutoff must be finite and > 0 for ohmic_lorentz_cutoff");
}

void Material::validate() const {
    if (table) {
        if (table->size() == 0) throw DomainError("material: empty permittivity table");
    } else {
        if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("material: omega0 must be > 0");
        if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("material: mass must be > 0");
        if (!(lambda0 >= 0.0) || !std::isfinite(lambda0)) throw DomainError("material: lambda0 must be >= 0");
        bath.validate();
    }
    if (!(beta_bath > 0.0)) throw DomainError("material: beta_bath must be > 0");
    if (!(beta_dof > 0.0)) throw DomainError("material: beta_dof must be > 0");
}

cplx bath_dissipation(const BathModel& bath, cplx s) {
    if (!is_finite(s)) throw DomainError("bath_dissipation: non-finite s");
    switch (bath.kind) {
        case BathKind::none:
            return 0.0;
        case BathKind::ohmic:
            return -0.5 * bath.gamma * s;
        case BathKind::ohmic_lorentz_cutoff: {
            const cplx den = s + bath.cutoff;
            if (std::abs(den) == 0.0) throw SingularityError("bath_dissipation: pole of the cutoff kernel", s);
            return -0.5 * bath.gamma * s * bath.cutoff / den;
        }
    }
    return 0.0;
}

cplx qbm_green(const Material& mat, cplx s) {
    if (mat.is_table()) throw DomainError("qbm_green: table material has no oscillator model");
    const cplx den = s * s + mat.omega0 * mat.omega0 - 2.0 * bath_dissipation(mat.bath, s);
    const double scale = std::norm(s) + mat.omega0 * mat.omega0;
    if (std::abs(den) <= 1e-14 * scale) throw SingularityError("qbm_green: evaluation at a pole", s);
    return 1.0 / den;
}

cplx permittivity(const Material& mat, cplx s) {
    if (mat.is_table()) {
        const double mag = std::abs(s);
        if (std::abs(s.imag()) <= 1e-12 * mag && s.real() >= 0.0) return mat.table->imag_axis(s.real());
        if (std::abs(s.real()) <= 1e-6 * mag) return mat.table->at(-s.imag());
        throw DomainError("permittivity: table material only defined on the real and imaginary s axes");
    }
    if (mat.lambda0 == 0.0) return 1.0;
    return 1.0 + mat.lambda0 * mat.lambda0 * qbm_green(mat, s);
}

cplx permittivity_fourier(const Material& mat, double omega) {
    if (mat.is_table()) return mat.table->at(omega);
    return permittivity(mat, cplx(0.0, -omega));
}

double dissipation_rate(const BathModel& bath, double omega) {
    switch (bath.kind) {
        case BathKind::none:
            return 0.0;
        case BathKind::ohmic:
            return 0.5 * bath.gamma;
        case BathKind::ohmic_lorentz_cutoff: {
            const double L2 = bath.cutoff * bath.cutoff;
            return 0.5 * bath.gamma * L2 / (L2 + omega * omega);
        }
    }
    return 0.0;
}

double noise_fourier(const Material& mat, double omega) {
    if (mat.is_table()) throw DomainError("noise_fourier: table material has no bath model");
    const double rate = dissipation_rate(mat.bath, omega);
    if (rate == 0.0) return 0.0;
    if (std::isinf(mat.beta_bath)) return std::abs(omega) * rate;
    const double x = 0.5 * mat.beta_bath * omega;
    if (std::abs(x) < 1e-4) {
        // x coth x = 1 + x^2/3 - x^4/45 + ...
        const double x2 = x * x;
        return (2.0 / mat.beta_bath) * (1.0 + x2 / 3.0 - x2 * x2 / 45.0) * rate;
    }
    return coth_half(mat.beta_bath, omega) * omega * rate;
}

FdrSides fdr_epsilon_identity(const Material& mat, double omega) {
    FdrSides out;
    if (mat.is_table()) throw DomainError("fdr_epsilon_identity: table material has no bath model");
    out.lhs = permittivity_fourier(mat, omega).imag();
    if (mat.lambda0 == 0.0) return out;
    const cplx gm = qbm_green(mat, cplx(0.0, -omega));
    const cplx gp = qbm_green(mat, cplx(0.0, omega));
    const double im_d = omega * dissipation_rate(mat.bath, omega);
    out.rhs = 2.0 * mat.lambda0 * mat.lambda0 * im_d * (gm * gp).real();
    return out;
}

// ---------------------------------------------------------------------------

EpsilonTable::EpsilonTable(std::vector<double> omega, std::vector<cplx> eps)
    : omega_(std::move(omega)), eps_(std::move(eps)) {
    if (omega_.size() != eps_.size()) throw DomainError("EpsilonTable: size mismatch");
    if (omega_.empty()) throw DomainError("EpsilonTable: no rows");
    log_omega_.reserve(omega_.size());
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        if (!(omega_[i] > 0.0) || !std::isfinite(omega_[i])) throw DomainError("EpsilonTable: omega must be > 0");
        if (i > 0 && !(omega_[i] > omega_[i - 1])) throw DomainError("EpsilonTable: omega not strictly increasing");
        if (eps_[i].imag() < 0.0) throw DomainError("EpsilonTable: negative Im eps");
        log_omega_.push_back(std::log(omega_[i]));
    }
}

cplx EpsilonTable::at(double omega) const {
    if (omega == 0.0) return imag_axis(0.0);
    if (omega < 0.0) return std::conj(at(-omega));
    if (omega <= omega_.front()) return {eps_.front().real(), omega == omega_.front() ? eps_.front().imag() : 0.0};
    if (omega >= omega_.back()) return {eps_.back().real(), omega == omega_.back() ? eps_.back().imag() : 0.0};
    const double u = std::log(omega);
    const auto it = std::upper_bound(log_omega_.begin(), log_omega_.end(), u);
    const std::size_t hi = static_cast<std::size_t>(it - log_omega_.begin());
    const std::size_t lo = hi - 1;
    const double w = (u - log_omega_[lo]) / (log_omega_[hi] - log_omega_[lo]);
    return eps_[lo] * (1.0 - w) + eps_[hi] * w;
}

bool EpsilonTable::constant() const {
    return std::all_of(eps_.begin(), eps_.end(), [&](cplx e) { return e == eps_.front(); });
}

double EpsilonTable::imag_axis(double xi) const {
    double acc = eps_.back().real();
    if (omega_.size() < 2) return acc;
    // Im eps is linear in u = log(omega) on each panel and zero outside the table.
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double xi2 = xi * xi;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < omega_.size(); ++i) {
        const double a = eps_[i].imag(), b = eps_[i + 1].imag();
        if (a == 0.0 && b == 0.0) continue;
        const double u0 = log_omega_[i], u1 = log_omega_[i + 1];
        auto f = [&](double u) {
            const double w = (u - u0) / (u1 - u0);
            const double im = a * (1.0 - w) + b * w;
            const double e2 = std::exp(2.0 * u);
            return im * e2 / (e2 + xi2);
        };
        sum += GK::integrate(f, u0, u1, 0);
    }
    return acc + (2.0 / kPi) * sum;
}

EpsilonTable load_epsilon_table(std::istream& in) {
    std::vector<double> om;
    std::vector<cplx> ep;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double w, re, im;
        if (!(ss >> w >> re >> im)) throw ParseError("epsilon table: expected omega,eps_re,eps_im", line_no);
        std::string rest;
        if (ss >> rest) throw ParseError("epsilon table: trailing fields", line_no);
        if (!std::isfinite(w) || !std::isfinite(re) || !std::isfinite(im))
            throw ParseError("epsilon table: non-finite value", line_no);
        if (!(w > 0.0)) throw ParseError("epsilon table: omega must be > 0", line_no);
        if (!om.empty() && !(w > om.back())) throw ParseError("epsilon table: omega not strictly increasing", line_no);
        if (im < 0.0) throw ParseError("epsilon table: negative Im eps violates passivity", line_no);
        om.push_back(w);
        ep.emplace_back(re, im);
    }
    if (om.empty()) throw ParseError("epsilon table: no data rows", line_no);
    return EpsilonTable(std::move(om), std::move(ep));
}

EpsilonTable tabulate_permittivity(const Material& mat, double omega_min, double omega_max, std::size_t rows) {
    if (rows < 2 || !(omega_min > 0.0) || !(omega_max > omega_min)) throw DomainError("tabulate_permittivity: bad grid");
    std::vector<double> om(rows);
    std::vector<cplx> ep(rows);
    const double a = std::log(omega_min), b = std::log(omega_max);
    for (std::size_t i = 0; i < rows; ++i) {
        om[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(rows - 1));
        ep[i] = permittivity_fourier(mat, om[i]);
        if (ep[i].imag() < 0.0) ep[i].imag(0.0);
    }
    return EpsilonTable(std::move(om), std::move(ep));
}

}  // namespace lifshitz
