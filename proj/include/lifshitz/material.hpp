#pragma once

#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "lifshitz/common.hpp"

namespace lifshitz {

enum class BathKind { none, ohmic, ohmic_lorentz_cutoff };

struct BathModel {
    BathKind kind = BathKind::ohmic;
    double gamma = 0.0;
    double cutoff = kInf;  // only read for ohmic_lorentz_cutoff

    void validate() const;
};

// Tabulated permittivity on the positive real frequency axis.
// Values between rows are interpolated linearly in log(omega); outside the
// table the nearest row is used. Negative frequencies follow eps(-w) = conj(eps(w)).
class EpsilonTable {
public:
    EpsilonTable() = default;
    EpsilonTable(std::vector<double> omega, std::vector<cplx> eps);

    const std::vector<double>& omega() const { return omega_; }
    const std::vector<cplx>& eps() const { return eps_; }
    std::size_t size() const { return omega_.size(); }

    cplx at(double omega) const;

    // eps(i*xi) for xi >= 0 via the Kramers-Kronig transform of Im eps,
    // with Re eps at the last row taken as the high-frequency background.
    double imag_axis(double xi) const;

    // True when all rows carry the same eps (a dispersionless medium).
    bool constant() const;

private:
    std::vector<double> omega_;
    std::vector<cplx> eps_;
    std::vector<double> log_omega_;
};

struct Material {
    double omega0 = 1.0;
    double mass = 1.0;
    double lambda0 = 0.0;
    BathModel bath{};
    double beta_bath = kInf;
    double beta_dof = kInf;
    // When set, the permittivity comes from the table and the oscillator
    // fields are ignored by the pressure integrator.
    std::shared_ptr<const EpsilonTable> table;

    void validate() const;
    bool is_table() const { return static_cast<bool>(table); }
};

// D(s): dissipation kernel of the polarization oscillator's bath.
cplx bath_dissipation(const BathModel& bath, cplx s);

// 1 / (s^2 + omega0^2 - 2 D(s)).
cplx qbm_green(const Material& mat, cplx s);

// eps(s) = 1 + lambda0^2 G(s). Table materials accept s on the real axis
// (via Kramers-Kronig) or the imaginary axis (s = -i*omega, direct lookup).
cplx permittivity(const Material& mat, cplx s);

// Real-frequency permittivity eps(s = -i*omega).
cplx permittivity_fourier(const Material& mat, double omega);

// Im D(-i*omega) / omega, even in omega and finite at omega = 0.
double dissipation_rate(const BathModel& bath, double omega);

// coth(beta omega / 2) Im D(-i omega).
double noise_fourier(const Material& mat, double omega);

struct FdrSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = Im eps(-i omega); rhs = 2 lambda0^2 Im D(-i omega) G(-i omega) G(i omega).
FdrSides fdr_epsilon_identity(const Material& mat, double omega);

// CSV rows "omega,eps_re,eps_im"; blank lines and lines starting with '#' are skipped.
EpsilonTable load_epsilon_table(std::istream& in);

// Convenience: table sampled from a model material on a log grid.
EpsilonTable tabulate_permittivity(const Material& mat, double omega_min, double omega_max,
                                   std::size_t rows);

}  // namespace lifshitz
