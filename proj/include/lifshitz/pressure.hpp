#pragma once

#include <array>
#include <string>

#include "lifshitz/em_green.hpp"

namespace lifshitz {

enum class Sector { propagating, evanescent };

// How the zero-point (coth -> 1) part of the bath-driven pressure is evaluated.
//  imaginary_axis: rotated to the T = 0 equilibrium frequency integral.
//  real_axis: integrated on the real frequency axis up to omega_max (cross-check only).
enum class ZeroPoint { imaginary_axis, real_axis };

struct PressureOptions {
    double rel_tol = 1e-6;
    bool subtract_infinite_separation = true;
    // Real-axis cutoff for the thermal part; 0 picks one from the temperatures.
    double omega_max = 0.0;
    // Integrate propagating (Q < omega) and evanescent (Q > omega) gap waves separately.
    bool sector_split = true;
    ZeroPoint zero_point = ZeroPoint::imaginary_axis;
    int max_intervals = 4000;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

// Index into PressureResult::breakdown.
constexpr std::size_t breakdown_index(Plate source, Polarization pol, Sector sector) {
    return (source == Plate::L ? 0u : 4u) + (pol == Polarization::TE ? 0u : 2u) +
           (sector == Sector::propagating ? 0u : 1u);
}

struct PressureResult {
    double value = 0.0;
    double err = 0.0;
    std::array<double, 8> breakdown{};
    bool baseline_subtracted = false;
    // Integral of the imaginary part of the integrand; zero up to rounding.
    double imag = 0.0;
    double zero_point = 0.0;
    double thermal = 0.0;
    // Thermal part of the infinite-separation baseline, per breakdown entry.
    std::array<double, 8> baseline{};
    bool converged = true;
};

// Lambda_ii [ s1 s2 G1^{ib} G2^{ib} + (curl G1)^{ib} (curl G2)^{ib} ] at coincident
// field points, with the source vectors contracted and source exponentials
// evaluated at each block's z_src. Block 2 must carry -Q-hat.
struct ThetaParts {
    cplx electric = 0.0;
    cplx magnetic = 0.0;
    cplx total() const { return electric + magnetic; }
};
ThetaParts theta_contract_parts(const GreenBlock& b1, const GreenBlock& b2);
cplx theta_contract(const GreenBlock& b1, const GreenBlock& b2);

// Source-weight convention for the bath integrand.
enum class SourceWeight {
    post_fdr,    // coth(beta omega/2) Im eps(omega)
    pre_fdr,     // 2 lambda0^2 N(omega) G(-i omega) G(i omega), bath noise kernel explicit
    zero_point,  // Im eps(omega)
    thermal,     // (coth - 1) Im eps(omega)
};

// Pressure integrand per (source plate, polarization) at real frequency omega > 0
// and in-plane wavenumber Q:
//   P = int_0^inf d omega / pi int_0^inf Q dQ / (2 pi) sum(terms).
struct BathTerms {
    std::array<cplx, 4> term{};      // index: plate * 2 + polarization
    std::array<double, 4> baseline{};  // infinite-separation part of the real values
    cplx total() const { return term[0] + term[1] + term[2] + term[3]; }
};
BathTerms bath_integrand_terms(const Geometry& geom, double omega, double Q, SourceWeight weight,
                               std::array<double, 2> qhat = {1.0, 0.0});
cplx bath_integrand(const Geometry& geom, double omega, double Q, SourceWeight weight = SourceWeight::post_fdr);

PressureResult steady_pressure(const Geometry& geom, const PressureOptions& opt = {});

// Zero-temperature Lifshitz pressure as an imaginary-frequency integral.
PressureResult zero_point_pressure(const Geometry& geom, double rel_tol);

// Equilibrium pressure at temperature T (T = 0 gives the frequency integral).
double equilibrium_matsubara(const Geometry& geom, double T, double rel_tol = 1e-8);

// Removes the thermal infinite-separation baseline carried in `raw`. Idempotent.
PressureResult regularize(const PressureResult& raw);

// Integrand of the initial-condition pressure term for a free-field mode with
// wavevector k = (kx, ky, kz) at Laplace variables s1, s2 (first gap Green
// function taken at k_par, second at -k_par and -kz).
ThetaParts assemble_ic_integrand_parts(const Geometry& geom, std::array<double, 3> k, cplx s1, cplx s2,
                                       double beta_em, Branch branch = Branch::principal);
// The same integrand resolved by the part of each z-integral it comes from
// (0 TE terms, 1 TM terms, 2 contact term): piece[a][b] pairs part a of the
// first integral with part b of the second.
struct IcPieces {
    std::array<std::array<ThetaParts, 3>, 3> piece{};
    ThetaParts total() const;
};
IcPieces assemble_ic_integrand_pieces(const Geometry& geom, std::array<double, 3> k, cplx s1, cplx s2, double beta_em,
                                      Branch branch = Branch::principal);
cplx assemble_ic_integrand(const Geometry& geom, std::array<double, 3> k, cplx s1, cplx s2, double beta_em,
                           Branch branch = Branch::principal);

// Integrand of the plate-oscillator initial-condition term summed over both
// plates, split by bracket piece and electric/magnetic part.
struct DofParts {
    // [piece][0 electric, 1 magnetic]; pieces: 0 constant, 1 s^2 G terms, 2 omega0^2 s1 s2 G G.
    std::array<std::array<cplx, 2>, 3> part{};
    cplx total() const;
};
DofParts assemble_dof_integrand_parts(const Geometry& geom, double Q, cplx s1, cplx s2,
                                      Branch branch = Branch::principal);
cplx assemble_dof_integrand(const Geometry& geom, double Q, cplx s1, cplx s2, Branch branch = Branch::principal);

std::string csv_header();
std::string csv_row(double gap, double temp_left, double temp_right, const PressureResult& r);

}  // namespace lifshitz
