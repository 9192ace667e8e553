#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lifshitz/em_green.hpp"

namespace lifshitz {

// ---------------------------------------------------------------------------
// Polynomials and roots.

// Coefficients in increasing degree: c[0] + c[1] s + ...
using Poly = std::vector<cplx>;

cplx poly_eval(const Poly& p, cplx s);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& p);

// All roots (companion-matrix eigenvalues, each polished by Newton on p).
std::vector<cplx> poly_roots(const Poly& p);

// Net number of zeros minus poles of f inside the rectangle [lo, hi] by the
// argument principle; the boundary is refined until phase steps are below pi/8.
int winding_number(const std::function<cplx(cplx)>& f, cplx lo, cplx hi, int min_points = 256);

// ---------------------------------------------------------------------------
// Oscillator (QBM) Green function poles and inversion.

enum class PoleMethod { analytic_quadratic, contour_winding, newton_polish };

struct PoleRoot {
    cplx s;
    int order = 1;
    std::optional<cplx> residue;
};

struct PoleReport {
    std::vector<PoleRoot> roots;
    bool causal = false;
    PoleMethod method = PoleMethod::analytic_quadratic;
    // Zeros of the denominator polynomial with Re s >= 0, counted by winding.
    int right_half_count = 0;

    std::string to_json() const;
};

// Denominator polynomial p with G(s) = c(s) / p(s); c is 1 or (s + cutoff).
struct QbmRational {
    Poly numerator;
    Poly denominator;
};
QbmRational qbm_rational(const Material& mat);

PoleReport find_qbm_poles(const Material& mat);

// Fixed-Talbot inversion of the oscillator Green function on t >= 0.
std::vector<double> invert_laplace_qbm(const Material& mat, const std::vector<double>& t_grid);

// G(0) and dG/dt(0) from the inverted function (one-sided 5-point stencil).
std::array<double, 2> qbm_initial_values(const Material& mat);

// ---------------------------------------------------------------------------
// Imaginary-axis scans and branch points.

// Uniform omega grid on [-omega_max, omega_max] with at least `min_points`
// points and at least 8 points per pi/gap.
std::vector<double> imaginary_axis_grid(double omega_max, double gap, std::size_t min_points = 4001);

// D_mu vanishes identically where the gap wavenumber q_z is zero (omega = +-Q):
// both reflection coefficients are -1 there. That zero is a factor of q_z and
// not a mode, so it is measured separately through |D| / min(1, |q_z| l).
struct ScanResult {
    double min_abs = 0.0;  // over every grid point
    double argmin = 0.0;
    double min_off_branch = 0.0;  // over points with |q_z| l >= 0.1
    double argmin_off_branch = 0.0;
    double min_reduced = 0.0;     // min |D| / min(1, |q_z| l) over every grid point
    std::size_t points = 0;
    bool above_floor = false;     // min_off_branch and min_reduced both exceed the floor
};

// Scan of |D_mu(s = i omega)| over the grid (retarded branch).
ScanResult scan_dmu_imaginary_axis(const Geometry& geom, Polarization pol, double Q,
                                   const std::vector<double>& omega_grid, double floor = 1e-3);

enum class CutKind { gap_sqrt, plate_sqrt };

struct BranchCut {
    CutKind kind;
    Plate plate;
    std::array<cplx, 2> endpoints;
};

struct BranchInventory {
    std::vector<BranchCut> cuts;
};

// Gap cut [-iQ, iQ] and plate branch points (roots of eps(s) s^2 + Q^2, paired by conjugation).
BranchInventory branch_inventory(const Geometry& geom, double Q);

// Roots of eps(s) s^2 + w^2 = 0, i.e. of (q_plate + i kz)(q_plate - i kz) with w^2 = Q^2 + kz^2.
std::vector<cplx> plate_denominator_roots(const Material& mat, double w2);

// ---------------------------------------------------------------------------
// Modified modes at s = +-i omega_k.

struct ModifiedModeCandidate {
    int side = 1;      // 1: denominator q + i kz; 2: q - i kz
    cplx root;         // +-i omega_k
    double num_zero = 0.0;  // max |numerator| at the root, relative to its derivative scale
    double den_zero = 0.0;  // |denominator| at the root, relative to omega_k
    CMat3 lhopital{};
    std::array<CMat3, 4> directional{};
    double spread = 0.0;    // max relative disagreement of directional limits with L'Hopital
    bool removable = false;
};

struct ModifiedModeReport {
    std::vector<ModifiedModeCandidate> candidates;
    // Roots of the plate-region denominators; all should have Re s < 0 for lossy plates.
    std::vector<cplx> plate_roots;
    bool plate_roots_decay = false;
    bool removable = false;
};

ModifiedModeReport modified_mode_check(const Geometry& geom, double Q, double kz, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Pole order at s1 = s2 = 0.

// Coefficients c[a][b] of s1^{-a} s2^{-b}, a, b = 0..max_order, from the
// trapezoidal rule on |s1| = |s2| = radius.
struct LaurentGrid {
    int max_order = 3;
    double radius = 0.0;
    std::vector<std::vector<cplx>> c;
    double sup = 0.0;  // max |f| on the torus

    // Size of the term on the torus, |c[a][b]| radius^{-(a+b)}, relative to sup.
    double weight(int a, int b) const;
    // Largest a (var 0) or b (var 1) carrying a term above rel_tol.
    int order(int var, double rel_tol) const;
};

LaurentGrid origin_laurent(const std::function<cplx(cplx, cplx)>& f, double radius, int max_order = 3, int n = 32);

struct TaxonomyEntry {
    std::string piece;
    int order_s1 = 0;
    int order_s2 = 0;
    cplx steady = 0.0;       // c[1][1]: time-independent coefficient
    double secular = 0.0;    // max weight of c[a][b] with a, b >= 1 and max(a, b) >= 2
};

struct TaxonomyReport {
    std::vector<TaxonomyEntry> entries;
    TaxonomyEntry total;
    double radius = 0.0;
    // Coefficients agree between radius and radius/2.
    double radius_consistency = 0.0;
    // Secular (growing) terms of the sum vanish.
    bool secular_cancels = false;
    // The time-independent coefficient of the sum comes only from first-order
    // poles, which the discard rule removes.
    bool steady_only_first_order = false;
    std::vector<int> orders_present;
};

TaxonomyReport dof_taxonomy(const Geometry& geom, double Q, double rel_tol = 1e-8);
TaxonomyReport ic_taxonomy(const Geometry& geom, std::array<double, 3> k, double beta_em, double rel_tol = 1e-8);

// Safe radius for the origin expansion: inside every other singularity.
double origin_radius(const Geometry& geom, double Q);

}  // namespace lifshitz
