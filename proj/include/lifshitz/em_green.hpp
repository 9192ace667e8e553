#pragma once

#include <array>
#include <utility>
#include <vector>

#include "lifshitz/material.hpp"

namespace lifshitz {

enum class Polarization { TE, TM };
enum class Plate { L, R, gap };

// How the square roots q = sqrt(eps s^2 + Q^2) are continued.
//  retarded: principal root at s + eta, eta = 1e-9 max(|s|, 1); Re q >= 0.
//  analytic: q = s sqrt(eps + Q^2/s^2), the continuation from Re s > 0 whose
//            gap cut is the finite segment [-iQ, iQ]. Used near s = +-i omega.
//  principal: plain principal root, no shift. Analytic in a disc around s = 0
//            for Q > 0; used for the pole-order study at the origin.
enum class Branch { retarded, analytic, principal };

// Vacuum gap of width `gap` centred on z = 0; plate L fills z < -gap/2,
// plate R fills z > gap/2.
struct Geometry {
    double gap = 1.0;
    Material left;
    Material right;
    double z_field = 0.0;

    void validate() const;
    const Material& plate(Plate p) const;
};

cplx qz(cplx eps, cplx s, double Q, Branch branch = Branch::retarded);

struct PolVectors {
    CVec3 te;
    CVec3 tm;
};

// sign = +1 for waves decaying towards +z (exp(-q z)), -1 for the reverse.
PolVectors polarization_vectors(cplx eps, cplx s, double Q, std::array<double, 2> qhat, int sign,
                                Branch branch = Branch::retarded);

struct Fresnel {
    cplx rTE, rTM, tTE, tTM;
};

// r: gap-side reflection off the plate; t: transmission from the plate into the gap.
Fresnel fresnel_eps(cplx eps, cplx s, double Q, Branch branch = Branch::retarded);
Fresnel fresnel(const Material& matside, cplx s, double Q, Branch branch = Branch::retarded);

// 1 - r_L r_R exp(-2 q l).
cplx dmu(const Geometry& geom, cplx s, double Q, Polarization pol, Branch branch = Branch::retarded);

enum class Region { everywhere, above_source, below_source };

// One exponential contribution:
//   extra * exp(exp_z (z - z_ref)) * exp(exp_src (z' - src_ref)) * coeff (x) src
struct GreenTerm {
    Polarization polarization = Polarization::TE;
    Plate plate = Plate::gap;
    CVec3 coeff{};
    cplx exp_z = 0.0;
    cplx extra = 1.0;
    CVec3 src{};
    cplx exp_src = 0.0;
    double z_ref = 0.0;
    double src_ref = 0.0;
    Region region = Region::everywhere;
};

struct GreenBlock {
    std::vector<GreenTerm> terms;
    cplx s = 0.0;
    double Q = 0.0;
    std::array<double, 2> qhat{1.0, 0.0};
    double z_field = 0.0;
    double z_src = 0.0;
    // Symbolic -delta_iz delta_jz delta(z - z') / s^2 contact term. Never
    // evaluated; evaluate() skips it.
    bool contact_term = false;

    CMat3 evaluate(double z, double zs) const;
    CMat3 evaluate() const { return evaluate(z_field, z_src); }
};

// Field in the gap, source inside plate L or R. The block is anchored at the
// plate surface (z_src = -l/2 or l/2); evaluate(z, z') accepts any z' inside the plate.
GreenBlock green_gap_from_plate(const Geometry& geom, Plate plate, cplx s, double Q,
                                std::array<double, 2> qhat = {1.0, 0.0}, Branch branch = Branch::retarded);

// Same as green_gap_from_plate with the plate permittivities given directly.
GreenBlock green_gap_from_plate_eps(double gap, double z_field, cplx eps_left, cplx eps_right, Plate plate, cplx s,
                                    double Q, std::array<double, 2> qhat = {1.0, 0.0},
                                    Branch branch = Branch::retarded);

// Field and source both in the gap: bulk (free) part plus multiply reflected part.
GreenBlock green_gap_bulk_scattered(const Geometry& geom, cplx s, double Q, double z_src,
                                    std::array<double, 2> qhat = {1.0, 0.0}, Branch branch = Branch::retarded);

// Only the multiply reflected terms of green_gap_bulk_scattered.
GreenBlock green_gap_scattered(const Geometry& geom, cplx s, double Q, double z_src,
                               std::array<double, 2> qhat = {1.0, 0.0}, Branch branch = Branch::retarded);

// sum_b int_{plate} dz G^{jb}(z1, z, Q, s1) G^{kb}(z1, z, -Q, s2) at z1 = z_field.
CMat3 z_integrated_pair(const Geometry& geom, Plate plate, cplx s1, cplx s2, double Q,
                        std::array<double, 2> qhat = {1.0, 0.0}, Branch branch = Branch::retarded);

// int dz' G^{jb}(z_field, z', Q, s) exp(i kz z') over all space, contact term included.
CMat3 ic_z_integral(const Geometry& geom, cplx s, double Q, double kz, std::array<double, 2> qhat = {1.0, 0.0},
                    Branch branch = Branch::retarded);

// The two gap pieces of ic_z_integral whose denominators are q + i kz (side = 1,
// region next to plate L) and q - i kz (side = 2, next to plate R), returned
// as explicit numerator tensors and scalar denominator so that candidate
// zeros can be examined.
struct SplitTerm {
    CMat3 numerator;
    cplx denominator;
};
SplitTerm ic_gap_piece(const Geometry& geom, int side, cplx s, double Q, double kz,
                       std::array<double, 2> qhat = {1.0, 0.0}, Branch branch = Branch::analytic);

// ic_z_integral together with its derivative with respect to the field coordinate.
std::pair<CMat3, CMat3> ic_z_integral_dz(const Geometry& geom, cplx s, double Q, double kz,
                                         std::array<double, 2> qhat = {1.0, 0.0}, Branch branch = Branch::retarded);

// ic_z_integral_dz split into its TE terms, TM terms and the contact term.
std::array<std::pair<CMat3, CMat3>, 3> ic_z_integral_dz_parts(const Geometry& geom, cplx s, double Q, double kz,
                                                             std::array<double, 2> qhat = {1.0, 0.0},
                                                             Branch branch = Branch::retarded);

// ic_z_integral with the gap pieces evaluated as numerator/denominator
// quotients instead of the removable-singularity-free form.
CMat3 ic_z_integral_split(const Geometry& geom, cplx s, double Q, double kz, std::array<double, 2> qhat = {1.0, 0.0},
                          Branch branch = Branch::analytic);

}  // namespace lifshitz
