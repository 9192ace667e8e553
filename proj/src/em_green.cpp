#include "lifshitz/em_green.hpp"

#include <cmath>

namespace lifshitz {

namespace {

// exp(c) - 1 without cancellation for small |c|.
cplx expm1c(cplx c) {
    if (std::abs(c) < 1e-5) return c * (1.0 + c * (0.5 + c / 6.0));
    return std::exp(c) - 1.0;
}

// int_lo^hi exp(c z) dz, analytic in c.
cplx segment_integral(cplx c, double lo, double hi) {
    const double w = hi - lo;
    if (w <= 0.0) return 0.0;
    const cplx cw = c * w;
    if (std::abs(cw) < 1e-8) return std::exp(c * lo) * w * (1.0 + 0.5 * cw);
    return std::exp(c * lo) * expm1c(cw) / c;
}

void add_outer(CMat3& m, const CVec3& a, const CVec3& b, cplx f) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += f * a[i] * b[j];
}

cplx sqrt_eps(cplx eps) { return std::sqrt(eps); }

const CVec3& pick(const PolVectors& v, Polarization p) { return p == Polarization::TE ? v.te : v.tm; }

cplx pick_r(const Fresnel& f, Polarization p) { return p == Polarization::TE ? f.rTE : f.rTM; }
cplx pick_t(const Fresnel& f, Polarization p) { return p == Polarization::TE ? f.tTE : f.tTM; }

constexpr Polarization kPols[2] = {Polarization::TE, Polarization::TM};

}  // namespace

void Geometry::validate() const {
    if (!(gap > 0.0) || !std::isfinite(gap)) throw DomainError("geometry: gap must be > 0");
    if (!(z_field > -0.5 * gap && z_field < 0.5 * gap)) throw DomainError("geometry: field point must lie inside the gap");
    left.validate();
    right.validate();
}

const Material& Geometry::plate(Plate p) const {
    if (p == Plate::L) return left;
    if (p == Plate::R) return right;
    throw DomainError("geometry: the gap is not a plate");
}

cplx qz(cplx eps, cplx s, double Q, Branch branch) {
    if (branch == Branch::analytic) {
        if (std::abs(s) < 1e-150) return std::sqrt(cplx(Q * Q));
        return s * std::sqrt(eps + Q * Q / (s * s));
    }
    if (branch == Branch::principal) return std::sqrt(eps * s * s + Q * Q);
    const double eta = 1e-9 * std::max(std::abs(s), 1.0);
    const cplx se = s + eta;
    return std::sqrt(eps * se * se + Q * Q);
}

PolVectors polarization_vectors(cplx eps, cplx s, double Q, std::array<double, 2> qhat, int sign, Branch branch) {
    PolVectors out;
    out.te = {qhat[1], -qhat[0], 0.0};
    if (s == 0.0) throw SingularityError("polarization_vectors: TM vector has a pole at s = 0", s);
    const cplx q = qz(eps, s, Q, branch);
    const cplx norm = 1.0 / (sqrt_eps(eps) * kI * s);
    const cplx tr = -static_cast<double>(sign) * kI * q;
    out.tm = {tr * qhat[0] * norm, tr * qhat[1] * norm, Q * norm};
    return out;
}

Fresnel fresnel_eps(cplx eps, cplx s, double Q, Branch branch) {
    const cplx q = qz(1.0, s, Q, branch);
    const cplx qn = qz(eps, s, Q, branch);
    const cplx dte = q + qn;
    const cplx dtm = eps * q + qn;
    const double scale = std::abs(q) + std::abs(qn) + 1e-300;
    if (std::abs(dte) <= 1e-14 * scale) throw SingularityError("fresnel: TE denominator vanishes", s);
    if (std::abs(dtm) <= 1e-14 * (std::abs(eps * q) + std::abs(qn) + 1e-300))
        throw SingularityError("fresnel: TM denominator vanishes", s);
    Fresnel f;
    f.rTE = (q - qn) / dte;
    f.rTM = (eps * q - qn) / dtm;
    f.tTE = 2.0 * qn / dte;
    f.tTM = 2.0 * sqrt_eps(eps) * qn / dtm;
    return f;
}

Fresnel fresnel(const Material& matside, cplx s, double Q, Branch branch) {
    return fresnel_eps(permittivity(matside, s), s, Q, branch);
}

cplx dmu(const Geometry& geom, cplx s, double Q, Polarization pol, Branch branch) {
    const Fresnel f1 = fresnel(geom.left, s, Q, branch);
    const Fresnel f2 = fresnel(geom.right, s, Q, branch);
    const cplx q = qz(1.0, s, Q, branch);
    return 1.0 - pick_r(f1, pol) * pick_r(f2, pol) * std::exp(-2.0 * q * geom.gap);
}

CMat3 GreenBlock::evaluate(double z, double zs) const {
    CMat3 m{};
    for (const auto& t : terms) {
        double w = 1.0;
        if (t.region == Region::above_source) w = z > zs ? 1.0 : (z == zs ? 0.5 : 0.0);
        if (t.region == Region::below_source) w = z < zs ? 1.0 : (z == zs ? 0.5 : 0.0);
        if (w == 0.0) continue;
        const cplx f = w * t.extra * std::exp(t.exp_z * (z - t.z_ref) + t.exp_src * (zs - t.src_ref));
        add_outer(m, t.coeff, t.src, f);
    }
    return m;
}

namespace {

GreenBlock from_plate_eps(double l, double zf, cplx e1, cplx e2, Plate plate, cplx s, double Q,
                          std::array<double, 2> qhat, Branch branch) {
    if (plate == Plate::gap) throw DomainError("green_gap_from_plate: source must be in a plate");
    GreenBlock b;
    b.s = s;
    b.Q = Q;
    b.qhat = qhat;
    b.z_field = zf;
    b.z_src = plate == Plate::L ? -0.5 * l : 0.5 * l;
    const cplx q = qz(1.0, s, Q, branch);
    const Fresnel f1 = fresnel_eps(e1, s, Q, branch);
    const Fresnel f2 = fresnel_eps(e2, s, Q, branch);
    const PolVectors up = polarization_vectors(1.0, s, Q, qhat, +1, branch);
    const PolVectors dn = polarization_vectors(1.0, s, Q, qhat, -1, branch);
    const cplx eql = std::exp(-q * l);
    for (Polarization p : kPols) {
        const cplx r1 = pick_r(f1, p), r2 = pick_r(f2, p);
        const cplx D = 1.0 - r1 * r2 * eql * eql;
        if (plate == Plate::L) {
            const cplx qn = qz(e1, s, Q, branch);
            const PolVectors src = polarization_vectors(e1, s, Q, qhat, +1, branch);
            const cplx pre = -pick_t(f1, p) / (2.0 * qn * D);
            b.terms.push_back({p, Plate::L, pick(up, p), -q, pre, pick(src, p), qn, -0.5 * l, -0.5 * l,
                               Region::everywhere});
            b.terms.push_back({p, Plate::L, pick(dn, p), q, pre * r2 * eql, pick(src, p), qn, 0.5 * l, -0.5 * l,
                               Region::everywhere});
        } else {
            const cplx qn = qz(e2, s, Q, branch);
            const PolVectors src = polarization_vectors(e2, s, Q, qhat, -1, branch);
            const cplx pre = -pick_t(f2, p) / (2.0 * qn * D);
            b.terms.push_back({p, Plate::R, pick(dn, p), q, pre, pick(src, p), -qn, 0.5 * l, 0.5 * l,
                               Region::everywhere});
            b.terms.push_back({p, Plate::R, pick(up, p), -q, pre * r1 * eql, pick(src, p), -qn, -0.5 * l, 0.5 * l,
                               Region::everywhere});
        }
    }
    return b;
}

void add_scattered(GreenBlock& b, double l, cplx e1, cplx e2, cplx s, double Q, std::array<double, 2> qhat,
                   Branch branch) {
    const cplx q = qz(1.0, s, Q, branch);
    const Fresnel f1 = fresnel_eps(e1, s, Q, branch);
    const Fresnel f2 = fresnel_eps(e2, s, Q, branch);
    const PolVectors up = polarization_vectors(1.0, s, Q, qhat, +1, branch);
    const PolVectors dn = polarization_vectors(1.0, s, Q, qhat, -1, branch);
    const cplx eql = std::exp(-q * l);
    for (Polarization p : kPols) {
        const cplx r1 = pick_r(f1, p), r2 = pick_r(f2, p);
        const cplx D = 1.0 - r1 * r2 * eql * eql;
        const cplx pre = -1.0 / (2.0 * q * D);
        const CVec3& ep = pick(up, p);
        const CVec3& em = pick(dn, p);
        b.terms.push_back({p, Plate::gap, ep, -q, pre * r1 * r2 * eql * eql, ep, q, 0.0, 0.0, Region::everywhere});
        b.terms.push_back({p, Plate::gap, ep, -q, pre * r1 * eql, em, -q, 0.0, 0.0, Region::everywhere});
        b.terms.push_back({p, Plate::gap, em, q, pre * r2 * eql, ep, q, 0.0, 0.0, Region::everywhere});
        b.terms.push_back({p, Plate::gap, em, q, pre * r1 * r2 * eql * eql, em, -q, 0.0, 0.0, Region::everywhere});
    }
}

void add_bulk(GreenBlock& b, cplx s, double Q, std::array<double, 2> qhat, Branch branch) {
    const cplx q = qz(1.0, s, Q, branch);
    const PolVectors up = polarization_vectors(1.0, s, Q, qhat, +1, branch);
    const PolVectors dn = polarization_vectors(1.0, s, Q, qhat, -1, branch);
    const cplx pre = -1.0 / (2.0 * q);
    for (Polarization p : kPols) {
        b.terms.push_back({p, Plate::gap, pick(up, p), -q, pre, pick(up, p), q, 0.0, 0.0, Region::above_source});
        b.terms.push_back({p, Plate::gap, pick(dn, p), q, pre, pick(dn, p), -q, 0.0, 0.0, Region::below_source});
    }
    b.contact_term = true;
}

GreenBlock gap_block(const Geometry& geom, cplx s, double Q, double z_src, std::array<double, 2> qhat, Branch branch,
                     bool bulk) {
    if (!(z_src > -0.5 * geom.gap && z_src < 0.5 * geom.gap)) throw DomainError("gap block: source outside the gap");
    GreenBlock b;
    b.s = s;
    b.Q = Q;
    b.qhat = qhat;
    b.z_field = geom.z_field;
    b.z_src = z_src;
    if (bulk) add_bulk(b, s, Q, qhat, branch);
    add_scattered(b, geom.gap, permittivity(geom.left, s), permittivity(geom.right, s), s, Q, qhat, branch);
    return b;
}

}  // namespace

GreenBlock green_gap_from_plate(const Geometry& geom, Plate plate, cplx s, double Q, std::array<double, 2> qhat,
                                Branch branch) {
    return from_plate_eps(geom.gap, geom.z_field, permittivity(geom.left, s), permittivity(geom.right, s), plate, s, Q,
                          qhat, branch);
}

GreenBlock green_gap_from_plate_eps(double gap, double z_field, cplx eps_left, cplx eps_right, Plate plate, cplx s,
                                    double Q, std::array<double, 2> qhat, Branch branch) {
    return from_plate_eps(gap, z_field, eps_left, eps_right, plate, s, Q, qhat, branch);
}

GreenBlock green_gap_bulk_scattered(const Geometry& geom, cplx s, double Q, double z_src, std::array<double, 2> qhat,
                                    Branch branch) {
    return gap_block(geom, s, Q, z_src, qhat, branch, true);
}

GreenBlock green_gap_scattered(const Geometry& geom, cplx s, double Q, double z_src, std::array<double, 2> qhat,
                               Branch branch) {
    return gap_block(geom, s, Q, z_src, qhat, branch, false);
}

CMat3 z_integrated_pair(const Geometry& geom, Plate plate, cplx s1, cplx s2, double Q, std::array<double, 2> qhat,
                        Branch branch) {
    const GreenBlock b1 = green_gap_from_plate(geom, plate, s1, Q, qhat, branch);
    const GreenBlock b2 = green_gap_from_plate(geom, plate, s2, Q, {-qhat[0], -qhat[1]}, branch);
    const double z = geom.z_field;
    CMat3 m{};
    for (const auto& t1 : b1.terms) {
        const cplx f1 = t1.extra * std::exp(t1.exp_z * (z - t1.z_ref));
        for (const auto& t2 : b2.terms) {
            const cplx a = t1.exp_src + t2.exp_src;
            // L: int_{-inf}^{-l/2} exp(a (z' + l/2)) = 1/a;  R: int_{l/2}^{inf} exp(a (z' - l/2)) = -1/a.
            const double dir = plate == Plate::L ? 1.0 : -1.0;
            if (!(dir * a.real() > 0.0)) throw DomainError("z_integrated_pair: half-space integral does not converge");
            const cplx zint = dir / a;
            const cplx f2 = t2.extra * std::exp(t2.exp_z * (z - t2.z_ref));
            add_outer(m, t1.coeff, t2.coeff, f1 * f2 * dot(t1.src, t2.src) * zint);
        }
    }
    return m;
}

namespace {

struct IcParts {
    CMat3 plates{};
    CMat3 gap_regular{};
    CMat3 d_plates{};
    CMat3 d_gap{};
    SplitTerm side[2];
};

IcParts ic_parts(const Geometry& geom, cplx s, double Q, double kz, std::array<double, 2> qhat, Branch branch,
                 const Polarization* only = nullptr) {
    IcParts out;
    const double l = geom.gap, z1 = geom.z_field;
    const cplx ik = kI * kz;
    out.side[0].numerator = CMat3{};
    out.side[1].numerator = CMat3{};
    const cplx q = qz(1.0, s, Q, branch);
    out.side[0].denominator = q + ik;
    out.side[1].denominator = q - ik;

    for (Plate p : {Plate::L, Plate::R}) {
        const GreenBlock b = green_gap_from_plate(geom, p, s, Q, qhat, branch);
        for (const auto& t : b.terms) {
            if (only && t.polarization != *only) continue;
            const cplx den = p == Plate::L ? t.exp_src + ik : -t.exp_src - ik;
            if (std::abs(den) <= 1e-14 * (std::abs(t.exp_src) + std::abs(kz)))
                throw SingularityError("ic_z_integral: plate denominator vanishes", s);
            const cplx zint = p == Plate::L ? std::exp(-ik * 0.5 * l) / den : std::exp(ik * 0.5 * l) / den;
            const cplx v = t.extra * std::exp(t.exp_z * (z1 - t.z_ref)) * zint;
            add_outer(out.plates, t.coeff, t.src, v);
            add_outer(out.d_plates, t.coeff, t.src, t.exp_z * v);
        }
    }

    const GreenBlock g = green_gap_bulk_scattered(geom, s, Q, z1, qhat, branch);
    for (const auto& t : g.terms) {
        if (only && t.polarization != *only) continue;
        double lo = -0.5 * l, hi = 0.5 * l;
        if (t.region == Region::above_source) hi = z1;
        if (t.region == Region::below_source) lo = z1;
        const cplx c = t.exp_src + ik;
        const cplx field = t.extra * std::exp(t.exp_z * (z1 - t.z_ref));
        const cplx seg = segment_integral(c, lo, hi);
        add_outer(out.gap_regular, t.coeff, t.src, field * seg);
        // A limit sitting at z1 moves with the field point.
        cplx dseg = 0.0;
        if (t.region == Region::above_source) dseg += std::exp(c * z1);
        if (t.region == Region::below_source) dseg -= std::exp(c * z1);
        add_outer(out.d_gap, t.coeff, t.src, field * (t.exp_z * seg + dseg));
        // Split form: exp_src = +q pairs with q + ik, exp_src = -q with q - ik.
        const bool plus = t.exp_src == q;
        const cplx num_raw = std::exp(c * hi) - std::exp(c * lo);
        if (plus) {
            add_outer(out.side[0].numerator, t.coeff, t.src, field * num_raw);
        } else {
            // int = num_raw / (ik - q) = -num_raw / (q - ik)
            add_outer(out.side[1].numerator, t.coeff, t.src, -field * num_raw);
        }
    }
    return out;
}

void add_contact(CMat3& m, cplx s, double kz, double z1) {
    if (s == 0.0) throw SingularityError("ic_z_integral: contact term has a pole at s = 0", s);
    m[2][2] -= std::exp(kI * kz * z1) / (s * s);
}

}  // namespace

CMat3 ic_z_integral(const Geometry& geom, cplx s, double Q, double kz, std::array<double, 2> qhat, Branch branch) {
    const IcParts p = ic_parts(geom, s, Q, kz, qhat, branch);
    CMat3 m = p.plates;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += p.gap_regular[i][j];
    add_contact(m, s, kz, geom.z_field);
    return m;
}

std::pair<CMat3, CMat3> ic_z_integral_dz(const Geometry& geom, cplx s, double Q, double kz,
                                         std::array<double, 2> qhat, Branch branch) {
    const IcParts p = ic_parts(geom, s, Q, kz, qhat, branch);
    CMat3 m = p.plates, d = p.d_plates;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            m[i][j] += p.gap_regular[i][j];
            d[i][j] += p.d_gap[i][j];
        }
    add_contact(m, s, kz, geom.z_field);
    d[2][2] -= kI * kz * std::exp(kI * kz * geom.z_field) / (s * s);
    return {m, d};
}

std::array<std::pair<CMat3, CMat3>, 3> ic_z_integral_dz_parts(const Geometry& geom, cplx s, double Q, double kz,
                                                             std::array<double, 2> qhat, Branch branch) {
    std::array<std::pair<CMat3, CMat3>, 3> out{};
    for (int p = 0; p < 2; ++p) {
        const Polarization pol = p == 0 ? Polarization::TE : Polarization::TM;
        const IcParts ip = ic_parts(geom, s, Q, kz, qhat, branch, &pol);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                out[p].first[i][j] = ip.plates[i][j] + ip.gap_regular[i][j];
                out[p].second[i][j] = ip.d_plates[i][j] + ip.d_gap[i][j];
            }
    }
    add_contact(out[2].first, s, kz, geom.z_field);
    out[2].second[2][2] -= kI * kz * std::exp(kI * kz * geom.z_field) / (s * s);
    return out;
}

SplitTerm ic_gap_piece(const Geometry& geom, int side, cplx s, double Q, double kz, std::array<double, 2> qhat,
                       Branch branch) {
    if (side != 1 && side != 2) throw DomainError("ic_gap_piece: side must be 1 or 2");
    return ic_parts(geom, s, Q, kz, qhat, branch).side[side - 1];
}

CMat3 ic_z_integral_split(const Geometry& geom, cplx s, double Q, double kz, std::array<double, 2> qhat,
                          Branch branch) {
    const IcParts p = ic_parts(geom, s, Q, kz, qhat, branch);
    CMat3 m = p.plates;
    for (const auto& sd : p.side) {
        if (sd.denominator == 0.0) throw SingularityError("ic_z_integral_split: gap denominator vanishes", s);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += sd.numerator[i][j] / sd.denominator;
    }
    add_contact(m, s, kz, geom.z_field);
    return m;
}

}  // namespace lifshitz
