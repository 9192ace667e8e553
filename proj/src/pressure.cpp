#include "lifshitz/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "lifshitz/quadrature.hpp"

namespace lifshitz {

namespace {

constexpr double kLambda[3] = {1.0, 1.0, -1.0};

CVec3 curl(const std::array<cplx, 3>& K, const CVec3& c) { return cross(K, c); }

cplx region_factor(Region r, double z, double zs) {
    switch (r) {
        case Region::everywhere:
            return 1.0;
        case Region::above_source:
            return z > zs ? 1.0 : (z == zs ? 0.5 : 0.0);
        case Region::below_source:
            return z < zs ? 1.0 : (z == zs ? 0.5 : 0.0);
    }
    return 0.0;
}

GreenBlock filter(const GreenBlock& b, Polarization pol) {
    GreenBlock out = b;
    out.terms.clear();
    for (const auto& t : b.terms)
        if (t.polarization == pol) out.terms.push_back(t);
    return out;
}

std::array<double, 2> negate(std::array<double, 2> v) { return {-v[0], -v[1]}; }

}  // namespace

void PressureOptions::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw DomainError("pressure options: rel_tol must lie in (0, 1e-2]");
    if (!(omega_max >= 0.0) || !std::isfinite(omega_max)) throw DomainError("pressure options: omega_max must be >= 0");
    if (max_intervals < 16) throw DomainError("pressure options: max_intervals too small");
}

ThetaParts theta_contract_parts(const GreenBlock& b1, const GreenBlock& b2) {
    const double tol = 1e-12;
    if (std::abs(b1.Q - b2.Q) > tol * std::max(1.0, b1.Q))
        throw DomainError("theta_contract: blocks must share |Q|");
    if (b1.Q > 0.0 && (std::abs(b1.qhat[0] + b2.qhat[0]) > tol || std::abs(b1.qhat[1] + b2.qhat[1]) > tol))
        throw DomainError("theta_contract: second block must carry -Q-hat");
    const double z = b1.z_field;
    ThetaParts out;
    for (const auto& t1 : b1.terms) {
        const std::array<cplx, 3> K1{kI * b1.Q * b1.qhat[0], kI * b1.Q * b1.qhat[1], t1.exp_z};
        const CVec3 m1 = curl(K1, t1.coeff);
        const cplx f1 = t1.extra * std::exp(t1.exp_z * (z - t1.z_ref)) * std::exp(t1.exp_src * (b1.z_src - t1.src_ref)) *
                        region_factor(t1.region, z, b1.z_src);
        if (f1 == 0.0) continue;
        for (const auto& t2 : b2.terms) {
            const cplx w = dot(t1.src, t2.src);
            if (w == 0.0) continue;
            const cplx f2 = t2.extra * std::exp(t2.exp_z * (z - t2.z_ref)) *
                            std::exp(t2.exp_src * (b2.z_src - t2.src_ref)) * region_factor(t2.region, z, b2.z_src);
            if (f2 == 0.0) continue;
            const std::array<cplx, 3> K2{kI * b2.Q * b2.qhat[0], kI * b2.Q * b2.qhat[1], t2.exp_z};
            const CVec3 m2 = curl(K2, t2.coeff);
            cplx e = 0.0, m = 0.0;
            for (int i = 0; i < 3; ++i) {
                e += kLambda[i] * t1.coeff[i] * t2.coeff[i];
                m += kLambda[i] * m1[i] * m2[i];
            }
            const cplx f = f1 * f2 * w;
            out.electric += b1.s * b2.s * e * f;
            out.magnetic += m * f;
        }
    }
    return out;
}

cplx theta_contract(const GreenBlock& b1, const GreenBlock& b2) { return theta_contract_parts(b1, b2).total(); }

// ---------------------------------------------------------------------------
// Bath-driven steady pressure.

BathTerms bath_integrand_terms(const Geometry& geom, double omega, double Q, SourceWeight weight,
                               std::array<double, 2> qhat) {
    if (!(omega > 0.0)) throw DomainError("bath_integrand: omega must be > 0");
    if (!(Q >= 0.0)) throw DomainError("bath_integrand: Q must be >= 0");
    const cplx s1(0.0, -omega), s2(0.0, omega);
    BathTerms out;
    const bool propagating = Q < omega;
    cplx r_prod[2] = {1.0, 1.0};
    cplx dm[2] = {1.0, 1.0};
    if (propagating) {
        const Fresnel fl = fresnel(geom.left, s1, Q), fr = fresnel(geom.right, s1, Q);
        r_prod[0] = fl.rTE * fr.rTE;
        r_prod[1] = fl.rTM * fr.rTM;
        dm[0] = dmu(geom, s1, Q, Polarization::TE);
        dm[1] = dmu(geom, s1, Q, Polarization::TM);
    }
    int idx = 0;
    for (Plate n : {Plate::L, Plate::R}) {
        const Material& mat = geom.plate(n);
        const cplx e1 = permittivity(mat, s1), e2 = permittivity(mat, s2);
        const double im_eps = e1.imag();
        const bool lossless = im_eps == 0.0;
        if (!mat.is_table() && mat.lambda0 == 0.0) {
            idx += 2;
            continue;
        }
        double w = 0.0;  // multiplies Im eps (or its lossless limit)
        switch (weight) {
            case SourceWeight::post_fdr:
                w = coth_half(mat.beta_bath, omega);
                break;
            case SourceWeight::zero_point:
                w = 1.0;
                break;
            case SourceWeight::thermal:
                w = thermal_part(mat.beta_bath, omega);
                break;
            case SourceWeight::pre_fdr:
                break;
        }
        cplx source;  // S_n / (q_n(s1) + q_n(s2))
        const cplx qn1 = qz(e1, s1, Q), qn2 = qz(e2, s2, Q);
        if (weight == SourceWeight::pre_fdr) {
            if (mat.is_table()) throw DomainError("bath_integrand: pre-FDR path needs an oscillator model");
            const cplx g1 = qbm_green(mat, s1), g2 = qbm_green(mat, s2);
            const double S = 2.0 * mat.lambda0 * mat.lambda0 * noise_fourier(mat, omega) * (g1 * g2).real();
            source = S / (qn1 + qn2);
        } else if (lossless) {
            // Im eps / (q + q*) = -Im q / omega^2, taken at eta -> 0+: nonzero only
            // inside the plate light cone, where q = -i sqrt(eps omega^2 - Q^2).
            const double x = e1.real() * omega * omega - Q * Q;
            source = x > 0.0 ? w * std::sqrt(x) / (omega * omega) : 0.0;
        } else {
            source = w * im_eps / (qn1 + qn2);
        }
        if (source == 0.0) {
            idx += 2;
            continue;
        }
        const GreenBlock b1 = green_gap_from_plate(geom, n, s1, Q, qhat);
        const GreenBlock b2 = green_gap_from_plate(geom, n, s2, Q, negate(qhat));
        for (int p = 0; p < 2; ++p, ++idx) {
            const Polarization pol = p == 0 ? Polarization::TE : Polarization::TM;
            const cplx th = theta_contract(filter(b1, pol), filter(b2, pol));
            out.term[idx] = 0.5 * omega * omega * source * th;
            if (propagating) {
                const double den = 1.0 - std::norm(r_prod[p]);
                out.baseline[idx] = den > 1e-300 ? out.term[idx].real() * std::norm(dm[p]) / den : 0.0;
            }
        }
    }
    return out;
}

cplx bath_integrand(const Geometry& geom, double omega, double Q, SourceWeight weight) {
    return bath_integrand_terms(geom, omega, Q, weight).total();
}

namespace {

// Components: [0,8) regularized breakdown, [8,16) baseline breakdown, 16 imaginary part.
using Vec17 = std::array<double, 17>;
using Vec9 = std::array<double, 9>;

Vec9 pack(const BathTerms& t, double jac) {
    Vec9 v{};
    double im = 0.0;
    for (int i = 0; i < 4; ++i) {
        v[i] = jac * (t.term[i].real() - t.baseline[i]);
        v[4 + i] = jac * t.baseline[i];
        im += t.term[i].imag();
    }
    v[8] = jac * im;
    return v;
}

struct InnerQuad {
    double rel_tol;
    double abs_tol;
    int max_intervals;
    bool subtract;
};

std::array<double, 9> inner_weights(bool subtract) {
    std::array<double, 9> w{};
    for (int i = 0; i < 4; ++i) {
        w[i] = 1.0;
        w[4 + i] = subtract ? 0.0 : 1.0;
    }
    return w;
}

// Inner Q integral at fixed omega, split into the two gap sectors.
// Returns components in the layout of Vec17 times 1/(2 pi pi).
struct InnerOut {
    Vec17 v{};
    double err = 0.0;
    bool converged = true;
};

InnerOut inner_q(const Geometry& geom, double omega, SourceWeight weight, const PressureOptions& opt,
                 const InnerQuad& iq) {
    InnerOut out;
    const auto w = inner_weights(iq.subtract);
    const double kscale = 1.0 / geom.gap;
    auto add = [&](const QuadResult<9>& r, bool prop) {
        for (int i = 0; i < 4; ++i) {
            const int plate = i / 2, pol = i % 2;
            const std::size_t b = breakdown_index(plate == 0 ? Plate::L : Plate::R,
                                                  pol == 0 ? Polarization::TE : Polarization::TM,
                                                  prop ? Sector::propagating : Sector::evanescent);
            out.v[b] += r.value[i];
            out.v[8 + b] += r.value[4 + i];
        }
        out.v[16] += r.value[8];
        out.err += r.norm_error;
        out.converged = out.converged && r.converged;
    };
    if (opt.sector_split) {
        // Propagating: Q = sqrt(omega^2 - k^2), Q dQ = k dk.
        auto fp = [&](double k) {
            const double Q = std::sqrt(std::max(0.0, (omega - k) * (omega + k)));
            return pack(bath_integrand_terms(geom, omega, Q, weight), k);
        };
        add(integrate_adaptive<9>(fp, 0.0, omega, w, iq.rel_tol, iq.abs_tol, iq.max_intervals), true);
        // Evanescent: Q = sqrt(omega^2 + kappa^2), kappa = c u / (1 - u).
        auto fe = [&](double u) {
            const double kap = kscale * u / (1.0 - u);
            const double jac = kscale / ((1.0 - u) * (1.0 - u));
            const double Q = std::sqrt(omega * omega + kap * kap);
            return pack(bath_integrand_terms(geom, omega, Q, weight), kap * jac);
        };
        // Plate light lines Q = sqrt(Re eps) omega are square-root branch points.
        std::vector<double> ub{0.25, 0.5, 0.75};
        for (const Material* m : {&geom.left, &geom.right}) {
            const double re = permittivity(*m, cplx(0.0, -omega)).real();
            if (re > 1.0) {
                const double kb = omega * std::sqrt(re - 1.0);
                ub.push_back(kb / (kscale + kb));
            }
        }
        add(integrate_adaptive<9>(fe, 0.0, 1.0, w, iq.rel_tol, iq.abs_tol, iq.max_intervals, ub), false);
    } else {
        // One Q integral, Q = c u / (1 - u); the kink at Q = omega is left to the adaptivity.
        const double c = std::max(omega, kscale);
        auto split = [&](double u, bool prop_part) {
            const double Q = c * u / (1.0 - u);
            const double jac = c / ((1.0 - u) * (1.0 - u));
            if ((Q < omega) != prop_part) return Vec9{};
            return pack(bath_integrand_terms(geom, omega, Q, weight), Q * jac);
        };
        // Two passes over the same mesh layout keep the sector attribution exact.
        std::vector<double> ub;
        for (const Material* m : {&geom.left, &geom.right}) {
            const double re = permittivity(*m, cplx(0.0, -omega)).real();
            if (re > 0.0) ub.push_back(omega * std::sqrt(re) / (c + omega * std::sqrt(re)));
        }
        add(integrate_adaptive<9>([&](double u) { return split(u, true); }, 0.0, 1.0, w, iq.rel_tol, iq.abs_tol,
                                  iq.max_intervals, ub),
            true);
        add(integrate_adaptive<9>([&](double u) { return split(u, false); }, 0.0, 1.0, w, iq.rel_tol, iq.abs_tol,
                                  iq.max_intervals, ub),
            false);
    }
    const double norm = 1.0 / (2.0 * kPi * kPi);
    for (auto& x : out.v) x *= norm;
    out.err *= norm;
    return out;
}

std::vector<double> material_breaks(const Material& m) {
    std::vector<double> b;
    if (m.is_table()) {
        if (m.table->size() <= 64) b = m.table->omega();
        return b;
    }
    if (m.lambda0 == 0.0) return b;
    const double W2 = m.omega0 * m.omega0, L2 = m.lambda0 * m.lambda0;
    b.push_back(m.omega0);
    b.push_back(std::sqrt(W2 + 0.5 * L2));
    b.push_back(std::sqrt(W2 + L2));
    return b;
}

struct RealAxisOut {
    Vec17 v{};
    double err = 0.0;
    bool converged = true;
};

RealAxisOut real_axis_integral(const Geometry& geom, double a, double b, SourceWeight weight,
                               const PressureOptions& opt, double abs_tol, std::vector<double> breaks) {
    RealAxisOut out;
    if (!(b > a)) return out;
    std::array<double, 17> w{};
    for (int i = 0; i < 8; ++i) {
        w[i] = 1.0;
        w[8 + i] = opt.subtract_infinite_separation ? 0.0 : 1.0;
    }
    // Panels: material breakpoints plus a uniform grid, integrated concurrently.
    const double width = b - a;
    const int nuni = 16;
    for (int i = 1; i < nuni; ++i) breaks.push_back(a + width * i / nuni);
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> pts;
    for (double x : breaks)
        if (x >= a && x <= b && (pts.empty() || x - pts.back() > 1e-12 * width)) pts.push_back(x);
    const std::size_t np = pts.size() - 1;
    const double panel_abs = abs_tol / static_cast<double>(np);
    const InnerQuad iq{0.1 * opt.rel_tol, 0.0, opt.max_intervals, opt.subtract_infinite_separation};

    std::vector<QuadResult<17>> res(np);
    std::vector<char> inner_ok(np, 1);
    std::vector<double> inner_err(np, 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= np) return;
            bool ok = true;
            double ierr = 0.0;
            auto f = [&](double omega) {
                InnerQuad sp = iq;
                sp.abs_tol = 0.1 * panel_abs / (pts[i + 1] - pts[i]);
                const InnerOut o = inner_q(geom, omega, weight, opt, sp);
                ok = ok && o.converged;
                ierr = std::max(ierr, o.err);
                return o.v;
            };
            res[i] = integrate_adaptive<17>(f, pts[i], pts[i + 1], w, opt.rel_tol, panel_abs, opt.max_intervals);
            inner_ok[i] = ok;
            inner_err[i] = ierr * (pts[i + 1] - pts[i]);
        }
    };
    unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, np));
    std::vector<std::future<void>> fs;
    for (unsigned t = 1; t < nt; ++t) fs.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : fs) f.get();
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t c = 0; c < 17; ++c) out.v[c] += res[i].value[c];
        out.err += res[i].norm_error + inner_err[i];
        if (!res[i].converged || !inner_ok[i]) out.converged = false;
    }
    return out;
}

double thermal_cutoff(const Geometry& geom, double rel_tol) {
    double beta = kInf;
    for (const Material* m : {&geom.left, &geom.right})
        if (m->is_table() || m->lambda0 > 0.0) beta = std::min(beta, m->beta_bath);
    if (std::isinf(beta)) return 0.0;
    // Tail of x^3 exp(-x) beyond x below 1e-2 rel_tol of its full integral.
    double x = 30.0;
    for (int i = 0; i < 20; ++i) x = std::log(6.0 / (1e-2 * rel_tol)) + 3.0 * std::log(x) - std::log(6.0);
    return x / beta;
}

// sum over polarizations of int_xi^inf q^2 dq R e^{-2ql}/(1 - R e^{-2ql}), R = r_L r_R at s = xi.
std::array<double, 2> lifshitz_q_integral(const Geometry& geom, double xi, double rel_tol) {
    const double l = geom.gap;
    const double c = 0.5 / l;
    auto f = [&](double u) {
        const double t = c * u / (1.0 - u);
        const double jac = c / ((1.0 - u) * (1.0 - u));
        const double q = xi + t;
        const double Q = std::sqrt(t * (2.0 * xi + t));
        std::array<double, 2> v{};
        if (Q == 0.0 && xi == 0.0) return v;
        const Fresnel fl = fresnel(geom.left, cplx(xi, 0.0), Q), fr = fresnel(geom.right, cplx(xi, 0.0), Q);
        const double e = std::exp(-2.0 * q * l);
        const double R[2] = {(fl.rTE * fr.rTE).real(), (fl.rTM * fr.rTM).real()};
        for (int p = 0; p < 2; ++p) v[p] = jac * q * q * R[p] * e / (1.0 - R[p] * e);
        return v;
    };
    const auto r = integrate_adaptive<2>(f, 0.0, 1.0, {1.0, 1.0}, rel_tol, 1e-300, 2000, {0.5});
    return r.value;
}

}  // namespace

PressureResult zero_point_pressure(const Geometry& geom, double rel_tol) {
    geom.validate();
    PressureResult out;
    const double l = geom.gap;
    const double c = 0.5 / l;
    auto f = [&](double u) {
        const double xi = c * u / (1.0 - u);
        const double jac = c / ((1.0 - u) * (1.0 - u));
        const auto v = lifshitz_q_integral(geom, xi, 0.1 * rel_tol);
        return std::array<double, 2>{jac * v[0], jac * v[1]};
    };
    const auto r = integrate_adaptive<2>(f, 0.0, 1.0, {1.0, 1.0}, rel_tol, 1e-300, 2000, {0.25, 0.5, 0.75});
    const double pref = -1.0 / (2.0 * kPi * kPi);
    for (int p = 0; p < 2; ++p) {
        const Polarization pol = p == 0 ? Polarization::TE : Polarization::TM;
        const double v = pref * r.value[p];
        out.breakdown[breakdown_index(Plate::L, pol, Sector::evanescent)] += 0.5 * v;
        out.breakdown[breakdown_index(Plate::R, pol, Sector::evanescent)] += 0.5 * v;
        out.value += v;
    }
    out.err = std::abs(pref) * r.norm_error;
    out.zero_point = out.value;
    out.baseline_subtracted = true;
    out.converged = r.converged;
    return out;
}

double equilibrium_matsubara(const Geometry& geom, double T, double rel_tol) {
    geom.validate();
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("equilibrium_matsubara: T must be finite and >= 0");
    if (T == 0.0) return zero_point_pressure(geom, rel_tol).value;
    double sum = 0.0;
    int small = 0;
    for (long j = 0; j < 1000000; ++j) {
        const double xi = 2.0 * kPi * T * static_cast<double>(j);
        const auto v = lifshitz_q_integral(geom, xi, 0.1 * rel_tol);
        const double term = (j == 0 ? 0.5 : 1.0) * (v[0] + v[1]);
        sum += term;
        if (j > 0 && std::abs(term) <= 1e-2 * rel_tol * std::abs(sum)) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
        if (sum == 0.0 && j > 0 && xi * geom.gap > 50.0) break;
    }
    return -(T / kPi) * sum;
}

PressureResult steady_pressure(const Geometry& geom, const PressureOptions& opt) {
    geom.validate();
    opt.validate();
    PressureResult out;
    std::vector<double> breaks = material_breaks(geom.left);
    for (double b : material_breaks(geom.right)) breaks.push_back(b);

    // Zero-point part.
    if (opt.zero_point == ZeroPoint::imaginary_axis) {
        const PressureResult zp = zero_point_pressure(geom, 0.1 * opt.rel_tol);
        out.breakdown = zp.breakdown;
        out.zero_point = zp.value;
        out.err += zp.err;
        out.converged = zp.converged;
    } else {
        const double wmax = opt.omega_max > 0.0 ? opt.omega_max : 200.0 / geom.gap;
        PressureOptions o = opt;
        o.subtract_infinite_separation = true;
        const auto r = real_axis_integral(geom, 0.0, wmax, SourceWeight::zero_point, o, 0.0, breaks);
        for (int i = 0; i < 8; ++i) out.breakdown[i] += r.v[i];
        out.zero_point = 0.0;
        for (int i = 0; i < 8; ++i) out.zero_point += r.v[i];
        out.imag += r.v[16];
        out.err += r.err;
        out.converged = out.converged && r.converged;
    }

    // Thermal part on the real axis.
    const double wth = opt.omega_max > 0.0 ? opt.omega_max : thermal_cutoff(geom, opt.rel_tol);
    if (wth > 0.0) {
        // Equilibrium pressures at the plate temperatures set the absolute tolerance scale.
        double scale = std::abs(out.zero_point);
        for (const Material* m : {&geom.left, &geom.right})
            if (std::isfinite(m->beta_bath))
                scale = std::max(scale, std::abs(equilibrium_matsubara(geom, 1.0 / m->beta_bath, 1e-4)));
        const double abs_tol = 0.1 * opt.rel_tol * scale;
        auto r = real_axis_integral(geom, 0.0, wth, SourceWeight::thermal, opt, abs_tol, breaks);
        if (opt.omega_max == 0.0) {
            // Tail check: the next interval of equal length must be negligible.
            const auto tail = real_axis_integral(geom, wth, 2.0 * wth, SourceWeight::thermal, opt, abs_tol, {});
            double tnorm = 0.0, rnorm = 0.0;
            for (int i = 0; i < 8; ++i) {
                tnorm += tail.v[i];
                rnorm += r.v[i];
            }
            for (int i = 0; i < 17; ++i) r.v[i] += tail.v[i];
            r.err += tail.err;
            if (std::abs(tnorm) > opt.rel_tol * std::max(std::abs(rnorm), abs_tol)) r.converged = false;
        }
        for (int i = 0; i < 8; ++i) {
            out.breakdown[i] += r.v[i];
            out.baseline[i] = r.v[8 + i];
            out.thermal += r.v[i];
        }
        out.imag += r.v[16];
        out.err += r.err;
        out.converged = out.converged && r.converged;
    }

    out.value = 0.0;
    for (double b : out.breakdown) out.value += b;
    out.baseline_subtracted = true;
    if (!opt.subtract_infinite_separation) {
        for (int i = 0; i < 8; ++i) out.breakdown[i] += out.baseline[i];
        for (double b : out.baseline) out.value += b;
        out.baseline_subtracted = false;
    }
    if (!out.converged) {
        std::ostringstream msg;
        msg << "steady_pressure: quadrature did not reach rel_tol " << opt.rel_tol << " (value " << out.value
            << ", error estimate " << out.err << ")";
        throw ConvergenceError(msg.str());
    }
    return out;
}

PressureResult regularize(const PressureResult& raw) {
    if (raw.baseline_subtracted) return raw;
    PressureResult out = raw;
    for (int i = 0; i < 8; ++i) {
        out.breakdown[i] -= raw.baseline[i];
        out.value -= raw.baseline[i];
    }
    out.baseline_subtracted = true;
    return out;
}

// ---------------------------------------------------------------------------
// Transient integrands.

namespace {

ThetaParts ic_contract(const CMat3& I1, const CMat3& D1, const CMat3& I2, const CMat3& D2,
                       std::array<double, 3> k, cplx s1, cplx s2, const double (&proj)[3][3]) {
    // curl acting on the field index: K = (i k_par, d/dz).
    auto curl_col = [](const CMat3& I, const CMat3& D, double kx, double ky, int b) {
        const cplx ikx = kI * kx, iky = kI * ky;
        return CVec3{iky * I[2][b] - D[1][b], D[0][b] - ikx * I[2][b], ikx * I[1][b] - iky * I[0][b]};
    };
    ThetaParts out;
    for (int b = 0; b < 3; ++b) {
        const CVec3 c1 = curl_col(I1, D1, k[0], k[1], b);
        for (int m = 0; m < 3; ++m) {
            if (proj[b][m] == 0.0) continue;
            const CVec3 c2 = curl_col(I2, D2, -k[0], -k[1], m);
            cplx e = 0.0, mg = 0.0;
            for (int j = 0; j < 3; ++j) {
                e += kLambda[j] * I1[j][b] * I2[j][m];
                mg += kLambda[j] * c1[j] * c2[j];
            }
            out.electric += proj[b][m] * s1 * s2 * e;
            out.magnetic += proj[b][m] * mg;
        }
    }
    return out;
}

}  // namespace

ThetaParts IcPieces::total() const {
    ThetaParts t;
    for (const auto& row : piece)
        for (const auto& p : row) {
            t.electric += p.electric;
            t.magnetic += p.magnetic;
        }
    return t;
}

IcPieces assemble_ic_integrand_pieces(const Geometry& geom, std::array<double, 3> k, cplx s1, cplx s2,
                                      double beta_em, Branch branch) {
    geom.validate();
    const double Q = std::hypot(k[0], k[1]);
    const double wk = std::sqrt(Q * Q + k[2] * k[2]);
    if (wk == 0.0) throw DomainError("assemble_ic_integrand: k must be nonzero");
    const std::array<double, 2> qhat =
        Q > 0.0 ? std::array<double, 2>{k[0] / Q, k[1] / Q} : std::array<double, 2>{1.0, 0.0};
    const auto P1 = ic_z_integral_dz_parts(geom, s1, Q, k[2], qhat, branch);
    const auto P2 = ic_z_integral_dz_parts(geom, s2, Q, -k[2], negate(qhat), branch);
    double proj[3][3];
    for (int b = 0; b < 3; ++b)
        for (int m = 0; m < 3; ++m) proj[b][m] = (b == m ? 1.0 : 0.0) - k[b] * k[m] / (wk * wk);
    const cplx pref = coth_half(beta_em, wk) * (s1 * s2 + wk * wk) / (2.0 * wk);
    IcPieces out;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            ThetaParts t = ic_contract(P1[a].first, P1[a].second, P2[b].first, P2[b].second, k, s1, s2, proj);
            t.electric *= pref;
            t.magnetic *= pref;
            out.piece[a][b] = t;
        }
    return out;
}

ThetaParts assemble_ic_integrand_parts(const Geometry& geom, std::array<double, 3> k, cplx s1, cplx s2,
                                       double beta_em, Branch branch) {
    geom.validate();
    const double Q = std::hypot(k[0], k[1]);
    const double wk = std::sqrt(Q * Q + k[2] * k[2]);
    if (wk == 0.0) throw DomainError("assemble_ic_integrand: k must be nonzero");
    const std::array<double, 2> qhat =
        Q > 0.0 ? std::array<double, 2>{k[0] / Q, k[1] / Q} : std::array<double, 2>{1.0, 0.0};
    const auto [I1, D1] = ic_z_integral_dz(geom, s1, Q, k[2], qhat, branch);
    const auto [I2, D2] = ic_z_integral_dz(geom, s2, Q, -k[2], negate(qhat), branch);
    double proj[3][3];
    for (int b = 0; b < 3; ++b)
        for (int m = 0; m < 3; ++m) proj[b][m] = (b == m ? 1.0 : 0.0) - k[b] * k[m] / (wk * wk);
    ThetaParts out = ic_contract(I1, D1, I2, D2, k, s1, s2, proj);
    const cplx pref = coth_half(beta_em, wk) * (s1 * s2 + wk * wk) / (2.0 * wk);
    out.electric *= pref;
    out.magnetic *= pref;
    return out;
}

cplx assemble_ic_integrand(const Geometry& geom, std::array<double, 3> k, cplx s1, cplx s2, double beta_em,
                           Branch branch) {
    return assemble_ic_integrand_parts(geom, k, s1, s2, beta_em, branch).total();
}

cplx DofParts::total() const {
    cplx t = 0.0;
    for (const auto& p : part) t += p[0] + p[1];
    return t;
}

DofParts assemble_dof_integrand_parts(const Geometry& geom, double Q, cplx s1, cplx s2, Branch branch) {
    geom.validate();
    DofParts out;
    for (Plate n : {Plate::L, Plate::R}) {
        const Material& mat = geom.plate(n);
        if (mat.is_table()) throw DomainError("assemble_dof_integrand: plate needs an oscillator model");
        if (mat.lambda0 == 0.0) continue;
        const double pref = mat.lambda0 * mat.lambda0 * mat.mass / (2.0 * mat.omega0) *
                            coth_half(mat.beta_dof, mat.omega0);
        const cplx g1 = qbm_green(mat, s1), g2 = qbm_green(mat, s2);
        const cplx e1 = permittivity(mat, s1), e2 = permittivity(mat, s2);
        const cplx zint = 1.0 / (qz(e1, s1, Q, branch) + qz(e2, s2, Q, branch));
        const GreenBlock b1 = green_gap_from_plate(geom, n, s1, Q, {1.0, 0.0}, branch);
        const GreenBlock b2 = green_gap_from_plate(geom, n, s2, Q, {-1.0, 0.0}, branch);
        const ThetaParts th = theta_contract_parts(b1, b2);
        const cplx piece[3] = {1.0, -s1 * s1 * g1 - s2 * s2 * g2 + s1 * s1 * s2 * s2 * g1 * g2,
                               mat.omega0 * mat.omega0 * s1 * s2 * g1 * g2};
        for (int p = 0; p < 3; ++p) {
            out.part[p][0] += pref * piece[p] * zint * th.electric;
            out.part[p][1] += pref * piece[p] * zint * th.magnetic;
        }
    }
    return out;
}

cplx assemble_dof_integrand(const Geometry& geom, double Q, cplx s1, cplx s2, Branch branch) {
    return assemble_dof_integrand_parts(geom, Q, s1, s2, branch).total();
}

// ---------------------------------------------------------------------------

std::string csv_header() {
    return "gap,T_left,T_right,pressure,error,L_TE_prop,L_TE_evan,L_TM_prop,L_TM_evan,R_TE_prop,R_TE_evan,R_TM_prop,"
           "R_TM_evan,baseline_subtracted";
}

std::string csv_row(double gap, double temp_left, double temp_right, const PressureResult& r) {
    std::string s = format_double(gap) + "," + format_double(temp_left) + "," + format_double(temp_right) + "," +
                    format_double(r.value) + "," + format_double(r.err);
    for (double b : r.breakdown) s += "," + format_double(b);
    s += r.baseline_subtracted ? ",1" : ",0";
    return s;
}

}  // namespace lifshitz
