#include "lifshitz/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <nlohmann/json.hpp>

#include "lifshitz/pressure.hpp"

namespace lifshitz {

// ---------------------------------------------------------------------------
// Polynomials.

namespace {

Poly trim(Poly p) {
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    return p;
}

}  // namespace

cplx poly_eval(const Poly& p, cplx s) {
    cplx acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return {0.0};
    Poly out(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
    return out;
}

std::vector<cplx> poly_roots(const Poly& pin) {
    const Poly p = trim(pin);
    const std::size_t n = p.size() - 1;
    if (n == 0) return {};
    if (p.back() == 0.0) throw DomainError("poly_roots: zero polynomial");
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) C(0, static_cast<Eigen::Index>(i)) = -p[n - 1 - i] / p[n];
    for (std::size_t i = 1; i < n; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("poly_roots: eigenvalue iteration failed");
    const Poly dp = poly_derivative(p);
    std::vector<cplx> roots;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        cplx z = es.eigenvalues()(i);
        for (int it = 0; it < 50; ++it) {
            const cplx d = poly_eval(dp, z);
            if (d == 0.0) break;
            const cplx step = poly_eval(p, z) / d;
            const cplx zn = z - step;
            // Multiple roots make Newton creep; stop once it no longer improves.
            if (std::abs(poly_eval(p, zn)) >= std::abs(poly_eval(p, z))) break;
            z = zn;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
        }
        roots.push_back(z);
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

namespace {

double phase_step(cplx fa, cplx fb) { return std::arg(fb / fa); }

double wind_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, cplx fa, cplx fb, int depth) {
    const double d = phase_step(fa, fb);
    if (std::abs(d) <= kPi / 8.0 || depth > 60) return d;
    const cplx m = 0.5 * (a + b);
    const cplx fm = f(m);
    if (fm == 0.0) throw SingularityError("winding_number: zero on the contour", m);
    return wind_segment(f, a, m, fa, fm, depth + 1) + wind_segment(f, m, b, fm, fb, depth + 1);
}

}  // namespace

int winding_number(const std::function<cplx(cplx)>& f, cplx lo, cplx hi, int min_points) {
    const cplx corners[5] = {lo, {hi.real(), lo.imag()}, hi, {lo.real(), hi.imag()}, lo};
    const int per_edge = std::max(4, min_points / 4);
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cplx a = corners[e];
        cplx fa = f(a);
        if (fa == 0.0) throw SingularityError("winding_number: zero on the contour", a);
        for (int i = 1; i <= per_edge; ++i) {
            const cplx b = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(i) / per_edge);
            const cplx fb = f(b);
            if (fb == 0.0) throw SingularityError("winding_number: zero on the contour", b);
            total += wind_segment(f, a, b, fa, fb, 0);
            a = b;
            fa = fb;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// ---------------------------------------------------------------------------
// Oscillator poles.

QbmRational qbm_rational(const Material& mat) {
    if (mat.is_table()) throw DomainError("qbm_rational: table material has no oscillator model");
    const double W2 = mat.omega0 * mat.omega0;
    switch (mat.bath.kind) {
        case BathKind::none:
            return {{1.0}, {W2, 0.0, 1.0}};
        case BathKind::ohmic:
            return {{1.0}, {W2, mat.bath.gamma, 1.0}};
        case BathKind::ohmic_lorentz_cutoff: {
            const double L = mat.bath.cutoff, g = mat.bath.gamma;
            return {{L, 1.0}, {L * W2, W2 + g * L, L, 1.0}};
        }
    }
    return {};
}

PoleReport find_qbm_poles(const Material& mat) {
    mat.validate();
    const QbmRational g = qbm_rational(mat);
    PoleReport rep;
    const Poly dden = poly_derivative(g.denominator);
    const double scale = std::max(1.0, mat.omega0);
    if (mat.bath.kind != BathKind::ohmic_lorentz_cutoff) {
        rep.method = PoleMethod::analytic_quadratic;
        const double b = g.denominator[1].real(), c = g.denominator[0].real();
        const double disc = b * b - 4.0 * c;
        if (std::abs(disc) <= 1e-14 * (b * b + 4.0 * c)) {
            rep.roots.push_back({cplx(-0.5 * b, 0.0), 2, cplx(0.0)});
        } else {
            const cplx sq = std::sqrt(cplx(disc));
            // Cancellation-free pair: r1 = -(b + sq)/2, r2 = c / r1.
            const cplx r1 = -0.5 * (b + (b >= 0.0 ? sq : -sq));
            const cplx r2 = c / r1;
            for (cplx r : {r1, r2}) rep.roots.push_back({r, 1, poly_eval(g.numerator, r) / poly_eval(dden, r)});
        }
    } else {
        rep.method = PoleMethod::newton_polish;
        const auto roots = poly_roots(g.denominator);
        std::vector<bool> used(roots.size(), false);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            int order = 1;
            for (std::size_t j = i + 1; j < roots.size(); ++j)
                if (!used[j] && std::abs(roots[i] - roots[j]) <= 1e-6 * scale) {
                    used[j] = true;
                    ++order;
                }
            PoleRoot pr{roots[i], order, std::nullopt};
            if (order == 1) pr.residue = poly_eval(g.numerator, roots[i]) / poly_eval(dden, roots[i]);
            rep.roots.push_back(pr);
        }
    }
    std::sort(rep.roots.begin(), rep.roots.end(), [](const PoleRoot& a, const PoleRoot& b) {
        return a.s.real() != b.s.real() ? a.s.real() < b.s.real() : a.s.imag() < b.s.imag();
    });
    double max_re = -kInf, max_abs = 0.0;
    for (const auto& r : rep.roots) {
        max_re = std::max(max_re, r.s.real());
        max_abs = std::max(max_abs, std::abs(r.s));
    }
    const double tol = 1e-12 * scale;
    rep.causal = max_re < -tol;
    // Independent count of denominator zeros with Re s >= -tol.
    const double R = 2.0 * (1.0 + max_abs);
    rep.right_half_count = winding_number([&](cplx s) { return poly_eval(g.denominator, s); }, cplx(-tol, -R),
                                          cplx(R, R));
    return rep;
}

std::string PoleReport::to_json() const {
    nlohmann::json j;
    j["causal"] = causal;
    j["method"] = method == PoleMethod::analytic_quadratic ? "analytic_quadratic"
                  : method == PoleMethod::contour_winding  ? "contour_winding"
                                                           : "newton_polish";
    j["right_half_count"] = right_half_count;
    j["roots"] = nlohmann::json::array();
    for (const auto& r : roots) {
        nlohmann::json e;
        e["re"] = r.s.real();
        e["im"] = r.s.imag();
        e["order"] = r.order;
        if (r.residue) e["residue"] = {r.residue->real(), r.residue->imag()};
        j["roots"].push_back(e);
    }
    return j.dump();
}

// ---------------------------------------------------------------------------
// Fixed-Talbot inversion in extended precision.

namespace {

namespace mp = boost::multiprecision;

constexpr int kTalbotMinNodes = 64;

template <unsigned D>
double talbot_at(const QbmRational& g, double t, double r, int nodes) {
    using R = mp::number<mp::cpp_bin_float<D>, mp::et_off>;
    using C = mp::number<mp::complex_adaptor<mp::cpp_bin_float<D>>, mp::et_off>;
    auto peval = [](const Poly& p, const C& s) {
        C acc(0);
        for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + C(R(it->real()), R(it->imag()));
        return acc;
    };
    auto F = [&](const C& s) {
        const C den = peval(g.denominator, s);
        if (abs(den) < R(1e-30)) throw SingularityError("invert_laplace_qbm: contour node at a pole", cplx(0.0));
        return peval(g.numerator, s) / den;
    };
    const R rr(r), tt(t), M(nodes);
    const R pi = boost::math::constants::pi<R>();
    R sum = R(0.5) * (F(C(rr)) * exp(C(rr * tt))).real();
    for (int k = 1; k < nodes; ++k) {
        const R th = pi * R(k) / M;
        const R cot = cos(th) / sin(th);
        const C s(rr * th * cot, rr * th);
        const R sigma = th + (th * cot - R(1)) * cot;
        const C term = exp(tt * s) * F(s) * C(R(1), sigma);
        sum += term.real();
    }
    return static_cast<double>(rr / M * sum);
}

// Smallest r >= r0 whose Talbot contour keeps every pole strictly inside.
double enclosing_r(const std::vector<PoleRoot>& poles, double r0) {
    double r = r0;
    for (int it = 0; it < 200; ++it) {
        bool ok = true;
        for (const auto& p : poles) {
            const double b = std::abs(p.s.imag()), a = p.s.real();
            const double th = b / r;
            if (th >= 0.9 * kPi) {
                ok = false;
                break;
            }
            const double edge = th == 0.0 ? r : r * th / std::tan(th);
            if (a > edge - 0.1 * std::max(b, 1e-3 * r)) {
                ok = false;
                break;
            }
        }
        if (ok) return r;
        r *= 1.15;
    }
    throw ConvergenceError("invert_laplace_qbm: no Talbot contour encloses the poles");
}

double talbot_value(const QbmRational& g, const std::vector<PoleRoot>& poles, double t) {
    double r = enclosing_r(poles, 2.0 * kTalbotMinNodes / (5.0 * t));
    for (int attempt = 0; attempt < 4; ++attempt) {
        // A contour pushed out past 2M/(5t) for the poles needs proportionally more nodes.
        const int nodes = std::max(kTalbotMinNodes, static_cast<int>(std::ceil(2.5 * r * t)));
        try {
            const double digits = std::max(0.6 * nodes, r * t / std::log(10.0)) + 25.0;
            if (digits <= 50.0) return talbot_at<50>(g, t, r, nodes);
            if (digits <= 100.0) return talbot_at<100>(g, t, r, nodes);
            if (digits <= 200.0) return talbot_at<200>(g, t, r, nodes);
            if (digits <= 400.0) return talbot_at<400>(g, t, r, nodes);
            throw ConvergenceError("invert_laplace_qbm: t too large for the available precision");
        } catch (const SingularityError&) {
            r *= 1.1;
        }
    }
    throw ConvergenceError("invert_laplace_qbm: contour keeps hitting a pole");
}

}  // namespace

std::vector<double> invert_laplace_qbm(const Material& mat, const std::vector<double>& t_grid) {
    mat.validate();
    const QbmRational g = qbm_rational(mat);
    const auto poles = find_qbm_poles(mat).roots;
    std::vector<double> out;
    out.reserve(t_grid.size());
    double prev = -kInf;
    for (double t : t_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("invert_laplace_qbm: t must be finite and >= 0");
        if (t < prev) throw DomainError("invert_laplace_qbm: t_grid must be sorted");
        prev = t;
        // The contour degenerates at t = 0; a tiny positive time stands in for it.
        const double te = std::max(t, 1e-12 / std::max(1.0, mat.omega0));
        out.push_back(talbot_value(g, poles, te));
    }
    return out;
}

std::array<double, 2> qbm_initial_values(const Material& mat) {
    const double h = 1e-3 / std::max(1.0, mat.omega0);
    const auto f = invert_laplace_qbm(mat, {0.0, h, 2.0 * h, 3.0 * h, 4.0 * h});
    const double d = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    return {f[0], d};
}

// ---------------------------------------------------------------------------
// Scans and branch points.

std::vector<double> imaginary_axis_grid(double omega_max, double gap, std::size_t min_points) {
    if (!(omega_max > 0.0) || !(gap > 0.0)) throw DomainError("imaginary_axis_grid: bad range");
    const double step_req = kPi / gap / 8.0;
    std::size_t n = std::max<std::size_t>(min_points, static_cast<std::size_t>(std::ceil(2.0 * omega_max / step_req)) + 1);
    if (n % 2 == 0) ++n;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = -omega_max + 2.0 * omega_max * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

ScanResult scan_dmu_imaginary_axis(const Geometry& geom, Polarization pol, double Q,
                                   const std::vector<double>& omega_grid, double floor) {
    geom.validate();
    if (!(Q >= 0.0)) throw DomainError("scan_dmu_imaginary_axis: Q must be >= 0");
    ScanResult out;
    out.min_abs = out.min_off_branch = out.min_reduced = kInf;
    for (double w : omega_grid) {
        const cplx s(0.0, w);
        const double a = std::abs(dmu(geom, s, Q, pol));
        const double ql = std::abs(qz(1.0, s, Q, Branch::retarded)) * geom.gap;
        if (a < out.min_abs) {
            out.min_abs = a;
            out.argmin = w;
        }
        if (ql >= 0.1 && a < out.min_off_branch) {
            out.min_off_branch = a;
            out.argmin_off_branch = w;
        }
        out.min_reduced = std::min(out.min_reduced, a / std::min(1.0, ql));
    }
    out.points = omega_grid.size();
    out.above_floor = out.min_off_branch > floor && out.min_reduced > floor;
    return out;
}

std::vector<cplx> plate_denominator_roots(const Material& mat, double w2) {
    const QbmRational g = qbm_rational(mat);
    if (mat.lambda0 == 0.0) {
        const double w = std::sqrt(w2);
        return {cplx(0.0, -w), cplx(0.0, w)};
    }
    // eps s^2 + w2 = [(p + lambda^2 c) s^2 + w2 p] / p with G = c / p.
    const double L2 = mat.lambda0 * mat.lambda0;
    Poly lc = g.numerator;
    for (auto& x : lc) x *= L2;
    Poly w2p = g.denominator;
    for (auto& x : w2p) x *= w2;
    const Poly num = poly_add(poly_mul(poly_add(g.denominator, lc), Poly{0.0, 0.0, 1.0}), w2p);
    return poly_roots(num);
}

BranchInventory branch_inventory(const Geometry& geom, double Q) {
    geom.validate();
    if (!(Q >= 0.0)) throw DomainError("branch_inventory: Q must be >= 0");
    BranchInventory inv;
    inv.cuts.push_back({CutKind::gap_sqrt, Plate::gap, {cplx(0.0, -Q), cplx(0.0, Q)}});
    for (Plate p : {Plate::L, Plate::R}) {
        const Material& m = geom.plate(p);
        if (m.is_table()) continue;
        auto roots = plate_denominator_roots(m, Q * Q);
        // Pair each root in the upper half plane with its conjugate partner.
        std::vector<bool> used(roots.size(), false);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            std::size_t best = roots.size();
            double bd = kInf;
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (used[j]) continue;
                const double d = std::abs(roots[j] - std::conj(roots[i]));
                if (d < bd) {
                    bd = d;
                    best = j;
                }
            }
            if (best == roots.size()) {
                inv.cuts.push_back({CutKind::plate_sqrt, p, {roots[i], roots[i]}});
                continue;
            }
            used[best] = true;
            cplx a = roots[i], b = roots[best];
            if (a.imag() > b.imag()) std::swap(a, b);
            inv.cuts.push_back({CutKind::plate_sqrt, p, {a, b}});
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Modified modes.

namespace {

double mat_max(const CMat3& m) {
    double x = 0.0;
    for (const auto& r : m)
        for (cplx v : r) x = std::max(x, std::abs(v));
    return x;
}

CMat3 mat_lin(const CMat3& a, cplx ca, const CMat3& b, cplx cb) {
    CMat3 o{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) o[i][j] = ca * a[i][j] + cb * b[i][j];
    return o;
}

}  // namespace

ModifiedModeReport modified_mode_check(const Geometry& geom, double Q, double kz, double tol) {
    geom.validate();
    if (kz == 0.0) throw DomainError("modified_mode_check: kz must be nonzero");
    if (!(Q >= 0.0)) throw DomainError("modified_mode_check: Q must be >= 0");
    const double wk = std::hypot(Q, kz);
    ModifiedModeReport rep;
    rep.removable = true;
    for (int side : {1, 2}) {
        // Side 1 vanishes where q = -i kz, side 2 where q = i kz; on the analytic
        // branch q(+-i wk) = +-i |kz|.
        const bool upper = (side == 1) == (kz < 0.0);
        const cplx s0(0.0, upper ? wk : -wk);
        auto piece = [&](cplx s) { return ic_gap_piece(geom, side, s, Q, kz, {1.0, 0.0}, Branch::analytic); };
        ModifiedModeCandidate c;
        c.side = side;
        c.root = s0;
        const SplitTerm at = piece(s0);
        const double h = 1e-4 * wk;
        const SplitTerm p1 = piece(s0 + h), m1 = piece(s0 - h), p2 = piece(s0 + 2.0 * h), m2 = piece(s0 - 2.0 * h);
        CMat3 dnum{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                dnum[i][j] = (-p2.numerator[i][j] + 8.0 * p1.numerator[i][j] - 8.0 * m1.numerator[i][j] +
                              m2.numerator[i][j]) /
                             (12.0 * h);
        const cplx dden = (-p2.denominator + 8.0 * p1.denominator - 8.0 * m1.denominator + m2.denominator) / (12.0 * h);
        const double dscale = mat_max(dnum) * wk;
        c.num_zero = dscale > 0.0 ? mat_max(at.numerator) / dscale : mat_max(at.numerator);
        c.den_zero = std::abs(at.denominator) / wk;
        c.lhopital = mat_lin(dnum, 1.0 / dden, dnum, 0.0);
        const double lnorm = std::max(mat_max(c.lhopital), 1e-300);
        const double hd = 1e-4 * wk;
        for (int d = 0; d < 4; ++d) {
            const cplx dir = std::polar(1.0, 0.5 * kPi * d);
            auto quot = [&](double step) {
                const SplitTerm t = piece(s0 + step * dir);
                return mat_lin(t.numerator, 1.0 / t.denominator, t.numerator, 0.0);
            };
            // Richardson on h, h/2, h/4 cancels the O(h) and O(h^2) terms.
            const CMat3 r2 = mat_lin(quot(0.25 * hd), 8.0 / 3.0, quot(0.5 * hd), -2.0);
            c.directional[d] = mat_lin(r2, 1.0, quot(hd), 1.0 / 3.0);
            c.spread = std::max(c.spread, mat_max(mat_lin(c.directional[d], 1.0, c.lhopital, -1.0)) / lnorm);
        }
        c.removable = c.num_zero <= 1e-8 && c.den_zero <= 1e-8 && c.spread <= tol;
        rep.removable = rep.removable && c.removable;
        rep.candidates.push_back(c);
    }
    rep.plate_roots_decay = true;
    for (Plate p : {Plate::L, Plate::R}) {
        const Material& m = geom.plate(p);
        if (m.is_table()) continue;
        for (cplx r : plate_denominator_roots(m, wk * wk)) {
            rep.plate_roots.push_back(r);
            if (!(r.real() < 0.0)) rep.plate_roots_decay = false;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Origin Laurent coefficients and pole-order taxonomy.

double LaurentGrid::weight(int a, int b) const {
    if (sup == 0.0) return 0.0;
    return std::abs(c[a][b]) * std::pow(radius, -(a + b)) / sup;
}

int LaurentGrid::order(int var, double rel_tol) const {
    int best = 0;
    for (int a = 0; a <= max_order; ++a)
        for (int b = 0; b <= max_order; ++b)
            if (weight(a, b) > rel_tol) best = std::max(best, var == 0 ? a : b);
    return best;
}

namespace {

std::vector<LaurentGrid> laurent_multi(const std::function<std::vector<cplx>(cplx, cplx)>& f, std::size_t pieces,
                                       double radius, int max_order, int n) {
    std::vector<LaurentGrid> g(pieces);
    for (auto& x : g) {
        x.max_order = max_order;
        x.radius = radius;
        x.c.assign(max_order + 1, std::vector<cplx>(max_order + 1, 0.0));
    }
    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) z[j] = std::polar(radius, 2.0 * kPi * (j + 0.5) / n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const auto v = f(z[j], z[k]);
            for (std::size_t p = 0; p < pieces; ++p) {
                g[p].sup = std::max(g[p].sup, std::abs(v[p]));
                cplx pa = 1.0;
                for (int a = 0; a <= max_order; ++a, pa *= z[j]) {
                    cplx pb = 1.0;
                    for (int b = 0; b <= max_order; ++b, pb *= z[k]) g[p].c[a][b] += v[p] * pa * pb;
                }
            }
        }
    const double norm = 1.0 / (static_cast<double>(n) * n);
    for (auto& x : g)
        for (auto& row : x.c)
            for (auto& v : row) v *= norm;
    return g;
}

TaxonomyEntry make_entry(const std::string& name, const LaurentGrid& g, double rel_tol) {
    TaxonomyEntry e;
    e.piece = name;
    e.order_s1 = g.order(0, rel_tol);
    e.order_s2 = g.order(1, rel_tol);
    e.steady = g.c[1][1];
    for (int a = 1; a <= g.max_order; ++a)
        for (int b = 1; b <= g.max_order; ++b)
            if (std::max(a, b) >= 2) e.secular = std::max(e.secular, g.weight(a, b));
    return e;
}

TaxonomyReport taxonomy(const std::vector<std::string>& names,
                        const std::function<std::vector<cplx>(cplx, cplx)>& f, double radius, double rel_tol) {
    const std::size_t np = names.size();
    auto with_total = [&](cplx a, cplx b) {
        auto v = f(a, b);
        cplx t = 0.0;
        for (cplx x : v) t += x;
        v.push_back(t);
        return v;
    };
    const auto g1 = laurent_multi(with_total, np + 1, radius, 3, 32);
    const auto g2 = laurent_multi(with_total, np + 1, 0.5 * radius, 3, 32);
    TaxonomyReport rep;
    rep.radius = radius;
    double piece_sup = 0.0;
    for (std::size_t p = 0; p < np; ++p) piece_sup = std::max(piece_sup, g1[p].sup);
    // Laurent coefficients do not depend on the circle inside the annulus of analyticity.
    for (std::size_t p = 0; p <= np; ++p)
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                const double ref = piece_sup * std::pow(radius, a + b);
                rep.radius_consistency = std::max(rep.radius_consistency, std::abs(g1[p].c[a][b] - g2[p].c[a][b]) / ref);
            }
    // Pieces are measured against the largest piece so that pieces vanishing
    // identically are not classified by their rounding noise.
    for (std::size_t p = 0; p < np; ++p) {
        LaurentGrid gp = g1[p];
        gp.sup = piece_sup;
        rep.entries.push_back(make_entry(names[p], gp, rel_tol));
        const int o = std::max(rep.entries.back().order_s1, rep.entries.back().order_s2);
        if (std::find(rep.orders_present.begin(), rep.orders_present.end(), o) == rep.orders_present.end())
            rep.orders_present.push_back(o);
    }
    std::sort(rep.orders_present.begin(), rep.orders_present.end());
    // Total measured against the size of its pieces so cancellation is visible.
    LaurentGrid tot = g1[np];
    tot.sup = std::max(tot.sup, piece_sup);
    rep.total = make_entry("total", tot, rel_tol);
    rep.secular_cancels = rep.total.secular <= rel_tol * 100.0;
    rep.steady_only_first_order = rep.secular_cancels;
    return rep;
}

double min_abs(const std::vector<cplx>& v) {
    double m = kInf;
    for (cplx x : v) m = std::min(m, std::abs(x));
    return m;
}

}  // namespace

LaurentGrid origin_laurent(const std::function<cplx(cplx, cplx)>& f, double radius, int max_order, int n) {
    return laurent_multi([&](cplx a, cplx b) { return std::vector<cplx>{f(a, b)}; }, 1, radius, max_order, n)[0];
}

double origin_radius(const Geometry& geom, double Q) {
    if (!(Q > 0.0)) throw DomainError("origin_radius: Q must be > 0");
    double r = Q;
    for (Plate p : {Plate::L, Plate::R}) {
        const Material& m = geom.plate(p);
        if (m.is_table()) throw DomainError("origin_radius: plates need an oscillator model");
        r = std::min(r, min_abs(plate_denominator_roots(m, Q * Q)));
        for (const auto& pr : find_qbm_poles(m).roots) r = std::min(r, std::abs(pr.s));
    }
    return 0.3 * r;
}

TaxonomyReport dof_taxonomy(const Geometry& geom, double Q, double rel_tol) {
    const std::vector<std::string> names = {"constant/electric", "constant/magnetic", "s2G/electric",
                                            "s2G/magnetic",      "w2GG/electric",     "w2GG/magnetic"};
    auto f = [&](cplx s1, cplx s2) {
        const DofParts d = assemble_dof_integrand_parts(geom, Q, s1, s2, Branch::principal);
        std::vector<cplx> v;
        for (const auto& p : d.part) {
            v.push_back(p[0]);
            v.push_back(p[1]);
        }
        return v;
    };
    return taxonomy(names, f, origin_radius(geom, Q), rel_tol);
}

TaxonomyReport ic_taxonomy(const Geometry& geom, std::array<double, 3> k, double beta_em, double rel_tol) {
    const double Q = std::hypot(k[0], k[1]);
    double r = origin_radius(geom, Q);
    const double wk2 = Q * Q + k[2] * k[2];
    for (Plate p : {Plate::L, Plate::R}) r = std::min(r, 0.3 * min_abs(plate_denominator_roots(geom.plate(p), wk2)));
    const char* part[3] = {"TE", "TM", "contact"};
    std::vector<std::string> names;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (const char* th : {"electric", "magnetic"})
                names.push_back(std::string(part[a]) + "x" + part[b] + "/" + th);
    auto f = [&](cplx s1, cplx s2) {
        const IcPieces t = assemble_ic_integrand_pieces(geom, k, s1, s2, beta_em, Branch::principal);
        std::vector<cplx> v;
        for (const auto& row : t.piece)
            for (const auto& p : row) {
                v.push_back(p.electric);
                v.push_back(p.magnetic);
            }
        return v;
    };
    return taxonomy(names, f, r, rel_tol);
}

}  // namespace lifshitz
