#include "lifshitz/verify.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "lifshitz/spectral.hpp"

namespace lifshitz {

std::string PropertyRecord::to_json() const {
    nlohmann::json j;
    j["property"] = name;
    j["pass"] = pass;
    j["measured"] = measured;
    j["bound"] = bound;
    if (!detail.empty()) j["detail"] = detail;
    return j.dump();
}

namespace {

bool has_oscillator(const MaterialDesc& d) { return d.model == MaterialModel::oscillator && d.lambda0 > 0.0; }

template <class F>
PropertyRecord guarded(const std::string& name, double bound, F&& body) {
    PropertyRecord r;
    r.name = name;
    r.bound = bound;
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("evaluation failed: ") + e.what();
    }
    return r;
}

}  // namespace

std::vector<PropertyRecord> run_verify(const RunConfig& cfg) {
    cfg.validate();
    const Geometry geom = build_geometry(cfg, {cfg.gap, cfg.temp_left, cfg.temp_right});
    std::vector<PropertyRecord> out;

    for (const auto& [side, desc, mat] :
         {std::tuple<std::string, const MaterialDesc&, const Material&>{"left", cfg.left, geom.left},
          {"right", cfg.right, geom.right}}) {
        out.push_back(guarded("causality/" + side, 0.0, [&](PropertyRecord& r) {
            if (!has_oscillator(desc)) {
                r.pass = true;
                r.detail = "no oscillator model";
                return;
            }
            const PoleReport rep = find_qbm_poles(mat);
            double max_re = -kInf;
            for (const auto& p : rep.roots) max_re = std::max(max_re, p.s.real());
            r.measured = max_re;
            r.pass = rep.causal && rep.right_half_count == 0;
            if (!r.pass)
                r.detail = std::abs(max_re) <= 1e-12 * std::max(1.0, mat.omega0)
                               ? "marginal: poles on the imaginary axis (undamped oscillator)"
                               : "pole in the right half plane";
        }));
        out.push_back(guarded("fdr/" + side, 1e-12, [&](PropertyRecord& r) {
            if (!has_oscillator(desc)) {
                r.pass = true;
                r.detail = "no oscillator model";
                return;
            }
            for (double w : spaced(1e-2 * mat.omega0, 1e2 * mat.omega0, 200, Spacing::log)) {
                const FdrSides f = fdr_epsilon_identity(mat, w);
                const double scale = std::max(std::abs(f.lhs), 1e-300);
                r.measured = std::max(r.measured, std::abs(f.lhs - f.rhs) / scale);
            }
            r.pass = r.measured <= r.bound;
        }));
    }

    const double floor = 1e-3;
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
        const std::string name = pol == Polarization::TE ? "dmu_scan/TE" : "dmu_scan/TM";
        out.push_back(guarded(name, floor, [&](PropertyRecord& r) {
            const auto grid = imaginary_axis_grid(20.0, geom.gap);
            r.measured = kInf;
            for (double Q : {0.1, 0.3, 1.0, 3.0, 10.0}) {
                const ScanResult s = scan_dmu_imaginary_axis(geom, pol, Q, grid, floor);
                const double m = std::min(s.min_off_branch, s.min_reduced);
                if (m < r.measured) {
                    r.measured = m;
                    r.detail = "worst at Q = " + format_double(Q) + ", omega = " + format_double(s.argmin_off_branch);
                }
            }
            r.pass = r.measured > floor;
        }));
    }

    out.push_back(guarded("modified_modes", 1e-6, [&](PropertyRecord& r) {
        if (geom.left.is_table() || geom.right.is_table()) {
            r.pass = true;
            r.detail = "skipped: table permittivity has no pole model";
            return;
        }
        if (geom.left.lambda0 == 0.0 || geom.right.lambda0 == 0.0) {
            r.pass = true;
            r.detail = "vacuum plate: no interface, nothing to remove";
            return;
        }
        bool all = true;
        for (const auto& [Q, kz] : {std::pair{0.5, 1.2}, {1.0, -0.7}, {0.2, 2.5}, {2.0, 0.4}}) {
            const ModifiedModeReport m = modified_mode_check(geom, Q, kz, r.bound);
            all = all && m.removable;
            for (const auto& c : m.candidates) {
                r.measured = std::max(r.measured, c.spread);
                if (!c.removable && r.detail.empty())
                    r.detail = "not removable at Q = " + format_double(Q) + ", kz = " + format_double(kz) +
                               ", side " + std::to_string(c.side);
            }
        }
        r.pass = all;
    }));

    out.push_back(guarded("equal_temperature", 1e-3, [&](PropertyRecord& r) {
        Geometry g = geom;
        const double T = cfg.temp_left;
        g.right = build_material(cfg.right, T);
        PressureOptions opt = cfg.options;
        opt.subtract_infinite_separation = true;
        const double steady = steady_pressure(g, opt).value;
        const double eq = equilibrium_matsubara(g, T);
        if (eq == 0.0) {
            r.measured = std::abs(steady);
            r.bound = 1e-14;
        } else {
            r.measured = std::abs(steady - eq) / std::abs(eq);
        }
        r.pass = r.measured <= r.bound;
        r.detail = "T = " + format_double(T) + ", steady = " + format_double(steady) + ", matsubara = " +
                   format_double(eq);
    }));
    return out;
}

}  // namespace lifshitz
