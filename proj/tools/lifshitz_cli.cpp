#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lifshitz/config.hpp"
#include "lifshitz/spectral.hpp"
#include "lifshitz/verify.hpp"

#ifndef LIFSHITZ_VERSION
#define LIFSHITZ_VERSION "unknown"
#endif

using namespace lifshitz;

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

struct Flags {
    std::string config;
    std::string out;
    double rel_tol = 0.0;
    bool no_baseline = false;
    std::string material = "left";
};

RunConfig resolve(const Flags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
    } else {
        std::istringstream empty;
        cfg = parse_config(empty);
    }
    if (f.rel_tol > 0.0) cfg.options.rel_tol = f.rel_tol;
    if (f.no_baseline) cfg.options.subtract_infinite_separation = false;
    if (!f.out.empty()) cfg.output = f.out;
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
    return cfg;
}

std::string header_comment(const RunConfig& cfg, const std::string& command) {
    std::string h = "# lifshitz " LIFSHITZ_VERSION " " + command + "\n";
    std::istringstream lines(render_config(cfg));
    for (std::string l; std::getline(lines, l);) h += "# " + l + "\n";
    return h;
}

// Writes to cfg.output when set, otherwise to stdout.
void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream o(cfg.output, std::ios::binary);
    if (!o) throw DomainError("cannot write '" + cfg.output + "'");
    o << text;
}

std::ostream& summary(const RunConfig& cfg) { return cfg.output.empty() ? std::cerr : std::cout; }

const MaterialDesc& pick(const RunConfig& cfg, const std::string& side) {
    if (side == "left") return cfg.left;
    if (side == "right") return cfg.right;
    throw ParseError("--material must be left or right", 0);
}

// SI conversion with the natural frequency unit set to 2 pi * si_scale_hz rad/s.
struct SiScale {
    double length_m, kelvin, pascal;
};
SiScale si_scale(double hz) {
    const double hbar = 1.054571817e-34, c = 299792458.0, kb = 1.380649e-23;
    const double w = 2.0 * kPi * hz;
    const double L = c / w;
    return {L, hbar * w / kb, hbar * c / std::pow(L, 4)};
}

int cmd_pressure(const RunConfig& cfg) {
    std::string csv = header_comment(cfg, "pressure") + csv_header();
    if (cfg.si_scale_hz) csv += ",gap_m,T_left_K,T_right_K,pressure_Pa";
    csv += "\n";
    auto& log = summary(cfg);
    log << "gap            T_left         T_right        pressure              error\n";
    for (const SweepPoint& p : sweep_points(cfg)) {
        const Geometry g = build_geometry(cfg, p);
        const PressureResult r = steady_pressure(g, cfg.options);
        csv += csv_row(p.gap, p.temp_left, p.temp_right, r);
        if (cfg.si_scale_hz) {
            const SiScale s = si_scale(*cfg.si_scale_hz);
            csv += "," + format_double(p.gap * s.length_m) + "," + format_double(p.temp_left * s.kelvin) + "," +
                   format_double(p.temp_right * s.kelvin) + "," + format_double(r.value * s.pascal);
        }
        csv += "\n";
        char line[160];
        std::snprintf(line, sizeof line, "%-14.6g %-14.6g %-14.6g %-21.12g %.3g\n", p.gap, p.temp_left,
                      p.temp_right, r.value, r.err);
        log << line;
    }
    emit(cfg, csv);
    return kOk;
}

int cmd_epsilon(const RunConfig& cfg, const std::string& side) {
    const Material m = build_material(pick(cfg, side), cfg.temp_left);
    std::string csv = header_comment(cfg, "epsilon " + side) + "omega,eps_re,eps_im,eps_neg_re,eps_neg_im\n";
    for (double w : spaced(cfg.epsilon.omega_min, cfg.epsilon.omega_max, cfg.epsilon.points, cfg.epsilon.spacing)) {
        const cplx e = permittivity_fourier(m, w);
        const cplx en = permittivity_fourier(m, -w);
        csv += format_double(w) + "," + format_double(e.real()) + "," + format_double(e.imag()) + "," +
               format_double(en.real()) + "," + format_double(en.imag()) + "\n";
    }
    emit(cfg, csv);
    return kOk;
}

int cmd_poles(const RunConfig& cfg, const std::string& side) {
    const MaterialDesc& d = pick(cfg, side);
    if (d.model != MaterialModel::oscillator) throw ParseError(side + " plate has no oscillator model", 0);
    const PoleReport rep = find_qbm_poles(build_material(d, cfg.temp_left));
    double max_re = -kInf;
    for (const auto& r : rep.roots) max_re = std::max(max_re, r.s.real());
    nlohmann::json j;
    j["material"] = side;
    j["report"] = nlohmann::json::parse(rep.to_json());
    j["marginal"] = !rep.causal && std::abs(max_re) <= 1e-12 * std::max(1.0, d.omega0);
    emit(cfg, j.dump(2) + "\n");
    return kOk;
}

int cmd_verify(const RunConfig& cfg) {
    const auto records = run_verify(cfg);
    std::string text;
    bool all = true;
    for (const auto& r : records) {
        text += r.to_json() + "\n";
        all = all && r.pass;
    }
    emit(cfg, text);
    for (const auto& r : records)
        if (!r.pass) std::cerr << "FAILED " << r.name << ": " << r.detail << "\n";
    return all ? kOk : kPropertyFailure;
}

int cmd_compare_eq(const RunConfig& cfg) {
    std::string csv = header_comment(cfg, "compare-eq") + "gap,T,steady,matsubara,rel_diff\n";
    auto& log = summary(cfg);
    for (const SweepPoint& p : sweep_points(cfg)) {
        if (p.temp_left != p.temp_right)
            throw ParseError("compare-eq needs equal plate temperatures (T_left = T_right)", 0);
        const Geometry g = build_geometry(cfg, p);
        PressureOptions opt = cfg.options;
        opt.subtract_infinite_separation = true;
        const double steady = steady_pressure(g, opt).value;
        const double eq = equilibrium_matsubara(g, p.temp_left);
        const double rel = eq == 0.0 ? std::abs(steady) : std::abs(steady - eq) / std::abs(eq);
        csv += format_double(p.gap) + "," + format_double(p.temp_left) + "," + format_double(steady) + "," +
               format_double(eq) + "," + format_double(rel) + "\n";
        char line[160];
        std::snprintf(line, sizeof line, "gap %-10.4g T %-10.4g steady %-20.12g matsubara %-20.12g rel %.2e\n",
                      p.gap, p.temp_left, steady, eq, rel);
        log << line;
    }
    emit(cfg, csv);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state Casimir pressure between two dispersive plates"};
    app.set_version_flag("--version", LIFSHITZ_VERSION);
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "Run configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", f.out, "Output path (default: stdout)");
        sub->add_option("--rel-tol", f.rel_tol, "Override options.rel_tol");
        sub->add_flag("--no-baseline-subtract", f.no_baseline, "Keep the infinite-separation baseline");
    };
    auto* pressure = app.add_subcommand("pressure", "Steady pressure for each sweep point (CSV)");
    auto* epsilon = app.add_subcommand("epsilon", "Real-frequency permittivity of one plate (CSV)");
    auto* poles = app.add_subcommand("poles", "Oscillator Green-function poles of one plate (JSON)");
    auto* verify = app.add_subcommand("verify", "Property suite; exit 0 iff all pass");
    auto* compare = app.add_subcommand("compare-eq", "Steady pressure beside the Matsubara sum (CSV)");
    for (auto* sub : {pressure, epsilon, poles, verify, compare}) common(sub);
    for (auto* sub : {epsilon, poles})
        sub->add_option("--material", f.material, "Plate: left or right")->check(CLI::IsMember({"left", "right"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    RunConfig cfg;
    try {
        cfg = resolve(f);
    } catch (const ParseError& e) {
        std::cerr << "config error";
        if (!f.config.empty()) std::cerr << " in " << f.config;
        if (e.line > 0) std::cerr << " line " << e.line;
        std::cerr << ": " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (*pressure) return cmd_pressure(cfg);
        if (*epsilon) return cmd_epsilon(cfg, f.material);
        if (*poles) return cmd_poles(cfg, f.material);
        if (*verify) return cmd_verify(cfg);
        if (*compare) return cmd_compare_eq(cfg);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const SingularityError& e) {
        std::cerr << "numerical failure: " << e.what() << " at s = " << e.s.real() << (e.s.imag() < 0 ? "" : "+")
                  << e.s.imag() << "i\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kOk;
}
