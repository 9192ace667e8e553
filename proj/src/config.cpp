#include "lifshitz/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lifshitz {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
    double x = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && v[0] == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) throw ParseError("expected a number, got '" + v + "'", line);
    return x;
}

int to_int(const std::string& v, int line) {
    int x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParseError("expected an integer, got '" + v + "'", line);
    return x;
}

bool to_bool(const std::string& v, int line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError("expected true or false, got '" + v + "'", line);
}

template <class E>
E to_enum(const std::string& v, const std::vector<std::pair<std::string, E>>& names, int line) {
    for (const auto& [n, e] : names)
        if (n == v) return e;
    std::string allowed;
    for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : ", ") + n;
    throw ParseError("unknown value '" + v + "' (allowed: " + allowed + ")", line);
}

const std::vector<std::pair<std::string, MaterialModel>> kModels = {{"oscillator", MaterialModel::oscillator},
                                                                     {"vacuum", MaterialModel::vacuum},
                                                                     {"constant", MaterialModel::constant},
                                                                     {"table", MaterialModel::table}};
const std::vector<std::pair<std::string, BathKind>> kBaths = {
    {"none", BathKind::none}, {"ohmic", BathKind::ohmic}, {"ohmic_lorentz_cutoff", BathKind::ohmic_lorentz_cutoff}};
const std::vector<std::pair<std::string, SweepVariable>> kSweepVars = {{"none", SweepVariable::none},
                                                                        {"gap", SweepVariable::gap},
                                                                        {"T_left", SweepVariable::temp_left},
                                                                        {"T_right", SweepVariable::temp_right}};
const std::vector<std::pair<std::string, Spacing>> kSpacings = {{"linear", Spacing::linear}, {"log", Spacing::log}};
const std::vector<std::pair<std::string, ZeroPoint>> kZeroPoints = {{"imaginary_axis", ZeroPoint::imaginary_axis},
                                                                     {"real_axis", ZeroPoint::real_axis}};

template <class E>
std::string enum_name(E e, const std::vector<std::pair<std::string, E>>& names) {
    for (const auto& [n, x] : names)
        if (x == e) return n;
    return "?";
}

using Setter = std::function<void(const std::string&, int)>;

void material_keys(std::map<std::string, Setter>& keys, const std::string& side, MaterialDesc& m) {
    keys[side + ".model"] = [&m](const std::string& v, int l) { m.model = to_enum(v, kModels, l); };
    keys[side + ".omega0"] = [&m](const std::string& v, int l) { m.omega0 = to_double(v, l); };
    keys[side + ".mass"] = [&m](const std::string& v, int l) { m.mass = to_double(v, l); };
    keys[side + ".lambda0"] = [&m](const std::string& v, int l) { m.lambda0 = to_double(v, l); };
    keys[side + ".bath"] = [&m](const std::string& v, int l) { m.bath = to_enum(v, kBaths, l); };
    keys[side + ".gamma"] = [&m](const std::string& v, int l) { m.gamma = to_double(v, l); };
    keys[side + ".cutoff"] = [&m](const std::string& v, int l) { m.cutoff = to_double(v, l); };
    keys[side + ".epsilon_re"] = [&m](const std::string& v, int l) { m.epsilon.real(to_double(v, l)); };
    keys[side + ".epsilon_im"] = [&m](const std::string& v, int l) { m.epsilon.imag(to_double(v, l)); };
    keys[side + ".table"] = [&m](const std::string& v, int) { m.table_path = v; };
}

void check_material(const MaterialDesc& m, const std::string& side) {
    switch (m.model) {
        case MaterialModel::vacuum:
            return;
        case MaterialModel::constant:
            if (!(m.epsilon.real() > 0.0) || !(m.epsilon.imag() >= 0.0) || !is_finite(m.epsilon))
                throw DomainError(side + ": constant permittivity needs Re > 0 and Im >= 0");
            return;
        case MaterialModel::table:
            if (m.table_path.empty()) throw DomainError(side + ": table model needs a table path");
            return;
        case MaterialModel::oscillator:
            build_material(m, 0.0).validate();
            return;
    }
}

std::shared_ptr<const EpsilonTable> load_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open permittivity table '" + path + "'");
    return std::make_shared<EpsilonTable>(load_epsilon_table(in));
}

}  // namespace

void RunConfig::validate() const {
    if (!(gap > 0.0) || !std::isfinite(gap)) throw DomainError("geometry.gap must be > 0");
    if (!(std::abs(z_field) < 0.5 * gap)) throw DomainError("geometry.z_field must lie inside the gap");
    if (!(temp_left >= 0.0) || !std::isfinite(temp_left)) throw DomainError("geometry.T_left must be >= 0");
    if (!(temp_right >= 0.0) || !std::isfinite(temp_right)) throw DomainError("geometry.T_right must be >= 0");
    if (!(beta_em > 0.0)) throw DomainError("geometry.beta_em must be > 0");
    check_material(left, "left");
    check_material(right, "right");
    if (sweep.points < 1) throw DomainError("sweep.points must be >= 1");
    if (sweep.variable != SweepVariable::none) {
        if (!(sweep.from > 0.0) || !(sweep.to > 0.0) || !std::isfinite(sweep.from) || !std::isfinite(sweep.to))
            throw DomainError("sweep range must be positive");
    }
    options.validate();
    if (!(epsilon.omega_min > 0.0) || !(epsilon.omega_max > epsilon.omega_min) || epsilon.points < 1)
        throw DomainError("epsilon range must satisfy 0 < omega_min < omega_max and points >= 1");
    if (si_scale_hz && !(*si_scale_hz > 0.0)) throw DomainError("units.si_scale_hz must be > 0");
}

RunConfig parse_config(std::istream& in, const std::string& base_dir) {
    RunConfig cfg;
    std::map<std::string, Setter> keys;
    keys["geometry.gap"] = [&](const std::string& v, int l) { cfg.gap = to_double(v, l); };
    keys["geometry.z_field"] = [&](const std::string& v, int l) { cfg.z_field = to_double(v, l); };
    keys["geometry.T_left"] = [&](const std::string& v, int l) { cfg.temp_left = to_double(v, l); };
    keys["geometry.T_right"] = [&](const std::string& v, int l) { cfg.temp_right = to_double(v, l); };
    keys["geometry.beta_em"] = [&](const std::string& v, int l) { cfg.beta_em = to_double(v, l); };
    material_keys(keys, "left", cfg.left);
    material_keys(keys, "right", cfg.right);
    keys["sweep.variable"] = [&](const std::string& v, int l) { cfg.sweep.variable = to_enum(v, kSweepVars, l); };
    keys["sweep.from"] = [&](const std::string& v, int l) { cfg.sweep.from = to_double(v, l); };
    keys["sweep.to"] = [&](const std::string& v, int l) { cfg.sweep.to = to_double(v, l); };
    keys["sweep.points"] = [&](const std::string& v, int l) { cfg.sweep.points = to_int(v, l); };
    keys["sweep.spacing"] = [&](const std::string& v, int l) { cfg.sweep.spacing = to_enum(v, kSpacings, l); };
    keys["options.rel_tol"] = [&](const std::string& v, int l) { cfg.options.rel_tol = to_double(v, l); };
    keys["options.subtract_baseline"] = [&](const std::string& v, int l) {
        cfg.options.subtract_infinite_separation = to_bool(v, l);
    };
    keys["options.omega_max"] = [&](const std::string& v, int l) { cfg.options.omega_max = to_double(v, l); };
    keys["options.sector_split"] = [&](const std::string& v, int l) { cfg.options.sector_split = to_bool(v, l); };
    keys["options.zero_point"] = [&](const std::string& v, int l) {
        cfg.options.zero_point = to_enum(v, kZeroPoints, l);
    };
    keys["options.max_intervals"] = [&](const std::string& v, int l) { cfg.options.max_intervals = to_int(v, l); };
    keys["options.threads"] = [&](const std::string& v, int l) {
        const int t = to_int(v, l);
        if (t < 0) throw ParseError("options.threads must be >= 0", l);
        cfg.options.threads = static_cast<unsigned>(t);
    };
    keys["epsilon.omega_min"] = [&](const std::string& v, int l) { cfg.epsilon.omega_min = to_double(v, l); };
    keys["epsilon.omega_max"] = [&](const std::string& v, int l) { cfg.epsilon.omega_max = to_double(v, l); };
    keys["epsilon.points"] = [&](const std::string& v, int l) { cfg.epsilon.points = to_int(v, l); };
    keys["epsilon.spacing"] = [&](const std::string& v, int l) { cfg.epsilon.spacing = to_enum(v, kSpacings, l); };
    keys["output.path"] = [&](const std::string& v, int) { cfg.output = v; };
    keys["units.si_scale_hz"] = [&](const std::string& v, int l) { cfg.si_scale_hz = to_double(v, l); };

    std::map<std::string, int> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'section.key = value'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.find('.') == std::string::npos) throw ParseError("key '" + key + "' has no section", line);
        const auto it = keys.find(key);
        if (it == keys.end()) throw ParseError("unknown key '" + key + "'", line);
        if (value.empty()) throw ParseError("key '" + key + "' has no value", line);
        if (const auto prev = seen.find(key); prev != seen.end())
            throw ParseError("key '" + key + "' repeats line " + std::to_string(prev->second), line);
        seen[key] = line;
        it->second(value, line);
    }
    for (MaterialDesc* m : {&cfg.left, &cfg.right}) {
        if (m->table_path.empty()) continue;
        const std::filesystem::path p(m->table_path);
        m->table_resolved = (p.is_absolute() ? p : std::filesystem::path(base_dir) / p).lexically_normal().string();
        if (!std::filesystem::exists(m->table_resolved)) {
            const std::string side = m == &cfg.left ? "left" : "right";
            throw ParseError("permittivity table '" + m->table_resolved + "' does not exist",
                             seen.count(side + ".table") ? seen[side + ".table"] : 0);
        }
    }
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'", 0);
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(in, dir.empty() ? "." : dir.string());
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream o;
    auto d = [](double x) { return format_double(x); };
    o << "geometry.gap = " << d(cfg.gap) << "\n";
    o << "geometry.z_field = " << d(cfg.z_field) << "\n";
    o << "geometry.T_left = " << d(cfg.temp_left) << "\n";
    o << "geometry.T_right = " << d(cfg.temp_right) << "\n";
    o << "geometry.beta_em = " << d(cfg.beta_em) << "\n";
    for (const auto& [side, m] : {std::pair<std::string, const MaterialDesc&>{"left", cfg.left}, {"right", cfg.right}}) {
        o << side << ".model = " << enum_name(m.model, kModels) << "\n";
        switch (m.model) {
            case MaterialModel::vacuum:
                break;
            case MaterialModel::constant:
                o << side << ".epsilon_re = " << d(m.epsilon.real()) << "\n";
                o << side << ".epsilon_im = " << d(m.epsilon.imag()) << "\n";
                break;
            case MaterialModel::table:
                o << side << ".table = " << m.table_resolved << "\n";
                break;
            case MaterialModel::oscillator:
                o << side << ".omega0 = " << d(m.omega0) << "\n";
                o << side << ".mass = " << d(m.mass) << "\n";
                o << side << ".lambda0 = " << d(m.lambda0) << "\n";
                o << side << ".bath = " << enum_name(m.bath, kBaths) << "\n";
                o << side << ".gamma = " << d(m.gamma) << "\n";
                if (m.bath == BathKind::ohmic_lorentz_cutoff) o << side << ".cutoff = " << d(m.cutoff) << "\n";
                break;
        }
    }
    o << "sweep.variable = " << enum_name(cfg.sweep.variable, kSweepVars) << "\n";
    if (cfg.sweep.variable != SweepVariable::none) {
        o << "sweep.from = " << d(cfg.sweep.from) << "\n";
        o << "sweep.to = " << d(cfg.sweep.to) << "\n";
        o << "sweep.points = " << cfg.sweep.points << "\n";
        o << "sweep.spacing = " << enum_name(cfg.sweep.spacing, kSpacings) << "\n";
    }
    o << "options.rel_tol = " << d(cfg.options.rel_tol) << "\n";
    o << "options.subtract_baseline = " << (cfg.options.subtract_infinite_separation ? "true" : "false") << "\n";
    o << "options.omega_max = " << d(cfg.options.omega_max) << "\n";
    o << "options.sector_split = " << (cfg.options.sector_split ? "true" : "false") << "\n";
    o << "options.zero_point = " << enum_name(cfg.options.zero_point, kZeroPoints) << "\n";
    o << "options.max_intervals = " << cfg.options.max_intervals << "\n";
    o << "options.threads = " << cfg.options.threads << "\n";
    o << "epsilon.omega_min = " << d(cfg.epsilon.omega_min) << "\n";
    o << "epsilon.omega_max = " << d(cfg.epsilon.omega_max) << "\n";
    o << "epsilon.points = " << cfg.epsilon.points << "\n";
    o << "epsilon.spacing = " << enum_name(cfg.epsilon.spacing, kSpacings) << "\n";
    if (!cfg.output.empty()) o << "output.path = " << cfg.output << "\n";
    if (cfg.si_scale_hz) o << "units.si_scale_hz = " << d(*cfg.si_scale_hz) << "\n";
    return o.str();
}

Material build_material(const MaterialDesc& desc, double temperature) {
    Material m;
    const double beta = temperature > 0.0 ? 1.0 / temperature : kInf;
    m.beta_bath = beta;
    m.beta_dof = beta;
    switch (desc.model) {
        case MaterialModel::vacuum:
            m.lambda0 = 0.0;
            break;
        case MaterialModel::constant:
            m.table = std::make_shared<EpsilonTable>(std::vector<double>{1e-6, 1e6},
                                                     std::vector<cplx>{desc.epsilon, desc.epsilon});
            break;
        case MaterialModel::table:
            m.table = load_table_file(desc.table_resolved.empty() ? desc.table_path : desc.table_resolved);
            break;
        case MaterialModel::oscillator:
            m.omega0 = desc.omega0;
            m.mass = desc.mass;
            m.lambda0 = desc.lambda0;
            m.bath.kind = desc.bath;
            m.bath.gamma = desc.gamma;
            m.bath.cutoff = desc.cutoff;
            break;
    }
    return m;
}

std::vector<double> spaced(double from, double to, int points, Spacing spacing) {
    if (points < 1) throw DomainError("spaced: points must be >= 1");
    if (spacing == Spacing::log && !(from > 0.0 && to > 0.0)) throw DomainError("spaced: log spacing needs a positive range");
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double u = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        v[static_cast<std::size_t>(i)] =
            spacing == Spacing::linear ? from + (to - from) * u : std::exp(std::log(from) + (std::log(to) - std::log(from)) * u);
    }
    // Pin the end point against rounding.
    if (points > 1) v.back() = to;
    return v;
}

std::vector<SweepPoint> sweep_points(const RunConfig& cfg) {
    const SweepPoint base{cfg.gap, cfg.temp_left, cfg.temp_right};
    if (cfg.sweep.variable == SweepVariable::none) return {base};
    std::vector<SweepPoint> out;
    for (double x : spaced(cfg.sweep.from, cfg.sweep.to, cfg.sweep.points, cfg.sweep.spacing)) {
        SweepPoint p = base;
        switch (cfg.sweep.variable) {
            case SweepVariable::gap:
                p.gap = x;
                break;
            case SweepVariable::temp_left:
                p.temp_left = x;
                break;
            case SweepVariable::temp_right:
                p.temp_right = x;
                break;
            case SweepVariable::none:
                break;
        }
        out.push_back(p);
    }
    return out;
}

Geometry build_geometry(const RunConfig& cfg, const SweepPoint& point) {
    Geometry g;
    g.gap = point.gap;
    g.z_field = cfg.sweep.variable == SweepVariable::gap ? 0.0 : cfg.z_field;
    g.left = build_material(cfg.left, point.temp_left);
    g.right = build_material(cfg.right, point.temp_right);
    g.validate();
    return g;
}

}  // namespace lifshitz
