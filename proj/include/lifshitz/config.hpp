#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lifshitz/pressure.hpp"

namespace lifshitz {

// Line-oriented run configuration: `section.key = value`, '#' starts a comment.
// The grammar and every key are listed in README.md.

enum class MaterialModel { oscillator, vacuum, constant, table };

struct MaterialDesc {
    MaterialModel model = MaterialModel::oscillator;
    double omega0 = 1.0;
    double mass = 1.0;
    double lambda0 = 1.0;
    BathKind bath = BathKind::ohmic;
    double gamma = 0.1;
    double cutoff = kInf;
    cplx epsilon = 1.0;       // constant model
    std::string table_path;   // table model, as written in the config
    std::string table_resolved;
};

enum class SweepVariable { none, gap, temp_left, temp_right };
enum class Spacing { linear, log };

struct Sweep {
    SweepVariable variable = SweepVariable::none;
    double from = 0.0;
    double to = 0.0;
    int points = 1;
    Spacing spacing = Spacing::linear;
};

struct EpsilonRange {
    double omega_min = 0.01;
    double omega_max = 10.0;
    int points = 200;
    Spacing spacing = Spacing::log;
};

struct RunConfig {
    double gap = 1.0;
    double z_field = 0.0;
    double temp_left = 1.0;
    double temp_right = 1.0;
    double beta_em = kInf;
    MaterialDesc left;
    MaterialDesc right;
    Sweep sweep;
    PressureOptions options;
    EpsilonRange epsilon;
    std::string output;
    std::optional<double> si_scale_hz;

    void validate() const;
};

// Throws ParseError carrying the 1-based line of the offending entry.
// Relative table paths are resolved against base_dir.
RunConfig parse_config(std::istream& in, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// Canonical text of the fully resolved configuration (parses back to the same values).
std::string render_config(const RunConfig& cfg);

Material build_material(const MaterialDesc& desc, double temperature);

struct SweepPoint {
    double gap;
    double temp_left;
    double temp_right;
};
std::vector<SweepPoint> sweep_points(const RunConfig& cfg);

Geometry build_geometry(const RunConfig& cfg, const SweepPoint& point);

std::vector<double> spaced(double from, double to, int points, Spacing spacing);

}  // namespace lifshitz
