#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lifshitz/config.hpp"

using namespace lifshitz;

namespace {

RunConfig parse(const std::string& text, const std::string& dir = ".") {
    std::istringstream in(text);
    return parse_config(in, dir);
}

int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line;
    }
    return -1;
}

const char* kFull = R"(# every section
geometry.gap = 0.8
geometry.z_field = 0.1
geometry.T_left = 0.5   # trailing comment
geometry.T_right = 2
geometry.beta_em = 3
left.model = oscillator
left.omega0 = 1.5
left.mass = 2
left.lambda0 = 0.7
left.bath = ohmic_lorentz_cutoff
left.gamma = 0.2
left.cutoff = 40
right.model = constant
right.epsilon_re = 4
right.epsilon_im = 0.5
sweep.variable = gap
sweep.from = 0.5
sweep.to = 2
sweep.points = 3
sweep.spacing = log
options.rel_tol = 1e-4
options.subtract_baseline = false
options.omega_max = 50
options.sector_split = false
options.zero_point = real_axis
options.max_intervals = 500
options.threads = 2
epsilon.omega_min = 0.1
epsilon.omega_max = 5
epsilon.points = 7
epsilon.spacing = linear
output.path = out.csv
units.si_scale_hz = 1e13
)";

}  // namespace

TEST_CASE("defaults describe two identical Lorentz plates") {
    const RunConfig c = parse("");
    CHECK(c.gap == 1.0);
    CHECK(c.left.model == MaterialModel::oscillator);
    CHECK(c.left.bath == BathKind::ohmic);
    CHECK(c.right.gamma == 0.1);
    CHECK(c.sweep.variable == SweepVariable::none);
    CHECK(sweep_points(c).size() == 1);
}

TEST_CASE("every key is parsed") {
    const RunConfig c = parse(kFull);
    CHECK(c.gap == 0.8);
    CHECK(c.z_field == 0.1);
    CHECK(c.temp_left == 0.5);
    CHECK(c.temp_right == 2.0);
    CHECK(c.beta_em == 3.0);
    CHECK(c.left.omega0 == 1.5);
    CHECK(c.left.mass == 2.0);
    CHECK(c.left.lambda0 == 0.7);
    CHECK(c.left.bath == BathKind::ohmic_lorentz_cutoff);
    CHECK(c.left.cutoff == 40.0);
    CHECK(c.right.model == MaterialModel::constant);
    CHECK(c.right.epsilon == cplx(4.0, 0.5));
    CHECK(c.sweep.spacing == Spacing::log);
    CHECK(c.options.rel_tol == 1e-4);
    CHECK_FALSE(c.options.subtract_infinite_separation);
    CHECK(c.options.omega_max == 50.0);
    CHECK_FALSE(c.options.sector_split);
    CHECK(c.options.zero_point == ZeroPoint::real_axis);
    CHECK(c.options.max_intervals == 500);
    CHECK(c.options.threads == 2u);
    CHECK(c.epsilon.points == 7);
    CHECK(c.epsilon.spacing == Spacing::linear);
    CHECK(c.output == "out.csv");
    CHECK(c.si_scale_hz == 1e13);
}

TEST_CASE("rendered configuration parses back to the same values") {
    for (const std::string& text : {std::string(kFull), std::string("")}) {
        const RunConfig a = parse(text);
        const std::string r1 = render_config(a);
        const RunConfig b = parse(r1);
        CHECK(render_config(b) == r1);
    }
}

TEST_CASE("parse errors carry the offending line") {
    CHECK(error_line("geometry.gap = 1\nfoo.bar = 2\n") == 2);
    CHECK(error_line("# c\n\ngeometry.gap = abc\n") == 3);
    CHECK(error_line("geometry.gap = 1\ngeometry.gap = 2\n") == 2);
    CHECK(error_line("gap = 1\n") == 1);
    CHECK(error_line("geometry.gap\n") == 1);
    CHECK(error_line("geometry.gap =\n") == 1);
    CHECK(error_line("left.bath = exotic\n") == 1);
    CHECK(error_line("sweep.points = 2.5\n") == 1);
    CHECK(error_line("options.threads = -1\n") == 1);
    CHECK(error_line("left.model = table\nleft.table = /nonexistent/eps.csv\n") == 2);
}

TEST_CASE("semantic errors are reported without a line") {
    CHECK(error_line("geometry.gap = -1\n") == 0);
    CHECK(error_line("geometry.z_field = 0.6\n") == 0);
    CHECK(error_line("left.gamma = -0.1\n") == 0);
    CHECK(error_line("left.bath = ohmic_lorentz_cutoff\n") == 0);
    CHECK(error_line("options.rel_tol = 0.5\n") == 0);
    CHECK(error_line("sweep.variable = gap\nsweep.from = 0\nsweep.to = 1\n") == 0);
    CHECK(error_line("right.model = constant\nright.epsilon_re = -2\n") == 0);
    CHECK(error_line("units.si_scale_hz = 0\n") == 0);
}

TEST_CASE("table paths resolve against the config directory") {
    const auto dir = std::filesystem::temp_directory_path() / "lifshitz_test_config";
    std::filesystem::create_directories(dir);
    {
        std::ofstream t(dir / "eps.csv");
        t << "0.1, 3, 0.2\n1, 2.5, 0.4\n10, 1.5, 0.1\n";
        std::ofstream c(dir / "run.cfg");
        c << "left.model = table\nleft.table = eps.csv\n";
    }
    const RunConfig c = load_config((dir / "run.cfg").string());
    CHECK(c.left.table_resolved == (dir / "eps.csv").lexically_normal().string());
    const Material m = build_material(c.left, 1.0);
    CHECK(m.is_table());
    CHECK(permittivity_fourier(m, 1.0) == cplx(2.5, 0.4));
    std::filesystem::remove_all(dir);
}

TEST_CASE("missing config file is a parse error") {
    CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ParseError);
}

TEST_CASE("materials are built from their descriptions") {
    MaterialDesc d;
    d.omega0 = 2.0;
    d.lambda0 = 0.5;
    d.gamma = 0.3;
    const Material m = build_material(d, 0.25);
    CHECK(m.omega0 == 2.0);
    CHECK(m.beta_bath == 4.0);
    CHECK(m.beta_dof == 4.0);
    CHECK(build_material(d, 0.0).beta_bath == kInf);
    d.model = MaterialModel::vacuum;
    CHECK(build_material(d, 1.0).lambda0 == 0.0);
    d.model = MaterialModel::constant;
    d.epsilon = cplx(3.0, 0.1);
    const Material c = build_material(d, 1.0);
    for (double w : {1e-3, 1.0, 1e3}) CHECK(permittivity_fourier(c, w) == cplx(3.0, 0.1));
}

TEST_CASE("sweeps produce the requested points") {
    CHECK(spaced(1.0, 3.0, 3, Spacing::linear) == std::vector<double>{1.0, 2.0, 3.0});
    const auto lg = spaced(0.1, 10.0, 3, Spacing::log);
    CHECK(lg[0] == doctest::Approx(0.1));
    CHECK(lg[1] == doctest::Approx(1.0));
    CHECK(lg[2] == doctest::Approx(10.0));
    CHECK(spaced(2.0, 5.0, 1, Spacing::linear) == std::vector<double>{2.0});

    RunConfig c = parse("sweep.variable = T_right\nsweep.from = 0.5\nsweep.to = 1.5\nsweep.points = 3\n");
    const auto pts = sweep_points(c);
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].temp_right == 1.0);
    CHECK(pts[1].temp_left == c.temp_left);
    CHECK(pts[1].gap == c.gap);

    c = parse("geometry.z_field = 0.2\nsweep.variable = gap\nsweep.from = 0.3\nsweep.to = 3\nsweep.points = 2\n");
    const auto gp = sweep_points(c);
    CHECK(gp.back().gap == 3.0);
    // The field plane is recentred for gap sweeps so it stays inside every gap.
    CHECK(build_geometry(c, gp.front()).z_field == 0.0);
    CHECK(build_geometry(c, gp.front()).gap == 0.3);
}
