#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlpoisson/cli.hpp"
#include "nlpoisson/config.hpp"
#include "nlpoisson/error.hpp"
#include "nlpoisson/report.hpp"

using namespace nlpoisson;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Drops the last CSV column (wall-clock seconds) from every data row.
std::string without_timing(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') line = line.substr(0, line.rfind(','));
        out += line + '\n';
    }
    return out;
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        return e.what();
    }
    FAIL("expected a config error for: " << text);
    return {};
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("nlpoisson_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("minimal config takes the documented defaults") {
    const auto c = parse_config("command = solve\nproblem = sine1d\ndelta = 0.1\n");
    CHECK(c.command == Command::Solve);
    CHECK(c.problem == "sine1d");
    CHECK(c.delta == 0.1);
    CHECK(c.ratio == 8.0);
    CHECK(c.formulation == Formulation::Eliminated);
    CHECK(c.kernel == "quadratic");
    CHECK(c.tol == 1e-12);
    CHECK(c.preconditioner == Preconditioner::Diagonal);
    CHECK(c.domain_kind() == DomainKind::Interval);
    CHECK(c.ladder() == std::vector<double>{0.2, 0.1, 0.05, 0.025});
}

TEST_CASE("comments, lists and quoting") {
    const auto c = parse_config(
        "# study config\n"
        "command = study   # trailing comment\n"
        "problem = paraboloid2d\n"
        "delta_list = [0.2, 0.1,0.05]\n"
        "output = \"runs/a # b\"\n"
        "\n"
        "   max_iterations = 500\r\n");
    CHECK(c.delta_list == std::vector<double>{0.2, 0.1, 0.05});
    CHECK(c.output == "runs/a # b");
    CHECK(c.max_iterations == 500);
    CHECK(c.domain_kind() == DomainKind::Disk);
}

TEST_CASE("strict validation") {
    CHECK(config_error("delta_list = [0.1, 0.2]\n").find("strictly decreasing") != std::string::npos);
    const auto unknown = config_error("command = solve\nkernell = quadratic\n");
    CHECK(unknown.find("kernell") != std::string::npos);
    CHECK(unknown.find("line 2") != std::string::npos);
    CHECK(config_error("delta 0.1\n").find("line 1") != std::string::npos);
    CHECK(config_error("delta = 0.1\ndelta = 0.2\n").find("duplicate") != std::string::npos);
    CHECK(config_error("delta = abc\n").find("delta") != std::string::npos);
    CHECK(config_error("kernel = gaussian\n").find("kernel") != std::string::npos);
    CHECK(config_error("problem = cube\n").find("problem") != std::string::npos);
    CHECK(config_error("ratio = 4\n").find("ratio") != std::string::npos);
    CHECK(config_error("tol = 2\n").find("tol") != std::string::npos);
    CHECK(config_error("command = plot\n").find("command") != std::string::npos);
    CHECK(config_error("problem = sine1d\ndomain = disk\n").find("domain") != std::string::npos);
    CHECK(config_error("output = \"unterminated\n").find("line 1") != std::string::npos);
    CHECK(config_error("delta_list = [0.1, , 0.05]\n").find("line 1") != std::string::npos);
}

TEST_CASE("render round-trip") {
    RunConfig c;
    c.command = Command::Study;
    c.kernel = "quartic";
    c.problem = "robin1d";
    c.mu = 0.3;
    c.delta = 0.1 + 0.2;  // not exactly representable
    c.delta_list = {0.3, 0.15, 1.0 / 30.0};
    c.ratio = 12.5;
    c.formulation = Formulation::Coupled;
    c.tol = 1e-11;
    c.max_iterations = 77;
    c.preconditioner = Preconditioner::None;
    c.gradient = GradientMode::Smoothed;
    c.domain = DomainKind::Interval;
    c.resolution = 123;
    c.eigen_count = 3;
    c.output = "out dir/\"x\"";
    CHECK(parse_config(render_config(c)) == c);
    const RunConfig defaults;
    CHECK(parse_config(render_config(defaults)) == defaults);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_number(1e-300) == "1e-300");
}

TEST_CASE("solve writes deterministic artifacts") {
    const auto c = parse_config("command = solve\nproblem = sine1d\ndelta = 0.1\n");
    const auto a = scratch_dir("solve_a"), b = scratch_dir("solve_b");
    std::ostringstream log, err;
    REQUIRE(run(c, Command::Solve, a, log, err) == 0);
    REQUIRE(run(c, Command::Solve, b, log, err) == 0);
    CHECK(err.str().empty());
    for (const auto* f : {"solution.csv", "flux.csv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
        CHECK(slurp(a / f).find('\r') == std::string::npos);
    }
    CHECK(without_timing(slurp(a / "report.csv")) == without_timing(slurp(b / "report.csv")));
    const auto solution = slurp(a / "solution.csv");
    CHECK(solution.rfind("x,u\n", 0) == 0);
    CHECK(slurp(a / "flux.csv").rfind("s,v,n_x\n", 0) == 0);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("study writes report and plot script") {
    const auto c = parse_config("command = study\nproblem = robin1d\nmu = 1\n");
    const auto dir = scratch_dir("study");
    std::ostringstream log, err;
    REQUIRE(run(c, Command::Study, dir, log, err) == 0);
    const auto csv = slurp(dir / "report.csv");
    CHECK(csv.rfind("delta,h,n_interior,n_boundary,l2_interior,h1_interior,l2_flux,nonlocal_energy,iterations,"
                    "wall_seconds\n",
                    0) == 0);
    int rows = 0;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line[0] != '#') ++rows;
    }
    CHECK(rows == 4);
    for (const auto* norm : {"l2_interior", "h1_interior", "l2_flux", "nonlocal_energy"}) {
        CHECK(csv.find(std::string("# slope:") + norm + "=") != std::string::npos);
    }
    const auto gp = slurp(dir / "report.gp");
    CHECK(gp.find("logscale") != std::string::npos);
    CHECK(gp.find("slope 1/2") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("check-kernel, mass-report and eigen commands") {
    std::ostringstream log, err;
    CHECK(run(parse_config("kernel = quadratic\n"), Command::CheckKernel, ".", log, err) == 0);
    CHECK(log.str().find("no violations") != std::string::npos);

    const auto dir = scratch_dir("mass");
    const auto mc = parse_config("command = mass-report\ndomain = disk\ndelta = 0.1\nresolution = 16\n");
    CHECK(run(mc, Command::MassReport, dir, log, err) == 0);
    const auto mass = slurp(dir / "mass_report.csv");
    CHECK(mass.find(",true\n") == std::string::npos);
    CHECK(mass.find("# violations=0") != std::string::npos);

    const auto ec = parse_config("command = eigen\ndelta_list = [0.2, 0.1, 0.05]\n");
    CHECK(run(ec, Command::Eigen, dir, log, err) == 0);
    CHECK(slurp(dir / "eigen.csv").find("# slope:lambda2=") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("command mismatch and missing keys") {
    std::ostringstream log, err;
    const auto c = parse_config("command = solve\nproblem = sine1d\ndelta = 0.1\n");
    CHECK_THROWS_AS(run(c, Command::Study, ".", log, err), Error);
    CHECK_THROWS_AS(run(parse_config("problem = sine1d\n"), Command::Solve, ".", log, err), Error);
    CHECK_THROWS_AS(run(parse_config("delta = 0.1\n"), Command::Study, ".", log, err), Error);
}

}  // TEST_SUITE
