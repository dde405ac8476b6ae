// End-to-end tests of the xp2 command-line tool: golden values for the
// emitted datasets, format mirroring, determinism, and exit codes.
// The binary path arrives as the trailing ctest argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <unistd.h>
#include <string>
#include <vector>

#include "xp2/semiclassical.hpp"

namespace {

std::string g_bin;
std::filesystem::path g_dir;

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const auto out_path = g_dir / "stdout.txt";
    const std::string cmd = "\"" + g_bin + "\" " + args + " > \"" + out_path.string() +
                            "\" 2> \"" + (g_dir / "stderr.txt").string() + "\"";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(out_path);
    return r;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw std::runtime_error("csv: no column " + name);
    }
    double num(std::size_t row, const std::string& name) const {
        return std::stod(rows.at(row).at(col(name)));
    }
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::stringstream ss(text);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) {
            csv.header = cells;
            first = false;
        } else {
            csv.rows.push_back(cells);
        }
    }
    return csv;
}

const double kH1[10] = {0.80879, 1.82879, 2.58598, 3.24636, 3.85276,
                        4.42303, 4.96681, 5.49002, 5.99659, 6.48931};
const double kSemi40[10] = {18.70039, 19.06382, 19.42565, 19.78593, 20.14471,
                            20.50204, 20.85795, 21.21249, 21.56569, 21.91759};

}  // namespace

TEST_CASE("trajectory: row count, initial condition, conservation, determinism") {
    const auto path = (g_dir / "traj.csv").string();
    auto r = run("trajectory --a 1 --energy 3 --samples 1000 --out \"" + path + "\"");
    REQUIRE(r.exit_code == 0);
    const std::string first_pass = slurp(path);
    const Csv csv = parse_csv(first_pass);
    REQUIRE(csv.rows.size() == 1000);
    CHECK(csv.num(0, "t") == 0.0);
    CHECK(csv.num(0, "x") == 0.0);
    double max_res = 0.0;
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        max_res = std::max(max_res, std::fabs(csv.num(i, "H_residual")));
    CHECK(max_res <= 1e-9);

    // byte-identical on a second run
    auto r2 = run("trajectory --a 1 --energy 3 --samples 1000 --out \"" + path + "\"");
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(path) == first_pass);
}

TEST_CASE("trajectory: json output mirrors the csv samples") {
    auto rc = run("trajectory --energy 3 --samples 50");
    REQUIRE(rc.exit_code == 0);
    const Csv csv = parse_csv(rc.out);

    auto rj = run("trajectory --energy 3 --samples 50 --format json");
    REQUIRE(rj.exit_code == 0);
    const auto parsed = nlohmann::json::parse(rj.out);
    REQUIRE(parsed.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(parsed[i]["t"].get<double>() == doctest::Approx(csv.num(i, "t")).epsilon(1e-12));
        CHECK(parsed[i]["x"].get<double>() == doctest::Approx(csv.num(i, "x")).epsilon(1e-12));
        CHECK(parsed[i]["p"].get<double>() == doctest::Approx(csv.num(i, "p")).epsilon(1e-12));
    }
}

TEST_CASE("phase: turning points, level set, enclosed area") {
    auto r = run("phase --a 1 --energy 3 --samples 4000");
    REQUIRE(r.exit_code == 0);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 4000);

    CHECK(csv.num(0, "x") == doctest::Approx(-3.0));
    CHECK(csv.num(0, "p_plus") == doctest::Approx(0.0));
    CHECK(csv.num(csv.rows.size() - 1, "p_plus") == doctest::Approx(0.0));

    // boundary passes through (0, 3)
    double p_at_zero = 0.0, best = 1e300;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const double x = csv.num(i, "x");
        if (std::fabs(x) < best) {
            best = std::fabs(x);
            p_at_zero = csv.num(i, "p_plus");
        }
    }
    CHECK(p_at_zero == doctest::Approx(3.0).epsilon(1e-5));

    // trapezoid area equals 2 pi I(E)
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < csv.rows.size(); ++i) {
        const double dx = csv.num(i + 1, "x") - csv.num(i, "x");
        const double top = 0.5 * (csv.num(i + 1, "p_plus") + csv.num(i, "p_plus"));
        const double bot = 0.5 * (csv.num(i + 1, "p_minus") + csv.num(i, "p_minus"));
        area += (top - bot) * dx;
    }
    xp2::ModelParams params(1.0);
    const double expect =
        2.0 * xp2::semiclassical::pi *
        xp2::semiclassical::action(params, xp2::EnergyPoint::from_e(params, 3.0));
    CHECK(std::fabs(area - expect) / expect <= 1e-4);
}

TEST_CASE("spectrum: form 1 reproduces the reference row") {
    auto r = run("spectrum --form 1 --levels 1..10 --a 1");
    REQUIRE(r.exit_code == 0);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(std::fabs(csv.num(i, "E") - kH1[i]) <= 2e-4);
        // %.9g round-trip limits this identity to ~1e-8 relative
        CHECK(csv.num(i, "H_E") ==
              doctest::Approx(csv.num(i, "E") * csv.num(i, "E") + 1.0).epsilon(1e-7));
    }
    CHECK(csv.rows[0][csv.col("parity")] == "even");
    CHECK(csv.rows[1][csv.col("parity")] == "odd");
    CHECK(csv.rows[0][csv.col("backend")] == "shooting");
}

TEST_CASE("spectrum: semiclassical selector reproduces the high reference row") {
    auto r = run("spectrum --semiclassical --levels 40..49");
    REQUIRE(r.exit_code == 0);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(std::fabs(csv.num(i, "E") - kSemi40[i]) <= 2e-3);
}

TEST_CASE("spectrum: backend triangle deltas stay below 1e-6") {
    auto r = run("spectrum --form 2 --backend shooting,fd,mathieu --levels 1..10 --compare");
    REQUIRE(r.exit_code == 0);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(csv.num(i, "max_delta") <= 1e-6);
}

TEST_CASE("discrepancy: reference differences and shrinking form-II offset") {
    auto r = run("discrepancy --levels 1..20");
    REQUIRE(r.exit_code == 0);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 20);
    CHECK(std::fabs(csv.num(0, "d_h1") - (-0.24614)) <= 2e-4);
    CHECK(std::fabs(csv.num(9, "d_h2") - 0.00390) <= 2e-4);
    for (std::size_t i = 0; i + 1 < csv.rows.size(); ++i)
        CHECK(std::fabs(csv.num(i + 1, "d_h2")) < std::fabs(csv.num(i, "d_h2")));
}

TEST_CASE("potentials: origin row, exact difference column, symmetry") {
    auto r = run("potentials --umax 3 --samples 601");
    REQUIRE(r.exit_code == 0);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 601);

    const std::size_t mid = 300;  // u = 0
    CHECK(csv.num(mid, "u") == doctest::Approx(0.0));
    CHECK(csv.num(mid, "V1") == doctest::Approx(-0.5));
    CHECK(csv.num(mid, "V2") == doctest::Approx(0.0));
    CHECK(csv.num(mid, "V3") == doctest::Approx(-0.5));

    for (std::size_t i = 0; i < csv.rows.size(); i += 40) {
        const double u = csv.num(i, "u");
        const double th2 = std::pow(std::tanh(u), 2);
        CHECK(csv.num(i, "V2_minus_V1") == doctest::Approx(0.5 + 0.25 * th2).epsilon(1e-8));
        const std::size_t j = csv.rows.size() - 1 - i;  // mirror row
        CHECK(csv.num(i, "V1") == doctest::Approx(csv.num(j, "V1")).epsilon(1e-12));
    }
}

TEST_CASE("wavefunction: node counts and tail decay") {
    auto r1 = run("wavefunction --form 1 --level 1 --samples 2001");
    REQUIRE(r1.exit_code == 0);
    const Csv ground = parse_csv(r1.out);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < ground.rows.size(); ++i)
        max_abs = std::max(max_abs, std::fabs(ground.num(i, "psi")));
    int changes = 0;
    double last = 0.0;
    for (std::size_t i = 0; i < ground.rows.size(); ++i) {
        const double v = ground.num(i, "psi");
        if (std::fabs(v) <= 1e-9 * max_abs) continue;
        if (last != 0.0 && (v > 0) != (last > 0)) ++changes;
        last = v;
    }
    CHECK(changes == 0);

    auto r4 = run("wavefunction --form 2 --level 4 --samples 4001");
    REQUIRE(r4.exit_code == 0);
    const Csv fourth = parse_csv(r4.out);
    max_abs = 0.0;
    for (std::size_t i = 0; i < fourth.rows.size(); ++i)
        max_abs = std::max(max_abs, std::fabs(fourth.num(i, "psi")));
    changes = 0;
    last = 0.0;
    for (std::size_t i = 0; i < fourth.rows.size(); ++i) {
        const double v = fourth.num(i, "psi");
        if (std::fabs(v) <= 1e-9 * max_abs) continue;
        if (last != 0.0 && (v > 0) != (last > 0)) ++changes;
        last = v;
    }
    CHECK(changes == 3);

    // far-window fit of ln|psi| gives slope -a within 1%
    auto rt = run("wavefunction --form 3 --level 1 --samples 6001 --xmax 150");
    REQUIRE(rt.exit_code == 0);
    const Csv tail = parse_csv(rt.out);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < tail.rows.size(); ++i) {
        const double x = tail.num(i, "x");
        if (x < 100.0 || x > 150.0) continue;
        const double v = std::fabs(tail.num(i, "psi"));
        if (v == 0.0) continue;
        const double y = std::log(v);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    CHECK(std::fabs(slope + 1.0) <= 0.01);

    // unit norm re-measured from the emitted samples
    double norm = 0.0;
    const Csv& w = fourth;
    for (std::size_t i = 0; i + 1 < w.rows.size(); ++i) {
        const double dx = w.num(i + 1, "x") - w.num(i, "x");
        norm += 0.5 * (std::pow(w.num(i, "psi"), 2) + std::pow(w.num(i + 1, "psi"), 2)) * dx;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("svg output is written and contains the plot") {
    const auto svg_path = (g_dir / "traj.svg").string();
    auto r = run("trajectory --samples 100 --svg \"" + svg_path + "\"");
    REQUIRE(r.exit_code == 0);
    const std::string svg = slurp(svg_path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("config file sets defaults, flags override") {
    const auto cfg_path = (g_dir / "defaults.cfg").string();
    {
        std::ofstream cfg(cfg_path);
        cfg << "a = 1\n" << "energy = 3\n" << "samples = 7  # row count\n";
    }
    auto r = run("trajectory --config \"" + cfg_path + "\"");
    REQUIRE(r.exit_code == 0);
    CHECK(parse_csv(r.out).rows.size() == 7);

    auto r2 = run("trajectory --config \"" + cfg_path + "\" --samples 5");
    REQUIRE(r2.exit_code == 0);
    CHECK(parse_csv(r2.out).rows.size() == 5);
}

TEST_CASE("exit codes: usage errors give 2, solver failures 1") {
    CHECK(run("spectrum --form 9 --levels 1..2").exit_code == 2);
    CHECK(run("trajectory --a -1").exit_code == 2);
    CHECK(run("trajectory --no-such-flag 3").exit_code == 2);
    CHECK(run("spectrum --form 1 --backend nonsense").exit_code == 2);
    CHECK(run("spectrum --form 1 --backend mathieu --levels 1..2").exit_code == 2);
    CHECK(run("trajectory --out /nonexistent-dir/x.csv").exit_code == 1);
    CHECK(run("potentials --samples 9").exit_code == 0);
}

int main(int argc, char** argv) {
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_bin = argv[argc - 1];
        --argc;
    }
    if (g_bin.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest flags] <path-to-xp2>\n");
        return 1;
    }
    g_dir = std::filesystem::temp_directory_path() /
            ("xp2_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(g_dir);
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    const int rc = ctx.run();
    std::error_code ec;
    std::filesystem::remove_all(g_dir, ec);
    return rc;
}
