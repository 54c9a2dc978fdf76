#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shipctl/cli.hpp"
#include "shipctl/config.hpp"
#include "shipctl/csv.hpp"
#include "shipctl/numfmt.hpp"
#include "shipctl/sim.hpp"
#include "shipctl/svg.hpp"

using namespace shipctl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"shipsim"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("shipctl_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("parse_config: required fields and mode handling") {
    try {
        parse_config("", Mode::stabilize);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("missing init") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("init = 0 0 0 0 0 0\n"), ConfigError);  // no mode
    CHECK_THROWS_AS(parse_config("mode = track\ninit = 0 0 0 0 0 0\n"),
                    ConfigError);  // track needs ref_init
    CHECK_THROWS_AS(parse_config("mode = drift\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode = track\n", Mode::stabilize), ConfigError);

    const Scenario sc =
        parse_config("mode = stabilize\ninit = -2 2 0 0 0 0\n");
    CHECK(sc.mode == Mode::stabilize);
    CHECK(sc.init == ShipState{-2, 2, 0, 0, 0, 0});
    CHECK(sc.params == ShipParams::defaults());
    CHECK(sc.stab_gains == StabGains{});
    CHECK(sc.horizon() == 300.0);
}

TEST_CASE("parse_config: errors carry line numbers") {
    try {
        parse_config("init = -2 2 0 0 0 0\nk1 = -1\n", Mode::stabilize);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("k1") != std::string::npos);
    }
    try {
        parse_config("# comment\n\nwhatever = 3\n", Mode::stabilize);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
    }
    try {
        parse_config("step = fast\n", Mode::stabilize);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 1);
    }
    CHECK_THROWS_AS(parse_config("init = 1 2 3\n", Mode::stabilize), ConfigError);
    CHECK_THROWS_AS(parse_config("step = inf\ninit = 0 0 0 0 0 0\n", Mode::stabilize),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("m23 = 0\ninit = 0 0 0 0 0 0\n", Mode::stabilize),
                    ConfigError);  // whole-model invariant after parsing
    CHECK_THROWS_AS(
        parse_config("dither_amp = 3\ninit = 0 0 0 0 0 0\nref_init = 0 0 0 1 0 0\n",
                     Mode::track),
        ConfigError);
}

TEST_CASE("parse_config: comments, spacing, repeated keys") {
    const Scenario sc = parse_config(
        "  mode = track   # tracking run\n"
        "init =  0   40 0 0 0 0\n"
        "ref_init = 0 0 0.39269908169872414 4 0 0\n"
        "k1 = 2\n"
        "k1 = 1\n"  // last one wins
        "duration = 120\n",
        Mode::track);
    CHECK(sc.track_gains.k1 == 1.0);
    CHECK(sc.ref_init.psi == doctest::Approx(0.39269908169872414).epsilon(1e-16));
    CHECK(sc == presets::track_line());
}

TEST_CASE("parse_config round-trips dump_config") {
    for (Scenario sc : {presets::stabilize_offset(), presets::stabilize_lateral(),
                        presets::track_line(), presets::track_circle()}) {
        const Scenario back = parse_config(dump_config(sc));
        CHECK(back == sc);
    }
    Scenario ref;
    ref.mode = Mode::reference;
    ref.ref_init = {-2, 1, 0, 0.2, -0.32, 0.188};
    ref.duration = 50;
    CHECK(parse_config(dump_config(ref)) == ref);
}

TEST_CASE("shipped scenario files parse to the built-in presets") {
    const fs::path dir = SCENARIO_DIR;
    CHECK(parse_config(slurp(dir / "stabilize_offset.cfg")) ==
          presets::stabilize_offset());
    CHECK(parse_config(slurp(dir / "stabilize_lateral.cfg")) ==
          presets::stabilize_lateral());
    CHECK(parse_config(slurp(dir / "track_line.cfg")) == presets::track_line());
    CHECK(parse_config(slurp(dir / "track_circle.cfg")) == presets::track_circle());
}

TEST_CASE("write_csv: header, row count, lossless values") {
    Scenario sc = presets::stabilize_offset();
    sc.duration = 0.02;  // 3 samples
    const TimeSeries ts = simulate(sc);
    std::ostringstream os;
    write_csv(ts, os);
    const std::string body = os.str();

    std::istringstream is(body);
    std::string line;
    std::getline(is, line);
    CHECK(line ==
          "t,x,y,psi,u,v,r,tau_u,tau_r,tau1,tau2,xbar,ybar,vbar,z,ubar,L1,L2,D1,D2");
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);

    // spot check: the psi cell of the second row parses back bit-exactly
    std::istringstream is2(body);
    std::getline(is2, line);
    std::getline(is2, line);
    std::getline(is2, line);
    std::size_t start = 0;
    for (int col = 0; col < 3; ++col) start = line.find(',', start) + 1;
    const std::string cell = line.substr(start, line.find(',', start) - start);
    double parsed = 0;
    std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
    CHECK(parsed == ts.state[1].psi);
}

TEST_CASE("write_csv: empty series emits just the header") {
    TimeSeries ts;
    ts.mode = Mode::track;
    std::ostringstream os;
    write_csv(ts, os);
    CHECK(os.str() == csv_header(Mode::track) + "\n");
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, -0.0, 1.0 / 3.0, 0.085529585798816568, -2.845374908611328,
                     1e-300, 6.02e23}) {
        const std::string s = format_double(v);
        double back = 0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
}

TEST_CASE("render_svg: structure, determinism, validation") {
    std::vector<PlotSeries> series(1);
    series[0].label = "path";
    series[0].x = {0.0, 1.0};
    series[0].y = {0.0, 2.0};
    const std::string svg = render_svg(series, {});
    std::size_t polylines = 0;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos;
         p = svg.find("<polyline", p + 1))
        ++polylines;
    CHECK(polylines == 1);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg == render_svg(series, {}));

    series[0].x = {0.0};
    series[0].y = {0.0};
    CHECK_THROWS_AS(render_svg(series, {}), std::invalid_argument);
    series[0].x = {0.0, 1.0};
    series[0].y = {0.0};
    CHECK_THROWS_AS(render_svg(series, {}), std::invalid_argument);
    series[0].x = {0.0, std::numeric_limits<double>::quiet_NaN()};
    series[0].y = {0.0, 1.0};
    CHECK_THROWS_AS(render_svg(series, {}), std::invalid_argument);
    CHECK_THROWS_AS(render_svg(std::vector<PlotSeries>{}, {}),
                    std::invalid_argument);
}

TEST_CASE("render_svg: flat series still get a usable axis range") {
    std::vector<PlotSeries> series(1);
    series[0].label = "level";
    for (int i = 0; i < 5; ++i) {
        series[0].x.push_back(i);
        series[0].y.push_back(3.0);
    }
    CHECK_NOTHROW(render_svg(series, {"t", "s", "y"}));
}

TEST_CASE("cli: exit codes") {
    CHECK(run_cli({"definitely-not-a-command"}) == 2);
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"stabilize"}) == 2);                      // missing --config
    CHECK(run_cli({"stabilize", "--config", "/no/such/file.cfg"}) == 2);
    CHECK(run_cli({"--help"}) == 0);

    TempDir tmp;
    std::ofstream(tmp.path / "bad.cfg") << "mode = stabilize\nk1 = -1\n";
    CHECK(run_cli({"stabilize", "--config", (tmp.path / "bad.cfg").string()}) == 2);
}

TEST_CASE("cli: end-to-end run writes csv and svg") {
    TempDir tmp;
    Scenario quick = presets::track_circle();
    quick.duration = 2.0;
    std::ofstream(tmp.path / "run.cfg") << dump_config(quick);
    const std::string csv = (tmp.path / "run.csv").string();
    const std::string svg = (tmp.path / "run.svg").string();
    CHECK(run_cli({"track", "--config", (tmp.path / "run.cfg").string(), "--out", csv,
                   "--svg", svg}) == 0);
    const std::string body = slurp(csv);
    CHECK(body.rfind(csv_header(Mode::track), 0) == 0);
    CHECK(slurp(svg).find("<polyline") != std::string::npos);

    // duration override shortens the run
    CHECK(run_cli({"track", "--config", (tmp.path / "run.cfg").string(), "--out", csv,
                   "--duration", "1"}) == 0);
    std::istringstream is(slurp(csv));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 102);  // header + 101 samples
}

TEST_CASE("write_csv: unwritable path reports an I/O failure") {
    Scenario sc = presets::stabilize_offset();
    sc.duration = 0.02;
    const TimeSeries ts = simulate(sc);
    CHECK_THROWS_AS(write_csv(ts, "/no/such/dir/out.csv"), SimError);
}

TEST_CASE("converged tracking run: reference and ship paths end together") {
    TempDir tmp;
    std::ofstream(tmp.path / "line.cfg") << dump_config(presets::track_line());
    const std::string svg = (tmp.path / "line.svg").string();
    REQUIRE(run_cli({"track", "--config", (tmp.path / "line.cfg").string(), "--svg",
                     svg}) == 0);
    const std::string body = slurp(svg);

    // last coordinate pair of each polyline
    std::vector<std::pair<double, double>> finals;
    for (std::size_t p = body.find("points=\""); p != std::string::npos;
         p = body.find("points=\"", p + 1)) {
        const std::size_t start = p + 8;
        const std::size_t end = body.find('"', start);
        const std::string pts = body.substr(start, end - start);
        const std::size_t sp = pts.rfind(' ');
        const std::string last = pts.substr(sp + 1);
        const std::size_t comma = last.find(',');
        finals.emplace_back(std::stod(last.substr(0, comma)),
                            std::stod(last.substr(comma + 1)));
    }
    REQUIRE(finals.size() == 2);
    CHECK(std::abs(finals[0].first - finals[1].first) < 1.0);   // within a pixel
    CHECK(std::abs(finals[0].second - finals[1].second) < 1.0);
}
