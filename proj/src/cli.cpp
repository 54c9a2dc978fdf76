#include "shipctl/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shipctl/config.hpp"
#include "shipctl/csv.hpp"
#include "shipctl/sim.hpp"
#include "shipctl/svg.hpp"
#include "shipctl/verify.hpp"

namespace shipctl::cli {

namespace {

struct RunOptions {
    std::string config_path;
    std::string out_path;
    std::string svg_path;
    double duration = -1;
    double step = -1;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError(0, "cannot read config file '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_path_plot(const TimeSeries& ts, const std::string& path) {
    std::vector<PlotSeries> series;
    if (ts.mode == Mode::track) {
        PlotSeries ref{"reference", {}, {}};
        for (const RefSignals& q : ts.ref) {
            ref.x.push_back(q.state.x);
            ref.y.push_back(q.state.y);
        }
        series.push_back(std::move(ref));
    }
    PlotSeries ship{ts.mode == Mode::reference ? "reference" : "ship", {}, {}};
    for (const ShipState& s : ts.state) {
        ship.x.push_back(s.x);
        ship.y.push_back(s.y);
    }
    series.push_back(std::move(ship));
    AxesSpec axes;
    axes.title = std::string(to_string(ts.mode)) + " run: geometric path";
    axes.x_label = "x [m]";
    axes.y_label = "y [m]";
    emit_svg(series, path, axes);
}

int run_scenario(Mode mode, const RunOptions& opt) {
    Scenario sc = parse_config(read_file(opt.config_path), mode);
    if (opt.duration > 0) sc.duration = opt.duration;
    if (opt.step > 0) sc.step = opt.step;
    sc.validate();

    const TimeSeries ts = simulate(sc);

    if (ts.pe && !ts.pe->ok)
        std::cerr << "warning: reference fails the persistent-excitation check "
                     "(tail infimum "
                  << ts.pe->tail_infimum << " < threshold " << sc.pe_threshold
                  << "); tracking convergence is not guaranteed\n";

    if (!opt.out_path.empty()) write_csv(ts, opt.out_path);
    if (!opt.svg_path.empty()) write_path_plot(ts, opt.svg_path);

    const ShipState& f = ts.state.back();
    std::cout << to_string(sc.mode) << ": " << ts.size() << " samples, step "
              << sc.step << " s, horizon " << sc.horizon() << " s\n";
    if (ts.mode == Mode::track)
        std::cout << "  error norm " << ts.track.front().err_norm << " -> "
                  << ts.track.back().err_norm << "\n";
    else
        std::cout << "  final state (" << f.x << ", " << f.y << ", " << f.psi << ", "
                  << f.u << ", " << f.v << ", " << f.r << ")\n";
    if (!opt.out_path.empty()) std::cout << "  csv: " << opt.out_path << "\n";
    if (!opt.svg_path.empty()) std::cout << "  svg: " << opt.svg_path << "\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"underactuated-ship control simulator: time-varying point "
                 "stabilization and trajectory tracking with Lyapunov monitors"};
    app.require_subcommand(1);

    RunOptions opt;
    Mode mode = Mode::stabilize;
    auto add_run_cmd = [&](const char* name, const char* help, Mode m) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "scenario config file")
            ->required();
        sub->add_option("--out", opt.out_path, "write the run as CSV");
        sub->add_option("--svg", opt.svg_path, "write the geometric path plot as SVG");
        sub->add_option("--duration", opt.duration, "override horizon [s]")
            ->check(CLI::PositiveNumber);
        sub->add_option("--step", opt.step, "override integration step [s]")
            ->check(CLI::PositiveNumber);
        sub->callback([&, m] { mode = m; });
        return sub;
    };
    add_run_cmd("stabilize", "drive the ship to the origin", Mode::stabilize);
    add_run_cmd("track", "track a reference trajectory", Mode::track);
    add_run_cmd("reference", "integrate the reference model only", Mode::reference);
    CLI::App* ver =
        app.add_subcommand("verify", "run the full verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (ver->parsed()) {
            const auto results = verify::run_all(std::cout, argv[0]);
            return verify::failures(results) == 0 ? 0 : 1;
        }
        return run_scenario(mode, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace shipctl::cli
