// Command-line front end: ingest panels, calibrate simulator specs, run
// studies, and compare frontier files.  Exit status is 0 only when the
// requested work completed with trial failures under the 1% cap; every
// failure path emits a one-line JSON error record on stderr.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mvfront/driver.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::string window;
    std::vector<std::string> dgps;
    std::vector<std::string> rules;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int reps = 0;
    int threads = 0;
};

// Config file first, then MVFRONT_OUT, then explicit flags.
mvf::RunConfig effective_config(const CommonFlags& f) {
    mvf::RunConfig cfg;
    if (!f.config_path.empty()) cfg = mvf::load_run_config(f.config_path);
    if (const char* env = std::getenv("MVFRONT_OUT"); env && *env) cfg.out = env;
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.window.empty()) cfg.window = mvf::parse_window_spec(f.window);
    if (!f.dgps.empty()) cfg.dgps = f.dgps;
    if (!f.rules.empty()) cfg.rules = f.rules;
    if (f.seed_set) cfg.master_seed = f.seed;
    if (f.reps > 0) cfg.reps = f.reps;
    if (f.threads > 0) cfg.threads = f.threads;
    return cfg;
}

mvf::ReturnsPanel load_panel(const mvf::RunConfig& cfg) {
    if (cfg.data_path.empty())
        throw std::runtime_error("no data path: pass --config with a data.path entry");
    mvf::ReturnsPanel panel = mvf::parse_industry_csv(
        cfg.data_path, mvf::ParseOptions{cfg.sentinels, cfg.block});
    return mvf::select_window(panel, cfg.window);
}

int do_ingest(const CommonFlags& f) {
    const mvf::RunConfig cfg = effective_config(f);
    const mvf::ReturnsPanel panel = load_panel(cfg);
    const std::string path =
        (std::filesystem::path(cfg.out) / "panel.csv").string();
    mvf::atomic_write(path, mvf::serialize_panel(panel));
    json summary;
    summary["rows"] = panel.dates.size();
    summary["assets"] = panel.assets;
    summary["first"] = panel.dates.front();
    summary["last"] = panel.dates.back();
    summary["output"] = path;
    std::cout << summary.dump() << "\n";
    return 0;
}

int do_calibrate(const CommonFlags& f) {
    const mvf::RunConfig cfg = effective_config(f);
    const mvf::ReturnsPanel panel = load_panel(cfg);
    json summary = json::array();
    for (const auto& name : cfg.dgps) {
        const mvf::DgpSpec spec = mvf::calibrate(
            panel.values, mvf::dgp_kind_from_string(name), cfg.calibrate_options);
        const std::string path =
            (std::filesystem::path(cfg.out) / ("spec_" + name + ".json")).string();
        mvf::atomic_write(path, mvf::dgp_spec_json(spec));
        summary.push_back({{"dgp", name}, {"output", path}});
    }
    std::cout << summary.dump() << "\n";
    return 0;
}

int do_run(const CommonFlags& f) {
    const mvf::RunConfig cfg = effective_config(f);
    const mvf::RunOutcome outcome = mvf::run_all(cfg);
    json summary;
    summary["outputs"] = outcome.manifest.outputs;
    summary["config_digest"] = outcome.manifest.config_digest;
    summary["failure_cap_exceeded"] = outcome.failure_cap_exceeded;
    std::cout << summary.dump() << "\n";
    if (outcome.failure_cap_exceeded) {
        json err;
        err["error"] = "trial failure rate exceeded the 1% cap";
        err["manifest"] = cfg.out + "/manifest.json";
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 0;
}

// Reads a frontiers CSV back into per-rule averaged curves.
std::map<std::string, mvf::AveragedCurve> read_frontiers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "rule,allocation,gamma,mean,variance,utility,sd_mean,sd_variance")
        throw std::runtime_error(path + " is not a frontiers file");
    std::map<std::string, mvf::AveragedCurve> curves;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 8 columns");
        mvf::AveragedPoint p;
        p.allocation = std::stod(cells[1]);
        p.gamma = std::stod(cells[2]);
        p.mean = std::stod(cells[3]);
        p.variance = std::stod(cells[4]);
        p.utility = std::stod(cells[5]);
        p.sd_mean = std::stod(cells[6]);
        p.sd_variance = std::stod(cells[7]);
        auto& curve = curves[cells[0]];
        curve.rule = cells[0];
        curve.points.push_back(p);
    }
    return curves;
}

int do_compare(const std::string& path_a, const std::string& path_b) {
    const auto curves_a = read_frontiers(path_a);
    const auto curves_b = read_frontiers(path_b);
    json out = json::array();
    for (const auto& [rule, curve_a] : curves_a) {
        const auto it = curves_b.find(rule);
        if (it == curves_b.end()) continue;
        const mvf::FrontierVerdict v = mvf::frontier_dominance(curve_a, it->second);
        out.push_back({{"rule", rule},
                       {"comparable", v.comparable},
                       {"a_dominates_b", v.dominates},
                       {"fraction", v.fraction},
                       {"used_points_a", v.used_points_a},
                       {"used_points_b", v.used_points_b}});
    }
    std::cout << out.dump(1) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-variance decision-rule study runner"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string compare_a, compare_b;

    const auto add_common = [&](CLI::App* sub, bool study_flags) {
        sub->add_option("--config", flags.config_path, "JSON config file");
        sub->add_option("--out", flags.out, "output directory (overrides MVFRONT_OUT)");
        sub->add_option("--window", flags.window,
                        "window spec: trailing:<n> or range:<from>-<to>");
        if (study_flags) {
            sub->add_option("--dgp", flags.dgps, "DGP kinds")->delimiter(',');
            sub->add_option("--rules", flags.rules, "decision rules")->delimiter(',');
            sub->add_option("--seed", flags.seed, "master seed")
                ->each([&](const std::string&) { flags.seed_set = true; });
            sub->add_option("--reps", flags.reps, "Monte-Carlo replications");
            sub->add_option("--threads", flags.threads, "worker count");
        }
    };

    CLI::App* ingest = app.add_subcommand("ingest", "validate and convert a panel");
    add_common(ingest, false);
    CLI::App* calibrate =
        app.add_subcommand("calibrate", "emit calibrated simulator specs as JSON");
    add_common(calibrate, true);
    CLI::App* run = app.add_subcommand("run", "run the configured study");
    add_common(run, true);
    CLI::App* compare =
        app.add_subcommand("compare", "frontier dominance between two frontier files");
    compare->add_option("a", compare_a, "first frontiers CSV")->required();
    compare->add_option("b", compare_b, "second frontiers CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return do_ingest(flags);
        if (calibrate->parsed()) return do_calibrate(flags);
        if (run->parsed()) return do_run(flags);
        if (compare->parsed()) return do_compare(compare_a, compare_b);
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
