#pragma once

#include <string>
#include <vector>

#include "mvfront/dgp.hpp"
#include "mvfront/panel.hpp"
#include "mvfront/report.hpp"

namespace mvf {

// Whole-run configuration as read from the JSON config file; command-line
// overrides are applied before execution.
struct RunConfig {
    // data section
    std::string data_path;
    WindowSpec window{.trailing = 120};
    SentinelPolicy sentinels = SentinelPolicy::reject;
    std::optional<int> block;

    // study section
    std::vector<std::string> dgps{"mvg"};
    std::vector<std::string> rules = default_rules();
    int reps = 10000;
    int window_t = 36;
    int threads = 1;
    std::uint64_t master_seed = 1;
    std::vector<double> allocations = default_allocations();

    // rule options
    double tau = 0.01;
    int factors = 2;
    bool bayes_stein_classical = false;

    // dgp options
    CalibrateOptions calibrate_options;

    std::string out = "reports";
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// DgpSpec as a JSON document with kind-specific parameter blocks;
// dgp_spec_from_json(dgp_spec_json(s)) reproduces s exactly.
std::string dgp_spec_json(const DgpSpec& spec);
DgpSpec dgp_spec_from_json(const std::string& text);

// Canonical JSON image of the effective configuration; its digest goes into
// the manifest.
std::string canonical_config_text(const RunConfig& cfg);

struct RunOutcome {
    RunManifest manifest;
    std::vector<std::string> files;  // absolute or out-relative paths written
    bool failure_cap_exceeded = false;
};

// Full pipeline: parse panel, select window, calibrate each requested DGP,
// run the study, write frontiers/loss/dominance/plot files per DGP plus the
// manifest.  Partial outputs are removed on failure.
RunOutcome run_all(const RunConfig& cfg);

}  // namespace mvf
