#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mvfront/experiment.hpp"

namespace mvf {

inline constexpr const char* kCodeVersion = "mvfront 0.1.0";

// Reproducibility record emitted next to every report set.
struct RunManifest {
    std::string config_digest;
    std::uint64_t master_seed = 0;
    std::string code_version = kCodeVersion;
    std::string started;   // ISO 8601 UTC
    std::string finished;  // ISO 8601 UTC
    // dgp -> rule -> (resampled, dropped)
    std::map<std::string, std::map<std::string, std::pair<int, int>>> trial_failures;
    std::vector<std::string> outputs;
};

// FNV-1a 64-bit digest, lowercase hex.
std::string fnv1a64_hex(const std::string& text);

// Fixed 12-significant-digit decimal formatting used by every CSV writer.
std::string format_sig(double v);

// rule,allocation,gamma,mean,variance,utility,sd_mean,sd_variance; the true
// frontier appears as rule "true" with zero dispersion.
std::string frontiers_csv(const StudyReport& report);

// gamma column followed by one percentage-loss column per rule.
std::string loss_table_csv(const StudyReport& report);

// RAS and frontier verdicts, RMSE ratios, failure counters.
std::string dominance_json(const StudyReport& report, const std::string& dgp_name);

// Long-format series (dgp,rule,allocation,gamma,field,value) for plotting.
std::string plot_csv(const StudyReport& report, const std::string& dgp_name);

std::string manifest_json(const RunManifest& manifest);

// Write-temp-then-rename; creates parent directories.
void atomic_write(const std::string& path, const std::string& content);

std::string current_utc_timestamp();

}  // namespace mvf
