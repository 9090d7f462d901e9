#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mvfront/dgp.hpp"
#include "mvfront/estimators.hpp"
#include "mvfront/portfolio.hpp"

namespace mvf {

// Rule identifiers in canonical report order.
const std::vector<std::string>& default_rules();

// Allocation grid 0.0, 0.2, ..., 2.0.
std::vector<double> default_allocations();

struct StudyConfig {
    DgpSpec dgp;
    std::vector<std::string> rules = default_rules();
    int reps = 10000;
    int window_t = 36;
    int threads = 1;
    std::vector<double> allocations = default_allocations();
    std::uint64_t master_seed = 0;
    int factors = 2;          // K for the factor and data-and-model rules
    double tau = 0.01;        // data-and-model confidence
    bool bayes_stein_classical = false;
};

struct AveragedPoint {
    double allocation = 0.0;
    double gamma = 0.0;
    double mean = 0.0;       // pointwise mean over trials of w'mu_true
    double variance = 0.0;   // pointwise mean over trials of w'Sigma_true w
    double utility = 0.0;    // pointwise mean over trials of the realized utility
    double sd_mean = 0.0;    // trial dispersion of the mean coordinate
    double sd_variance = 0.0;
};

struct AveragedCurve {
    std::string rule;
    std::vector<AveragedPoint> points;
    int resampled_trials = 0;        // failed attempts replaced by fresh streams
    int dropped_trials = 0;          // trials abandoned after the retry budget
    bool failure_cap_exceeded = false;  // resampled+dropped above 1% of reps
};

struct RasVerdict {
    std::string a, b;
    std::string verdict;  // "dominates", "tie", or "none"
    std::vector<double> violating_gammas;
};

struct FrontierVerdict {
    std::string a, b;
    bool comparable = false;
    bool dominates = false;
    double fraction = 0.0;   // share of variance levels with mean_a >= mean_b
    int used_points_a = 0;   // points surviving the monotone filter
    int used_points_b = 0;
};

struct StudyReport {
    std::vector<double> allocations;
    std::vector<double> gammas;
    std::vector<FrontierPoint> true_frontier;
    std::vector<AveragedCurve> curves;       // one per configured rule
    Mat loss;                                // grid x rules, percent of true utility
    std::vector<RasVerdict> ras;             // all ordered rule pairs
    std::vector<FrontierVerdict> frontier;   // all ordered rule pairs
    std::map<std::string, double> rmse;      // mean-estimator RMSE per rule
    std::map<std::string, double> rmse_ratio_to_sample;
    int reps = 0;
};

// Applies one decision rule to a sample; throws on unknown rule names.
MomentEstimate apply_rule(const std::string& rule, const Mat& r, int factors,
                          double tau, bool bayes_stein_classical);

// Frontier of the true parameters over gamma_grid(mu, sigma, allocations).
std::vector<FrontierPoint> true_frontier(const Vec& mu, const Mat& sigma,
                                         const std::vector<double>& allocations);

// One replication: simulate, estimate, optimize, evaluate under the truth.
std::vector<FrontierPoint> run_trial(const DgpSpec& spec, const std::string& rule,
                                     int window_t, const std::vector<double>& gammas,
                                     RngStream stream, int factors = 2,
                                     double tau = 0.01,
                                     bool bayes_stein_classical = false);

// Full Monte-Carlo study.  Output is bitwise deterministic in the config
// (including master_seed) and independent of cfg.threads.
StudyReport run_study(const StudyConfig& cfg);

// 100 * (true - expected) / |true|
double utility_loss(double expected_utility, double true_utility);

// a dominates b iff a's utility is >= b's at every grid gamma.
RasVerdict ras_dominance(const std::string& a, const std::vector<double>& utility_a,
                         const std::string& b, const std::vector<double>& utility_b,
                         const std::vector<double>& gammas);

// Mean-vs-variance comparison of two averaged curves over the intersection of
// their variance supports, linearly interpolated at 101 levels after a
// longest-increasing-variance filter.
FrontierVerdict frontier_dominance(const AveragedCurve& a, const AveragedCurve& b);

// RMSE of a rule's mean estimate around the spec's target mean.
double estimator_rmse(const DgpSpec& spec, const std::string& rule, int reps,
                      int window_t, std::uint64_t master_seed, int factors = 2,
                      double tau = 0.01, bool bayes_stein_classical = false);

}  // namespace mvf
