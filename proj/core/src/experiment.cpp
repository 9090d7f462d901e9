#include "mvfront/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mvfront/estimators.hpp"

namespace mvf {

namespace {

constexpr int kMaxAttempts = 64;

struct TrialBuffers {
    // One row per trial: G x (mean, variance, utility), then squared mean error.
    Mat values;           // reps x 3G
    Vec sq_mean_error;    // reps
    std::vector<char> ok;
    std::atomic<int> resampled{0};
    std::atomic<int> dropped{0};
};

double pairwise_mean(const Vec& x) {
    return pairwise_sum(x.data(), x.size()) / static_cast<double>(x.size());
}

}  // namespace

const std::vector<std::string>& default_rules() {
    static const std::vector<std::string> rules = {
        "sample",        "bayes_stein",    "factor",
        "linear_shrink", "data_and_model", "nonlinear_shrink"};
    return rules;
}

std::vector<double> default_allocations() {
    std::vector<double> a(11);
    for (int i = 0; i < 11; ++i) a[i] = 0.2 * i;
    return a;
}

MomentEstimate apply_rule(const std::string& rule, const Mat& r, int factors,
                          double tau, bool bayes_stein_classical) {
    if (rule == "sample") return sample_moments(r);
    if (rule == "bayes_stein")
        return bayes_stein(r, BayesSteinOptions{bayes_stein_classical}).first;
    if (rule == "factor") return factor_moments(pca_factors(r, factors));
    if (rule == "linear_shrink") return linear_shrinkage(r).first;
    if (rule == "data_and_model") return data_and_model(r, factors, tau).first;
    if (rule == "nonlinear_shrink") return nonlinear_shrinkage(r).first;
    throw std::invalid_argument("unknown decision rule: " + rule);
}

std::vector<FrontierPoint> true_frontier(const Vec& mu, const Mat& sigma,
                                         const std::vector<double>& allocations) {
    const std::vector<double> gammas = gamma_grid(mu, sigma, allocations);
    const TwoFund tf = two_fund_portfolios(mu, sigma);
    std::vector<FrontierPoint> pts;
    pts.reserve(gammas.size());
    for (double g : gammas)
        pts.push_back(evaluate_frontier_point(optimal_weights(tf, g), mu, sigma, g));
    return pts;
}

namespace {

std::vector<FrontierPoint> trial_curve(const MomentEstimate& est,
                                       const std::vector<double>& gammas,
                                       const Vec& mu_true, const Mat& sigma_true) {
    const TwoFund tf = two_fund_portfolios(est.mu, est.sigma);
    std::vector<FrontierPoint> pts;
    pts.reserve(gammas.size());
    for (double g : gammas)
        pts.push_back(
            evaluate_frontier_point(optimal_weights(tf, g), mu_true, sigma_true, g));
    return pts;
}

}  // namespace

std::vector<FrontierPoint> run_trial(const DgpSpec& spec, const std::string& rule,
                                     int window_t, const std::vector<double>& gammas,
                                     RngStream stream, int factors, double tau,
                                     bool bayes_stein_classical) {
    const Mat r = simulate(spec, window_t, stream);
    const MomentEstimate est = apply_rule(rule, r, factors, tau, bayes_stein_classical);
    return trial_curve(est, gammas, spec.mu, spec.sigma);
}

double utility_loss(double expected_utility, double true_utility) {
    if (std::abs(true_utility) < 1e-15)
        throw std::invalid_argument("true utility is numerically zero; loss undefined");
    return 100.0 * (true_utility - expected_utility) / std::abs(true_utility);
}

RasVerdict ras_dominance(const std::string& a, const std::vector<double>& utility_a,
                         const std::string& b, const std::vector<double>& utility_b,
                         const std::vector<double>& gammas) {
    if (utility_a.size() != gammas.size() || utility_b.size() != gammas.size())
        throw std::invalid_argument("utility rows do not match the gamma grid");
    RasVerdict v;
    v.a = a;
    v.b = b;
    bool a_ge = true, b_ge = true;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (utility_a[i] < utility_b[i]) {
            a_ge = false;
            v.violating_gammas.push_back(gammas[i]);
        }
        if (utility_b[i] < utility_a[i]) b_ge = false;
    }
    v.verdict = a_ge ? (b_ge ? "tie" : "dominates") : "none";
    return v;
}

namespace {

// Longest subsequence with strictly increasing variance; earliest chain on
// ties so the filter is deterministic.
std::vector<int> monotone_filter(const std::vector<AveragedPoint>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> len(n, 1), prev(n, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (pts[j].variance < pts[i].variance && len[j] + 1 > len[i]) {
                len[i] = len[j] + 1;
                prev[i] = j;
            }
    int best = 0;
    for (int i = 1; i < n; ++i)
        if (len[i] > len[best]) best = i;
    std::vector<int> chain;
    for (int i = best; i >= 0; i = prev[i]) {
        chain.push_back(i);
        if (prev[i] < 0) break;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

double interp_mean(const std::vector<AveragedPoint>& pts, const std::vector<int>& idx,
                   double v) {
    if (idx.size() == 1) return pts[idx[0]].mean;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const auto& p0 = pts[idx[k]];
        const auto& p1 = pts[idx[k + 1]];
        if (v <= p1.variance || k + 2 == idx.size()) {
            const double w = (v - p0.variance) / (p1.variance - p0.variance);
            return p0.mean + w * (p1.mean - p0.mean);
        }
    }
    return pts[idx.back()].mean;  // unreachable
}

}  // namespace

FrontierVerdict frontier_dominance(const AveragedCurve& a, const AveragedCurve& b) {
    FrontierVerdict v;
    v.a = a.rule;
    v.b = b.rule;
    if (a.points.empty() || b.points.empty())
        throw std::invalid_argument("empty frontier curve");
    const std::vector<int> ia = monotone_filter(a.points);
    const std::vector<int> ib = monotone_filter(b.points);
    v.used_points_a = static_cast<int>(ia.size());
    v.used_points_b = static_cast<int>(ib.size());
    const double lo =
        std::max(a.points[ia.front()].variance, b.points[ib.front()].variance);
    const double hi =
        std::min(a.points[ia.back()].variance, b.points[ib.back()].variance);
    if (lo > hi) {
        v.comparable = false;
        return v;
    }
    v.comparable = true;
    constexpr int kLevels = 101;
    int wins = 0;
    bool all = true;
    for (int k = 0; k < kLevels; ++k) {
        const double t = kLevels == 1 ? 0.0 : static_cast<double>(k) / (kLevels - 1);
        const double level = lo + t * (hi - lo);
        const double ma = interp_mean(a.points, ia, level);
        const double mb = interp_mean(b.points, ib, level);
        if (ma >= mb)
            ++wins;
        else
            all = false;
    }
    v.fraction = static_cast<double>(wins) / kLevels;
    v.dominates = all;
    return v;
}

StudyReport run_study(const StudyConfig& cfg) {
    validate(cfg.dgp);
    if (cfg.reps < 1) throw std::invalid_argument("reps must be at least 1");
    const int n = static_cast<int>(cfg.dgp.mu.size());
    if (cfg.window_t < n + 3)
        throw std::invalid_argument("window_t must be at least N+3");
    if (cfg.rules.empty()) throw std::invalid_argument("no rules configured");
    if (cfg.allocations.empty()) throw std::invalid_argument("no allocations configured");

    const int reps = cfg.reps;
    const int g = static_cast<int>(cfg.allocations.size());
    const int nrules = static_cast<int>(cfg.rules.size());

    StudyReport rep;
    rep.allocations = cfg.allocations;
    rep.gammas = gamma_grid(cfg.dgp.mu, cfg.dgp.sigma, cfg.allocations);
    rep.true_frontier = true_frontier(cfg.dgp.mu, cfg.dgp.sigma, cfg.allocations);
    rep.reps = reps;

    std::vector<TrialBuffers> buf(nrules);
    for (auto& b : buf) {
        b.values.resize(reps, 3 * g);
        b.sq_mean_error.resize(reps);
        b.ok.assign(reps, 0);
    }

    const auto worker = [&](std::atomic<long>& next) {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= reps) return;
            Mat base;  // lazily simulated; shared by all rules for this trial
            bool have_base = false;
            for (int rix = 0; rix < nrules; ++rix) {
                auto& b = buf[rix];
                for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
                    try {
                        const std::uint64_t stream_index =
                            static_cast<std::uint64_t>(i) +
                            static_cast<std::uint64_t>(attempt) *
                                static_cast<std::uint64_t>(reps);
                        const Mat* r = nullptr;
                        Mat retry;
                        if (attempt == 0) {
                            if (!have_base) {
                                base = simulate(cfg.dgp, cfg.window_t,
                                                {cfg.master_seed, stream_index});
                                have_base = true;
                            }
                            r = &base;
                        } else {
                            retry = simulate(cfg.dgp, cfg.window_t,
                                             {cfg.master_seed, stream_index});
                            r = &retry;
                        }
                        const MomentEstimate est =
                            apply_rule(cfg.rules[rix], *r, cfg.factors, cfg.tau,
                                       cfg.bayes_stein_classical);
                        const TwoFund tf = two_fund_portfolios(est.mu, est.sigma);
                        for (int k = 0; k < g; ++k) {
                            const FrontierPoint p = evaluate_frontier_point(
                                optimal_weights(tf, rep.gammas[k]), cfg.dgp.mu,
                                cfg.dgp.sigma, rep.gammas[k]);
                            b.values(i, 3 * k) = p.mean;
                            b.values(i, 3 * k + 1) = p.variance;
                            b.values(i, 3 * k + 2) = p.utility;
                        }
                        b.sq_mean_error[i] = (est.mu - cfg.dgp.mu).squaredNorm();
                        b.ok[i] = 1;
                        break;
                    } catch (const std::exception&) {
                        if (attempt + 1 == kMaxAttempts)
                            b.dropped.fetch_add(1);
                        else
                            b.resampled.fetch_add(1);
                    }
                }
            }
        }
    };

    std::atomic<long> next{0};
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        worker(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) pool.emplace_back([&] { worker(next); });
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction: per-column pairwise sums in trial order.
    rep.loss.resize(g, nrules);
    const int cap = std::max(1, reps / 100);
    for (int rix = 0; rix < nrules; ++rix) {
        auto& b = buf[rix];
        AveragedCurve curve;
        curve.rule = cfg.rules[rix];
        curve.resampled_trials = b.resampled.load();
        curve.dropped_trials = b.dropped.load();
        curve.failure_cap_exceeded = curve.resampled_trials + curve.dropped_trials > cap;

        std::vector<double> col;
        col.reserve(reps);
        const auto gather = [&](int j) {
            col.clear();
            for (int i = 0; i < reps; ++i)
                if (b.ok[i]) col.push_back(b.values(i, j));
        };
        curve.points.resize(g);
        for (int k = 0; k < g; ++k) {
            AveragedPoint& p = curve.points[k];
            p.allocation = cfg.allocations[k];
            p.gamma = rep.gammas[k];
            double m[3] = {0, 0, 0}, sd[2] = {0, 0};
            for (int f = 0; f < 3; ++f) {
                gather(3 * k + f);
                if (col.empty())
                    throw std::runtime_error("all trials failed for rule " + curve.rule);
                const auto cnt = static_cast<double>(col.size());
                m[f] = pairwise_sum(col.data(), static_cast<std::ptrdiff_t>(col.size())) / cnt;
                if (f < 2) {
                    for (auto& x : col) x = (x - m[f]) * (x - m[f]);
                    sd[f] = col.size() > 1
                                ? std::sqrt(pairwise_sum(col.data(),
                                                         static_cast<std::ptrdiff_t>(
                                                             col.size())) /
                                            (cnt - 1.0))
                                : 0.0;
                }
            }
            p.mean = m[0];
            p.variance = m[1];
            p.utility = m[2];
            p.sd_mean = sd[0];
            p.sd_variance = sd[1];
            rep.loss(k, rix) = utility_loss(p.utility, rep.true_frontier[k].utility);
        }
        {
            col.clear();
            for (int i = 0; i < reps; ++i)
                if (b.ok[i]) col.push_back(b.sq_mean_error[i]);
            rep.rmse[curve.rule] = std::sqrt(
                pairwise_sum(col.data(), static_cast<std::ptrdiff_t>(col.size())) /
                static_cast<double>(col.size()));
        }
        rep.curves.push_back(std::move(curve));
    }

    if (rep.rmse.count("sample") && rep.rmse.at("sample") > 0.0)
        for (const auto& [rule, value] : rep.rmse)
            rep.rmse_ratio_to_sample[rule] = value / rep.rmse.at("sample");

    for (int i = 0; i < nrules; ++i)
        for (int j = 0; j < nrules; ++j) {
            if (i == j) continue;
            std::vector<double> ua(g), ub(g);
            for (int k = 0; k < g; ++k) {
                ua[k] = rep.curves[i].points[k].utility;
                ub[k] = rep.curves[j].points[k].utility;
            }
            rep.ras.push_back(
                ras_dominance(cfg.rules[i], ua, cfg.rules[j], ub, rep.gammas));
            rep.frontier.push_back(frontier_dominance(rep.curves[i], rep.curves[j]));
        }
    return rep;
}

double estimator_rmse(const DgpSpec& spec, const std::string& rule, int reps,
                      int window_t, std::uint64_t master_seed, int factors, double tau,
                      bool bayes_stein_classical) {
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    Vec sq(reps);
    for (int i = 0; i < reps; ++i) {
        bool done = false;
        for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
            try {
                const std::uint64_t stream_index =
                    static_cast<std::uint64_t>(i) +
                    static_cast<std::uint64_t>(attempt) * static_cast<std::uint64_t>(reps);
                const Mat r = simulate(spec, window_t, {master_seed, stream_index});
                const MomentEstimate est =
                    apply_rule(rule, r, factors, tau, bayes_stein_classical);
                sq[i] = (est.mu - spec.mu).squaredNorm();
                done = true;
            } catch (const std::exception&) {
            }
        }
        if (!done) throw std::runtime_error("trial failed repeatedly for rule " + rule);
    }
    return std::sqrt(pairwise_mean(sq));
}

}  // namespace mvf
