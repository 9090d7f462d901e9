#include "mvfront/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mvf {

using nlohmann::json;

std::string fnv1a64_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string frontiers_csv(const StudyReport& report) {
    std::ostringstream os;
    os << "rule,allocation,gamma,mean,variance,utility,sd_mean,sd_variance\n";
    const auto row = [&](const std::string& rule, double a, const FrontierPoint& p,
                         double sd_m, double sd_v) {
        os << rule << ',' << format_sig(a) << ',' << format_sig(p.gamma) << ','
           << format_sig(p.mean) << ',' << format_sig(p.variance) << ','
           << format_sig(p.utility) << ',' << format_sig(sd_m) << ','
           << format_sig(sd_v) << '\n';
    };
    for (std::size_t k = 0; k < report.true_frontier.size(); ++k)
        row("true", report.allocations[k], report.true_frontier[k], 0.0, 0.0);
    for (const auto& curve : report.curves)
        for (const auto& p : curve.points) {
            FrontierPoint fp{p.gamma, p.mean, p.variance, p.utility};
            row(curve.rule, p.allocation, fp, p.sd_mean, p.sd_variance);
        }
    return os.str();
}

std::string loss_table_csv(const StudyReport& report) {
    std::ostringstream os;
    os << "gamma";
    for (const auto& curve : report.curves) os << ',' << curve.rule;
    os << '\n';
    for (std::size_t k = 0; k < report.gammas.size(); ++k) {
        os << format_sig(report.gammas[k]);
        for (std::size_t r = 0; r < report.curves.size(); ++r)
            os << ',' << format_sig(report.loss(static_cast<Eigen::Index>(k),
                                                static_cast<Eigen::Index>(r)));
        os << '\n';
    }
    return os.str();
}

std::string dominance_json(const StudyReport& report, const std::string& dgp_name) {
    json j;
    j["dgp"] = dgp_name;
    j["reps"] = report.reps;
    j["ras"] = json::array();
    for (const auto& v : report.ras)
        j["ras"].push_back({{"a", v.a},
                            {"b", v.b},
                            {"verdict", v.verdict},
                            {"violating_gammas", v.violating_gammas}});
    j["frontier"] = json::array();
    for (const auto& v : report.frontier)
        j["frontier"].push_back({{"a", v.a},
                                 {"b", v.b},
                                 {"comparable", v.comparable},
                                 {"dominates", v.dominates},
                                 {"fraction", v.fraction},
                                 {"used_points_a", v.used_points_a},
                                 {"used_points_b", v.used_points_b}});
    j["rmse"] = report.rmse;
    j["rmse_ratio_to_sample"] = report.rmse_ratio_to_sample;
    json failures;
    for (const auto& curve : report.curves)
        failures[curve.rule] = {{"resampled", curve.resampled_trials},
                                {"dropped", curve.dropped_trials},
                                {"cap_exceeded", curve.failure_cap_exceeded}};
    j["trial_failures"] = failures;
    return j.dump(1) + "\n";
}

std::string plot_csv(const StudyReport& report, const std::string& dgp_name) {
    std::ostringstream os;
    os << "dgp,rule,allocation,gamma,field,value\n";
    const auto rows = [&](const std::string& rule, double a, double gamma,
                          std::initializer_list<std::pair<const char*, double>> fields) {
        for (const auto& [field, value] : fields)
            os << dgp_name << ',' << rule << ',' << format_sig(a) << ','
               << format_sig(gamma) << ',' << field << ',' << format_sig(value) << '\n';
    };
    for (std::size_t k = 0; k < report.true_frontier.size(); ++k) {
        const auto& p = report.true_frontier[k];
        rows("true", report.allocations[k], p.gamma,
             {{"mean", p.mean}, {"variance", p.variance}, {"utility", p.utility}});
    }
    for (const auto& curve : report.curves)
        for (const auto& p : curve.points)
            rows(curve.rule, p.allocation, p.gamma,
                 {{"mean", p.mean},
                  {"variance", p.variance},
                  {"utility", p.utility},
                  {"sd_mean", p.sd_mean},
                  {"sd_variance", p.sd_variance}});
    return os.str();
}

std::string manifest_json(const RunManifest& m) {
    json j;
    j["config_digest"] = m.config_digest;
    j["master_seed"] = m.master_seed;
    j["code_version"] = m.code_version;
    j["started"] = m.started;
    j["finished"] = m.finished;
    json failures;
    for (const auto& [dgp, rules] : m.trial_failures) {
        json per_rule;
        for (const auto& [rule, counts] : rules)
            per_rule[rule] = {{"resampled", counts.first}, {"dropped", counts.second}};
        failures[dgp] = per_rule;
    }
    j["trial_failures"] = failures;
    j["outputs"] = m.outputs;
    return j.dump(1) + "\n";
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string current_utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace mvf
