#include "mvfront/driver.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mvf {

using nlohmann::json;

namespace {

WindowSpec window_from_json(const json& j) {
    if (j.is_string()) return parse_window_spec(j.get<std::string>());
    throw std::runtime_error("data.window must be a string spec");
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    if (j.contains("data")) {
        const auto& d = j.at("data");
        if (d.contains("path")) cfg.data_path = d.at("path").get<std::string>();
        if (d.contains("window")) cfg.window = window_from_json(d.at("window"));
        if (d.contains("sentinel_policy")) {
            const auto p = d.at("sentinel_policy").get<std::string>();
            if (p == "reject")
                cfg.sentinels = SentinelPolicy::reject;
            else if (p == "drop")
                cfg.sentinels = SentinelPolicy::drop;
            else
                throw std::runtime_error("sentinel_policy must be reject or drop");
        }
        if (d.contains("block")) cfg.block = d.at("block").get<int>();
    }
    if (j.contains("study")) {
        const auto& s = j.at("study");
        if (s.contains("dgps")) cfg.dgps = s.at("dgps").get<std::vector<std::string>>();
        if (s.contains("rules")) cfg.rules = s.at("rules").get<std::vector<std::string>>();
        if (s.contains("reps")) cfg.reps = s.at("reps").get<int>();
        if (s.contains("window_t")) cfg.window_t = s.at("window_t").get<int>();
        if (s.contains("threads")) cfg.threads = s.at("threads").get<int>();
        if (s.contains("master_seed"))
            cfg.master_seed = s.at("master_seed").get<std::uint64_t>();
        if (s.contains("allocations"))
            cfg.allocations = s.at("allocations").get<std::vector<double>>();
    }
    if (j.contains("rule_options")) {
        const auto& r = j.at("rule_options");
        if (r.contains("tau")) cfg.tau = r.at("tau").get<double>();
        if (r.contains("factors")) cfg.factors = r.at("factors").get<int>();
        if (r.contains("bayes_stein_constant")) {
            const auto c = r.at("bayes_stein_constant").get<std::string>();
            if (c == "classical")
                cfg.bayes_stein_classical = true;
            else if (c != "published")
                throw std::runtime_error(
                    "bayes_stein_constant must be published or classical");
        }
    }
    if (j.contains("dgp_options")) {
        const auto& d = j.at("dgp_options");
        auto& o = cfg.calibrate_options;
        if (d.contains("default_nu")) o.default_nu = d.at("default_nu").get<double>();
        if (d.contains("skew_scale")) o.skew_scale = d.at("skew_scale").get<double>();
        if (d.contains("target_mean_acf"))
            o.target_mean_acf = d.at("target_mean_acf").get<double>();
        if (d.contains("garch_alpha")) o.garch_alpha = d.at("garch_alpha").get<double>();
        if (d.contains("garch_beta")) o.garch_beta = d.at("garch_beta").get<double>();
    }
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

namespace {

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Vec vec_from_json(const json& a) {
    Vec v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

Mat mat_from_json(const json& rows) {
    if (rows.empty()) return Mat(0, 0);
    Mat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw std::runtime_error("covariance rows are ragged");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j].get<double>();
    }
    return m;
}

}  // namespace

std::string dgp_spec_json(const DgpSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["mu"] = vec_to_json(spec.mu);
    j["sigma"] = mat_to_json(spec.sigma);
    switch (spec.kind) {
        case DgpKind::mvt:
            j["mvt"]["nu"] = spec.nu;
            break;
        case DgpKind::mvsn:
            j["mvsn"]["skew"] = vec_to_json(spec.skew);
            break;
        case DgpKind::ar1:
            j["ar1"]["phi"] = vec_to_json(spec.ar);
            break;
        case DgpKind::garch:
            j["garch"]["alpha"] = vec_to_json(spec.garch_alpha);
            j["garch"]["beta"] = vec_to_json(spec.garch_beta);
            break;
        case DgpKind::mvg:
            break;
    }
    return j.dump(1);
}

DgpSpec dgp_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("spec is not valid JSON: ") + e.what());
    }
    DgpSpec spec;
    spec.kind = dgp_kind_from_string(j.at("kind").get<std::string>());
    spec.mu = vec_from_json(j.at("mu"));
    spec.sigma = mat_from_json(j.at("sigma"));
    if (j.contains("mvt")) spec.nu = j.at("mvt").at("nu").get<double>();
    if (j.contains("mvsn")) spec.skew = vec_from_json(j.at("mvsn").at("skew"));
    if (j.contains("ar1")) spec.ar = vec_from_json(j.at("ar1").at("phi"));
    if (j.contains("garch")) {
        spec.garch_alpha = vec_from_json(j.at("garch").at("alpha"));
        spec.garch_beta = vec_from_json(j.at("garch").at("beta"));
    }
    validate(spec);
    return spec;
}

std::string canonical_config_text(const RunConfig& cfg) {
    json j;
    j["data"]["path"] = cfg.data_path;
    j["data"]["window"] = cfg.window.trailing > 0
                              ? "trailing:" + std::to_string(cfg.window.trailing)
                              : "range:" + cfg.window.from + "-" + cfg.window.to;
    j["data"]["sentinel_policy"] =
        cfg.sentinels == SentinelPolicy::reject ? "reject" : "drop";
    if (cfg.block) j["data"]["block"] = *cfg.block;
    j["study"]["dgps"] = cfg.dgps;
    j["study"]["rules"] = cfg.rules;
    j["study"]["reps"] = cfg.reps;
    j["study"]["window_t"] = cfg.window_t;
    j["study"]["master_seed"] = cfg.master_seed;
    j["study"]["allocations"] = cfg.allocations;
    j["rule_options"]["tau"] = cfg.tau;
    j["rule_options"]["factors"] = cfg.factors;
    j["rule_options"]["bayes_stein_constant"] =
        cfg.bayes_stein_classical ? "classical" : "published";
    j["dgp_options"]["default_nu"] = cfg.calibrate_options.default_nu;
    j["dgp_options"]["skew_scale"] = cfg.calibrate_options.skew_scale;
    j["dgp_options"]["target_mean_acf"] = cfg.calibrate_options.target_mean_acf;
    j["dgp_options"]["garch_alpha"] = cfg.calibrate_options.garch_alpha;
    j["dgp_options"]["garch_beta"] = cfg.calibrate_options.garch_beta;
    j["out"] = cfg.out;
    return j.dump();  // nlohmann objects serialize with sorted keys
}

RunOutcome run_all(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    if (cfg.data_path.empty()) throw std::runtime_error("config has no data.path");
    if (cfg.dgps.empty()) throw std::runtime_error("config requests no DGPs");

    RunOutcome outcome;
    outcome.manifest.config_digest = fnv1a64_hex(canonical_config_text(cfg));
    outcome.manifest.master_seed = cfg.master_seed;
    outcome.manifest.started = current_utc_timestamp();

    ReturnsPanel panel =
        parse_industry_csv(cfg.data_path, ParseOptions{cfg.sentinels, cfg.block});
    panel = select_window(panel, cfg.window);

    std::vector<std::string> written;
    try {
        for (const auto& dgp_name : cfg.dgps) {
            const DgpKind kind = dgp_kind_from_string(dgp_name);
            const DgpSpec spec =
                calibrate(panel.values, kind, cfg.calibrate_options);

            StudyConfig sc;
            sc.dgp = spec;
            sc.rules = cfg.rules;
            sc.reps = cfg.reps;
            sc.window_t = cfg.window_t;
            sc.threads = cfg.threads;
            sc.allocations = cfg.allocations;
            sc.master_seed = cfg.master_seed;
            sc.factors = cfg.factors;
            sc.tau = cfg.tau;
            sc.bayes_stein_classical = cfg.bayes_stein_classical;
            const StudyReport report = run_study(sc);

            const auto emit = [&](const std::string& name, const std::string& content) {
                const std::string path = (fs::path(cfg.out) / name).string();
                atomic_write(path, content);
                written.push_back(path);
                outcome.manifest.outputs.push_back(name);
            };
            emit("frontiers_" + dgp_name + ".csv", frontiers_csv(report));
            emit("loss_table_" + dgp_name + ".csv", loss_table_csv(report));
            emit("dominance_" + dgp_name + ".json", dominance_json(report, dgp_name));
            emit("plot_" + dgp_name + ".csv", plot_csv(report, dgp_name));

            auto& failures = outcome.manifest.trial_failures[dgp_name];
            for (const auto& curve : report.curves) {
                failures[curve.rule] = {curve.resampled_trials, curve.dropped_trials};
                if (curve.failure_cap_exceeded) outcome.failure_cap_exceeded = true;
            }
        }
        outcome.manifest.finished = current_utc_timestamp();
        const std::string manifest_path = (fs::path(cfg.out) / "manifest.json").string();
        atomic_write(manifest_path, manifest_json(outcome.manifest));
        written.push_back(manifest_path);
    } catch (...) {
        for (const auto& path : written) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        throw;
    }
    outcome.files = written;
    return outcome;
}

}  // namespace mvf
