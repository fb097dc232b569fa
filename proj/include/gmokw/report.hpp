#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "data.hpp"
#include "error.hpp"
#include "inference.hpp"

namespace gmokw {

inline constexpr const char* kToolName = "gmokw";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct ReportLR {
    std::string null_model;
    std::string alt_model;
    double stat = NAN;
    int df = 0;
    double p = NAN;
};

struct ReportConfig {
    std::uint64_t seed = 0;
    int starts = 0;
    double gamma = 0.05;
    double tol = 0.0;
    double bound_lo = 0.0, bound_hi = 0.0;
};

struct FitReport {
    int schema_version = kReportSchemaVersion;
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string model;
    std::string baseline;
    std::string dataset_label;
    std::size_t dataset_n = 0;
    std::vector<std::string> names;
    std::vector<double> estimate, se;
    std::vector<Interval> ci;
    double loglik = NAN;
    double aic = NAN;
    int k = 0;
    bool converged = false;
    bool at_bound = false;
    bool stiff = false;
    double condition = NAN;
    std::string info_error;
    std::vector<ReportLR> lr_tests;
    ReportConfig config;
    std::optional<std::string> timestamp;

    // ModelSpec at the estimate
    ModelSpec spec() const {
        Baseline base{Baseline::kind_from_name(baseline), {}};
        base.params = Baseline::default_params(base.kind);
        return unpack_params(ModelSpec{variant_from_name(model), {}, base}, estimate);
    }
};

namespace detail {

inline bool same_num(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

inline Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double get_num(const Json& j) { return j.is_null() ? NAN : j.get<double>(); }

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DataError(std::string("report: missing key '") + key + "'");
    return j.at(key);
}

}  // namespace detail

inline bool operator==(const ReportLR& a, const ReportLR& b) {
    return a.null_model == b.null_model && a.alt_model == b.alt_model && detail::same_num(a.stat, b.stat) &&
           a.df == b.df && detail::same_num(a.p, b.p);
}

inline bool operator==(const ReportConfig& a, const ReportConfig& b) {
    return a.seed == b.seed && a.starts == b.starts && detail::same_num(a.gamma, b.gamma) &&
           detail::same_num(a.tol, b.tol) && detail::same_num(a.bound_lo, b.bound_lo) &&
           detail::same_num(a.bound_hi, b.bound_hi);
}

inline bool operator==(const FitReport& a, const FitReport& b) {
    auto vec_eq = [](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!detail::same_num(x[i], y[i])) return false;
        return true;
    };
    if (a.ci.size() != b.ci.size()) return false;
    for (std::size_t i = 0; i < a.ci.size(); ++i)
        if (!detail::same_num(a.ci[i].low, b.ci[i].low) || !detail::same_num(a.ci[i].high, b.ci[i].high))
            return false;
    return a.schema_version == b.schema_version && a.tool == b.tool && a.version == b.version &&
           a.model == b.model && a.baseline == b.baseline && a.dataset_label == b.dataset_label &&
           a.dataset_n == b.dataset_n && a.names == b.names && vec_eq(a.estimate, b.estimate) &&
           vec_eq(a.se, b.se) && detail::same_num(a.loglik, b.loglik) && detail::same_num(a.aic, b.aic) &&
           a.k == b.k && a.converged == b.converged && a.at_bound == b.at_bound && a.stiff == b.stiff &&
           detail::same_num(a.condition, b.condition) && a.info_error == b.info_error &&
           a.lr_tests == b.lr_tests && a.config == b.config && a.timestamp == b.timestamp;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline ReportConfig report_config(const FitConfig& c) {
    return {c.seed, c.n_starts, c.gamma, c.f_tol, c.bound_lo, c.bound_hi};
}

inline FitReport make_report(const FitResult& r, const Dataset& d, const FitConfig& cfg, bool timestamp) {
    FitReport rep;
    rep.model = variant_name(r.variant);
    rep.baseline = r.baseline.name();
    rep.dataset_label = d.label;
    rep.dataset_n = d.size();
    rep.names = r.names;
    rep.estimate = r.estimate;
    rep.se = r.se;
    rep.ci = r.ci;
    rep.se.resize(r.names.size(), NAN);  // empty when the information matrix failed
    rep.ci.resize(r.names.size());
    rep.loglik = r.loglik;
    rep.aic = r.aic;
    rep.k = r.k;
    rep.converged = r.converged;
    rep.at_bound = r.at_bound;
    rep.stiff = r.stiff;
    rep.condition = r.condition;
    rep.info_error = r.info_error;
    rep.config = report_config(cfg);
    if (timestamp) rep.timestamp = utc_timestamp();
    return rep;
}

inline ReportLR report_lr(const LRTestResult& t) {
    return {variant_name(t.null_variant), variant_name(t.alt_variant), t.stat, t.df, t.p_value};
}

inline Json lr_to_json(const ReportLR& t) {
    Json j;
    j["null"] = t.null_model;
    j["alt"] = t.alt_model;
    j["stat"] = detail::num(t.stat);
    j["df"] = t.df;
    j["p"] = detail::num(t.p);
    return j;
}

inline ReportLR lr_from_json(const Json& j) {
    return {detail::field(j, "null").get<std::string>(), detail::field(j, "alt").get<std::string>(),
            detail::get_num(detail::field(j, "stat")), detail::field(j, "df").get<int>(),
            detail::get_num(detail::field(j, "p"))};
}

inline Json dataset_json(const std::string& label, std::size_t n) {
    Json j;
    j["label"] = label;
    j["n"] = n;
    return j;
}

inline Json config_json(const ReportConfig& c) {
    Json j;
    j["seed"] = c.seed;
    j["starts"] = c.starts;
    j["gamma"] = c.gamma;
    j["tol"] = c.tol;
    j["bounds"] = Json::array({c.bound_lo, c.bound_hi});
    return j;
}

inline ReportConfig config_from_json(const Json& j) {
    ReportConfig c;
    c.seed = detail::field(j, "seed").get<std::uint64_t>();
    c.starts = detail::field(j, "starts").get<int>();
    c.gamma = detail::field(j, "gamma").get<double>();
    c.tol = detail::field(j, "tol").get<double>();
    const auto& b = detail::field(j, "bounds");
    c.bound_lo = b.at(0).get<double>();
    c.bound_hi = b.at(1).get<double>();
    return c;
}

inline Json to_json(const FitReport& r) {
    Json j;
    j["schema_version"] = r.schema_version;
    j["tool"] = r.tool;
    j["version"] = r.version;
    j["model"] = r.model;
    j["baseline"] = r.baseline;
    j["dataset"] = dataset_json(r.dataset_label, r.dataset_n);
    Json est = Json::object(), se = Json::object(), ci = Json::object();
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        est[r.names[i]] = detail::num(r.estimate.at(i));
        se[r.names[i]] = detail::num(i < r.se.size() ? r.se[i] : NAN);
        if (i < r.ci.size())
            ci[r.names[i]] = Json::array({detail::num(r.ci[i].low), detail::num(r.ci[i].high)});
        else
            ci[r.names[i]] = Json::array({nullptr, nullptr});
    }
    j["estimate"] = est;
    j["se"] = se;
    j["ci"] = ci;
    j["loglik"] = detail::num(r.loglik);
    j["aic"] = detail::num(r.aic);
    j["k"] = r.k;
    Json flags;
    flags["converged"] = r.converged;
    flags["at_bound"] = r.at_bound;
    flags["stiff"] = r.stiff;
    flags["condition"] = detail::num(r.condition);
    flags["info_error"] = r.info_error;
    j["flags"] = flags;
    Json lr = Json::array();
    for (const auto& t : r.lr_tests) lr.push_back(lr_to_json(t));
    j["lr_tests"] = lr;
    j["config"] = config_json(r.config);
    if (r.timestamp) j["timestamp"] = *r.timestamp;
    return j;
}

inline FitReport report_from_json(const Json& j) {
    using detail::field;
    FitReport r;
    r.schema_version = field(j, "schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
        throw DataError("report: unsupported schema_version " + std::to_string(r.schema_version));
    r.tool = field(j, "tool").get<std::string>();
    r.version = field(j, "version").get<std::string>();
    r.model = field(j, "model").get<std::string>();
    r.baseline = field(j, "baseline").get<std::string>();
    r.dataset_label = field(field(j, "dataset"), "label").get<std::string>();
    r.dataset_n = field(field(j, "dataset"), "n").get<std::size_t>();
    const auto& est = field(j, "estimate");
    const auto& se = field(j, "se");
    const auto& ci = field(j, "ci");
    for (const auto& [name, v] : est.items()) {
        r.names.push_back(name);
        r.estimate.push_back(detail::get_num(v));
        r.se.push_back(detail::get_num(field(se, name.c_str())));
        const auto& c = field(ci, name.c_str());
        r.ci.push_back({detail::get_num(c.at(0)), detail::get_num(c.at(1))});
    }
    r.loglik = detail::get_num(field(j, "loglik"));
    r.aic = detail::get_num(field(j, "aic"));
    r.k = field(j, "k").get<int>();
    const auto& fl = field(j, "flags");
    r.converged = field(fl, "converged").get<bool>();
    r.at_bound = field(fl, "at_bound").get<bool>();
    r.stiff = field(fl, "stiff").get<bool>();
    r.condition = detail::get_num(field(fl, "condition"));
    r.info_error = field(fl, "info_error").get<std::string>();
    for (const auto& t : field(j, "lr_tests")) r.lr_tests.push_back(lr_from_json(t));
    r.config = config_from_json(field(j, "config"));
    if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
    return r;
}

inline std::string emit_report(const FitReport& r) { return to_json(r).dump(2) + "\n"; }

inline FitReport parse_report(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report: ") + e.what());
    }
    try {
        return report_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report: ") + e.what());
    }
}

}  // namespace gmokw
