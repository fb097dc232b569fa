#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <gmokw/gmokw.hpp>

using namespace gmokw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNonconvergence = 2;
constexpr int kExitCheckFailed = 3;

std::string fmt17(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string fmt(double v, int prec) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, const std::string& what) {
    std::size_t used = 0;
    double v = NAN;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) throw ArgumentError(what + " '" + tok + "' is not a finite number");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Model from flags or from a saved fit report.
struct SpecFlags {
    std::string model = "gmokw";
    std::string baseline = "weibull";
    double theta = 1.0, alpha = 1.0, a = 1.0, b = 1.0;
    std::string params;
    std::string report;
};

void add_spec_flags(CLI::App* c, SpecFlags& f) {
    c->add_option("--model", f.model, "gmokw, mokw, kw, gmo, mo or baseline")->capture_default_str();
    c->add_option("--baseline", f.baseline, "baseline distribution")->capture_default_str();
    c->add_option("--theta", f.theta)->capture_default_str();
    c->add_option("--alpha", f.alpha)->capture_default_str();
    c->add_option("--a", f.a)->capture_default_str();
    c->add_option("--b", f.b)->capture_default_str();
    c->add_option("--params", f.params, "baseline parameters, comma separated, in declared order (default all 1)");
    c->add_option("--report", f.report, "take the model from a fit report instead");
}

ModelSpec build_spec(const SpecFlags& f) {
    if (!f.report.empty()) return parse_report(read_file(f.report)).spec();
    const auto kind = Baseline::kind_from_name(f.baseline);
    if (kind == BaselineKind::ExtendedWeibull)
        throw ArgumentError("extended-weibull needs a user hook and is not available from the command line");
    std::vector<double> p = Baseline::default_params(kind);
    if (!f.params.empty()) {
        p.clear();
        for (const auto& tok : split_list(f.params)) p.push_back(parse_number(tok, "baseline parameter"));
    }
    return make_spec(variant_from_name(f.model), {f.theta, f.alpha, f.a, f.b}, Baseline{kind, p});
}

struct FitFlags {
    std::uint64_t seed = FitConfig{}.seed;
    double gamma = 0.05;
    double tol = FitConfig{}.f_tol;
    int starts = FitConfig{}.n_starts;
    double bound_lo = FitConfig{}.bound_lo, bound_hi = FitConfig{}.bound_hi;
    bool no_timestamp = false;
};

void add_fit_flags(CLI::App* c, FitFlags& f) {
    c->add_option("--seed", f.seed, "seed for optimizer starts")->capture_default_str();
    c->add_option("--gamma", f.gamma, "intervals have level 1 - gamma")->capture_default_str();
    c->add_option("--tol", f.tol, "optimizer function tolerance")->capture_default_str();
    c->add_option("--starts", f.starts, "number of random starts")->capture_default_str();
    c->add_option("--bound-lo", f.bound_lo, "lower end of the search box per parameter")->capture_default_str();
    c->add_option("--bound-hi", f.bound_hi, "upper end of the search box per parameter")->capture_default_str();
    c->add_flag("--no-timestamp", f.no_timestamp, "omit the timestamp field");
}

FitConfig make_config(const FitFlags& f) {
    FitConfig c;
    c.seed = f.seed;
    c.gamma = f.gamma;
    c.f_tol = f.tol;
    c.n_starts = f.starts;
    c.bound_lo = f.bound_lo;
    c.bound_hi = f.bound_hi;
    c.start_lo = std::max(c.start_lo, f.bound_lo);
    c.start_hi = std::min(c.start_hi, f.bound_hi);
    if (!(f.gamma > 0.0 && f.gamma < 1.0)) throw ArgumentError("gamma must lie in (0,1)");
    c.validate();
    return c;
}

// ---- fit ----

struct FitCmd {
    std::string data;
    std::string model = "gmokw";
    std::string baseline = "weibull";
    FitFlags flags;
};

int run_fit(const FitCmd& c) {
    const auto cfg = make_config(c.flags);
    const auto d = load_dataset(c.data);
    const auto r = fit_mle(d, variant_from_name(c.model), Baseline::kind_from_name(c.baseline), cfg);
    std::cout << emit_report(make_report(r, d, cfg, !c.flags.no_timestamp));
    if (!r.converged) {
        std::cerr << "warning: optimizer did not converge\n";
        return kExitNonconvergence;
    }
    return kExitOk;
}

// ---- compare ----

struct CompareCmd {
    std::string data;
    std::string baseline = "weibull";
    std::vector<std::string> models = {"mo", "kw", "mokw", "gmokw"};
    std::string format = "text";
    std::string json_path;
    FitFlags flags;
};

struct Comparison {
    std::vector<FitResult> fits;  // sorted by AIC
    std::vector<FitReport> reports;
    std::vector<ReportLR> lr;
    std::string largest;
};

Json comparison_json(const Comparison& cmp, const Dataset& d, const std::string& baseline,
                     const FitConfig& cfg, bool timestamp) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["baseline"] = baseline;
    j["dataset"] = dataset_json(d.label, d.size());
    Json models = Json::array();
    for (const auto& r : cmp.reports) models.push_back(to_json(r));
    j["models"] = models;
    j["lr_reference"] = cmp.largest;
    Json lr = Json::array();
    for (const auto& t : cmp.lr) lr.push_back(lr_to_json(t));
    j["lr_tests"] = lr;
    j["config"] = config_json(report_config(cfg));
    if (timestamp) j["timestamp"] = utc_timestamp();
    return j;
}

std::string comparison_text(const Comparison& cmp, const Dataset& d, const std::string& baseline) {
    std::ostringstream os;
    os << "dataset " << d.label << " (n=" << d.size() << "), baseline " << baseline << "\n\n";
    os << std::left << std::setw(5) << "rank" << std::setw(10) << "model" << std::right << std::setw(3) << "k"
       << std::setw(13) << "loglik" << std::setw(12) << "AIC" << "  flags\n";
    for (std::size_t i = 0; i < cmp.fits.size(); ++i) {
        const auto& r = cmp.fits[i];
        std::string flags;
        if (!r.converged) flags += " nonconverged";
        if (r.at_bound) flags += " at_bound";
        if (r.stiff) flags += " stiff";
        if (!r.info_error.empty()) flags += " no_se";
        os << std::left << std::setw(5) << (i + 1) << std::setw(10) << variant_name(r.variant) << std::right
           << std::setw(3) << r.k << std::setw(13) << fmt(r.loglik, 4) << std::setw(12) << fmt(r.aic, 4) << " "
           << (flags.empty() ? " -" : flags) << "\n";
    }
    os << "\nestimates (standard errors)\n";
    for (const auto& r : cmp.fits) {
        os << "  " << std::left << std::setw(8) << variant_name(r.variant);
        for (std::size_t j = 0; j < r.names.size(); ++j) {
            os << " " << r.names[j] << "=" << std::setprecision(6) << r.estimate[j];
            if (j < r.se.size() && std::isfinite(r.se[j])) os << " (" << std::setprecision(4) << r.se[j] << ")";
        }
        os << "\n";
    }
    if (!cmp.lr.empty()) {
        os << "\nlikelihood ratio tests against " << cmp.largest << "\n";
        os << std::left << std::setw(10) << "null" << std::right << std::setw(10) << "stat" << std::setw(5) << "df"
           << std::setw(12) << "p" << "\n";
        for (const auto& t : cmp.lr)
            os << std::left << std::setw(10) << t.null_model << std::right << std::setw(10) << fmt(t.stat, 4)
               << std::setw(5) << t.df << std::setw(12) << fmt(t.p, 6) << "\n";
    }
    return os.str();
}

Comparison compare_models(const Dataset& d, const std::string& baseline, const std::vector<std::string>& models,
                          const FitConfig& cfg, bool timestamp) {
    if (models.empty()) throw ArgumentError("no models given");
    const auto kind = Baseline::kind_from_name(baseline);
    Comparison cmp;
    std::vector<Variant> seen;
    for (const auto& m : models) {
        const auto v = variant_from_name(m);
        if (std::find(seen.begin(), seen.end(), v) != seen.end()) throw ArgumentError("model '" + m + "' repeated");
        seen.push_back(v);
        cmp.fits.push_back(fit_mle(d, v, kind, cfg));
    }
    std::stable_sort(cmp.fits.begin(), cmp.fits.end(), [](const FitResult& x, const FitResult& y) {
        if (x.aic != y.aic) return x.aic < y.aic;
        return variant_name(x.variant) < variant_name(y.variant);
    });
    const auto largest = std::max_element(cmp.fits.begin(), cmp.fits.end(),
                                          [](const FitResult& x, const FitResult& y) { return x.k < y.k; });
    cmp.largest = variant_name(largest->variant);
    for (const auto& r : cmp.fits)
        if (&r != &*largest && is_nested(r.variant, largest->variant))
            cmp.lr.push_back(report_lr(lr_test(r, *largest)));
    for (const auto& r : cmp.fits) {
        auto rep = make_report(r, d, cfg, timestamp);
        if (&r == &*largest) rep.lr_tests = cmp.lr;
        cmp.reports.push_back(std::move(rep));
    }
    return cmp;
}

int run_compare(const CompareCmd& c) {
    if (c.format != "text" && c.format != "json") throw ArgumentError("format must be text or json");
    const auto cfg = make_config(c.flags);
    const auto d = load_dataset(c.data);
    const auto cmp = compare_models(d, c.baseline, c.models, cfg, !c.flags.no_timestamp);
    const auto j = comparison_json(cmp, d, Baseline::kind_name(Baseline::kind_from_name(c.baseline)), cfg,
                                   !c.flags.no_timestamp);
    if (!c.json_path.empty()) {
        std::ofstream out(c.json_path);
        if (!out) throw DataError("cannot write '" + c.json_path + "'");
        out << j.dump(2) << "\n";
    }
    if (c.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << comparison_text(cmp, d, Baseline::kind_name(Baseline::kind_from_name(c.baseline)));
    const bool all_ok = std::all_of(cmp.fits.begin(), cmp.fits.end(), [](const FitResult& r) { return r.converged; });
    if (!all_ok) std::cerr << "warning: at least one fit did not converge\n";
    return all_ok ? kExitOk : kExitNonconvergence;
}

// ---- sample ----

struct SampleCmd {
    SpecFlags spec;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string out = "-";
};

int run_sample(const SampleCmd& c) {
    const auto s = build_spec(c.spec);
    const auto batch = sample(s, c.n, c.seed);
    std::string text;
    for (double v : batch.values) text += fmt17(v) + "\n";
    if (c.out == "-") {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(c.out, std::ios::binary);
    if (!out) throw DataError("cannot write '" + c.out + "'");
    out << text;
    out.close();
    if (!out) throw DataError("cannot write '" + c.out + "'");
    return kExitOk;
}

// ---- eval ----

struct EvalCmd {
    std::string what;
    SpecFlags spec;
    std::string x;
    std::string grid;
    std::string p;
    std::string delta = "2";
    std::string order = "1";
    std::string method = "quadrature";
};

std::vector<std::pair<std::string, double>> eval_points(const EvalCmd& c) {
    std::vector<std::pair<std::string, double>> pts;
    for (const auto& tok : split_list(c.x)) pts.emplace_back(tok, parse_number(tok, "point"));
    if (!c.grid.empty()) {
        std::vector<std::string> parts;
        std::string tok;
        std::istringstream in(c.grid);
        while (std::getline(in, tok, ':')) parts.push_back(tok);
        if (parts.size() != 3) throw ArgumentError("grid must be lo:hi:count");
        const double lo = parse_number(parts[0], "grid bound"), hi = parse_number(parts[1], "grid bound");
        const int n = static_cast<int>(parse_number(parts[2], "grid count"));
        if (n < 2 || !(hi > lo)) throw ArgumentError("grid needs count >= 2 and hi > lo");
        for (int i = 0; i < n; ++i) {
            const double t = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1.0);
            pts.emplace_back(fmt17(t), t);
        }
    }
    return pts;
}

int run_eval(const EvalCmd& c) {
    const auto s = build_spec(c.spec);
    std::ostringstream out;  // printed only when every point succeeds
    auto each = [&](const std::vector<std::pair<std::string, double>>& pts, auto&& f) {
        out << "x,value\n";
        for (const auto& [tok, v] : pts) {
            double r;
            try {
                r = f(v);
            } catch (const Error& e) {
                throw DomainError("point " + tok + ": " + e.what());
            }
            out << fmt17(v) << "," << fmt17(r) << "\n";
        }
    };
    auto list = [&](const std::string& s_, const char* what) {
        std::vector<std::pair<std::string, double>> pts;
        for (const auto& tok : split_list(s_)) pts.emplace_back(tok, parse_number(tok, what));
        return pts;
    };
    if (c.what == "pdf" || c.what == "cdf" || c.what == "sf" || c.what == "hrf") {
        const auto pts = eval_points(c);
        if (pts.empty()) throw ArgumentError("no points given (use --x or --grid)");
        if (c.what == "pdf") each(pts, [&](double t) { return pdf(s, t); });
        if (c.what == "cdf") each(pts, [&](double t) { return cdf(s, t); });
        if (c.what == "sf") each(pts, [&](double t) { return sf(s, t); });
        if (c.what == "hrf") each(pts, [&](double t) { return hrf(s, t); });
        std::cout << out.str();
        return kExitOk;
    }
    if (c.what == "quantile") {
        const auto pts = list(c.p, "probability");
        if (pts.empty()) throw ArgumentError("no probabilities given (use --p)");
        each(pts, [&](double p) { return quantile(s, p); });
        std::cout << out.str();
        return kExitOk;
    }
    if (c.what == "entropy") {
        if (c.method != "quadrature" && c.method != "series")
            throw ArgumentError("method must be quadrature or series");
        const auto m = c.method == "series" ? EntropyMethod::series : EntropyMethod::quadrature;
        each(list(c.delta, "delta"), [&](double d) { return renyi({d, s}, m); });
        std::cout << out.str();
        return kExitOk;
    }
    if (c.what == "moment") {
        each(list(c.order, "order"), [&](double r) {
            auto q = moment_quadrature(s, r);
            if (!q.converged) throw QuadratureError("moment integral did not converge", q.value, q.error);
            return q.value;
        });
        std::cout << out.str();
        return kExitOk;
    }
    if (c.what == "shape") {
        out << "x,value,kind\n";
        for (auto mode : {ShapeMode::density, ShapeMode::hazard}) {
            const char* label = mode == ShapeMode::density ? "density" : "hazard";
            for (const auto& cp : critical_points(s, mode)) {
                const double v = mode == ShapeMode::density ? pdf(s, cp.location) : hrf(s, cp.location);
                out << fmt17(cp.location) << "," << fmt17(v) << "," << label << ":"
                          << critical_kind_name(cp.kind) << "\n";
            }
        }
        for (auto ep : {Endpoint::lower, Endpoint::upper}) {
            const auto rep = asymptote(s, ep);
            for (const auto& f : rep.forms)
                out << fmt17(rep.probe) << "," << fmt17(f.ratio_at_probe) << ",asymptote:"
                          << (ep == Endpoint::lower ? "lower" : "upper") << ":" << f.quantity << "\n";
        }
        std::cout << out.str();
        return kExitOk;
    }
    throw ArgumentError("unknown quantity '" + c.what +
                        "' (expected pdf, cdf, sf, hrf, quantile, entropy, moment, shape)");
}

// ---- check ----

struct CheckCmd {
    std::vector<std::string> suites;
    bool timing = false;
};

int run_check(const CheckCmd& c) {
    std::vector<std::string> names = c.suites;
    if (names.size() == 1 && names[0] == "all") names = suite_names();
    for (const auto& n : names) {
        const auto& valid = suite_names();
        if (std::find(valid.begin(), valid.end(), n) == valid.end() && n != "reduction" && n != "shape")
            run_named_suite(n);  // throws ArgumentError listing the valid names
    }
    bool all = true;
    for (const auto& n : names) {
        const auto r = run_named_suite(n);
        all = all && r.passed();
        std::cout << std::left << std::setw(14) << r.name << (r.passed() ? "PASS" : "FAIL") << "  n=" << r.count
                  << " failures=" << r.failures << " worst=" << std::scientific << std::setprecision(3) << r.worst
                  << " tol=" << std::setprecision(1) << r.tol << std::defaultfloat;
        if (c.timing) std::cout << " time=" << fmt(r.seconds, 1) << "s";
        if (!r.note.empty()) std::cout << "  (" << r.note << ")";
        std::cout << "\n";
    }
    return all ? kExitOk : kExitCheckFailed;
}

// ---- plotdata ----

struct PlotCmd {
    std::string data;
    std::string baseline = "weibull";
    std::vector<std::string> models = {"mo", "kw", "mokw", "gmokw"};
    std::vector<std::string> reports;
    std::string out = "plot";
    int points = 200;
    FitFlags flags;
};

// Type-7 sample quantile.
double sample_quantile(const std::vector<double>& sorted, double p) {
    const double h = (sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

std::vector<double> freedman_diaconis_edges(const std::vector<double>& sorted) {
    const double lo = sorted.front(), hi = sorted.back();
    const double iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
    const double n = static_cast<double>(sorted.size());
    double width = 2.0 * iqr / std::cbrt(n);
    int bins = 1;
    if (width > 0.0 && hi > lo)
        bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    else if (hi > lo)
        bins = static_cast<int>(std::ceil(std::log2(n))) + 1;  // Sturges when the IQR vanishes
    width = hi > lo ? (hi - lo) / bins : 1.0;
    std::vector<double> e;
    for (int i = 0; i <= bins; ++i) e.push_back(i == bins ? (hi > lo ? hi : lo + 1.0) : lo + i * width);
    return e;
}

int run_plotdata(const PlotCmd& c) {
    if (c.points < 2) throw ArgumentError("points must be >= 2");
    const auto d = load_dataset(c.data);
    std::vector<double> xs = d.values;
    std::sort(xs.begin(), xs.end());
    std::vector<std::string> labels;
    std::vector<ModelSpec> specs;
    bool all_ok = true;
    if (!c.reports.empty()) {
        for (const auto& path : c.reports) {
            const auto rep = parse_report(read_file(path));
            labels.push_back(rep.model);
            specs.push_back(rep.spec());
        }
    } else {
        const auto cfg = make_config(c.flags);
        const auto kind = Baseline::kind_from_name(c.baseline);
        for (const auto& m : c.models) {
            const auto r = fit_mle(d, variant_from_name(m), kind, cfg);
            all_ok = all_ok && r.converged;
            labels.push_back(variant_name(r.variant));
            specs.push_back(r.spec());
        }
    }
    const auto edges = freedman_diaconis_edges(xs);
    const double n = static_cast<double>(xs.size());
    auto hist = [&](double t) {
        const std::size_t nb = edges.size() - 1;
        if (t < edges.front() || t > edges.back()) return 0.0;
        std::size_t b = std::min<std::size_t>(
            nb - 1, std::upper_bound(edges.begin(), edges.end(), t) - edges.begin() - 1);
        std::size_t count = 0;
        for (double x : xs)
            if (x >= edges[b] && (x < edges[b + 1] || (b + 1 == nb && x <= edges[b + 1]))) ++count;
        return count / (n * (edges[b + 1] - edges[b]));
    };
    auto header = [&] {
        std::string h = "t,empirical";
        for (const auto& l : labels) h += "," + l;
        return h + "\n";
    };
    const std::string pdf_path = c.out + "_pdf.csv", cdf_path = c.out + "_cdf.csv";
    {
        std::ofstream out(pdf_path);
        if (!out) throw DataError("cannot write '" + pdf_path + "'");
        out << header();
        for (int i = 0; i < c.points; ++i) {
            const double t = i + 1 == c.points
                                 ? edges.back()
                                 : edges.front() + (edges.back() - edges.front()) * i / (c.points - 1.0);
            out << fmt17(t) << "," << fmt17(hist(t));
            for (const auto& s : specs) out << "," << fmt17(pdf(s, t));
            out << "\n";
        }
    }
    {
        std::ofstream out(cdf_path);
        if (!out) throw DataError("cannot write '" + cdf_path + "'");
        out << header();
        std::vector<double> grid;
        for (int i = 0; i < c.points; ++i) grid.push_back(xs.back() * i / (c.points - 1.0));
        grid.insert(grid.end(), xs.begin(), xs.end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        for (double t : grid) {
            const double ecdf = (std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / n;
            out << fmt17(t) << "," << fmt17(ecdf);
            for (const auto& s : specs) out << "," << fmt17(cdf(s, t));
            out << "\n";
        }
    }
    std::cout << pdf_path << "\n" << cdf_path << "\n";
    if (!all_ok) std::cerr << "warning: at least one fit did not converge\n";
    return all_ok ? kExitOk : kExitNonconvergence;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fit, compare, sample and evaluate the generalized Marshall-Olkin Kumaraswamy-G family"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    FitCmd fit;
    auto* fit_c = app.add_subcommand("fit", "maximum likelihood fit; JSON report on standard output");
    fit_c->add_option("--data", fit.data, "data file or 'bundled'")->required();
    fit_c->add_option("--model", fit.model)->capture_default_str();
    fit_c->add_option("--baseline", fit.baseline)->capture_default_str();
    add_fit_flags(fit_c, fit.flags);

    CompareCmd cmp;
    auto* cmp_c = app.add_subcommand("compare", "fit several models, rank by AIC, likelihood ratio tests");
    cmp_c->add_option("--data", cmp.data, "data file or 'bundled'")->required();
    cmp_c->add_option("--baseline", cmp.baseline)->capture_default_str();
    cmp_c->add_option("--models", cmp.models, "comma separated model list")->delimiter(',')->capture_default_str();
    cmp_c->add_option("--format", cmp.format, "text or json on standard output")->capture_default_str();
    cmp_c->add_option("--json", cmp.json_path, "also write the JSON document to this file");
    add_fit_flags(cmp_c, cmp.flags);

    SampleCmd smp;
    auto* smp_c = app.add_subcommand("sample", "draw a sample by inversion");
    add_spec_flags(smp_c, smp.spec);
    smp_c->add_option("--n", smp.n, "sample size")->required();
    smp_c->add_option("--seed", smp.seed)->capture_default_str();
    smp_c->add_option("--out", smp.out, "output file, '-' for standard output")->capture_default_str();

    EvalCmd ev;
    auto* ev_c = app.add_subcommand("eval", "evaluate a quantity; CSV on standard output");
    ev_c->add_option("what", ev.what, "pdf, cdf, sf, hrf, quantile, entropy, moment or shape")->required();
    add_spec_flags(ev_c, ev.spec);
    ev_c->add_option("--x", ev.x, "points, comma separated");
    ev_c->add_option("--grid", ev.grid, "lo:hi:count evenly spaced points");
    ev_c->add_option("--p", ev.p, "probabilities for quantile, comma separated");
    ev_c->add_option("--delta", ev.delta, "entropy orders, comma separated")->capture_default_str();
    ev_c->add_option("--order", ev.order, "moment orders, comma separated")->capture_default_str();
    ev_c->add_option("--method", ev.method, "entropy method: quadrature or series")->capture_default_str();

    CheckCmd chk;
    auto* chk_c = app.add_subcommand("check", "run property-check suites");
    chk_c->add_option("suites", chk.suites, "suite names or 'all'")->required();
    chk_c->add_flag("--timing", chk.timing, "print the run time of each suite");

    PlotCmd plt;
    auto* plt_c = app.add_subcommand("plotdata", "histogram / empirical cdf with fitted curves as CSV");
    plt_c->add_option("--data", plt.data, "data file or 'bundled'")->required();
    plt_c->add_option("--baseline", plt.baseline)->capture_default_str();
    plt_c->add_option("--models", plt.models, "models to fit")->delimiter(',')->capture_default_str();
    plt_c->add_option("--reports", plt.reports, "use saved fit reports instead of fitting")->delimiter(',');
    plt_c->add_option("--out", plt.out, "output prefix; writes PREFIX_pdf.csv and PREFIX_cdf.csv")
        ->capture_default_str();
    plt_c->add_option("--points", plt.points, "curve points")->capture_default_str();
    add_fit_flags(plt_c, plt.flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*fit_c) return run_fit(fit);
        if (*cmp_c) return run_compare(cmp);
        if (*smp_c) return run_sample(smp);
        if (*ev_c) return run_eval(ev);
        if (*chk_c) return run_check(chk);
        if (*plt_c) return run_plotdata(plt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
