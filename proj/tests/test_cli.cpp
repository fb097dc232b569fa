#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gmokw/checks.hpp>
#include <gmokw/report.hpp>

using namespace gmokw;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;  // stdout and stderr
};

Run run(const std::string& args, bool merge_stderr = true) {
    const std::string cmd = std::string(GMOKW_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::current_path() / "cli_scratch";
    fs::create_directories(d);
    return d / name;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

const std::string kTableSpec =
    "--baseline weibull --theta 0.239 --alpha 0.004 --a 0.518 --b 0.244 --params 0.111,4.112";

}  // namespace

TEST_CASE("usage errors exit with 1", "[cli]") {
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("fit").code == 1);  // --data required
    const auto bad = run("eval pdf --baseline weibull --params 1 --x 1");
    CHECK(bad.code == 1);
    CHECK(run("--version").code == 0);
}

TEST_CASE("fit reports a JSON document", "[cli]") {
    const auto r = run("fit --data bundled --model gmokw --no-timestamp", false);
    REQUIRE(r.code == 0);
    const auto rep = parse_report(r.out);
    CHECK(rep.model == "gmokw");
    CHECK(rep.k == 6);
    CHECK(rep.dataset_n == 45);
    CHECK(rep.aic <= 119.84);
    CHECK_FALSE(rep.timestamp.has_value());
    const auto mo = parse_report(run("fit --data bundled --model mo --no-timestamp", false).out);
    CHECK_THAT(mo.aic, WithinAbs(121.74, 0.2));
    CHECK(mo.converged);
    // identical input and seed give byte-identical output
    CHECK(run("fit --data bundled --model mo --no-timestamp", false).out ==
          run("fit --data bundled --model mo --no-timestamp", false).out);
    CHECK(parse_report(run("fit --data bundled --model mo", false).out).timestamp.has_value());
}

TEST_CASE("fit rejects empty and malformed data", "[cli]") {
    const auto empty = scratch("empty.txt");
    std::ofstream(empty) << "# nothing here\n";
    auto r = run("fit --data " + empty.string());
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("no observations"));
    const auto bad = scratch("bad.txt");
    std::ofstream(bad) << "1.0\n2.0\nabc\n";
    r = run("fit --data " + bad.string());
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("line 3"));
    CHECK(run("fit --data /nonexistent/data.txt").code == 1);
}

TEST_CASE("compare ranks by AIC", "[cli]") {
    const auto r = run("compare --data bundled --format json --no-timestamp", false);
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    REQUIRE(j["models"].size() == 4);
    CHECK(j["models"][0]["model"] == "gmokw");
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(j["models"][i - 1]["aic"].get<double>() <= j["models"][i]["aic"].get<double>());
    CHECK(j["lr_reference"] == "gmokw");
    CHECK(j["lr_tests"].size() == 3);
    const auto text = run("compare --data bundled --no-timestamp", false);
    CHECK(text.code == 0);
    CHECK_THAT(text.out, ContainsSubstring("likelihood ratio tests against gmokw"));
    const auto single = run("compare --data bundled --models mo --no-timestamp", false);
    CHECK(single.code == 0);
    CHECK_FALSE(single.out.find("likelihood ratio") != std::string::npos);
}

TEST_CASE("sample is reproducible and follows the model", "[cli]") {
    const std::string spec = "--baseline weibull --theta 1.5 --alpha 0.6 --a 1.2 --b 0.8 --params 1,1.5";
    const auto a = run("sample " + spec + " --n 1000 --seed 5", false);
    const auto b = run("sample " + spec + " --n 1000 --seed 5", false);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != run("sample " + spec + " --n 1000 --seed 6", false).out);
    const auto zero = scratch("zero.txt");
    CHECK(run("sample " + spec + " --n 0 --out " + zero.string()).code == 0);
    CHECK(fs::file_size(zero) == 0);
    const auto big = scratch("big.txt");
    REQUIRE(run("sample " + spec + " --n 100000 --seed 7 --out " + big.string()).code == 0);
    const auto d = load_dataset(big.string());
    CHECK(d.size() == 100000);
    const auto s = gmokw_spec(1.5, 0.6, 1.2, 0.8, Baseline::weibull(1.0, 1.5));
    CHECK(ks_statistic(d.values, [&](double t) { return cdf(s, t); }) <= 0.0122);
    CHECK(run("sample " + spec + " --n 5 --out /nonexistent/dir/x.txt").code == 1);
}

TEST_CASE("eval prints CSV", "[cli]") {
    auto r = run("eval cdf --baseline exponential --x 0,1", false);
    REQUIRE(r.code == 0);
    auto rows = csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"x", "value"});
    CHECK(rows[1][1] == "0");
    CHECK_THAT(std::stod(rows[2][1]), WithinAbs(1.0 - std::exp(-1.0), 1e-16));
    r = run("eval quantile --baseline exponential --p 0.5", false);
    CHECK(csv(r.out)[1][1] == "0.69314718055994529");
    // trapezoid of the density over a fine grid
    r = run("eval pdf --baseline weibull --theta 1.5 --alpha 0.6 --a 1.2 --b 0.8 --params 1,1.5 --grid 0:8:4001",
            false);
    REQUIRE(r.code == 0);
    rows = csv(r.out);
    REQUIRE(rows.size() == 4002);
    double area = 0.0;
    for (std::size_t i = 2; i < rows.size(); ++i)
        area += 0.5 * (std::stod(rows[i][1]) + std::stod(rows[i - 1][1])) *
                (std::stod(rows[i][0]) - std::stod(rows[i - 1][0]));
    CHECK_THAT(area, WithinAbs(1.0, 1e-3));
    CHECK(run("eval quantile --baseline exponential --p 1.5").code == 1);
    CHECK(run("eval bogus --baseline exponential --x 1").code == 1);
}

TEST_CASE("eval shape lists critical points and asymptote ratios", "[cli]") {
    const auto r = run("eval shape " + kTableSpec, false);
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"x", "value", "kind"});
    bool mode = false;
    for (const auto& row : rows) {
        if (row.size() == 3 && row[2] == "density:maximum") {
            mode = true;
            CHECK_THAT(std::stod(row[0]), WithinAbs(0.2192944758151903, 1e-8));
        }
        if (row.size() == 3 && row[2].rfind("asymptote:lower", 0) == 0)
            CHECK_THAT(std::stod(row[1]), WithinAbs(1.0, 0.01));
    }
    CHECK(mode);
}

TEST_CASE("check runs suites and reports", "[cli]") {
    const auto r = run("check series", false);
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("series"));
    CHECK_THAT(r.out, ContainsSubstring("PASS"));
    const auto bad = run("check nonsense");
    CHECK(bad.code == 1);
    CHECK_THAT(bad.out, ContainsSubstring("normalization"));
}

TEST_CASE("plotdata writes histogram and ecdf tables", "[cli]") {
    const auto prefix = scratch("plot").string();
    REQUIRE(run("plotdata --data bundled --models mo,gmokw --out " + prefix + " --no-timestamp").code == 0);
    const auto pdf_rows = csv(slurp(prefix + "_pdf.csv"));
    const auto cdf_rows = csv(slurp(prefix + "_cdf.csv"));
    REQUIRE(pdf_rows.size() > 10);
    REQUIRE(cdf_rows.size() > 10);
    const auto& header = cdf_rows[0];
    const auto ecdf = std::find(header.begin(), header.end(), "empirical") - header.begin();
    const auto best = std::find(header.begin(), header.end(), "gmokw") - header.begin();
    REQUIRE(ecdf < static_cast<long>(header.size()));
    REQUIRE(best < static_cast<long>(header.size()));
    for (const auto& row : cdf_rows) CHECK(row.size() == header.size());
    // at the largest observation
    double last_x = -1.0;
    std::size_t at = 0;
    for (std::size_t i = 1; i < cdf_rows.size(); ++i)
        if (cdf_rows[i][ecdf] == "1" && (last_x < 0.0)) {
            last_x = std::stod(cdf_rows[i][0]);
            at = i;
        }
    CHECK_THAT(last_x, WithinAbs(4.033, 1e-12));
    CHECK(std::stod(cdf_rows[at][best]) >= 0.95);
    CHECK(std::stod(cdf_rows.back()[ecdf]) == 1.0);
}
