#include "betaedge/experiment.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace betaedge;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("betaedge_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(BETAEDGE_CLI) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

json load(const fs::path& p) { return json::parse(read_text_file(p)); }

} // namespace

TEST(Config, Parsers) {
    EXPECT_EQ(parse_beta_schedule("zero").at(100), 0.0);
    EXPECT_NEAR(parse_beta_schedule("nlog2").at(100), 1 / (100 * std::pow(std::log(100.0), 2)), 1e-18);
    EXPECT_NEAR(parse_beta_schedule("nlog:0.5").at(100), 0.5 / (100 * std::log(100.0)), 1e-18);
    EXPECT_NEAR(parse_beta_schedule("inv:10").at(100), 0.1, 1e-18);
    EXPECT_NEAR(parse_beta_schedule("power:1.5").at(100), 1e-3, 1e-18);
    EXPECT_EQ(parse_beta_schedule("fixed:0.25").at(7), 0.25);
    EXPECT_THROW(parse_beta_schedule("bogus"), ConfigError);
    EXPECT_THROW(parse_beta_schedule("power"), ConfigError);
    EXPECT_EQ(parse_delta("stretched:0.1").kind, DeltaSchedule::Kind::stretched);
    EXPECT_EQ(parse_delta("powlog:1").param, 1.0);
    EXPECT_THROW(parse_delta("const:-1"), std::exception);
    auto w = parse_window("-3,5");
    EXPECT_EQ(w.lo, -3);
    EXPECT_EQ(w.hi, 5);
    EXPECT_THROW(parse_window("5,-3"), ConfigError);
    EXPECT_EQ(detail::parse_count("1e5", "n"), 100000u);
    EXPECT_THROW(detail::parse_count("1.5", "n"), ConfigError);
    EXPECT_THROW(detail::parse_real("abc", "x"), ConfigError);
}

TEST(Config, FileAndOverrides) {
    auto dir = scratch("cfg");
    write(dir / "a.cfg", "# comment\nseed = 42\nbeta-schedule = nlog2:2, zero\nn = 1e3,1e4 # trailing\n");
    ExperimentConfig c;
    c.command = "extremes";
    for (const auto& [k, v] : read_config_file((dir / "a.cfg").string())) apply_setting(c, k, v);
    finalize_config(c);
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.n_list, (std::vector<std::uint64_t>{1000, 10000}));
    ASSERT_EQ(c.beta_schedules.size(), 2u);
    EXPECT_EQ(c.beta_schedules[0].to_string(), "nlog2:2");
    write(dir / "bad.cfg", "no equals sign\n");
    EXPECT_THROW(read_config_file((dir / "bad.cfg").string()), ConfigError);
    EXPECT_THROW(read_config_file((dir / "missing.cfg").string()), ConfigError);
    EXPECT_THROW(apply_setting(c, "unknown_key", "1"), ConfigError);
}

TEST(Config, Invariants) {
    ExperimentConfig c;
    c.command = "extremes";
    c.replicas = 0;
    EXPECT_THROW(finalize_config(c), ConfigError);
    ExperimentConfig d;
    d.n_list = {100, 50};
    EXPECT_THROW(finalize_config(d), ConfigError);
    ExperimentConfig e;
    e.n_list = {2};
    EXPECT_THROW(finalize_config(e), ConfigError);
    ExperimentConfig f;
    f.command = "lemmas";
    finalize_config(f);
    EXPECT_EQ(f.n_list.size(), 4u);
}

TEST(Config, CanonicalExcludesThreadsAndOut) {
    ExperimentConfig a, b;
    a.command = b.command = "extremes";
    finalize_config(a);
    finalize_config(b);
    b.threads = 7;
    b.out = "/elsewhere";
    EXPECT_EQ(a.canonical(), b.canonical());
    b.seed = 2;
    EXPECT_NE(a.canonical(), b.canonical());
}

TEST(Report, FormatDouble) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(1e300), "1.0000000000000001e+300");
    EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
}

TEST(Report, GitBlobHash) {
    EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Report, JsonWriterRoundTripsDoubles) {
    json j;
    j["x"] = 0.1;
    j["y"] = json::array({1.0 / 3, -2.5e-17});
    j["s"] = "a\"b";
    j["i"] = 3;
    auto text = to_json_text(j);
    EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
    auto back = json::parse(text);
    EXPECT_EQ(back["y"][0].get<double>(), 1.0 / 3);
    EXPECT_EQ(back["s"], "a\"b");
    EXPECT_EQ(back["i"], 3);
}

TEST(Cli, ExitCodes) {
    auto dir = scratch("exit");
    EXPECT_EQ(run_cli("selftest --out " + dir.string()), 0);
    EXPECT_EQ(run_cli("extremes --replicas 0 --out " + dir.string()), 2);
    EXPECT_EQ(run_cli("extremes --beta-schedule bogus --out " + dir.string()), 2);
    EXPECT_EQ(run_cli("extremes --n 1000,100 --out " + dir.string()), 2);
    EXPECT_EQ(run_cli("nosuchcommand"), 2);
    EXPECT_EQ(run_cli("lemmas --unknown-flag"), 2);
    write(dir / "empty.cfg", "n =\n");
    EXPECT_EQ(run_cli("lemmas --config " + (dir / "empty.cfg").string() + " --out " + dir.string()), 2);
    // the limit intensity is far from the finite-n edge at n = 1000: assertion failure
    EXPECT_EQ(run_cli("extremes --n 1000 --replicas 500 --seed 3 --out " + dir.string()), 1);
    EXPECT_TRUE(load(dir / "report.json")["failures"].size() > 0);
}

TEST(Cli, LemmasReportAndHypothesisFlag) {
    auto dir = scratch("lemmas");
    ASSERT_EQ(run_cli("lemmas --n 100,1000 --beta-schedule zero,nlog2,inv:10 --out " + dir.string()), 0);
    auto rep = load(dir / "report.json");
    EXPECT_EQ(rep["schema"], report_schema);
    EXPECT_EQ(rep["schema_version"], report_schema_version);
    EXPECT_EQ(rep["input_hash"].get<std::string>().size(), 40u);
    EXPECT_FALSE(rep["seeds"].empty());
    EXPECT_EQ(rep["config"]["beta_schedule"], "zero,nlog2:1,inv:10");
    auto text = read_text_file(dir / "report.json");
    EXPECT_NE(text.find("hypothesis violated"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "lemmas.csv"));
}

TEST(Cli, DeterministicOutputs) {
    auto a = scratch("det_a"), b = scratch("det_b");
    std::string args = "extremes --n 500 --replicas 500 --seed 9 --beta-schedule zero --emit-svg --config ";
    write(a / "c.cfg", "null = finite_n\n");
    ASSERT_EQ(run_cli(args + (a / "c.cfg").string() + " --threads 1 --out " + a.string()), 0);
    ASSERT_EQ(run_cli(args + (a / "c.cfg").string() + " --threads 3 --out " + b.string()), 0);
    for (const char* f : {"report.json", "points.csv", "figure_extremes.svg"})
        EXPECT_EQ(read_text_file(a / f), read_text_file(b / f)) << f;
    auto header = read_text_file(a / "points.csv").substr(0, 25);
    EXPECT_EQ(header, "replica_id,n,beta,point\n0");
}

TEST(Cli, CorrelationCsvReproducible) {
    auto a = scratch("corr_a"), b = scratch("corr_b");
    std::string args = "correlation --n 200,400 --replicas 100 --seed 5 --out ";
    int ea = run_cli(args + a.string()), eb = run_cli(args + b.string());
    EXPECT_EQ(ea, eb);
    EXPECT_EQ(read_text_file(a / "correlation.csv"), read_text_file(b / "correlation.csv"));
}

TEST(Cli, FigureFromRunsAndMissingArtifacts) {
    auto run = scratch("fig_run"), out = scratch("fig_out"), empty = scratch("fig_empty");
    EXPECT_EQ(run_cli("figure --out " + out.string() + " " + empty.string()), 1);
    write(run / "c.cfg", "null = finite_n\n");
    ASSERT_EQ(run_cli("extremes --n 300 --replicas 500 --beta-schedule zero --config " + (run / "c.cfg").string() + " --out " + run.string()), 0);
    ASSERT_EQ(run_cli("figure --out " + out.string() + " " + run.string()), 0);
    auto svg = read_text_file(out / "figure_1.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    ASSERT_EQ(run_cli("figure --out " + empty.string() + " " + run.string()), 0);
    EXPECT_EQ(svg, read_text_file(empty / "figure_1.svg"));
}

TEST(Svg, EmptyPatternSetDrawsAxes) {
    HistogramPanel p;
    p.title = "empty";
    p.window = {-3, 5};
    p.replicas = 0;
    p.limit = Intensity::inhomogeneous(1);
    p.finite_n = Intensity::inhomogeneous(1);
    auto svg = render_svg({p});
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(svg, render_svg({p}));
    auto h = make_histogram(p);
    EXPECT_EQ(h.heights.size(), 32u);
    for (double v : h.heights) EXPECT_EQ(v, 0.0);
}
