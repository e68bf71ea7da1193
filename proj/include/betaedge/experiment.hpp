#pragma once

#include "betaedge/config.hpp"
#include "betaedge/correlation.hpp"
#include "betaedge/parallel.hpp"
#include "betaedge/partition.hpp"
#include "betaedge/pipeline.hpp"
#include "betaedge/pointproc.hpp"
#include "betaedge/report.hpp"
#include "betaedge/svg.hpp"

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace betaedge {

inline constexpr int exit_pass = 0;
inline constexpr int exit_assertion = 1;
inline constexpr int exit_config = 2;

struct RunResult {
    int exit_code = exit_pass;
    json report;
    std::vector<std::string> failures;
    std::vector<std::string> files;
};

namespace detail {

inline json config_json(const ExperimentConfig& c) {
    json j;
    std::istringstream in(c.canonical());
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        j[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return j;
}

inline json report_header(const ExperimentConfig& c, const std::string& extra_inputs = "") {
    json j;
    j["schema"] = report_schema;
    j["schema_version"] = report_schema_version;
    j["command"] = c.command;
    j["config"] = config_json(c);
    j["input_hash"] = git_blob_hash(c.canonical() + extra_inputs);
    j["seeds"] = json::array();
    return j;
}

inline json seed_entry(const std::string& test, const SeedSpec& s, std::uint64_t streams) {
    json j;
    j["test"] = test;
    j["seed"] = s.seed;
    j["stream_base"] = s.stream_base;
    j["streams"] = streams;
    return j;
}

inline void finish(RunResult& r, const ExperimentConfig& c, const std::string& name) {
    r.report["failures"] = r.failures;
    r.report["passed"] = r.failures.empty();
    r.report["exit_code"] = r.exit_code = r.failures.empty() ? exit_pass : exit_assertion;
    const auto path = std::filesystem::path(c.out) / name;
    write_text_file(path, to_json_text(r.report));
    r.files.push_back(path.string());
}

inline std::string group_label(std::uint64_t n, const BetaSchedule& s) {
    return "n=" + std::to_string(n) + " beta=" + s.to_string();
}

inline Intensity limit_intensity(const ExperimentConfig& c, const ScalingConstants& sc) {
    if (c.intensity == "homogeneous") return Intensity::homogeneous();
    if (c.intensity == "inhomogeneous") return Intensity::inhomogeneous(sc.delta_n);
    return c.delta.kind == DeltaSchedule::Kind::constant ? Intensity::inhomogeneous(c.delta.param) : Intensity::homogeneous();
}

inline Interval default_window(const Intensity& in) {
    return in.kind == Intensity::Kind::homogeneous ? Interval{0.0, 8.0} : Interval{-3.0, 5.0};
}

inline json scaling_json(const ScalingConstants& sc) {
    json j;
    j["a_n"] = sc.a_n;
    j["b_n"] = sc.b_n;
    j["delta_n"] = sc.delta_n;
    return j;
}

inline json window_json(const Interval& w) { return json::array({w.lo, w.hi}); }

} // namespace detail

// Extreme point process pipeline: sample, extract, test against the null.
inline RunResult run_extremes(const ExperimentConfig& c) {
    RunResult r;
    r.report = detail::report_header(c);
    json groups = json::array();
    std::ostringstream csv;
    csv << "replica_id,n,beta,point\n";
    std::vector<HistogramPanel> panels;
    std::uint64_t gi = 0;
    for (const auto& sched : c.beta_schedules) {
        for (std::uint64_t n : c.n_list) {
            ++gi;
            const double nn = static_cast<double>(n);
            const double beta = sched.at(nn);
            const auto sc = compute_scaling(nn, c.delta);
            const Intensity limit = detail::limit_intensity(c, sc);
            const Intensity null = c.null_model == "finite_n" ? Intensity::finite_n_gaussian(sc, c.alpha) : limit;
            const Interval window = c.window.value_or(detail::default_window(limit));
            const std::string label = detail::group_label(n, sched);
            const SeedSpec seeds{c.seed, gi << 32};
            r.report["seeds"].push_back(detail::seed_entry("extremes " + label, seeds, c.replicas));

            std::vector<PatternTarget> targets{{sc, window}};
            if (c.control_window) targets.push_back({sc, *c.control_window});
            const EnsembleParams params{n, beta, c.alpha};
            auto samples = parallel_map(c.replicas, c.threads, [&](std::size_t i) {
                RngStream rng = seeds.stream(i);
                return sample_replica(params, targets, c.k_top, c.control_window.has_value(), rng, static_cast<std::int64_t>(i));
            });
            std::vector<PointPattern> main, control;
            std::vector<double> maxima;
            for (auto& s : samples) {
                main.push_back(std::move(s.patterns[0]));
                if (c.control_window) control.push_back(std::move(s.patterns[1]));
                maxima.push_back(s.maxima[0]);
            }
            samples.clear();

            json g;
            g["label"] = label;
            g["n"] = n;
            g["beta_schedule"] = sched.to_string();
            g["beta"] = beta;
            g["alpha"] = c.alpha;
            g["scaling"] = detail::scaling_json(sc);
            g["intensity"] = limit.name();
            g["null"] = null.name();
            g["window"] = detail::window_json(window);
            g["replicas"] = c.replicas;
            json flags;
            flags["n_beta_log_n"] = nn * beta * std::log(nn);
            flags["beta_hypothesis_ok"] = nn * beta * std::log(nn) < small_parameter;
            flags["delta_growth_ratio"] = c.delta.growth_ratio(nn);
            flags["delta_growth_violated"] = c.delta.growth_condition_violated(nn);
            g["hypothesis"] = flags;

            double total = 0;
            for (const auto& p : main) total += static_cast<double>(p.points.size());
            g["mean_count"] = total / static_cast<double>(c.replicas);
            g["expected_count"] = expected_count(window, null);

            json tests = json::array();
            auto assert_test = [&](const TestReport& t) {
                tests.push_back(to_json(t));
                if (!t.passed) r.failures.push_back(label + ": " + t.statistic_name + " failed (observed " + format_double(t.observed) + ")");
            };
            if (c.replicas >= 500) {
                CountTestOptions co;
                co.significance = c.significance;
                assert_test(count_test(main, default_cells(window, null), null, co));
                if (!std::isinf(null.cumulative(window.lo, window.hi))) {
                    SpacingTestOptions so;
                    so.threshold = c.spacing_ks;
                    assert_test(spacing_test(main, null, so));
                }
            } else {
                g["skipped"] = "Poisson tests need at least 500 replicas";
            }
            const bool gumbel_applies = c.null_model == "limit" && limit.kind == Intensity::Kind::inhomogeneous && limit.delta == 1.0;
            if (gumbel_applies) assert_test(test_gumbel_max(maxima, c.gumbel_ks));
            g["tests"] = tests;

            if (c.control_window) {
                // a control is met when the Poisson test rejects it
                json ctrl = json::array();
                const auto& w = *c.control_window;
                if (c.replicas >= 500) {
                    std::vector<TestReport> ts;
                    ts.push_back(count_test(control, default_cells(w, null), null));
                    SpacingTestOptions so;
                    so.threshold = c.spacing_ks;
                    ts.push_back(spacing_test(control, null, so));
                    bool any_rejected = false;
                    for (const auto& t : ts) {
                        ctrl.push_back(to_json(t));
                        any_rejected = any_rejected || !t.passed;
                    }
                    if (!any_rejected) r.failures.push_back(label + ": negative control window was not rejected");
                    g["control_rejected"] = any_rejected;
                }
                g["control_window"] = detail::window_json(w);
                g["control_tests"] = ctrl;
            }
            groups.push_back(g);

            std::vector<double> pooled;
            for (const auto& p : main)
                for (double x : p.points) {
                    csv << p.replica_id << "," << n << "," << format_double(beta) << "," << format_double(x) << "\n";
                    pooled.push_back(x);
                }
            if (c.emit_svg) {
                HistogramPanel hp{label, window, std::move(pooled), c.replicas, limit, Intensity::finite_n_gaussian(sc, c.alpha)};
                panels.push_back(std::move(hp));
            }
        }
    }
    r.report["groups"] = groups;
    const auto dir = std::filesystem::path(c.out);
    write_text_file(dir / "points.csv", csv.str());
    r.files.push_back((dir / "points.csv").string());
    if (c.emit_svg) {
        write_text_file(dir / "figure_extremes.svg", render_svg(panels));
        r.files.push_back((dir / "figure_extremes.svg").string());
    }
    detail::finish(r, c, "report.json");
    return r;
}

// Partition-function identities and bounds over the (n, beta) grid.
inline RunResult run_lemmas(const ExperimentConfig& c) {
    RunResult r;
    r.report = detail::report_header(c);
    std::ostringstream csv;
    csv << "n,beta_schedule,beta,quantity,value,reference,margin,passed,asserted\n";
    json rows = json::array();
    auto emit = [&](std::uint64_t n, const BetaSchedule& s, double beta, const std::string& q, double value,
                    double reference, double margin, bool passed, bool asserted) {
        csv << n << "," << s.to_string() << "," << format_double(beta) << "," << q << "," << format_double(value) << ","
            << format_double(reference) << "," << format_double(margin) << "," << (passed ? "true" : "false") << ","
            << (asserted ? "true" : "false") << "\n";
        json j;
        j["n"] = n;
        j["beta_schedule"] = s.to_string();
        j["beta"] = beta;
        j["quantity"] = q;
        j["value"] = value;
        j["reference"] = reference;
        j["margin"] = margin;
        j["passed"] = passed;
        j["asserted"] = asserted;
        rows.push_back(j);
        if (asserted && !passed)
            r.failures.push_back("n=" + std::to_string(n) + " beta=" + s.to_string() + ": " + q + " violated (margin " + format_double(margin) + ")");
    };
    json trends = json::array();
    json violated = json::array();
    for (const auto& sched : c.beta_schedules) {
        std::vector<double> shift_res, pert;
        for (std::uint64_t n : c.n_list) {
            const double nn = static_cast<double>(n);
            const double beta = sched.at(nn);
            const bool ok = nn * beta < small_parameter;
            const auto sc = compute_scaling(nn, c.delta);
            emit(n, sched, beta, "hypothesis_n_beta", nn * beta, small_parameter, small_parameter - nn * beta, ok, false);
            // bounds at such points are reported but excluded from pass/fail
            if (!ok) violated.push_back("hypothesis violated: n=" + std::to_string(n) + " beta=" + sched.to_string());
            for (std::size_t k : {1u, 2u}) {
                auto s = ratio_shift_k(n, k, c.alpha, beta);
                emit(n, sched, beta, "shift_ratio_residual_k" + std::to_string(k), s.residual, 0.0, -std::fabs(s.residual), true, false);
                if (k == 1) shift_res.push_back(std::fabs(s.residual));
            }
            const double pr = ratio_perturbed_alpha(n, 1, c.alpha, beta, sc.b_n);
            pert.push_back(std::fabs(pr));
            emit(n, sched, beta, "perturbed_alpha_log_ratio_k1", pr, 0.0, -std::fabs(pr), true, false);
            auto l5 = check_lemma5_bound(n, c.alpha, beta, sc.b_n);
            emit(n, sched, beta, "lemma5_bound", l5.lhs, l5.rhs, l5.margin, l5.satisfied, ok);
            auto l5p = check_lemma5_bound_proof_constant(n, c.alpha, beta, sc.b_n);
            emit(n, sched, beta, "lemma5_bound_literal_constant", l5p.lhs, l5p.rhs, l5p.margin, l5p.satisfied, false);
            auto cn = lemma5_constant(n, c.alpha, beta, sc.b_n);
            emit(n, sched, beta, "lemma5_log_c_n", cn.log_c, 0.0, -std::fabs(cn.log_c), true, false);
            emit(n, sched, beta, "lemma5_log_c_n_literal", cn.log_c_proof, 0.0, -std::fabs(cn.log_c_proof), true, false);
            for (std::uint64_t k : {std::uint64_t{1}, n / 2, n - 1}) {
                if (static_cast<double>(k) * beta > 2.0 * sc.b_n * sc.b_n) continue;
                auto l6 = check_lemma6_bounds(n, k, beta, sc.b_n);
                emit(n, sched, beta, "lemma6_perturbed_k" + std::to_string(k), l6.perturbed.lhs, l6.perturbed.rhs, l6.perturbed.margin, l6.perturbed.satisfied, ok);
                emit(n, sched, beta, "lemma6_shifted_k" + std::to_string(k), l6.shifted.lhs, l6.shifted.rhs, l6.shifted.margin, l6.shifted.satisfied, ok);
            }
            auto cr = contiguity_log_ratio(n, 0.0, beta);
            emit(n, sched, beta, "contiguity_vs_beta0", cr.exact, cr.predicted, cr.predicted - cr.exact, true, false);
        }
        auto nonincreasing = [](const std::vector<double>& v) {
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i] > v[i - 1]) return false;
            return true;
        };
        json t;
        t["beta_schedule"] = sched.to_string();
        t["shift_residual_nonincreasing"] = nonincreasing(shift_res);
        t["perturbed_ratio_nonincreasing"] = nonincreasing(pert);
        trends.push_back(t);
    }
    const SeedSpec lseed{c.seed, 0};
    r.report["seeds"].push_back(detail::seed_entry("lemma7_inequality", lseed, 1));
    auto l7 = check_lemma7_inequality(1'000'000, lseed);
    json j7;
    j7["trials"] = l7.trials;
    j7["violations"] = l7.violations;
    j7["min_margin"] = l7.min_margin;
    if (l7.violations) r.failures.push_back("lemma7 inequality violated " + std::to_string(l7.violations) + " times");
    r.report["rows"] = rows;
    r.report["trends"] = trends;
    r.report["hypothesis_flags"] = violated;
    r.report["lemma7"] = j7;
    const auto path = std::filesystem::path(c.out) / "lemmas.csv";
    write_text_file(path, csv.str());
    r.files.push_back(path.string());
    detail::finish(r, c, "report.json");
    return r;
}

// Correlation-function trends, the Jensen quantity and the uniform bound.
inline RunResult run_correlation(const ExperimentConfig& c) {
    RunResult r;
    r.report = detail::report_header(c);
    std::ostringstream csv;
    csv << "n,beta_schedule,beta,quantity,value,std_error\n";
    json groups = json::array();
    std::uint64_t gi = 0;
    for (const auto& sched : c.beta_schedules) {
        std::vector<double> dev, dev_se, jen;
        for (std::uint64_t n : c.n_list) {
            ++gi;
            const double nn = static_cast<double>(n);
            const double beta = sched.at(nn);
            const auto sc = compute_scaling(nn, c.delta);
            const auto mode = c.delta.kind == DeltaSchedule::Kind::constant ? CorrelationMode::exp_measure(c.delta.param)
                                                                           : CorrelationMode::lebesgue();
            const EnsembleParams params{n, beta, c.alpha};
            const std::string label = detail::group_label(n, sched);
            json g;
            g["label"] = label;
            g["n"] = n;
            g["beta"] = beta;
            g["mode"] = mode.name();
            g["scaling"] = detail::scaling_json(sc);
            g["x"] = c.x_points;

            const SeedSpec rs{c.seed, (gi << 32)};
            r.report["seeds"].push_back(detail::seed_entry("correlation " + label, rs, c.samples));
            auto est = estimate_correlation(n, c.x_points, sc, params, mode, c.samples, rs, c.threads);
            g["log_prefactor"] = est.log_prefactor;
            g["tilde_r"] = est.tilde_r.mean;
            g["tilde_r_std_error"] = est.tilde_r.std_error;
            g["value"] = est.value;
            g["std_error"] = est.std_error;
            csv << n << "," << sched.to_string() << "," << format_double(beta) << ",R_k," << format_double(est.value) << "," << format_double(est.std_error) << "\n";
            dev.push_back(std::fabs(est.value - 1.0));
            dev_se.push_back(est.std_error);

            const SeedSpec js{c.seed, (gi << 32) + (std::uint64_t{1} << 31)};
            r.report["seeds"].push_back(detail::seed_entry("jensen " + label, js, c.jensen_samples));
            auto jq = jensen_quantity(params, sc, c.x_points[0], c.jensen_samples, js, c.threads);
            g["jensen"] = jq.mean;
            g["jensen_std_error"] = jq.std_error;
            csv << n << "," << sched.to_string() << "," << format_double(beta) << ",jensen," << format_double(jq.mean) << "," << format_double(jq.std_error) << "\n";
            jen.push_back(jq.mean);

            if (beta == 0.0) {
                const double closed = std::exp(est.log_prefactor);
                const bool exact = est.tilde_r.mean == 1.0 && est.tilde_r.std_error == 0.0 && jq.mean == 0.0 &&
                                   std::fabs(est.value - closed) <= 1e-6 * std::max(1.0, closed);
                g["beta0_exact"] = exact;
                if (!exact) r.failures.push_back(label + ": beta = 0 reductions are not exact");
            }

            const SeedSpec bs{c.seed, (gi << 32) + (std::uint64_t{3} << 30)};
            r.report["seeds"].push_back(detail::seed_entry("uniform_bound " + label, bs, c.samples));
            std::vector<std::size_t> ks(c.bound_k.begin(), c.bound_k.end());
            auto probe = uniform_bound_probe(n, c.bound_K, ks, params, sc, mode, c.samples, bs, c.delta.sup_inverse(nn), 1e10, c.threads);
            json pj;
            pj["log_theta"] = probe.log_theta;
            json prow = json::array();
            for (const auto& row : probe.rows) {
                json q;
                q["k"] = row.k;
                q["x"] = row.x;
                q["value"] = row.value;
                q["std_error"] = row.std_error;
                q["bound"] = row.bound;
                q["passed"] = row.passed;
                q["skipped"] = row.skipped;
                if (row.skipped) q["reason"] = row.reason;
                prow.push_back(q);
                if (!row.passed) r.failures.push_back(label + ": uniform bound exceeded at k=" + std::to_string(row.k));
            }
            pj["rows"] = prow;
            g["uniform_bound"] = pj;
            groups.push_back(g);
        }
        // |R - 1| must shrink along n, each step resolved beyond two combined standard errors
        bool monotone = true;
        for (std::size_t i = 1; i < dev.size(); ++i)
            if (!(dev[i] < dev[i - 1] - 2.0 * std::hypot(dev_se[i], dev_se[i - 1]))) monotone = false;
        bool jensen_down = true;
        for (std::size_t i = 1; i < jen.size(); ++i)
            if (jen[i] > jen[i - 1]) jensen_down = false;
        json t;
        t["beta_schedule"] = sched.to_string();
        t["abs_r_minus_1"] = dev;
        t["abs_r_minus_1_decreasing"] = monotone;
        t["jensen"] = jen;
        t["jensen_nonincreasing"] = jensen_down;
        r.report["trends"].push_back(t);
        if (!monotone) r.failures.push_back("beta=" + sched.to_string() + ": |R - 1| is not decreasing along n");
    }
    r.report["groups"] = groups;
    const auto path = std::filesystem::path(c.out) / "correlation.csv";
    write_text_file(path, csv.str());
    r.files.push_back(path.string());
    detail::finish(r, c, "report.json");
    return r;
}

// Histograms of extremes runs read back from their report.json and points.csv.
inline RunResult emit_figure(const ExperimentConfig& c) {
    RunResult r;
    std::vector<std::string> inputs = c.inputs.empty() ? std::vector<std::string>{c.out} : c.inputs;
    std::vector<HistogramPanel> panels;
    for (const auto& dir : inputs) {
        const auto rp = std::filesystem::path(dir) / "report.json";
        const auto pp = std::filesystem::path(dir) / "points.csv";
        if (!std::filesystem::exists(rp) || !std::filesystem::exists(pp)) {
            r.failures.push_back("missing run artifacts in " + dir + " (need report.json and points.csv)");
            continue;
        }
        auto rep = json::parse(read_text_file(rp));
        if (rep.value("command", "") != "extremes" || !rep.contains("groups")) {
            r.failures.push_back(rp.string() + " is not an extremes report");
            continue;
        }
        // points keyed by "n,beta" exactly as written
        std::map<std::string, std::vector<double>> pts;
        std::istringstream in(read_text_file(pp));
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            auto f = detail::split(line, ',');
            if (f.size() != 4) continue;
            pts[f[1] + "," + f[2]].push_back(detail::parse_real(f[3], "points.csv"));
        }
        for (const auto& g : rep["groups"]) {
            HistogramPanel hp;
            hp.title = g["label"].get<std::string>() + " (" + g["intensity"].get<std::string>() + ")";
            hp.window = {g["window"][0].get<double>(), g["window"][1].get<double>()};
            hp.replicas = g["replicas"].get<std::size_t>();
            ScalingConstants sc;
            sc.n = g["n"].get<double>();
            sc.a_n = g["scaling"]["a_n"].get<double>();
            sc.b_n = g["scaling"]["b_n"].get<double>();
            sc.delta_n = g["scaling"]["delta_n"].get<double>();
            hp.limit = g["intensity"] == "homogeneous" ? Intensity::homogeneous() : Intensity::inhomogeneous(sc.delta_n);
            hp.finite_n = Intensity::finite_n_gaussian(sc, g.value("alpha", 1.0));
            hp.points = pts[std::to_string(g["n"].get<std::uint64_t>()) + "," + format_double(g["beta"].get<double>())];
            panels.push_back(std::move(hp));
        }
    }
    if (!r.failures.empty()) {
        r.exit_code = exit_assertion;
        return r;
    }
    const auto path = std::filesystem::path(c.out) / "figure_1.svg";
    write_text_file(path, render_svg(panels));
    r.files.push_back(path.string());
    return r;
}

// Fast calibration of the statistical machinery on synthetic inputs.
inline RunResult run_selftest(const ExperimentConfig& c) {
    RunResult r;
    r.report = detail::report_header(c);
    json checks = json::array();
    auto check = [&](const std::string& name, bool ok, json detail_json) {
        json j;
        j["check"] = name;
        j["passed"] = ok;
        j["detail"] = std::move(detail_json);
        checks.push_back(j);
        if (!ok) r.failures.push_back("selftest: " + name);
    };
    const std::size_t reps = 2000;
    auto synthetic = [&](const Interval& w, const Intensity& in, std::uint64_t base) {
        std::vector<PointPattern> ps;
        for (std::size_t i = 0; i < reps; ++i) {
            RngStream rng(c.seed, base + i);
            ps.push_back(sample_poisson_pattern(w, in, rng, static_cast<std::int64_t>(i)));
        }
        r.report["seeds"].push_back(detail::seed_entry("synthetic " + in.name(), {c.seed, base}, reps));
        return ps;
    };
    {
        const Interval w{-3, 5};
        const auto in = Intensity::inhomogeneous(1.0);
        auto ps = synthetic(w, in, 1ull << 32);
        auto ct = count_test(ps, default_cells(w, in), in);
        auto st = spacing_test(ps, in);
        check("poisson_inhomogeneous_counts", ct.passed, to_json(ct));
        check("poisson_inhomogeneous_spacing", st.passed, to_json(st));
        auto wrong = count_test(ps, default_cells(w, Intensity::homogeneous()), Intensity::homogeneous());
        check("wrong_intensity_rejected", !wrong.passed, to_json(wrong));
    }
    {
        const Interval w{0, 8};
        const auto in = Intensity::homogeneous();
        auto ps = synthetic(w, in, 2ull << 32);
        auto ct = count_test(ps, default_cells(w, in), in);
        auto st = spacing_test(ps, in);
        check("poisson_homogeneous_counts", ct.passed, to_json(ct));
        check("poisson_homogeneous_spacing", st.passed, to_json(st));
    }
    {
        RngStream rng(c.seed, 3ull << 32);
        std::vector<double> g(reps);
        for (auto& v : g) v = -std::log(-std::log(1.0 - rng.uniform()));
        auto t = test_gumbel_max(g, 0.03);
        check("gumbel_synthetic", t.passed, to_json(t));
    }
    {
        double worst = 0;
        for (std::uint64_t i = 0; i < 50; ++i) {
            RngStream rng(c.seed, (4ull << 32) + i);
            EnsembleParams p{5 + i % 30, 0.5 + 0.05 * static_cast<double>(i % 20), 1.0};
            auto t = sample_tridiagonal(p, rng);
            auto a = full_spectrum(t);
            auto b = top_k_eigenvalues(t, p.n);
            for (std::size_t j = 0; j < p.n; ++j) worst = std::max(worst, std::fabs(a.values[j] - b.values[j]));
        }
        json d;
        d["max_abs_difference"] = worst;
        check("bisection_matches_ql", worst < 1e-10, d);
    }
    {
        double worst = 0;
        for (std::size_t n = 1; n <= 4; ++n)
            for (double beta : {0.5, 1.0, 2.0}) {
                PartitionQuery q{n, 1.0, beta};
                worst = std::max(worst, std::fabs(log_partition(q) - log_partition_oracle(q).log_value));
            }
        json d;
        d["max_abs_difference"] = worst;
        check("partition_matches_quadrature", worst < 1e-5, d);
    }
    r.report["checks"] = checks;
    detail::finish(r, c, "report.json");
    return r;
}

} // namespace betaedge
