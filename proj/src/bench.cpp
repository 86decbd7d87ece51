#include <ce2ls/bench.hpp>
#include <ce2ls/benchmarks.hpp>
#include <ce2ls/estimation.hpp>
#include <ce2ls/graph_io.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace ce2ls {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<BenchRow> run_cell(const std::string& suite, const std::string& variant, const Dataset& data,
                               const ModelRoles& roles, double truth, std::size_t n, std::uint64_t seed,
                               const BenchConfig& config) {
    std::vector<BenchRow> rows;
    const auto& w = roles.treatment;
    const auto& y = roles.outcome;
    NodeSet x(data.names().begin(), data.names().end());
    x.erase(w);
    x.erase(y);
    auto backend = make_data_backend(data, config.alpha);

    auto base = [&](const std::string& strategy) {
        BenchRow r;
        r.suite = suite;
        r.variant = variant;
        r.strategy = strategy;
        r.n = n;
        r.seed = seed;
        r.truth = truth;
        r.estimate = std::numeric_limits<double>::quiet_NaN();
        r.relative_error = std::numeric_limits<double>::quiet_NaN();
        return r;
    };

    {
        auto r = base("ce2ls");
        backend->reset_count();
        auto t0 = Clock::now();
        try {
            auto out = run_ce2ls(*backend, w, y, x, config.search, make_estimator(data, w, y));
            r.verdict = to_string(out.verdict);
            if (out.verdict == Verdict::Identifiable) {
                std::vector<SetEffect> per;
                for (const auto& e : out.psi) per.push_back({e.z, e.effect});
                r.estimate = aggregate(per).ace;
                r.relative_error = relative_error(r.estimate, truth);
            } else {
                r.error = "no estimate: " + r.verdict;
            }
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        r.seconds = seconds_since(t0);
        r.ci_tests = backend->test_count();
        rows.push_back(r);
    }
    for (auto kind : all_baselines()) {
        auto r = base(to_string(kind));
        backend->reset_count();
        auto t0 = Clock::now();
        try {
            BaselineSpec spec;
            spec.kind = kind;
            spec.learn_max_cond = config.search.max_cond;
            r.estimate = run_baseline(*backend, data, w, y, x, spec).ace;
            r.relative_error = relative_error(r.estimate, truth);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        r.seconds = seconds_since(t0);
        r.ci_tests = backend->test_count();
        rows.push_back(r);
    }
    return rows;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string num(double v) {
    if (std::isnan(v)) return "NaN";
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

}  // namespace

std::vector<std::size_t> large_sample_sizes() { return {200000, 250000, 300000, 350000, 400000, 450000, 500000}; }

double relative_error(double estimate, double truth) {
    if (truth == 0.0) throw std::invalid_argument("relative error against a zero truth");
    return std::abs(estimate - truth) / std::abs(truth) * 100.0;
}

std::vector<BenchRow> run_group_bench(const std::string& suite, const LinearSem& sem, double truth,
                                      const BenchConfig& config) {
    if (config.seeds < 1) throw std::invalid_argument("need at least one seed");
    if (config.workers < 1) throw std::invalid_argument("need at least one worker");
    const auto& roles = sem.roles;
    if (roles.treatment.empty() || roles.outcome.empty())
        throw std::invalid_argument("benchmark model lacks treatment/outcome declarations");

    struct Task {
        std::size_t n;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (auto n : config.sample_sizes)
        for (int s = 0; s < config.seeds; ++s) tasks.push_back({n, config.base_seed + static_cast<std::uint64_t>(s)});

    std::vector<std::vector<BenchRow>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& t = tasks[i];
            auto full = sample_linear_sem(sem, t.n, t.seed);
            auto latent = mask_latents(full, roles.latents, {roles.treatment, roles.outcome});
            auto rows = run_cell(suite, "latent", latent, roles, truth, t.n, t.seed, config);
            if (config.with_full_data && !roles.latents.empty()) {
                auto more = run_cell(suite, "full", full, roles, truth, t.n, t.seed, config);
                rows.insert(rows.end(), more.begin(), more.end());
            }
            results[i] = std::move(rows);
        }
    };
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(config.workers), tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < count; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<BenchRow> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream s;
    s << "suite,variant,strategy,n,seed,estimate,truth,relative_error_pct,ci_tests,seconds,verdict,error\n";
    for (const auto& r : rows)
        s << r.suite << ',' << r.variant << ',' << r.strategy << ',' << r.n << ',' << r.seed << ',' << num(r.estimate)
          << ',' << num(r.truth) << ',' << num(r.relative_error) << ',' << r.ci_tests << ',' << num(r.seconds) << ','
          << r.verdict << ',' << csv_field(r.error) << '\n';
    return s.str();
}

std::string bench_summary(const std::vector<BenchRow>& rows) {
    struct Acc {
        std::vector<double> errors;
        double tests = 0;
        int cells = 0;
        int failures = 0;
    };
    std::map<std::tuple<std::string, std::string, std::size_t>, Acc> groups;
    std::vector<std::tuple<std::string, std::string, std::size_t>> order;
    for (const auto& r : rows) {
        auto key = std::make_tuple(r.variant, r.strategy, r.n);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        auto& a = it->second;
        ++a.cells;
        a.tests += static_cast<double>(r.ci_tests);
        if (std::isnan(r.relative_error))
            ++a.failures;
        else
            a.errors.push_back(r.relative_error);
    }
    std::sort(order.begin(), order.end());
    std::ostringstream s;
    s << "variant  strategy      n        median_rel_err_pct  mean_ci_tests  failed\n";
    for (const auto& key : order) {
        auto& a = groups[key];
        double median = std::numeric_limits<double>::quiet_NaN();
        if (!a.errors.empty()) {
            std::sort(a.errors.begin(), a.errors.end());
            const auto m = a.errors.size();
            median = m % 2 ? a.errors[m / 2] : 0.5 * (a.errors[m / 2 - 1] + a.errors[m / 2]);
        }
        char line[160];
        std::snprintf(line, sizeof line, "%-8s %-13s %-8zu %18s  %13.1f  %d/%d\n", std::get<0>(key).c_str(),
                      std::get<1>(key).c_str(), std::get<2>(key), num(median).c_str(), a.tests / a.cells, a.failures,
                      a.cells);
        s << line;
    }
    return s.str();
}

std::vector<ConformanceCheck> run_oracle_conformance() {
    std::vector<ConformanceCheck> checks;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        checks.push_back({name, ok, detail});
    };

    const auto mag1 = fig1b_mag();
    OracleBackend oracle1(mag1);
    NodeSet x1 = mag1.node_set();
    x1.erase("W");
    x1.erase("Y");
    SearchConfig cfg;
    const auto out = run_ce2ls(oracle1, "W", "Y", x1, cfg);
    const auto& c = out.context;
    check("Adj(W)", c.adj_w == NodeSet{"X1", "X3", "X5", "X8"}, to_string(c.adj_w));
    check("Adj(Y)", c.adj_y == NodeSet{"X5", "X7", "X8", "X9"}, to_string(c.adj_y));
    check("Q", c.q_removed == NodeSet{"X7"}, to_string(c.q_removed));
    check("Adj_R", c.adj_r == NodeSet{"X1", "X3", "X5", "X8", "X9"}, to_string(c.adj_r));
    check("Omega", c.omega == NodeSet{"X1", "X3"}, to_string(c.omega));
    std::vector<NodeSet> psi;
    for (const auto& e : out.psi) psi.push_back(e.z);
    check("Psi", out.verdict == Verdict::Identifiable && psi == std::vector<NodeSet>{{"X3", "X5"}, {"X5", "X9"}},
          to_string(out.verdict));

    const CosoTrace* t = nullptr;
    for (const auto& tr : out.trace)
        if (tr.coso == "X1") t = &tr;
    auto level = [&](int k) -> const LevelTrace* {
        if (!t) return nullptr;
        for (const auto& l : t->levels)
            if (l.k == k) return &l;
        return nullptr;
    };
    const auto* l1 = level(1);
    const auto* l2 = level(2);
    const auto* l3 = level(3);
    const auto* l4 = level(4);
    check("C1", l1 && l1->candidates == std::vector<NodeSet>{{"X3"}, {"X5"}, {"X8"}, {"X9"}} && l1->found.empty(), "");
    check("C2", l2 && l2->candidates == std::vector<NodeSet>{{"X3", "X5"}, {"X3", "X8"}, {"X3", "X9"},
                                                              {"X5", "X8"}, {"X5", "X9"}, {"X8", "X9"}} &&
                    l2->found == std::vector<NodeSet>{{"X3", "X5"}, {"X5", "X9"}} &&
                    l2->remaining == std::vector<NodeSet>{{"X3", "X8"}, {"X3", "X9"}, {"X5", "X8"}, {"X8", "X9"}},
          "");
    check("C3", l3 && l3->candidates == std::vector<NodeSet>{{"X3", "X8", "X9"}} && l3->found.empty(), "");
    check("C4", l4 && l4->candidates.empty(), "");

    const auto proj1 = latent_project(fig1a_sem().dag, fig1a_sem().roles.latents);
    check("fig1a projection", write_graph(proj1) == write_graph(mag1), "");
    const auto sem5 = fig5a_sem();
    const auto mag5 = fig5b_mag();
    check("fig5a projection", write_graph(latent_project(sem5.dag, sem5.roles.latents)) == write_graph(mag5), "");

    OracleBackend oracle5(mag5);
    NodeSet x5 = mag5.node_set();
    x5.erase("W");
    x5.erase("Y");
    const auto out5 = run_ce2ls(oracle5, "W", "Y", x5, cfg);
    NodeSet universe;
    for (const auto& s : out5.context.omega)
        for (const auto& v : out5.context.adj_r)
            if (v != s) universe.insert(v);
    std::vector<NodeSet> expected;
    for (auto& z : enumerate_minimal_gac_sets(mag5, "W", "Y", universe))
        if (static_cast<int>(z.size()) <= cfg.max_level) expected.push_back(z);
    std::vector<NodeSet> got;
    for (const auto& e : out5.psi) got.push_back(e.z);
    check("fig5b minimal sets", out5.verdict == Verdict::Identifiable && got == expected,
          std::to_string(got.size()) + " found, " + std::to_string(expected.size()) + " expected");
    return checks;
}

}  // namespace ce2ls
