#include <ce2ls/baselines.hpp>
#include <ce2ls/bench.hpp>
#include <ce2ls/benchmarks.hpp>
#include <ce2ls/datagen.hpp>
#include <ce2ls/graph_io.hpp>
#include <ce2ls/report.hpp>
#include <ce2ls/search.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace ce2ls;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;
constexpr int kExitInternal = 70;

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Identifiable: return 0;
        case Verdict::NoEffect: return 10;
        case Verdict::NonIdentifiable: return 11;
        case Verdict::Undetermined: return 12;
    }
    return kExitInternal;
}

// Thrown for bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimateOptions {
    std::string data_path;
    std::string graph_path;
    std::string treatment;
    std::string outcome;
    std::vector<std::string> covariates;
    std::string backend = "data";
    std::string strategy = "ce2ls";
    std::string scale = "log-mcor";
    std::string csv_path;
    bool trace = false;
};

struct CommonOptions {
    double alpha = kDefaultAlpha;
    int max_cond = kDefaultMaxCond;
    int max_level = kDefaultMaxLevel;
    std::uint64_t seed = 1;
    int workers = 1;
    bool exhaustive = false;
};

SearchConfig search_config(const CommonOptions& c) {
    SearchConfig cfg;
    cfg.max_cond = c.max_cond;
    cfg.max_level = c.max_level;
    cfg.exhaustive = c.exhaustive;
    return cfg;
}

int cmd_estimate(const EstimateOptions& o, const CommonOptions& c) {
    if (o.data_path.empty() && o.graph_path.empty()) throw UsageError("estimate needs --data or --graph");
    if (o.backend != "data" && o.backend != "oracle") throw UsageError("--backend must be data or oracle");
    if (o.backend == "oracle" && o.graph_path.empty()) throw UsageError("the oracle backend needs --graph");
    if (o.backend == "data" && o.data_path.empty()) throw UsageError("the data backend needs --data");

    std::optional<Dataset> data;
    if (!o.data_path.empty()) data = Dataset::read_csv_file(o.data_path);
    std::optional<Mag> mag;
    if (!o.graph_path.empty()) mag = parse_mag(read_text_file(o.graph_path));

    std::unique_ptr<CiBackend> backend;
    if (o.backend == "oracle")
        backend = std::make_unique<OracleBackend>(*mag);
    else
        backend = make_data_backend(*data, c.alpha);

    for (const auto* v : {&o.treatment, &o.outcome})
        if (!backend->has_variable(*v)) throw std::invalid_argument("no variable named " + *v);
    if (data)
        for (const auto* v : {&o.treatment, &o.outcome})
            if (!data->has(*v)) throw std::invalid_argument("no column named " + *v);

    NodeSet x;
    if (o.covariates.empty()) {
        for (const auto& v : backend->variables()) x.insert(v);
        x.erase(o.treatment);
        x.erase(o.outcome);
    } else {
        x.insert(o.covariates.begin(), o.covariates.end());
    }

    EffectScale binary_scale = EffectScale::log_odds_ratio;
    if (o.scale == "risk-difference")
        binary_scale = EffectScale::risk_difference;
    else if (o.scale != "log-mcor")
        throw UsageError("--scale must be log-mcor or risk-difference");

    if (o.strategy != "ce2ls") {
        BaselineSpec spec;
        spec.kind = parse_baseline(o.strategy);
        spec.learn_max_cond = c.max_cond;
        auto sets = baseline_adjustment_sets(*backend, o.treatment, o.outcome, x, spec);
        std::cout << "strategy: " << o.strategy << "\nadjustment sets: " << sets.size() << '\n';
        std::vector<SetEffect> per;
        for (const auto& z : sets) {
            double effect = std::numeric_limits<double>::quiet_NaN();
            if (data) effect = make_estimator(*data, o.treatment, o.outcome, binary_scale)(z);
            per.push_back({z, effect});
            std::cout << "  " << to_string(z) << "  effect " << format_effect(effect) << '\n';
        }
        if (data && !per.empty()) {
            auto res = aggregate(per, outcome_kind(*data, o.outcome), effect_scale_for(*data, o.outcome, binary_scale));
            std::cout << "ACE (" << to_string(res.effect_scale) << "): " << format_effect(res.ace) << '\n';
        }
        std::cout << "CI tests: " << backend->test_count() << '\n';
        return 0;
    }

    EffectEstimator estimator;
    if (data) estimator = make_estimator(*data, o.treatment, o.outcome, binary_scale);
    auto out = run_ce2ls(*backend, o.treatment, o.outcome, x, search_config(c), estimator);

    std::optional<EstimationResult> est;
    if (data && out.verdict == Verdict::Identifiable) {
        std::vector<SetEffect> per;
        for (const auto& e : out.psi) per.push_back({e.z, e.effect});
        est = aggregate(per, outcome_kind(*data, o.outcome), effect_scale_for(*data, o.outcome, binary_scale));
    }
    std::cout << format_report(out, o.treatment, o.outcome, est);
    if (o.trace) std::cout << format_trace(out);
    if (!o.csv_path.empty()) write_text_file(o.csv_path, format_psi_csv(out));
    return verdict_exit(out.verdict);
}

int cmd_simulate(const std::string& config_path, long long n, const std::string& out_path, const CommonOptions& c) {
    if (n < 1) throw UsageError("--n must be at least 1");
    auto model = parse_model(read_text_file(config_path));
    auto data = sample_model(model, static_cast<std::size_t>(n), c.seed);
    data.write_csv_file(out_path);
    std::cout << "wrote " << out_path << " (" << data.rows() << " rows, " << data.cols() << " columns)\n";

    const auto& roles = model_roles(model);
    if (!roles.latents.empty()) {
        std::string masked_path = out_path;
        auto dot = masked_path.rfind(".csv");
        masked_path = (dot == std::string::npos ? masked_path : masked_path.substr(0, dot)) + ".masked.csv";
        NodeSet protect;
        if (!roles.treatment.empty()) protect.insert(roles.treatment);
        if (!roles.outcome.empty()) protect.insert(roles.outcome);
        auto masked = mask_latents(data, roles.latents, protect);
        masked.write_csv_file(masked_path);
        std::cout << "wrote " << masked_path << " (" << masked.cols() << " columns)\n";
    }
    if (const auto* sem = std::get_if<LinearSem>(&model); sem && !roles.treatment.empty() && !roles.outcome.empty())
        std::cout << "true ACE: " << format_effect(true_ace_linear(*sem, roles.treatment, roles.outcome)) << '\n';
    return 0;
}

int cmd_bench(const std::string& suite, const std::vector<std::size_t>& sizes, bool large_sizes, int seeds,
              const std::string& out_path, const CommonOptions& c) {
    if (suite == "oracle-conformance") {
        auto checks = run_oracle_conformance();
        std::size_t passed = 0;
        for (const auto& ch : checks) {
            std::cout << (ch.ok ? "match    " : "MISMATCH ") << ch.name;
            if (!ch.detail.empty()) std::cout << "  " << ch.detail;
            std::cout << '\n';
            passed += ch.ok ? 1 : 0;
        }
        std::cout << "trace match: " << (100.0 * static_cast<double>(passed) / static_cast<double>(checks.size()))
                  << "%\n";
        return passed == checks.size() ? 0 : 1;
    }
    LinearSem sem = [&] {
        if (suite == "group1") return fig1a_sem();
        if (suite == "group2") return fig5a_sem();
        throw UsageError("unknown suite '" + suite + "' (group1, group2, oracle-conformance)");
    }();
    BenchConfig cfg;
    if (large_sizes)
        cfg.sample_sizes = large_sample_sizes();
    else if (!sizes.empty())
        cfg.sample_sizes = sizes;
    cfg.seeds = seeds;
    cfg.base_seed = c.seed;
    cfg.workers = c.workers;
    cfg.alpha = c.alpha;
    cfg.search = search_config(c);
    const double truth = true_ace_linear(sem, sem.roles.treatment, sem.roles.outcome);
    auto rows = run_group_bench(suite, sem, truth, cfg);
    if (!out_path.empty()) write_text_file(out_path, bench_csv(rows));
    std::cout << "suite " << suite << ", true ACE " << format_effect(truth) << '\n' << bench_summary(rows);
    return 0;
}

int cmd_project(const std::string& path, const std::vector<std::string>& latents) {
    auto model_text = read_text_file(path);
    auto model = parse_model(model_text);
    NodeSet hidden = model_roles(model).latents;
    hidden.insert(latents.begin(), latents.end());
    std::cout << write_graph(latent_project(model_dag(model), hidden));
    return 0;
}

int cmd_check(const std::string& path, const std::string& treatment, const std::string& outcome) {
    auto mag = parse_mag(read_text_file(path));
    const bool maximal = is_maximal(mag);
    std::cout << "nodes: " << mag.num_nodes() << "\nedges: " << mag.num_edges() << '\n';
    std::cout << "ancestral: yes\nmaximal: " << (maximal ? "yes" : "no") << '\n';
    if (!treatment.empty() && !outcome.empty()) {
        const int w = mag.index(treatment), y = mag.index(outcome);
        std::string edge = "none";
        if (mag.has_directed(w, y))
            edge = is_visible(mag, treatment, outcome) ? "visible directed" : "invisible directed";
        else if (mag.has_bidirected(w, y))
            edge = "bidirected";
        else if (mag.has_directed(y, w))
            edge = "reversed";
        std::cout << "edge " << treatment << "-" << outcome << ": " << edge << '\n';
        if (mag.has_directed(w, y) && mag.node_set().size() - 2 <= kMaxEnumerationUniverse) {
            NodeSet universe = mag.node_set();
            universe.erase(treatment);
            universe.erase(outcome);
            for (const auto& z : enumerate_minimal_gac_sets(mag, treatment, outcome, universe))
                std::cout << "minimal adjustment set: " << to_string(z) << '\n';
        }
    }
    return maximal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local search for adjustment sets and causal effect estimation"};
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", common.alpha, "significance level of the CI tests")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--max-cond", common.max_cond, "largest conditioning set in adjacency learning")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-level", common.max_level, "largest adjustment set searched")->check(CLI::PositiveNumber);
        sub->add_option("--seed", common.seed, "random seed");
        sub->add_option("--workers", common.workers, "worker threads for benchmark cells")->check(CLI::PositiveNumber);
        sub->add_flag("--exhaustive", common.exhaustive, "follow the pseudocode literally (no early termination)");
    };

    EstimateOptions est;
    auto* estimate = app.add_subcommand("estimate", "classify identifiability and estimate the effect");
    estimate->add_option("--data", est.data_path, "CSV dataset");
    estimate->add_option("--graph", est.graph_path, "graph over the observed variables (oracle backend)");
    estimate->add_option("--treatment", est.treatment, "treatment variable")->required();
    estimate->add_option("--outcome", est.outcome, "outcome variable")->required();
    estimate->add_option("--covariates", est.covariates, "pretreatment covariates (default: all other columns)")
        ->delimiter(',');
    estimate->add_option("--backend", est.backend, "data or oracle");
    estimate->add_option("--strategy", est.strategy, "ce2ls or a baseline: null, pre, mass-xw, mass-xy, mass-qw, "
                                                     "mass-zy, disjunctive, ehs");
    estimate->add_option("--scale", est.scale, "binary outcome scale: log-mcor or risk-difference");
    estimate->add_option("--csv", est.csv_path, "write the adjustment-set table as CSV");
    estimate->add_flag("--trace", est.trace, "print the candidate levels");
    add_common(estimate);

    std::string sim_config, sim_out;
    long long sim_n = 0;
    auto* simulate = app.add_subcommand("simulate", "sample a dataset from a model file");
    simulate->add_option("config", sim_config, "SEM or discrete network file")->required();
    simulate->add_option("--n", sim_n, "number of rows")->required();
    simulate->add_option("--out", sim_out, "output CSV")->required();
    add_common(simulate);

    std::string suite, bench_out;
    std::vector<std::size_t> sizes;
    bool large = false;
    int seeds = 5;
    auto* bench = app.add_subcommand("bench", "run a benchmark suite: group1, group2 or oracle-conformance");
    bench->add_option("suite", suite, "suite name")->required();
    bench->add_option("--sizes", sizes, "sample sizes")->delimiter(',');
    bench->add_flag("--large-sizes", large, "use 200k..500k rows");
    bench->add_option("--seeds", seeds, "seeds per sample size")->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_out, "write per-cell results as CSV");
    add_common(bench);

    std::string project_path;
    std::vector<std::string> project_latents;
    auto* project = app.add_subcommand("project", "print the graph over observed variables of a DAG");
    project->add_option("model", project_path, "DAG or model file")->required();
    project->add_option("--latent", project_latents, "hidden nodes in addition to `latent` lines")->delimiter(',');

    std::string check_path, check_w, check_y;
    auto* check = app.add_subcommand("check", "validate a graph and list minimal adjustment sets");
    check->add_option("graph", check_path, "graph file")->required();
    check->add_option("--treatment", check_w, "treatment variable");
    check->add_option("--outcome", check_y, "outcome variable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*estimate) return cmd_estimate(est, common);
        if (*simulate) return cmd_simulate(sim_config, sim_n, sim_out, common);
        if (*bench) return cmd_bench(suite, sizes, large, seeds, bench_out, common);
        if (*project) return cmd_project(project_path, project_latents);
        if (*check) return cmd_check(check_path, check_w, check_y);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
