#ifndef CE2LS_BENCH_HPP
#define CE2LS_BENCH_HPP

#include <ce2ls/baselines.hpp>
#include <ce2ls/datagen.hpp>
#include <ce2ls/search.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ce2ls {

struct BenchConfig {
    std::vector<std::size_t> sample_sizes{5000, 20000, 50000};
    int seeds = 5;
    std::uint64_t base_seed = 1;
    int workers = 1;
    double alpha = kDefaultAlpha;
    SearchConfig search;
    bool with_full_data = true;  // also run on the data before hiding latents
};

std::vector<std::size_t> large_sample_sizes();

struct BenchRow {
    std::string suite;
    std::string variant;   // "latent" or "full"
    std::string strategy;  // "ce2ls" or a baseline name
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double truth = 0.0;
    double relative_error = 0.0;  // percent
    std::size_t ci_tests = 0;
    double seconds = 0.0;
    std::string verdict;
    std::string error;
};

double relative_error(double estimate, double truth);

std::vector<BenchRow> run_group_bench(const std::string& suite, const LinearSem& sem, double truth,
                                      const BenchConfig& config);

std::string bench_csv(const std::vector<BenchRow>& rows);
// Median relative error and mean CI-test count per (variant, strategy, n).
std::string bench_summary(const std::vector<BenchRow>& rows);

struct ConformanceCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

std::vector<ConformanceCheck> run_oracle_conformance();

}  // namespace ce2ls

#endif  // CE2LS_BENCH_HPP
