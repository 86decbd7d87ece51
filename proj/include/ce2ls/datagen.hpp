#ifndef CE2LS_DATAGEN_HPP
#define CE2LS_DATAGEN_HPP

#include <ce2ls/dataset.hpp>
#include <ce2ls/graph.hpp>
#include <ce2ls/search.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace ce2ls {

// Roles shared by both model kinds, read from `latent`, `treatment` and `outcome` lines.
struct ModelRoles {
    NodeSet latents;
    std::string treatment;
    std::string outcome;
};

struct LinearSem {
    Dag dag;
    std::map<std::pair<std::string, std::string>, double> weights;  // every DAG edge has an entry
    std::map<std::string, double> noise_sd;                         // every node has an entry
    std::map<std::string, double> intercepts;
    NodeSet binary_nodes;  // drawn as Bernoulli(expit(intercept + sum of weighted parents))
    ModelRoles roles;
};

struct Cpt {
    std::vector<std::string> parents;  // in the order written; the last parent varies fastest
    std::vector<std::vector<double>> rows;
};

struct DiscreteBn {
    Dag dag;
    std::map<std::string, Cpt> cpts;
    ModelRoles roles;

    int levels(const std::string& node) const;
};

using Model = std::variant<LinearSem, DiscreteBn>;

// Graph lines plus `weight A B w`, `noise A sd`, `intercept A c`, `binary A ...`,
// `latent A ...`, `treatment A`, `outcome A` and `cpt A | P Q : p p ; p p`.
// A file with any `cpt` line is a discrete network, otherwise a linear SEM.
Model parse_model(const std::string& text);
LinearSem parse_linear_sem(const std::string& text);
DiscreteBn parse_discrete_bn(const std::string& text);

LinearSem make_linear_sem(Dag dag, std::map<std::pair<std::string, std::string>, double> weights,
                          std::map<std::string, double> noise_sd = {}, NodeSet binary_nodes = {},
                          std::map<std::string, double> intercepts = {}, ModelRoles roles = {});

Dataset sample_linear_sem(const LinearSem& sem, std::size_t n, std::uint64_t seed);
Dataset sample_discrete_bn(const DiscreteBn& bn, std::size_t n, std::uint64_t seed);
Dataset sample_model(const Model& model, std::size_t n, std::uint64_t seed);

Dataset mask_latents(const Dataset& data, const NodeSet& latents, const NodeSet& protect = {});

// Sum over directed paths w -> ... -> y of the product of edge weights.
double true_ace_linear(const LinearSem& sem, const std::string& w, const std::string& y);

const Dag& model_dag(const Model& model);
const ModelRoles& model_roles(const Model& model);

struct ScreeningResult {
    std::uint64_t seed = 0;       // seed actually used
    int attempts = 0;
    bool usable = false;
    std::size_t queries = 0;        // CI queries checked on the last attempt
    std::size_t disagreements = 0;  // on the last attempt
    Dataset data;                   // masked sample for the accepted (or last) seed
};

inline constexpr int kScreeningRetries = 5;

std::uint64_t derived_seed(std::uint64_t seed, int attempt);

// Samples, masks latents, runs the search on the data and re-asks every issued CI
// query of the projected-MAG oracle; retries with derived seeds on disagreement.
ScreeningResult screen_seed(const Model& model, std::size_t n, std::uint64_t seed, const SearchConfig& config,
                            double alpha = kDefaultAlpha, int retries = kScreeningRetries);

}  // namespace ce2ls

#endif  // CE2LS_DATAGEN_HPP
