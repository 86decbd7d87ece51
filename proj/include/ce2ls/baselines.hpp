#ifndef CE2LS_BASELINES_HPP
#define CE2LS_BASELINES_HPP

#include <ce2ls/ci_test.hpp>
#include <ce2ls/estimation.hpp>
#include <ce2ls/local_discovery.hpp>

#include <string>
#include <vector>

namespace ce2ls {

enum class BaselineKind { Null, Pre, MassXW, MassXY, MassQW, MassZY, Disjunctive, Ehs };

inline constexpr int kEhsDefaultMaxCond = 6;
inline constexpr std::size_t kEhsUnboundedLimit = 25;

struct BaselineSpec {
    BaselineKind kind = BaselineKind::Null;
    int max_cond = kEhsDefaultMaxCond;  // EHS subset cap; <= 0 means no cap
    int learn_max_cond = kDefaultMaxCond;  // for the adjacency learning behind the MASS variants
};

std::string to_string(BaselineKind k);
// Accepts the lower-case names printed by to_string ("null", "pre", "mass-xw", ...).
BaselineKind parse_baseline(const std::string& name);
const std::vector<BaselineKind>& all_baselines();

// One set for every strategy except EHS, which may return several.
std::vector<NodeSet> baseline_adjustment_sets(const CiBackend& backend, const std::string& w, const std::string& y,
                                              const NodeSet& x, const BaselineSpec& spec);

EstimationResult run_baseline(const CiBackend& backend, const Dataset& data, const std::string& w,
                              const std::string& y, const NodeSet& x, const BaselineSpec& spec,
                              EffectScale binary_scale = EffectScale::log_odds_ratio);

}  // namespace ce2ls

#endif  // CE2LS_BASELINES_HPP
