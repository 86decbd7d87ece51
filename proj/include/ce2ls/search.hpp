#ifndef CE2LS_SEARCH_HPP
#define CE2LS_SEARCH_HPP

#include <ce2ls/candidate_gen.hpp>
#include <ce2ls/ci_test.hpp>
#include <ce2ls/local_discovery.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ce2ls {

inline constexpr int kDefaultMaxLevel = 5;

enum class Verdict { NoEffect, NonIdentifiable, Identifiable, Undetermined };
enum class Rule { CaseI, CaseII };

std::string to_string(Verdict v);
std::string to_string(Rule r);

struct Witness {
    std::string coso;  // empty for a W-Y separation found outside a COSO loop
    NodeSet z;
    Rule rule = Rule::CaseI;
};

struct PsiEntry {
    NodeSet z;
    double effect = std::numeric_limits<double>::quiet_NaN();
    int level = 0;
    std::string coso;
};

struct LevelTrace {
    int k = 0;
    std::vector<NodeSet> candidates;  // C_k as generated
    std::vector<NodeSet> skipped;     // already in Psi or a superset of a Psi member
    std::vector<NodeSet> found;       // new minimal adjustment sets at this level
    std::vector<NodeSet> remaining;   // C_k after removing found and skipped sets
};

struct CosoTrace {
    std::string coso;
    std::vector<LevelTrace> levels;
};

struct SearchStats {
    std::size_t ci_test_count = 0;      // everything, including adjacency learning
    std::size_t search_test_count = 0;  // tests issued after the context was built
    int levels_explored = 0;            // largest number of non-empty levels k >= 1 for one COSO
};

struct SearchConfig {
    int max_cond = kDefaultMaxCond;
    int max_level = kDefaultMaxLevel;
    // Literal pseudocode: singletons first, no Case-I confirmation, no early stop,
    // candidates pruned only when found in the current level.
    bool exhaustive = false;
    QScan q_scan = QScan::adj_y;
};

struct SearchOutcome {
    Verdict verdict = Verdict::Undetermined;
    std::vector<PsiEntry> psi;  // ordered by size, then lexicographically
    std::optional<Witness> witness;
    std::vector<Witness> all_witnesses;  // exhaustive mode records every firing
    AdjacencyContext context;
    SearchStats stats;
    std::vector<CosoTrace> trace;
    std::string note;
};

class FaithfulnessConflict : public std::runtime_error {
public:
    FaithfulnessConflict(Witness case_two, PsiEntry case_three);

    const Witness& case_two() const { return m_case_two; }
    const PsiEntry& case_three() const { return m_case_three; }

private:
    Witness m_case_two;
    PsiEntry m_case_three;
};

using EffectEstimator = std::function<double(const NodeSet& z)>;

SearchOutcome classify_and_search(const CiBackend& backend, const AdjacencyContext& ctx, const std::string& w,
                                  const std::string& y, const SearchConfig& config = {},
                                  const EffectEstimator& estimator = {});

SearchOutcome run_ce2ls(const CiBackend& backend, const std::string& w, const std::string& y, const NodeSet& x,
                        const SearchConfig& config = {}, const EffectEstimator& estimator = {});

}  // namespace ce2ls

#endif  // CE2LS_SEARCH_HPP
