#ifndef CE2LS_CANDIDATE_GEN_HPP
#define CE2LS_CANDIDATE_GEN_HPP

#include <ce2ls/graph.hpp>

#include <vector>

namespace ce2ls {

struct CandidateLevel {
    int k = 0;
    std::vector<NodeSet> sets;  // each of size k, sorted lexicographically
};

CandidateLevel singletons(const NodeSet& items);

// Apriori join: merge pairs of (k-1)-sets sharing their first k-2 members and keep a
// merged set only if all of its (k-1)-subsets are in prev.
CandidateLevel candidate_gen(const CandidateLevel& prev, int k);

}  // namespace ce2ls

#endif  // CE2LS_CANDIDATE_GEN_HPP
