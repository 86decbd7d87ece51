#ifndef CE2LS_LOCAL_DISCOVERY_HPP
#define CE2LS_LOCAL_DISCOVERY_HPP

#include <ce2ls/ci_test.hpp>

namespace ce2ls {

inline constexpr int kDefaultMaxCond = 3;

struct AdjacencyContext {
    NodeSet adj_w;      // learned neighbours of W, without Y
    NodeSet adj_y;      // learned neighbours of Y, without W
    NodeSet adj_union;  // adj_w ∪ adj_y
    NodeSet q_removed;  // members marginally independent of W
    NodeSet adj_r;      // adj_union minus q_removed
    NodeSet omega;      // COSO candidates: adj_w minus adj_y
};

enum class QScan {
    adj_y,     // scan only Adj(Y), as in the pseudocode
    adj_union  // scan all of Adj(W ∪ Y)
};

// PC-style adjacency phase for one target: level by level, drop a candidate as soon
// as some subset of the other current neighbours separates it from the target.
NodeSet learn_adjacency(const CiBackend& backend, const std::string& target, const NodeSet& candidates,
                        int max_cond = kDefaultMaxCond);

AdjacencyContext build_context(const CiBackend& backend, const std::string& w, const std::string& y,
                               const NodeSet& x, int max_cond = kDefaultMaxCond, QScan scan = QScan::adj_y);

// Visits the size-k subsets of `items` in lexicographic order; stops early when f returns true.
template <typename F>
bool for_each_subset(const std::vector<std::string>& items, std::size_t k, F&& f) {
    if (k > items.size()) return false;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    const std::size_t m = items.size();
    while (true) {
        NodeSet s;
        for (auto i : pick) s.insert(items[i]);
        if (f(s)) return true;
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == m - k + i - 1) --i;
        if (i == 0) return false;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

}  // namespace ce2ls

#endif  // CE2LS_LOCAL_DISCOVERY_HPP
