#include <ce2ls/candidate_gen.hpp>

#include <algorithm>
#include <map>
#include <unordered_map>

namespace ce2ls {

CandidateLevel singletons(const NodeSet& items) {
    CandidateLevel level{1, {}};
    for (const auto& v : items) level.sets.push_back({v});
    return level;
}

CandidateLevel candidate_gen(const CandidateLevel& prev, int k) {
    if (k < 2) throw std::invalid_argument("candidate_gen needs k >= 2");
    if (!prev.sets.empty() && prev.k != k - 1)
        throw std::invalid_argument("candidate_gen expects level " + std::to_string(k - 1) + " input");

    const std::set<NodeSet> present(prev.sets.begin(), prev.sets.end());
    const auto prefix_len = static_cast<std::size_t>(k - 2);

    // Bucket the (k-1)-sets by their first k-2 members.
    std::unordered_map<std::string, std::vector<std::vector<std::string>>> buckets;
    std::vector<std::string> bucket_order;
    for (const auto& s : present) {
        std::vector<std::string> members(s.begin(), s.end());
        if (members.size() != static_cast<std::size_t>(k - 1))
            throw std::invalid_argument("candidate of wrong size: " + to_string(s));
        std::string key;
        for (std::size_t i = 0; i < prefix_len; ++i) key += members[i] + '\x1f';
        auto [it, inserted] = buckets.try_emplace(key);
        if (inserted) bucket_order.push_back(key);
        it->second.push_back(std::move(members));
    }

    std::set<NodeSet> out;
    for (const auto& key : bucket_order) {
        const auto& group = buckets[key];
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
                NodeSet joined(group[i].begin(), group[i].end());
                joined.insert(group[j].back());
                bool all_present = true;
                for (const auto& drop : joined) {
                    NodeSet sub = joined;
                    sub.erase(drop);
                    if (!present.count(sub)) {
                        all_present = false;
                        break;
                    }
                }
                if (all_present) out.insert(std::move(joined));
            }
        }
    }
    return {k, std::vector<NodeSet>(out.begin(), out.end())};
}

}  // namespace ce2ls
