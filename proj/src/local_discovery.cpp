#include <ce2ls/local_discovery.hpp>

namespace ce2ls {

NodeSet learn_adjacency(const CiBackend& backend, const std::string& target, const NodeSet& candidates,
                        int max_cond) {
    if (candidates.count(target)) throw std::invalid_argument("target " + target + " is among its own candidates");
    if (max_cond < 0) throw std::invalid_argument("max_cond must be non-negative");

    NodeSet current = candidates;
    for (std::size_t level = 0; level <= static_cast<std::size_t>(max_cond); ++level) {
        if (current.size() < level + 1) break;
        const std::vector<std::string> snapshot(current.begin(), current.end());
        for (const auto& v : snapshot) {
            if (!current.count(v)) continue;
            std::vector<std::string> others;
            for (const auto& o : current)
                if (o != v) others.push_back(o);
            bool separated = for_each_subset(others, level, [&](const NodeSet& s) {
                return backend.independent(v, target, s);
            });
            if (separated) current.erase(v);
        }
    }
    return current;
}

AdjacencyContext build_context(const CiBackend& backend, const std::string& w, const std::string& y,
                               const NodeSet& x, int max_cond, QScan scan) {
    if (w == y) throw std::invalid_argument("treatment and outcome must differ");
    if (x.count(w) || x.count(y)) throw std::invalid_argument("covariates must not include treatment or outcome");

    NodeSet pool = x;
    AdjacencyContext ctx;

    pool.insert(y);
    ctx.adj_w = learn_adjacency(backend, w, pool, max_cond);
    ctx.adj_w.erase(y);
    pool.erase(y);

    pool.insert(w);
    ctx.adj_y = learn_adjacency(backend, y, pool, max_cond);
    ctx.adj_y.erase(w);

    ctx.adj_union = ctx.adj_w;
    ctx.adj_union.insert(ctx.adj_y.begin(), ctx.adj_y.end());

    const NodeSet& scanned = scan == QScan::adj_y ? ctx.adj_y : ctx.adj_union;
    for (const auto& v : scanned)
        if (backend.independent(v, w, {})) ctx.q_removed.insert(v);

    for (const auto& v : ctx.adj_union)
        if (!ctx.q_removed.count(v)) ctx.adj_r.insert(v);
    for (const auto& v : ctx.adj_w)
        if (!ctx.adj_y.count(v)) ctx.omega.insert(v);
    return ctx;
}

}  // namespace ce2ls
