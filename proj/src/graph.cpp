#include <ce2ls/graph.hpp>

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

namespace ce2ls {

namespace {

constexpr char kTail = 0;
constexpr char kArrow = 1;

// Calls f(neighbour, mark at v, mark at neighbour) for every edge incident to v.
template <typename F>
void for_each_incident(const GraphBase& g, int v, F&& f) {
    for (int p : g.parents(v)) f(p, kArrow, kTail);
    for (int c : g.children(v)) f(c, kTail, kArrow);
    for (int s : g.spouses(v)) f(s, kArrow, kArrow);
}

std::vector<char> mask_of(const GraphBase& g, const NodeSet& s) {
    std::vector<char> m(g.num_nodes(), 0);
    for (const auto& n : s) m[static_cast<std::size_t>(g.index(n))] = 1;
    return m;
}

// Reachability over (node, mark-at-node) states. A walk may pass a non-collider
// outside Z and a collider that is an ancestor of Z (or in Z). `start_allowed`
// filters the first edge out of x; `stop` is a node the walk may not pass through.
bool m_connected(const GraphBase& g, int x, int y, const std::vector<char>& in_z,
                 const std::function<bool(int, char, char)>& start_allowed, int stop = -1) {
    std::vector<int> seeds;
    for (std::size_t i = 0; i < in_z.size(); ++i)
        if (in_z[i]) seeds.push_back(static_cast<int>(i));
    const auto an_z = g.ancestor_mask(seeds);

    const std::size_t n = g.num_nodes();
    std::vector<char> visited(2 * n, 0);
    std::vector<std::pair<int, char>> stack;
    for_each_incident(g, x, [&](int u, char mark_x, char mark_u) {
        if (!start_allowed(u, mark_x, mark_u)) return;
        auto key = 2 * static_cast<std::size_t>(u) + static_cast<std::size_t>(mark_u);
        if (!visited[key]) {
            visited[key] = 1;
            stack.emplace_back(u, mark_u);
        }
    });

    while (!stack.empty()) {
        auto [v, arrived] = stack.back();
        stack.pop_back();
        if (v == y) return true;
        if (v == stop) continue;
        for_each_incident(g, v, [&](int u, char mark_v, char mark_u) {
            const bool collider = arrived == kArrow && mark_v == kArrow;
            const bool pass = collider ? an_z[static_cast<std::size_t>(v)] != 0 : in_z[static_cast<std::size_t>(v)] == 0;
            if (!pass) return;
            auto key = 2 * static_cast<std::size_t>(u) + static_cast<std::size_t>(mark_u);
            if (!visited[key]) {
                visited[key] = 1;
                stack.emplace_back(u, mark_u);
            }
        });
    }
    return false;
}

bool any_edge(int, char, char) { return true; }

void check_query(const GraphBase& g, const std::string& x, const std::string& y, const NodeSet& z) {
    g.index(x);
    g.index(y);
    if (x == y) throw std::invalid_argument("separation query with identical endpoints: " + x);
    for (const auto& v : z) {
        g.index(v);
        if (v == x || v == y) throw std::invalid_argument("conditioning set contains an endpoint: " + v);
    }
}

bool backdoor_connected(const Mag& mag, int w, int y, const std::vector<char>& in_z) {
    auto start = [&](int u, char mark_w, char mark_u) {
        // A visible edge out of w does not start a generalized back-door path.
        if (mark_w == kTail && mark_u == kArrow) return !is_visible(mag, mag.name(w), mag.name(u));
        return true;
    };
    return m_connected(mag, w, y, in_z, start, w);
}

}  // namespace

std::string to_string(const NodeSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ", ";
        out += v;
        first = false;
    }
    return out + "}";
}

std::string to_string(const Path& p) {
    std::string out;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        out += p.nodes[i];
        if (i < p.steps.size()) {
            switch (p.steps[i]) {
                case StepKind::forward: out += " -> "; break;
                case StepKind::backward: out += " <- "; break;
                case StepKind::bidirected: out += " <-> "; break;
            }
        }
    }
    return out;
}

bool size_then_lex(const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

GraphBase::GraphBase(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& directed,
                     const std::vector<std::pair<std::string, std::string>>& bidirected) {
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
        throw std::invalid_argument("duplicate node name: " + *std::adjacent_find(nodes.begin(), nodes.end()));
    m_names = std::move(nodes);
    for (std::size_t i = 0; i < m_names.size(); ++i) {
        if (m_names[i].empty()) throw std::invalid_argument("empty node name");
        m_index.emplace(m_names[i], static_cast<int>(i));
    }
    const std::size_t n = m_names.size();
    m_adj.parents.assign(n, {});
    m_adj.children.assign(n, {});
    m_adj.spouses.assign(n, {});

    std::set<std::pair<int, int>> seen;
    auto claim = [&](int a, int b, const std::string& an, const std::string& bn) {
        if (a == b) throw std::invalid_argument("self-loop on node " + an);
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            throw std::invalid_argument("more than one edge between " + an + " and " + bn);
    };
    for (const auto& [from, to] : directed) {
        int a = index(from), b = index(to);
        claim(a, b, from, to);
        m_adj.children[static_cast<std::size_t>(a)].push_back(b);
        m_adj.parents[static_cast<std::size_t>(b)].push_back(a);
    }
    for (const auto& [u, v] : bidirected) {
        int a = index(u), b = index(v);
        claim(a, b, u, v);
        m_adj.spouses[static_cast<std::size_t>(a)].push_back(b);
        m_adj.spouses[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto* lists : {&m_adj.parents, &m_adj.children, &m_adj.spouses})
        for (auto& l : *lists) std::sort(l.begin(), l.end());
}

int GraphBase::index(const std::string& name) const {
    auto it = m_index.find(name);
    if (it == m_index.end()) throw std::invalid_argument("unknown node: " + name);
    return it->second;
}

bool GraphBase::has_directed(int from, int to) const {
    const auto& c = children(from);
    return std::binary_search(c.begin(), c.end(), to);
}

bool GraphBase::has_bidirected(int a, int b) const {
    const auto& s = spouses(a);
    return std::binary_search(s.begin(), s.end(), b);
}

bool GraphBase::adjacent(int a, int b) const {
    return has_directed(a, b) || has_directed(b, a) || has_bidirected(a, b);
}

NodeSet GraphBase::adjacent_nodes(const std::string& v) const {
    NodeSet out;
    int i = index(v);
    for_each_incident(*this, i, [&](int u, char, char) { out.insert(name(u)); });
    return out;
}

NodeSet GraphBase::parents_of(const std::string& v) const {
    NodeSet out;
    for (int p : parents(index(v))) out.insert(name(p));
    return out;
}

NodeSet GraphBase::children_of(const std::string& v) const {
    NodeSet out;
    for (int c : children(index(v))) out.insert(name(c));
    return out;
}

NodeSet GraphBase::spouses_of(const std::string& v) const {
    NodeSet out;
    for (int s : spouses(index(v))) out.insert(name(s));
    return out;
}

std::vector<Edge> GraphBase::edges() const {
    std::vector<Edge> out;
    for (std::size_t a = 0; a < num_nodes(); ++a) {
        for (int c : m_adj.children[a]) out.push_back({m_names[a], name(c), EdgeKind::directed});
        for (int s : m_adj.spouses[a])
            if (static_cast<std::size_t>(s) > a) out.push_back({m_names[a], name(s), EdgeKind::bidirected});
    }
    std::sort(out.begin(), out.end(), [](const Edge& l, const Edge& r) {
        if (l.kind != r.kind) return l.kind < r.kind;
        return std::tie(l.from, l.to) < std::tie(r.from, r.to);
    });
    return out;
}

std::size_t GraphBase::num_edges() const {
    std::size_t total = 0;
    for (std::size_t a = 0; a < num_nodes(); ++a) total += m_adj.children[a].size() + m_adj.spouses[a].size();
    std::size_t bidirected = 0;
    for (const auto& s : m_adj.spouses) bidirected += s.size();
    return total - bidirected / 2;
}

std::vector<int> GraphBase::indices(const NodeSet& s) const {
    std::vector<int> out;
    out.reserve(s.size());
    for (const auto& v : s) out.push_back(index(v));
    return out;
}

NodeSet GraphBase::to_names(const std::vector<char>& mask) const {
    NodeSet out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.insert(m_names[i]);
    return out;
}

std::vector<char> GraphBase::ancestor_mask(const std::vector<int>& seeds) const {
    std::vector<char> mark(num_nodes(), 0);
    std::vector<int> stack(seeds.begin(), seeds.end());
    for (int s : seeds) mark[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int p : parents(v)) {
            if (!mark[static_cast<std::size_t>(p)]) {
                mark[static_cast<std::size_t>(p)] = 1;
                stack.push_back(p);
            }
        }
    }
    return mark;
}

std::vector<char> GraphBase::descendant_mask(const std::vector<int>& seeds) const {
    std::vector<char> mark(num_nodes(), 0);
    std::vector<int> stack(seeds.begin(), seeds.end());
    for (int s : seeds) mark[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int c : children(v)) {
            if (!mark[static_cast<std::size_t>(c)]) {
                mark[static_cast<std::size_t>(c)] = 1;
                stack.push_back(c);
            }
        }
    }
    return mark;
}

void GraphBase::check_acyclic() const {
    std::vector<int> indegree(num_nodes(), 0);
    for (std::size_t v = 0; v < num_nodes(); ++v) indegree[v] = static_cast<int>(m_adj.parents[v].size());
    std::vector<int> ready;
    for (std::size_t v = 0; v < num_nodes(); ++v)
        if (indegree[v] == 0) ready.push_back(static_cast<int>(v));
    std::size_t visited = 0;
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        ++visited;
        for (int c : children(v))
            if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
    if (visited != num_nodes()) throw std::invalid_argument("graph contains a directed cycle");
}

Dag::Dag(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges)
    : GraphBase(std::move(nodes), edges, {}) {
    check_acyclic();
}

std::vector<std::string> Dag::topological_order() const {
    std::vector<int> indegree(num_nodes(), 0);
    for (std::size_t v = 0; v < num_nodes(); ++v) indegree[v] = static_cast<int>(parents(static_cast<int>(v)).size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (std::size_t v = 0; v < num_nodes(); ++v)
        if (indegree[v] == 0) ready.push(static_cast<int>(v));
    std::vector<std::string> order;
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(name(v));
        for (int c : children(v))
            if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
    return order;
}

Mag::Mag(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& directed,
         const std::vector<std::pair<std::string, std::string>>& bidirected)
    : GraphBase(std::move(nodes), directed, bidirected) {
    check_acyclic();
    for (std::size_t a = 0; a < num_nodes(); ++a) {
        for (int b : spouses(static_cast<int>(a))) {
            if (static_cast<std::size_t>(b) < a) continue;
            auto an_a = ancestor_mask({static_cast<int>(a)});
            auto an_b = ancestor_mask({b});
            if (an_a[static_cast<std::size_t>(b)] || an_b[a])
                throw std::invalid_argument("almost directed cycle through " + name(static_cast<int>(a)) + " <-> " +
                                            name(b));
        }
    }
}

Mag Mag::from_dag(const Dag& dag) {
    std::vector<std::pair<std::string, std::string>> directed;
    for (const auto& e : dag.edges()) directed.emplace_back(e.from, e.to);
    return Mag(dag.names(), directed, {});
}

NodeSet ancestors(const GraphBase& g, const std::string& v) {
    auto mask = g.ancestor_mask({g.index(v)});
    mask[static_cast<std::size_t>(g.index(v))] = 0;
    return g.to_names(mask);
}

NodeSet descendants(const GraphBase& g, const std::string& v) {
    auto mask = g.descendant_mask({g.index(v)});
    mask[static_cast<std::size_t>(g.index(v))] = 0;
    return g.to_names(mask);
}

bool m_separated(const Mag& mag, const std::string& x, const std::string& y, const NodeSet& z) {
    check_query(mag, x, y, z);
    return !m_connected(mag, mag.index(x), mag.index(y), mask_of(mag, z), any_edge);
}

bool d_separated(const Dag& dag, const std::string& x, const std::string& y, const NodeSet& z) {
    check_query(dag, x, y, z);
    return !m_connected(dag, dag.index(x), dag.index(y), mask_of(dag, z), any_edge);
}

bool is_maximal(const Mag& mag) {
    const int n = static_cast<int>(mag.num_nodes());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (mag.adjacent(a, b)) continue;
            auto in_z = mag.ancestor_mask({a, b});
            in_z[static_cast<std::size_t>(a)] = 0;
            in_z[static_cast<std::size_t>(b)] = 0;
            if (m_connected(mag, a, b, in_z, any_edge)) return false;
        }
    }
    return true;
}

bool is_visible(const Mag& mag, const std::string& from, const std::string& to) {
    const int a = mag.index(from);
    const int b = mag.index(to);
    if (!mag.has_directed(a, b)) throw std::invalid_argument("no directed edge " + from + " -> " + to);

    // Walk back from a along bidirected edges through parents of b; at every
    // reached node look for an edge into it from a node not adjacent to b.
    const auto& pa_b = mag.parents(b);
    auto is_parent_of_b = [&](int v) { return std::binary_search(pa_b.begin(), pa_b.end(), v); };
    std::vector<char> seen(mag.num_nodes(), 0);
    std::vector<int> stack{a};
    seen[static_cast<std::size_t>(a)] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        bool found = false;
        for_each_incident(mag, u, [&](int k, char mark_u, char) {
            if (found || mark_u != kArrow || k == b) return;
            if (!mag.adjacent(k, b)) found = true;
        });
        if (found) return true;
        for (int s : mag.spouses(u)) {
            if (!seen[static_cast<std::size_t>(s)] && is_parent_of_b(s)) {
                seen[static_cast<std::size_t>(s)] = 1;
                stack.push_back(s);
            }
        }
    }
    return false;
}

std::vector<Path> generalized_backdoor_paths(const Mag& mag, const std::string& w, const std::string& y) {
    const int wi = mag.index(w);
    const int yi = mag.index(y);
    if (wi == yi) throw std::invalid_argument("treatment and outcome must differ");

    std::vector<Path> out;
    Path current;
    current.nodes.push_back(w);
    std::vector<char> on_path(mag.num_nodes(), 0);
    on_path[static_cast<std::size_t>(wi)] = 1;

    std::function<void(int)> extend = [&](int v) {
        if (v == yi) {
            out.push_back(current);
            return;
        }
        auto step = [&](int u, StepKind kind) {
            if (on_path[static_cast<std::size_t>(u)]) return;
            if (v == wi && kind == StepKind::forward && is_visible(mag, w, mag.name(u))) return;
            on_path[static_cast<std::size_t>(u)] = 1;
            current.nodes.push_back(mag.name(u));
            current.steps.push_back(kind);
            extend(u);
            current.nodes.pop_back();
            current.steps.pop_back();
            on_path[static_cast<std::size_t>(u)] = 0;
        };
        for (int c : mag.children(v)) step(c, StepKind::forward);
        for (int p : mag.parents(v)) step(p, StepKind::backward);
        for (int s : mag.spouses(v)) step(s, StepKind::bidirected);
    };
    extend(wi);
    std::sort(out.begin(), out.end(), [](const Path& l, const Path& r) {
        if (l.nodes.size() != r.nodes.size()) return l.nodes.size() < r.nodes.size();
        return l.nodes < r.nodes;
    });
    return out;
}

bool path_blocked(const GraphBase& g, const Path& path, const NodeSet& z) {
    if (path.nodes.size() != path.steps.size() + 1) throw std::invalid_argument("malformed path");
    for (std::size_t i = 1; i + 1 < path.nodes.size(); ++i) {
        const bool head_in = path.steps[i - 1] != StepKind::backward;
        const bool head_out = path.steps[i] != StepKind::forward;
        const auto& v = path.nodes[i];
        if (head_in && head_out) {
            auto de = g.descendant_mask({g.index(v)});
            bool opened = false;
            for (const auto& member : z) opened = opened || de[static_cast<std::size_t>(g.index(member))];
            if (!opened) return true;
        } else if (z.count(v)) {
            return true;
        }
    }
    return false;
}

ForbiddenSet forbidden_set(const GraphBase& g, const std::string& w, const std::string& y) {
    const int wi = g.index(w);
    const int yi = g.index(y);
    ForbiddenSet result;
    auto de_w = g.descendant_mask({wi});
    if (wi == yi || !de_w[static_cast<std::size_t>(yi)]) return result;
    result.has_causal_path = true;
    auto an_y = g.ancestor_mask({yi});
    for (std::size_t v = 0; v < g.num_nodes(); ++v)
        if (de_w[v] && an_y[v] && static_cast<int>(v) != wi) result.nodes.insert(g.name(static_cast<int>(v)));
    return result;
}

bool satisfies_gac(const Mag& mag, const std::string& w, const std::string& y, const NodeSet& z) {
    check_query(mag, w, y, z);
    const int wi = mag.index(w);
    const int yi = mag.index(y);
    if (!mag.has_directed(wi, yi) || !is_visible(mag, w, y)) return false;
    const auto forb = forbidden_set(mag, w, y);
    for (const auto& v : z)
        if (forb.nodes.count(v)) return false;
    return !backdoor_connected(mag, wi, yi, mask_of(mag, z));
}

std::vector<NodeSet> enumerate_minimal_gac_sets(const Mag& mag, const std::string& w, const std::string& y,
                                                const NodeSet& universe) {
    if (universe.size() > kMaxEnumerationUniverse)
        throw CapacityError("adjustment-set enumeration limited to " + std::to_string(kMaxEnumerationUniverse) +
                            " candidate nodes, got " + std::to_string(universe.size()));
    check_query(mag, w, y, universe);
    const int wi = mag.index(w);
    const int yi = mag.index(y);
    if (!mag.has_directed(wi, yi) || !is_visible(mag, w, y)) return {};

    const std::vector<std::string> items(universe.begin(), universe.end());
    const auto forb = forbidden_set(mag, w, y);
    std::uint32_t forbidden_bits = 0;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (forb.nodes.count(items[i])) forbidden_bits |= 1u << i;

    std::vector<std::uint32_t> found;
    const std::size_t m = items.size();
    for (std::size_t k = 0; k <= m; ++k) {
        // Visit k-subsets in lexicographic order of their index sequences.
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::uint32_t bits = 0;
            for (auto i : pick) bits |= 1u << i;
            bool dominated = (bits & forbidden_bits) != 0;
            for (auto f : found) dominated = dominated || (f & bits) == f;
            if (!dominated) {
                std::vector<char> in_z(mag.num_nodes(), 0);
                for (auto i : pick) in_z[static_cast<std::size_t>(mag.index(items[i]))] = 1;
                if (!backdoor_connected(mag, wi, yi, in_z)) found.push_back(bits);
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == m - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }

    std::vector<NodeSet> out;
    for (auto bits : found) {
        NodeSet s;
        for (std::size_t i = 0; i < m; ++i)
            if (bits & (1u << i)) s.insert(items[i]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), size_then_lex);
    return out;
}

Mag latent_project(const Dag& dag, const NodeSet& latents) {
    for (const auto& l : latents) dag.index(l);
    std::vector<std::string> observed;
    for (const auto& v : dag.names())
        if (!latents.count(v)) observed.push_back(v);

    // Observed a, b are adjacent iff an inducing path joins them, which holds iff
    // they are d-connected given the observed ancestors of {a, b}.
    std::vector<std::pair<std::string, std::string>> directed, bidirected;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        for (std::size_t j = i + 1; j < observed.size(); ++j) {
            const int a = dag.index(observed[i]);
            const int b = dag.index(observed[j]);
            auto in_z = dag.ancestor_mask({a, b});
            for (const auto& l : latents) in_z[static_cast<std::size_t>(dag.index(l))] = 0;
            in_z[static_cast<std::size_t>(a)] = 0;
            in_z[static_cast<std::size_t>(b)] = 0;
            if (!m_connected(dag, a, b, in_z, any_edge)) continue;
            const bool a_anc_b = dag.ancestor_mask({b})[static_cast<std::size_t>(a)] != 0;
            const bool b_anc_a = dag.ancestor_mask({a})[static_cast<std::size_t>(b)] != 0;
            if (a_anc_b)
                directed.emplace_back(observed[i], observed[j]);
            else if (b_anc_a)
                directed.emplace_back(observed[j], observed[i]);
            else
                bidirected.emplace_back(observed[i], observed[j]);
        }
    }
    return Mag(observed, directed, bidirected);
}

}  // namespace ce2ls
