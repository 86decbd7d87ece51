#ifndef CE2LS_GRAPH_HPP
#define CE2LS_GRAPH_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ce2ls {

// Node sets are ordered by name so every serialized output is lexicographic.
using NodeSet = std::set<std::string>;

std::string to_string(const NodeSet& s);

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EdgeKind { directed, bidirected };

struct Edge {
    std::string from;
    std::string to;
    EdgeKind kind = EdgeKind::directed;

    auto operator<=>(const Edge&) const = default;
};

// Orientation of one step of a path, read from nodes[i] towards nodes[i + 1].
enum class StepKind { forward, backward, bidirected };

struct Path {
    std::vector<std::string> nodes;
    std::vector<StepKind> steps;

    std::size_t length() const { return steps.size(); }
    bool operator==(const Path&) const = default;
};

std::string to_string(const Path& p);

namespace detail {
struct Adjacency {
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;
    std::vector<std::vector<int>> spouses;
};
}  // namespace detail

// Shared storage for DAGs and MAGs. Node indices follow lexicographic name order.
class GraphBase {
public:
    std::size_t num_nodes() const { return m_names.size(); }
    const std::vector<std::string>& names() const { return m_names; }
    const std::string& name(int i) const { return m_names[static_cast<std::size_t>(i)]; }
    bool contains(const std::string& name) const { return m_index.count(name) > 0; }
    int index(const std::string& name) const;
    NodeSet node_set() const { return NodeSet(m_names.begin(), m_names.end()); }

    const std::vector<int>& parents(int i) const { return m_adj.parents[static_cast<std::size_t>(i)]; }
    const std::vector<int>& children(int i) const { return m_adj.children[static_cast<std::size_t>(i)]; }
    const std::vector<int>& spouses(int i) const { return m_adj.spouses[static_cast<std::size_t>(i)]; }

    bool has_directed(int from, int to) const;
    bool has_bidirected(int a, int b) const;
    bool adjacent(int a, int b) const;
    bool adjacent(const std::string& a, const std::string& b) const { return adjacent(index(a), index(b)); }

    NodeSet adjacent_nodes(const std::string& v) const;
    NodeSet parents_of(const std::string& v) const;
    NodeSet children_of(const std::string& v) const;
    NodeSet spouses_of(const std::string& v) const;

    std::vector<Edge> edges() const;
    std::size_t num_edges() const;

    std::vector<int> indices(const NodeSet& s) const;
    NodeSet to_names(const std::vector<char>& mask) const;

    // Reflexive-transitive closures over directed edges, as index masks.
    std::vector<char> ancestor_mask(const std::vector<int>& seeds) const;
    std::vector<char> descendant_mask(const std::vector<int>& seeds) const;

protected:
    GraphBase(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& directed,
              const std::vector<std::pair<std::string, std::string>>& bidirected);

    void check_acyclic() const;

    std::vector<std::string> m_names;
    std::unordered_map<std::string, int> m_index;
    detail::Adjacency m_adj;
};

class Dag : public GraphBase {
public:
    Dag(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges);

    std::vector<std::string> topological_order() const;
};

// Mixed graph with directed and bidirected edges. Ancestrality is checked on
// construction; maximality is not (see is_maximal).
class Mag : public GraphBase {
public:
    Mag(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& directed,
        const std::vector<std::pair<std::string, std::string>>& bidirected);

    static Mag from_dag(const Dag& dag);
};

NodeSet ancestors(const GraphBase& g, const std::string& v);
NodeSet descendants(const GraphBase& g, const std::string& v);

bool m_separated(const Mag& mag, const std::string& x, const std::string& y, const NodeSet& z);
bool d_separated(const Dag& dag, const std::string& x, const std::string& y, const NodeSet& z);

bool is_maximal(const Mag& mag);

bool is_visible(const Mag& mag, const std::string& from, const std::string& to);

std::vector<Path> generalized_backdoor_paths(const Mag& mag, const std::string& w, const std::string& y);

// True when z m-blocks the path according to the collider/non-collider rule.
bool path_blocked(const GraphBase& g, const Path& path, const NodeSet& z);

struct ForbiddenSet {
    NodeSet nodes;
    bool has_causal_path = false;
};

ForbiddenSet forbidden_set(const GraphBase& g, const std::string& w, const std::string& y);

// Amenability, forbidden-set disjointness and back-door blocking for (w, y).
bool satisfies_gac(const Mag& mag, const std::string& w, const std::string& y, const NodeSet& z);

std::vector<NodeSet> enumerate_minimal_gac_sets(const Mag& mag, const std::string& w, const std::string& y,
                                                const NodeSet& universe);

inline constexpr std::size_t kMaxEnumerationUniverse = 20;

Mag latent_project(const Dag& dag, const NodeSet& latents);

// Sorting helper used for all reported collections of sets: by size, then lexicographic.
bool size_then_lex(const NodeSet& a, const NodeSet& b);

}  // namespace ce2ls

#endif  // CE2LS_GRAPH_HPP
