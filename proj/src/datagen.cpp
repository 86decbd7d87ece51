#include <ce2ls/datagen.hpp>
#include <ce2ls/graph_io.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <random>
#include <sstream>

namespace ce2ls {

namespace {

struct Directive {
    std::vector<std::string> tokens;
    int line = 0;
};

struct RawModel {
    GraphSpec graph;
    std::vector<Directive> directives;
    bool has_cpt = false;
};

double parse_number(const std::string& s, int line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) throw ParseError(line, "not a number: '" + s + "'");
    return v;
}

// Puts spaces around the cpt separators so `A|B:0.1 0.9;...` also parses.
std::vector<std::string> cpt_tokens(const std::vector<std::string>& tokens) {
    std::string joined;
    for (const auto& t : tokens) {
        for (char c : t) {
            if (c == '|' || c == ':' || c == ';') {
                joined += ' ';
                joined += c;
                joined += ' ';
            } else {
                joined += c;
            }
        }
        joined += ' ';
    }
    return split_tokens(joined);
}

RawModel read_raw(const std::string& text) {
    static const std::set<std::string> keywords{"weight", "noise",     "intercept", "binary",
                                                "latent", "treatment", "outcome",   "cpt"};
    RawModel raw;
    std::vector<std::pair<std::string, std::string>> cpt_edges;
    raw.graph = parse_graph_spec(text, [&](const std::vector<std::string>& tokens, int line) {
        const auto& head = tokens[0];
        if (head.rfind("cpt", 0) == 0 && (head == "cpt" || head.size() > 3)) {
            auto toks = cpt_tokens(tokens);
            if (toks[0] != "cpt") return false;
            raw.has_cpt = true;
            raw.directives.push_back({toks, line});
            return true;
        }
        if (!keywords.count(head)) return false;
        raw.directives.push_back({tokens, line});
        return true;
    });
    return raw;
}

ModelRoles read_roles(const RawModel& raw, const GraphBase& g) {
    ModelRoles roles;
    for (const auto& d : raw.directives) {
        const auto& t = d.tokens;
        if (t[0] == "latent") {
            if (t.size() < 2) throw ParseError(d.line, "`latent` needs at least one node");
            for (std::size_t i = 1; i < t.size(); ++i) {
                if (!g.contains(t[i])) throw ParseError(d.line, "unknown node " + t[i]);
                roles.latents.insert(t[i]);
            }
        } else if (t[0] == "treatment" || t[0] == "outcome") {
            if (t.size() != 2) throw ParseError(d.line, "`" + t[0] + "` takes exactly one node");
            if (!g.contains(t[1])) throw ParseError(d.line, "unknown node " + t[1]);
            (t[0] == "treatment" ? roles.treatment : roles.outcome) = t[1];
        }
    }
    if (!roles.treatment.empty() && roles.latents.count(roles.treatment))
        throw std::invalid_argument("treatment " + roles.treatment + " is declared latent");
    if (!roles.outcome.empty() && roles.latents.count(roles.outcome))
        throw std::invalid_argument("outcome " + roles.outcome + " is declared latent");
    return roles;
}

Dag build_dag(const RawModel& raw) {
    if (!raw.graph.bidirected.empty())
        throw std::invalid_argument("model graphs must be DAGs; found " + raw.graph.bidirected.front().first +
                                    " <-> " + raw.graph.bidirected.front().second);
    return Dag(raw.graph.nodes, raw.graph.directed);
}

double expit(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

int DiscreteBn::levels(const std::string& node) const {
    const auto& cpt = cpts.at(node);
    return static_cast<int>(cpt.rows.front().size());
}

LinearSem make_linear_sem(Dag dag, std::map<std::pair<std::string, std::string>, double> weights,
                          std::map<std::string, double> noise_sd, NodeSet binary_nodes,
                          std::map<std::string, double> intercepts, ModelRoles roles) {
    for (const auto& [edge, w] : weights) {
        if (!dag.contains(edge.first) || !dag.contains(edge.second) ||
            !dag.has_directed(dag.index(edge.first), dag.index(edge.second)))
            throw std::invalid_argument("weight given for a non-edge " + edge.first + " -> " + edge.second);
        if (!std::isfinite(w)) throw std::invalid_argument("non-finite weight");
    }
    for (const auto& e : dag.edges()) weights.try_emplace({e.from, e.to}, 1.0);
    for (const auto& [node, sd] : noise_sd) {
        dag.index(node);
        if (!(sd > 0) || !std::isfinite(sd)) throw std::invalid_argument("noise sd for " + node + " must be positive");
    }
    for (const auto& v : dag.names()) noise_sd.try_emplace(v, 1.0);
    for (const auto& [node, c] : intercepts) dag.index(node);
    for (const auto& v : binary_nodes) dag.index(v);
    return LinearSem{std::move(dag), std::move(weights), std::move(noise_sd), std::move(intercepts),
                     std::move(binary_nodes), std::move(roles)};
}

LinearSem parse_linear_sem(const std::string& text) {
    auto raw = read_raw(text);
    if (raw.has_cpt) throw std::invalid_argument("`cpt` lines belong to a discrete network, not a linear SEM");
    auto dag = build_dag(raw);
    auto roles = read_roles(raw, dag);

    std::map<std::pair<std::string, std::string>, double> weights;
    std::map<std::string, double> noise, intercepts;
    NodeSet binary;
    for (const auto& d : raw.directives) {
        const auto& t = d.tokens;
        auto need_node = [&](const std::string& v) {
            if (!dag.contains(v)) throw ParseError(d.line, "unknown node " + v);
        };
        if (t[0] == "weight") {
            if (t.size() != 4) throw ParseError(d.line, "expected `weight FROM TO value`");
            need_node(t[1]);
            need_node(t[2]);
            if (!dag.has_directed(dag.index(t[1]), dag.index(t[2])))
                throw ParseError(d.line, "no edge " + t[1] + " -> " + t[2]);
            if (!weights.emplace(std::make_pair(t[1], t[2]), parse_number(t[3], d.line)).second)
                throw ParseError(d.line, "duplicate weight for " + t[1] + " -> " + t[2]);
        } else if (t[0] == "noise") {
            if (t.size() != 3) throw ParseError(d.line, "expected `noise NODE sd`");
            need_node(t[1]);
            double sd = parse_number(t[2], d.line);
            if (!(sd > 0)) throw ParseError(d.line, "noise sd must be positive");
            noise[t[1]] = sd;
        } else if (t[0] == "intercept") {
            if (t.size() != 3) throw ParseError(d.line, "expected `intercept NODE value`");
            need_node(t[1]);
            intercepts[t[1]] = parse_number(t[2], d.line);
        } else if (t[0] == "binary") {
            if (t.size() < 2) throw ParseError(d.line, "`binary` needs at least one node");
            for (std::size_t i = 1; i < t.size(); ++i) {
                need_node(t[i]);
                binary.insert(t[i]);
            }
        }
    }
    return make_linear_sem(std::move(dag), std::move(weights), std::move(noise), std::move(binary),
                           std::move(intercepts), std::move(roles));
}

DiscreteBn parse_discrete_bn(const std::string& text) {
    auto raw = read_raw(text);
    // Parents named in cpt lines count as edges.
    for (const auto& d : raw.directives) {
        if (d.tokens[0] != "cpt") continue;
        const auto& t = d.tokens;
        auto bar = std::find(t.begin(), t.end(), "|");
        auto colon = std::find(t.begin(), t.end(), ":");
        if (t.size() < 2 || colon == t.end()) throw ParseError(d.line, "expected `cpt NODE [| PARENTS] : probs`");
        const auto& node = t[1];
        if (std::find(raw.graph.nodes.begin(), raw.graph.nodes.end(), node) == raw.graph.nodes.end())
            raw.graph.nodes.push_back(node);
        if (bar != t.end() && bar < colon) {
            for (auto it = bar + 1; it != colon; ++it) {
                if (std::find(raw.graph.nodes.begin(), raw.graph.nodes.end(), *it) == raw.graph.nodes.end())
                    raw.graph.nodes.push_back(*it);
                std::pair<std::string, std::string> e{*it, node};
                if (std::find(raw.graph.directed.begin(), raw.graph.directed.end(), e) == raw.graph.directed.end())
                    raw.graph.directed.push_back(e);
            }
        }
    }
    auto dag = build_dag(raw);
    auto roles = read_roles(raw, dag);

    DiscreteBn bn{dag, {}, roles};
    std::map<std::string, int> cpt_line;
    for (const auto& d : raw.directives) {
        const auto& t = d.tokens;
        if (t[0] == "cpt") {
            auto bar = std::find(t.begin(), t.end(), "|");
            auto colon = std::find(t.begin(), t.end(), ":");
            Cpt cpt;
            if (bar != t.end() && bar < colon) cpt.parents.assign(bar + 1, colon);
            else if (colon != t.begin() + 2) throw ParseError(d.line, "expected `|` or `:` after the node name");
            std::vector<double> row;
            for (auto it = colon + 1; it != t.end(); ++it) {
                if (*it == ";") {
                    cpt.rows.push_back(std::move(row));
                    row.clear();
                    continue;
                }
                double p = parse_number(*it, d.line);
                if (p < 0 || p > 1) throw ParseError(d.line, "probability outside [0, 1]: " + *it);
                row.push_back(p);
            }
            cpt.rows.push_back(std::move(row));
            for (const auto& r : cpt.rows) {
                if (r.size() < 2) throw ParseError(d.line, "each CPT row needs at least two probabilities");
                if (r.size() != cpt.rows.front().size()) throw ParseError(d.line, "CPT rows differ in length");
                double total = 0;
                for (double p : r) total += p;
                if (std::abs(total - 1.0) > 1e-9) throw ParseError(d.line, "CPT row does not sum to 1");
            }
            if (!bn.cpts.emplace(t[1], std::move(cpt)).second) throw ParseError(d.line, "second CPT for " + t[1]);
            cpt_line[t[1]] = d.line;
        } else if (t[0] == "weight" || t[0] == "noise" || t[0] == "intercept" || t[0] == "binary") {
            throw ParseError(d.line, "`" + t[0] + "` is a linear-SEM directive");
        }
    }
    for (const auto& v : dag.names()) {
        auto it = bn.cpts.find(v);
        if (it == bn.cpts.end()) throw std::invalid_argument("no CPT for node " + v);
        NodeSet declared(it->second.parents.begin(), it->second.parents.end());
        if (declared != dag.parents_of(v))
            throw ParseError(cpt_line[v], "CPT parents of " + v + " differ from its graph parents " +
                                              to_string(dag.parents_of(v)));
    }
    for (const auto& v : dag.names()) {
        const auto& cpt = bn.cpts[v];
        std::size_t configs = 1;
        for (const auto& p : cpt.parents) configs *= static_cast<std::size_t>(bn.levels(p));
        if (cpt.rows.size() != configs)
            throw ParseError(cpt_line[v], "CPT for " + v + " has " + std::to_string(cpt.rows.size()) +
                                              " rows, expected " + std::to_string(configs));
    }
    return bn;
}

Model parse_model(const std::string& text) {
    if (read_raw(text).has_cpt) return parse_discrete_bn(text);
    return parse_linear_sem(text);
}

Dataset sample_linear_sem(const LinearSem& sem, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const auto& names = sem.dag.names();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size()));
    for (const auto& v : sem.dag.topological_order()) {
        const int j = sem.dag.index(v);
        auto intercept = sem.intercepts.count(v) ? sem.intercepts.at(v) : 0.0;
        Eigen::VectorXd mean = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), intercept);
        for (int p : sem.dag.parents(j)) mean += sem.weights.at({sem.dag.name(p), v}) * values.col(p);
        auto col = values.col(j);
        if (sem.binary_nodes.count(v)) {
            for (Eigen::Index i = 0; i < col.size(); ++i) col[i] = unif(rng) < expit(mean[i]) ? 1.0 : 0.0;
        } else {
            const double sd = sem.noise_sd.at(v);
            for (Eigen::Index i = 0; i < col.size(); ++i) col[i] = mean[i] + sd * normal(rng);
        }
    }
    std::vector<VarKind> kinds;
    for (const auto& v : names) kinds.push_back(sem.binary_nodes.count(v) ? VarKind::discrete : VarKind::continuous);
    return Dataset(names, kinds, std::move(values));
}

Dataset sample_discrete_bn(const DiscreteBn& bn, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto& names = bn.dag.names();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size()));
    for (const auto& v : bn.dag.topological_order()) {
        const auto& cpt = bn.cpts.at(v);
        std::vector<int> cols, radix;
        for (const auto& p : cpt.parents) {
            cols.push_back(bn.dag.index(p));
            radix.push_back(bn.levels(p));
        }
        auto col = values.col(bn.dag.index(v));
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            std::size_t row = 0;
            for (std::size_t k = 0; k < cols.size(); ++k)
                row = row * static_cast<std::size_t>(radix[k]) + static_cast<std::size_t>(values(i, cols[k]));
            const auto& probs = cpt.rows[row];
            double u = unif(rng), acc = 0.0;
            std::size_t value = probs.size() - 1;
            for (std::size_t s = 0; s < probs.size(); ++s) {
                acc += probs[s];
                if (u < acc) {
                    value = s;
                    break;
                }
            }
            // Guard against rounding when trailing probabilities are zero.
            while (value > 0 && probs[value] == 0.0) --value;
            col[i] = static_cast<double>(value);
        }
    }
    return Dataset(names, std::vector<VarKind>(names.size(), VarKind::discrete), std::move(values));
}

Dataset sample_model(const Model& model, std::size_t n, std::uint64_t seed) {
    return std::visit(
        [&](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearSem>)
                return sample_linear_sem(m, n, seed);
            else
                return sample_discrete_bn(m, n, seed);
        },
        model);
}

const Dag& model_dag(const Model& model) {
    return std::visit([](const auto& m) -> const Dag& { return m.dag; }, model);
}

const ModelRoles& model_roles(const Model& model) {
    return std::visit([](const auto& m) -> const ModelRoles& { return m.roles; }, model);
}

Dataset mask_latents(const Dataset& data, const NodeSet& latents, const NodeSet& protect) {
    for (const auto& v : latents)
        if (protect.count(v)) throw std::invalid_argument("cannot mask " + v + ": it is the treatment or outcome");
    return data.drop(latents);
}

double true_ace_linear(const LinearSem& sem, const std::string& w, const std::string& y) {
    const auto& dag = sem.dag;
    const int wi = dag.index(w);
    const int yi = dag.index(y);
    if (sem.binary_nodes.count(y)) throw std::invalid_argument("outcome " + y + " is binary; path sums do not apply");
    auto de_w = dag.descendant_mask({wi});
    auto an_y = dag.ancestor_mask({yi});
    for (std::size_t v = 0; v < dag.num_nodes(); ++v)
        if (de_w[v] && an_y[v] && static_cast<int>(v) != wi && static_cast<int>(v) != yi &&
            sem.binary_nodes.count(dag.name(static_cast<int>(v))))
            throw std::invalid_argument("binary mediator " + dag.name(static_cast<int>(v)) + " breaks linearity");

    std::vector<double> effect(dag.num_nodes(), 0.0);
    effect[static_cast<std::size_t>(wi)] = 1.0;
    for (const auto& v : dag.topological_order()) {
        const int j = dag.index(v);
        if (j == wi || !de_w[static_cast<std::size_t>(j)]) continue;
        for (int p : dag.parents(j)) effect[static_cast<std::size_t>(j)] += effect[static_cast<std::size_t>(p)] * sem.weights.at({dag.name(p), v});
    }
    return effect[static_cast<std::size_t>(yi)];
}

std::uint64_t derived_seed(std::uint64_t seed, int attempt) {
    return seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL;
}

ScreeningResult screen_seed(const Model& model, std::size_t n, std::uint64_t seed, const SearchConfig& config,
                            double alpha, int retries) {
    const auto& roles = model_roles(model);
    if (roles.treatment.empty() || roles.outcome.empty())
        throw std::invalid_argument("screening needs `treatment` and `outcome` in the model");
    const auto mag = latent_project(model_dag(model), roles.latents);
    NodeSet x = mag.node_set();
    x.erase(roles.treatment);
    x.erase(roles.outcome);

    ScreeningResult res;
    for (int attempt = 0; attempt <= retries; ++attempt) {
        res.seed = derived_seed(seed, attempt);
        res.attempts = attempt + 1;
        res.data = mask_latents(sample_model(model, n, res.seed), roles.latents, {roles.treatment, roles.outcome});
        auto backend = make_data_backend(res.data, alpha);
        RecordingBackend rec(*backend);
        try {
            run_ce2ls(rec, roles.treatment, roles.outcome, x, config);
        } catch (const FaithfulnessConflict&) {
            // the recorded queries still show where the data disagrees
        }
        auto log = rec.log();
        res.queries = log.size();
        res.disagreements = 0;
        for (const auto& [q, r] : log)
            if (oracle_ci(mag, q).independent != r.independent) ++res.disagreements;
        if (res.disagreements == 0) {
            res.usable = true;
            return res;
        }
    }
    return res;
}

}  // namespace ce2ls
