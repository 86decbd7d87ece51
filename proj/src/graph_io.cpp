#include <ce2ls/graph_io.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ce2ls {

std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

GraphSpec parse_graph_spec(const std::string& text, const ExtraLineHandler& extra) {
    GraphSpec spec;
    std::set<std::string> seen;
    auto add_node = [&](const std::string& v) {
        if (seen.insert(v).second) spec.nodes.push_back(v);
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto tokens = split_tokens(raw);
        if (tokens.empty()) continue;

        if (tokens.size() == 3 && (tokens[1] == "->" || tokens[1] == "<-" || tokens[1] == "<->")) {
            const auto& a = tokens[0];
            const auto& b = tokens[2];
            add_node(a);
            add_node(b);
            if (tokens[1] == "->")
                spec.directed.emplace_back(a, b);
            else if (tokens[1] == "<-")
                spec.directed.emplace_back(b, a);
            else
                spec.bidirected.emplace_back(a, b);
            continue;
        }
        if (tokens[0] == "node") {
            if (tokens.size() < 2) throw ParseError(line_no, "`node` needs at least one name");
            for (std::size_t i = 1; i < tokens.size(); ++i) add_node(tokens[i]);
            continue;
        }
        if (extra && extra(tokens, line_no)) continue;
        throw ParseError(line_no, "cannot parse: " + raw);
    }
    return spec;
}

Dag to_dag(const GraphSpec& spec) {
    if (!spec.bidirected.empty())
        throw std::invalid_argument("a DAG cannot contain bidirected edges (" + spec.bidirected.front().first +
                                    " <-> " + spec.bidirected.front().second + ")");
    return Dag(spec.nodes, spec.directed);
}

Mag to_mag(const GraphSpec& spec) { return Mag(spec.nodes, spec.directed, spec.bidirected); }

Dag parse_dag(const std::string& text) { return to_dag(parse_graph_spec(text)); }

Mag parse_mag(const std::string& text) { return to_mag(parse_graph_spec(text)); }

std::string write_graph(const GraphBase& g) {
    std::ostringstream out;
    std::set<std::string> touched;
    for (const auto& e : g.edges()) {
        touched.insert(e.from);
        touched.insert(e.to);
    }
    for (const auto& v : g.names())
        if (!touched.count(v)) out << "node " << v << '\n';
    for (const auto& e : g.edges())
        out << e.from << (e.kind == EdgeKind::directed ? " -> " : " <-> ") << e.to << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ce2ls
