#ifndef CE2LS_GRAPH_IO_HPP
#define CE2LS_GRAPH_IO_HPP

#include <ce2ls/graph.hpp>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ce2ls {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), m_line(line) {}

    int line() const { return m_line; }

private:
    int m_line;
};

struct GraphSpec {
    std::vector<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> directed;
    std::vector<std::pair<std::string, std::string>> bidirected;
};

// Called for lines that are not edges, `node` declarations or comments. Returns
// false when the line is not understood, which turns into a ParseError.
using ExtraLineHandler = std::function<bool(const std::vector<std::string>& tokens, int line)>;

GraphSpec parse_graph_spec(const std::string& text, const ExtraLineHandler& extra = {});

Dag parse_dag(const std::string& text);
Mag parse_mag(const std::string& text);

Dag to_dag(const GraphSpec& spec);
Mag to_mag(const GraphSpec& spec);

std::string write_graph(const GraphBase& g);

std::vector<std::string> split_tokens(const std::string& line);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ce2ls

#endif  // CE2LS_GRAPH_IO_HPP
