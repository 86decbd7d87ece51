#include <ce2ls/dataset.hpp>
#include <ce2ls/graph_io.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace ce2ls {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r\"");
        auto e = cell.find_last_not_of(" \t\r\"");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

VarKind infer_kind(const Eigen::Ref<const Eigen::VectorXd>& column) {
    std::set<double> levels;
    for (Eigen::Index i = 0; i < column.size(); ++i) {
        double v = column[i];
        if (v != std::round(v)) return VarKind::continuous;
        levels.insert(v);
        if (static_cast<int>(levels.size()) > kMaxDiscreteLevels) return VarKind::continuous;
    }
    return VarKind::discrete;
}

Dataset::Dataset(std::vector<std::string> names, std::vector<VarKind> kinds, Eigen::MatrixXd values)
    : m_names(std::move(names)), m_kinds(std::move(kinds)), m_values(std::move(values)) {
    if (m_kinds.size() != m_names.size() || static_cast<std::size_t>(m_values.cols()) != m_names.size())
        throw std::invalid_argument("dataset shape mismatch");
    for (std::size_t i = 0; i < m_names.size(); ++i)
        if (!m_index.emplace(m_names[i], static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate column: " + m_names[i]);
}

int Dataset::index(const std::string& name) const {
    auto it = m_index.find(name);
    if (it == m_index.end()) throw std::invalid_argument("unknown column: " + name);
    return it->second;
}

std::vector<int> Dataset::codes(const std::string& name, int& levels) const {
    auto col = column(name);
    std::map<double, int> code;
    for (Eigen::Index i = 0; i < col.size(); ++i) code.emplace(col[i], 0);
    int next = 0;
    for (auto& [value, c] : code) c = next++;
    levels = next;
    std::vector<int> out(static_cast<std::size_t>(col.size()));
    for (Eigen::Index i = 0; i < col.size(); ++i) out[static_cast<std::size_t>(i)] = code[col[i]];
    return out;
}

bool Dataset::is_binary(const std::string& name) const {
    auto col = column(name);
    for (Eigen::Index i = 0; i < col.size(); ++i)
        if (col[i] != 0.0 && col[i] != 1.0) return false;
    return true;
}

Dataset Dataset::drop(const NodeSet& columns) const {
    for (const auto& c : columns) index(c);
    std::vector<std::string> keep;
    for (const auto& n : m_names)
        if (!columns.count(n)) keep.push_back(n);
    return select(keep);
}

Dataset Dataset::select(const std::vector<std::string>& columns) const {
    Eigen::MatrixXd values(m_values.rows(), static_cast<Eigen::Index>(columns.size()));
    std::vector<VarKind> kinds;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        int src = index(columns[j]);
        values.col(static_cast<Eigen::Index>(j)) = m_values.col(src);
        kinds.push_back(m_kinds[static_cast<std::size_t>(src)]);
    }
    return Dataset(columns, kinds, std::move(values));
}

Dataset Dataset::read_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        header = split_csv_line(line);
    }
    if (header.empty()) throw ParseError(line_no, "missing CSV header");
    for (const auto& h : header)
        if (h.empty()) throw ParseError(line_no, "empty column name in header");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                          std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != c.size() || !std::isfinite(v))
                throw ParseError(line_no, "not a finite number: '" + c + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }

    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < header.size(); ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    std::vector<VarKind> kinds;
    for (Eigen::Index j = 0; j < values.cols(); ++j) kinds.push_back(infer_kind(values.col(j)));
    return Dataset(header, kinds, std::move(values));
}

Dataset Dataset::read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

void Dataset::write_csv(std::ostream& out) const {
    for (std::size_t j = 0; j < m_names.size(); ++j) out << (j ? "," : "") << m_names[j];
    out << '\n';
    std::ostringstream cell;
    cell << std::setprecision(10);
    for (Eigen::Index i = 0; i < m_values.rows(); ++i) {
        for (Eigen::Index j = 0; j < m_values.cols(); ++j) {
            cell.str("");
            if (m_kinds[static_cast<std::size_t>(j)] == VarKind::discrete)
                cell << static_cast<long long>(m_values(i, j));
            else
                cell << m_values(i, j);
            out << (j ? "," : "") << cell.str();
        }
        out << '\n';
    }
}

void Dataset::write_csv_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out);
}

}  // namespace ce2ls
