#ifndef CE2LS_DATASET_HPP
#define CE2LS_DATASET_HPP

#include <ce2ls/graph.hpp>

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace ce2ls {

enum class VarKind { continuous, discrete };

// Columns with integer values and at most this many levels are read as discrete.
inline constexpr int kMaxDiscreteLevels = 8;

class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> names, std::vector<VarKind> kinds, Eigen::MatrixXd values);

    std::size_t rows() const { return static_cast<std::size_t>(m_values.rows()); }
    std::size_t cols() const { return m_names.size(); }

    const std::vector<std::string>& names() const { return m_names; }
    const std::vector<VarKind>& kinds() const { return m_kinds; }
    const Eigen::MatrixXd& values() const { return m_values; }

    bool has(const std::string& name) const { return m_index.count(name) > 0; }
    int index(const std::string& name) const;
    VarKind kind(const std::string& name) const { return m_kinds[static_cast<std::size_t>(index(name))]; }
    Eigen::Ref<const Eigen::VectorXd> column(const std::string& name) const { return m_values.col(index(name)); }

    // Discrete columns are recoded to 0..L-1 in ascending value order.
    std::vector<int> codes(const std::string& name, int& levels) const;
    bool is_binary(const std::string& name) const;

    Dataset drop(const NodeSet& columns) const;
    Dataset select(const std::vector<std::string>& columns) const;

    static Dataset read_csv(std::istream& in);
    static Dataset read_csv_file(const std::string& path);
    void write_csv(std::ostream& out) const;
    void write_csv_file(const std::string& path) const;

private:
    std::vector<std::string> m_names;
    std::vector<VarKind> m_kinds;
    Eigen::MatrixXd m_values;
    std::unordered_map<std::string, int> m_index;
};

VarKind infer_kind(const Eigen::Ref<const Eigen::VectorXd>& column);

}  // namespace ce2ls

#endif  // CE2LS_DATASET_HPP
