#ifndef CE2LS_CI_TEST_HPP
#define CE2LS_CI_TEST_HPP

#include <ce2ls/dataset.hpp>
#include <ce2ls/graph.hpp>

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ce2ls {

inline constexpr double kDefaultAlpha = 0.05;

struct CiQuery {
    std::string x;
    std::string y;
    NodeSet z;
};

struct CiResult {
    bool independent = false;
    double statistic = 0.0;
    double p_value = 0.0;
    // Degrees of freedom for G2, effective sample size for Fisher-z, 0 for the oracle.
    double dof_or_n = 0.0;
    // Set when the answer came from a degenerate case (singular correlation, dof <= 0).
    bool flagged = false;
};

class CiBackend {
public:
    virtual ~CiBackend() = default;

    CiResult test(const CiQuery& q) const;
    CiResult test(const std::string& x, const std::string& y, const NodeSet& z) const { return test({x, y, z}); }
    bool independent(const std::string& x, const std::string& y, const NodeSet& z) const {
        return test(x, y, z).independent;
    }

    virtual bool has_variable(const std::string& name) const = 0;
    virtual std::vector<std::string> variables() const = 0;
    virtual std::string kind() const = 0;

    std::size_t test_count() const { return m_count.load(); }
    void reset_count() { m_count = 0; }

protected:
    virtual CiResult evaluate(const CiQuery& q) const = 0;

private:
    mutable std::atomic<std::size_t> m_count{0};
};

// Fisher z on partial correlations computed from a cached correlation matrix.
class FisherZBackend : public CiBackend {
public:
    FisherZBackend(const Dataset& data, double alpha = kDefaultAlpha);

    bool has_variable(const std::string& name) const override { return m_data.has(name); }
    std::vector<std::string> variables() const override { return m_data.names(); }
    std::string kind() const override { return "fisher-z"; }

protected:
    CiResult evaluate(const CiQuery& q) const override;

private:
    const Dataset& m_data;
    double m_alpha;
    Eigen::MatrixXd m_corr;
};

// G2 likelihood-ratio test over contingency tables stratified by z.
class G2Backend : public CiBackend {
public:
    G2Backend(const Dataset& data, double alpha = kDefaultAlpha);

    bool has_variable(const std::string& name) const override { return m_data.has(name); }
    std::vector<std::string> variables() const override { return m_data.names(); }
    std::string kind() const override { return "g2"; }

protected:
    CiResult evaluate(const CiQuery& q) const override;

private:
    const Dataset& m_data;
    double m_alpha;
    std::vector<std::vector<int>> m_codes;
    std::vector<int> m_levels;
};

class OracleBackend : public CiBackend {
public:
    explicit OracleBackend(const Mag& mag) : m_mag(mag) {}

    bool has_variable(const std::string& name) const override { return m_mag.contains(name); }
    std::vector<std::string> variables() const override { return m_mag.names(); }
    std::string kind() const override { return "oracle"; }

protected:
    CiResult evaluate(const CiQuery& q) const override;

private:
    const Mag& m_mag;
};

// Forwards to another backend and keeps every query with its answer.
class RecordingBackend : public CiBackend {
public:
    explicit RecordingBackend(const CiBackend& inner) : m_inner(inner) {}

    bool has_variable(const std::string& name) const override { return m_inner.has_variable(name); }
    std::vector<std::string> variables() const override { return m_inner.variables(); }
    std::string kind() const override { return m_inner.kind(); }

    std::vector<std::pair<CiQuery, CiResult>> log() const;

protected:
    CiResult evaluate(const CiQuery& q) const override;

private:
    const CiBackend& m_inner;
    mutable std::mutex m_mutex;
    mutable std::vector<std::pair<CiQuery, CiResult>> m_log;
};

CiResult fisher_z_test(const Dataset& data, const CiQuery& q, double alpha = kDefaultAlpha);
CiResult g2_test(const Dataset& data, const CiQuery& q, double alpha = kDefaultAlpha);
CiResult oracle_ci(const Mag& mag, const CiQuery& q);

// G2 when every column is discrete, Fisher z otherwise (binary columns then count as numeric).
std::unique_ptr<CiBackend> make_data_backend(const Dataset& data, double alpha = kDefaultAlpha);

}  // namespace ce2ls

#endif  // CE2LS_CI_TEST_HPP
