#include <ce2ls/ci_test.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <unordered_map>

namespace ce2ls {

namespace {

void validate(const CiBackend& backend, const CiQuery& q) {
    if (q.x == q.y) throw std::invalid_argument("CI query with identical variables: " + q.x);
    for (const auto* v : {&q.x, &q.y})
        if (!backend.has_variable(*v)) throw std::invalid_argument("unknown variable in CI query: " + *v);
    for (const auto& v : q.z) {
        if (v == q.x || v == q.y) throw std::invalid_argument("conditioning set contains " + v);
        if (!backend.has_variable(v)) throw std::invalid_argument("unknown variable in CI query: " + v);
    }
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& values) {
    const double n = static_cast<double>(values.rows());
    Eigen::MatrixXd centered = values.rowwise() - values.colwise().mean();
    Eigen::MatrixXd cov = (centered.adjoint() * centered) / (n - 1.0);
    Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    Eigen::MatrixXd corr(cov.rows(), cov.cols());
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
        for (Eigen::Index j = 0; j < cov.cols(); ++j)
            corr(i, j) = i == j ? 1.0 : cov(i, j) / (sd[i] * sd[j]);
    // Constant columns give NaN entries, which evaluate() reports as degenerate.
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
        if (!(sd[i] > 0)) corr(i, i) = std::numeric_limits<double>::quiet_NaN();
    return corr;
}

CiResult fisher_z(const Dataset& data, const Eigen::MatrixXd& corr, const CiQuery& q, double alpha) {
    std::vector<int> idx{data.index(q.x), data.index(q.y)};
    for (const auto& v : q.z) idx.push_back(data.index(v));
    const double n = static_cast<double>(data.rows());
    const double eff = n - static_cast<double>(q.z.size()) - 3.0;
    if (eff <= 0) throw std::invalid_argument("too few samples for Fisher z with |z| = " + std::to_string(q.z.size()));

    CiResult res;
    res.dof_or_n = eff;
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = corr(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);

    auto degenerate = [&]() {
        res.independent = false;
        res.p_value = 0.0;
        res.statistic = std::numeric_limits<double>::infinity();
        res.flagged = true;
        return res;
    };
    if (!sub.allFinite()) return degenerate();

    double r = 0.0;
    if (k == 2) {
        r = sub(0, 1);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub);
        if (eig.eigenvalues().minCoeff() < 1e-12) return degenerate();
        Eigen::MatrixXd prec = sub.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
        r = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
    }
    if (!std::isfinite(r) || std::abs(r) >= 1.0 - 1e-15) return degenerate();

    res.statistic = std::sqrt(eff) * std::atanh(r);
    res.p_value = std::min(1.0, std::erfc(std::abs(res.statistic) / std::sqrt(2.0)));
    res.independent = res.p_value > alpha;
    return res;
}

CiResult g2(const std::vector<std::vector<int>>& codes, const std::vector<int>& levels, int x, int y,
            const std::vector<int>& z, double alpha) {
    const int lx = levels[static_cast<std::size_t>(x)];
    const int ly = levels[static_cast<std::size_t>(y)];
    const auto& cx = codes[static_cast<std::size_t>(x)];
    const auto& cy = codes[static_cast<std::size_t>(y)];
    const std::size_t n = cx.size();

    std::unordered_map<std::uint64_t, std::vector<double>> strata;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t key = 0;
        for (int v : z)
            key = key * static_cast<std::uint64_t>(levels[static_cast<std::size_t>(v)]) +
                  static_cast<std::uint64_t>(codes[static_cast<std::size_t>(v)][i]);
        auto& table = strata[key];
        if (table.empty()) table.assign(static_cast<std::size_t>(lx * ly), 0.0);
        table[static_cast<std::size_t>(cx[i] * ly + cy[i])] += 1.0;
    }

    double stat = 0.0;
    for (const auto& [key, table] : strata) {
        std::vector<double> rx(static_cast<std::size_t>(lx), 0.0), ry(static_cast<std::size_t>(ly), 0.0);
        double total = 0.0;
        for (int a = 0; a < lx; ++a)
            for (int b = 0; b < ly; ++b) {
                double c = table[static_cast<std::size_t>(a * ly + b)];
                rx[static_cast<std::size_t>(a)] += c;
                ry[static_cast<std::size_t>(b)] += c;
                total += c;
            }
        for (int a = 0; a < lx; ++a)
            for (int b = 0; b < ly; ++b) {
                double c = table[static_cast<std::size_t>(a * ly + b)];
                if (c > 0) stat += c * std::log(c * total / (rx[static_cast<std::size_t>(a)] * ry[static_cast<std::size_t>(b)]));
            }
    }
    stat *= 2.0;

    CiResult res;
    res.statistic = stat;
    const double dof = static_cast<double>((lx - 1) * (ly - 1)) * static_cast<double>(strata.size());
    res.dof_or_n = dof;
    if (dof <= 0) {
        res.independent = true;
        res.p_value = 1.0;
        res.flagged = true;
        return res;
    }
    res.p_value = stat <= 0 ? 1.0 : boost::math::gamma_q(dof / 2.0, stat / 2.0);
    res.independent = res.p_value > alpha;
    return res;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace

CiResult CiBackend::test(const CiQuery& q) const {
    validate(*this, q);
    ++m_count;
    return evaluate(q);
}

FisherZBackend::FisherZBackend(const Dataset& data, double alpha)
    : m_data(data), m_alpha(alpha), m_corr(correlation_matrix(data.values())) {
    check_alpha(alpha);
}

CiResult FisherZBackend::evaluate(const CiQuery& q) const { return fisher_z(m_data, m_corr, q, m_alpha); }

G2Backend::G2Backend(const Dataset& data, double alpha) : m_data(data), m_alpha(alpha) {
    check_alpha(alpha);
    for (const auto& name : data.names()) {
        if (data.kind(name) != VarKind::discrete)
            throw std::invalid_argument("G2 test needs discrete columns; " + name + " is continuous");
        int levels = 0;
        m_codes.push_back(data.codes(name, levels));
        m_levels.push_back(levels);
    }
}

CiResult G2Backend::evaluate(const CiQuery& q) const {
    std::vector<int> z;
    for (const auto& v : q.z) z.push_back(m_data.index(v));
    return g2(m_codes, m_levels, m_data.index(q.x), m_data.index(q.y), z, m_alpha);
}

CiResult OracleBackend::evaluate(const CiQuery& q) const { return oracle_ci(m_mag, q); }

CiResult RecordingBackend::evaluate(const CiQuery& q) const {
    auto res = m_inner.test(q);
    std::lock_guard lock(m_mutex);
    m_log.emplace_back(q, res);
    return res;
}

std::vector<std::pair<CiQuery, CiResult>> RecordingBackend::log() const {
    std::lock_guard lock(m_mutex);
    return m_log;
}

CiResult fisher_z_test(const Dataset& data, const CiQuery& q, double alpha) {
    check_alpha(alpha);
    std::vector<std::string> cols{q.x, q.y};
    cols.insert(cols.end(), q.z.begin(), q.z.end());
    if (q.x == q.y) throw std::invalid_argument("CI query with identical variables: " + q.x);
    for (const auto& v : q.z)
        if (v == q.x || v == q.y) throw std::invalid_argument("conditioning set contains " + v);
    auto sub = data.select(cols);
    return fisher_z(sub, correlation_matrix(sub.values()), q, alpha);
}

CiResult g2_test(const Dataset& data, const CiQuery& q, double alpha) {
    std::vector<std::string> cols{q.x, q.y};
    cols.insert(cols.end(), q.z.begin(), q.z.end());
    auto sub = data.select(cols);
    G2Backend backend(sub, alpha);
    return backend.test(q);
}

CiResult oracle_ci(const Mag& mag, const CiQuery& q) {
    CiResult res;
    res.independent = m_separated(mag, q.x, q.y, q.z);
    res.p_value = res.independent ? 1.0 : 0.0;
    return res;
}

std::unique_ptr<CiBackend> make_data_backend(const Dataset& data, double alpha) {
    for (auto k : data.kinds())
        if (k != VarKind::discrete) return std::make_unique<FisherZBackend>(data, alpha);
    return std::make_unique<G2Backend>(data, alpha);
}

}  // namespace ce2ls
