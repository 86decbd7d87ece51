#include <ce2ls/estimation.hpp>

#include <cmath>
#include <numeric>

namespace ce2ls {

namespace {

double expit(double v) { return 1.0 / (1.0 + std::exp(-v)); }

Eigen::MatrixXd design_matrix(const Dataset& data, const std::string& w, const NodeSet& z,
                              std::vector<std::string>& names) {
    const auto n = static_cast<Eigen::Index>(data.rows());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(z.size() + 2));
    x.col(0).setOnes();
    x.col(1) = data.column(w);
    names = {"(intercept)", w};
    Eigen::Index j = 2;
    for (const auto& v : z) {
        x.col(j++) = data.column(v);
        names.push_back(v);
    }
    return x;
}

void check_arguments(const Dataset& data, const std::string& w, const std::string& y, const NodeSet& z) {
    data.index(w);
    data.index(y);
    if (w == y) throw std::invalid_argument("treatment and outcome must differ");
    for (const auto& v : z) {
        data.index(v);
        if (v == w || v == y) throw std::invalid_argument("adjustment set contains " + v);
    }
    if (data.rows() <= z.size() + 2)
        throw EstimationError("need more than " + std::to_string(z.size() + 2) + " rows to adjust for " + to_string(z));
}

}  // namespace

std::string to_string(EffectScale s) {
    switch (s) {
        case EffectScale::difference: return "difference";
        case EffectScale::log_odds_ratio: return "log-MCOR";
        case EffectScale::risk_difference: return "risk-difference";
    }
    return "?";
}

Eigen::VectorXd ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                    const std::vector<std::string>& column_names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols()) {
        std::string dropped;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < design.cols(); ++i) {
            const auto col = perm[i];
            if (!dropped.empty()) dropped += ", ";
            dropped += static_cast<std::size_t>(col) < column_names.size() ? column_names[static_cast<std::size_t>(col)]
                                                                           : "column " + std::to_string(col);
        }
        throw EstimationError("rank-deficient design; collinear columns: " + dropped);
    }
    return qr.solve(response);
}

LogisticFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
    LogisticFit fit;
    fit.beta = Eigen::VectorXd::Zero(design.cols());
    for (fit.iterations = 1; fit.iterations <= kLogisticMaxIter; ++fit.iterations) {
        Eigen::VectorXd eta = design * fit.beta;
        Eigen::VectorXd p = eta.unaryExpr([](double v) { return expit(v); });
        Eigen::VectorXd weight = (p.array() * (1.0 - p.array())).max(1e-10).matrix();
        Eigen::VectorXd working = eta + ((response - p).array() / weight.array()).matrix();
        Eigen::MatrixXd xtwx = design.transpose() * weight.asDiagonal() * design;
        Eigen::VectorXd xtwz = design.transpose() * (weight.array() * working.array()).matrix();
        Eigen::VectorXd next = xtwx.ldlt().solve(xtwz);
        if (!next.allFinite()) break;
        const double change = (next - fit.beta).cwiseAbs().maxCoeff();
        fit.beta = next;
        if (change < kLogisticTol) {
            fit.converged = true;
            break;
        }
    }
    fit.iterations = std::min(fit.iterations, kLogisticMaxIter);
    return fit;
}

double ace_linear(const Dataset& data, const std::string& w, const std::string& y, const NodeSet& z) {
    check_arguments(data, w, y, z);
    std::vector<std::string> names;
    auto x = design_matrix(data, w, z, names);
    return ols(x, data.column(y), names)[1];
}

StandardizedRisks standardized_risks(const Dataset& data, const std::string& w, const std::string& y,
                                     const NodeSet& z) {
    check_arguments(data, w, y, z);
    if (!data.is_binary(y)) throw EstimationError("outcome " + y + " is not coded 0/1");
    if (!data.is_binary(w)) throw EstimationError("treatment " + w + " is not coded 0/1");
    const double treated = data.column(w).sum();
    if (treated == 0 || treated == static_cast<double>(data.rows()))
        throw EstimationError("treatment arm is empty");

    std::vector<std::string> names;
    auto x = design_matrix(data, w, z, names);
    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        if (qr.rank() < x.cols()) ols(x, data.column(y), names);  // reports the collinear columns
    }
    auto fit = fit_logistic(x, data.column(y));

    StandardizedRisks r;
    r.flagged = !fit.converged;
    Eigen::MatrixXd counterfactual = x;
    counterfactual.col(1).setZero();
    r.p0 = (counterfactual * fit.beta).unaryExpr([](double v) { return expit(v); }).mean();
    counterfactual.col(1).setOnes();
    r.p1 = (counterfactual * fit.beta).unaryExpr([](double v) { return expit(v); }).mean();
    return r;
}

double ace_mcor(const Dataset& data, const std::string& w, const std::string& y, const NodeSet& z) {
    auto r = standardized_risks(data, w, y, z);
    auto logit = [](double p) { return std::log(p / (1.0 - p)); };
    return logit(r.p1) - logit(r.p0);
}

double ace_risk_difference(const Dataset& data, const std::string& w, const std::string& y, const NodeSet& z) {
    auto r = standardized_risks(data, w, y, z);
    return r.p1 - r.p0;
}

EstimationResult aggregate(const std::vector<SetEffect>& per_set, OutcomeKind kind, EffectScale scale) {
    if (per_set.empty()) throw EstimationError("nothing to aggregate");
    EstimationResult res;
    res.per_set = per_set;
    res.outcome_kind = kind;
    res.effect_scale = scale;
    double total = 0.0;
    for (const auto& e : per_set) total += e.effect;
    res.ace = total / static_cast<double>(per_set.size());
    return res;
}

OutcomeKind outcome_kind(const Dataset& data, const std::string& y) {
    return data.is_binary(y) ? OutcomeKind::binary : OutcomeKind::continuous;
}

EffectScale effect_scale_for(const Dataset& data, const std::string& y, EffectScale binary_scale) {
    return outcome_kind(data, y) == OutcomeKind::binary ? binary_scale : EffectScale::difference;
}

EffectEstimator make_estimator(const Dataset& data, const std::string& w, const std::string& y,
                               EffectScale binary_scale) {
    switch (effect_scale_for(data, y, binary_scale)) {
        case EffectScale::log_odds_ratio:
            return [&data, w, y](const NodeSet& z) { return ace_mcor(data, w, y, z); };
        case EffectScale::risk_difference:
            return [&data, w, y](const NodeSet& z) { return ace_risk_difference(data, w, y, z); };
        case EffectScale::difference:
            break;
    }
    return [&data, w, y](const NodeSet& z) { return ace_linear(data, w, y, z); };
}

}  // namespace ce2ls
