#ifndef CE2LS_ESTIMATION_HPP
#define CE2LS_ESTIMATION_HPP

#include <ce2ls/dataset.hpp>
#include <ce2ls/search.hpp>

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace ce2ls {

class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutcomeKind { continuous, binary };
enum class EffectScale { difference, log_odds_ratio, risk_difference };

std::string to_string(EffectScale s);

struct SetEffect {
    NodeSet z;
    double effect = 0.0;
};

struct EstimationResult {
    double ace = 0.0;
    std::vector<SetEffect> per_set;
    OutcomeKind outcome_kind = OutcomeKind::continuous;
    EffectScale effect_scale = EffectScale::difference;
};

// Least squares via column-pivoting QR; throws EstimationError naming the dropped
// columns when the design is rank deficient.
Eigen::VectorXd ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                    const std::vector<std::string>& column_names = {});

struct LogisticFit {
    Eigen::VectorXd beta;
    int iterations = 0;
    bool converged = false;
};

inline constexpr int kLogisticMaxIter = 50;
inline constexpr double kLogisticTol = 1e-8;

LogisticFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);

// Coefficient of W in the regression of Y on [1, W, Z].
double ace_linear(const Dataset& data, const std::string& w, const std::string& y, const NodeSet& z);

struct StandardizedRisks {
    double p0 = 0.0;  // mean predicted P(Y=1) with W set to 0
    double p1 = 0.0;
    bool flagged = false;  // logistic fit hit the iteration cap
};

StandardizedRisks standardized_risks(const Dataset& data, const std::string& w, const std::string& y,
                                     const NodeSet& z);

double ace_mcor(const Dataset& data, const std::string& w, const std::string& y, const NodeSet& z);
double ace_risk_difference(const Dataset& data, const std::string& w, const std::string& y, const NodeSet& z);

EstimationResult aggregate(const std::vector<SetEffect>& per_set, OutcomeKind kind = OutcomeKind::continuous,
                           EffectScale scale = EffectScale::difference);

OutcomeKind outcome_kind(const Dataset& data, const std::string& y);

// Linear adjustment for continuous outcomes; for binary outcomes log-MCOR unless
// `binary_scale` asks for the risk difference.
EffectEstimator make_estimator(const Dataset& data, const std::string& w, const std::string& y,
                               EffectScale binary_scale = EffectScale::log_odds_ratio);

EffectScale effect_scale_for(const Dataset& data, const std::string& y, EffectScale binary_scale);

}  // namespace ce2ls

#endif  // CE2LS_ESTIMATION_HPP
