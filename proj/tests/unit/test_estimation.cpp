#include <doctest.h>

#include "../support/oracles.hpp"

#include <ce2ls/benchmarks.hpp>
#include <ce2ls/datagen.hpp>
#include <ce2ls/estimation.hpp>

#include <algorithm>
#include <random>

using namespace ce2ls;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("least squares matches the normal equations") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd x(200, 5);
        Eigen::VectorXd y(200);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(rng);
            y[i] = g(rng);
        }
        Eigen::VectorXd closed = (x.transpose() * x).ldlt().solve(x.transpose() * y);
        Eigen::VectorXd fit = ols(x, y);
        CHECK((fit - closed).norm() / closed.norm() < 1e-10);
    }
}

TEST_CASE("rank deficiency names the collinear column") {
    Eigen::MatrixXd x(10, 3);
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i) {
        x(i, 0) = 1;
        x(i, 1) = i;
        x(i, 2) = 2.0 * i;
        y[i] = i;
    }
    try {
        ols(x, y, {"const", "a", "twice_a"});
        FAIL("expected an estimation error");
    } catch (const EstimationError& e) {
        std::string msg = e.what();
        auto tail = msg.substr(msg.rfind(": ") + 2);
        CHECK((tail == "a" || tail == "twice_a"));
    }
}

TEST_CASE("linear adjustment") {
    auto sem = parse_linear_sem("W -> Y\nweight W Y 0.5\n");
    auto d = sample_linear_sem(sem, 100000, 3);
    CHECK(std::abs(ace_linear(d, "W", "Y", {}) - 0.5) < 0.02);

    auto null = parse_linear_sem("Z -> W\nZ -> Y\n");
    auto dn = sample_linear_sem(null, 100000, 4);
    CHECK(std::abs(ace_linear(dn, "W", "Y", {"Z"})) < 0.02);
    CHECK_THROWS_AS(ace_linear(dn, "W", "Y", {"Y"}), std::invalid_argument);
}

TEST_CASE("adjustment on the Group I model") {
    auto sem = fig1a_sem();
    auto d = mask_latents(sample_linear_sem(sem, 50000, 1), sem.roles.latents);
    double a = ace_linear(d, "W", "Y", {"X3", "X5"});
    double b = ace_linear(d, "W", "Y", {"X5", "X9"});
    CHECK(std::abs(a - kGroupOneAce) < 0.05);
    CHECK(std::abs(b - kGroupOneAce) < 0.05);
    CHECK(std::abs(a - b) < 0.05);
}

TEST_CASE("adjustment error shrinks with the sample size") {
    auto sem = fig1a_sem();
    std::vector<double> medians;
    for (std::size_t n : {5000, 20000, 80000}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto d = sample_linear_sem(sem, n, seed);
            errs.push_back(std::abs(ace_linear(d, "W", "Y", {"X3", "X5"}) - kGroupOneAce));
        }
        medians.push_back(median(errs));
    }
    CHECK(medians[0] > medians[1]);
    CHECK(medians[1] > medians[2]);
}

TEST_CASE("logistic regression recovers its coefficients") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    const int n = 50000;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1;
        x(i, 1) = g(rng);
        x(i, 2) = g(rng);
        double eta = -0.3 + 0.8 * x(i, 1) - 1.2 * x(i, 2);
        y[i] = std::bernoulli_distribution(1.0 / (1.0 + std::exp(-eta)))(rng);
    }
    auto fit = fit_logistic(x, y);
    CHECK(fit.converged);
    CHECK(fit.iterations <= kLogisticMaxIter);
    CHECK(std::abs(fit.beta[0] + 0.3) < 0.05);
    CHECK(std::abs(fit.beta[1] - 0.8) < 0.05);
    CHECK(std::abs(fit.beta[2] + 1.2) < 0.05);
}

TEST_CASE("binary outcomes") {
    auto indep = parse_discrete_bn("cpt W : 0.5 0.5\ncpt Y : 0.7 0.3\n");
    auto d = sample_discrete_bn(indep, 100000, 8);
    CHECK(std::abs(ace_mcor(d, "W", "Y", {})) < 0.05);

    const char* text =
        "cpt Z : 0.6 0.4\n"
        "cpt W | Z : 0.7 0.3 ; 0.25 0.75\n"
        "cpt Y | W Z : 0.817574476194 0.182425523806 ; 0.574442516812 0.425557483188 ; "
        "0.622459331202 0.377540668798 ; 0.331812227832 0.668187772168\n";
    auto bn = parse_discrete_bn(text);
    auto data = sample_discrete_bn(bn, 200000, 2);
    double p0 = oracle::do_probability(bn, "W", "Y", 0);
    double p1 = oracle::do_probability(bn, "W", "Y", 1);
    CHECK(p0 == doctest::Approx(0.6 * 0.182425523806 + 0.4 * 0.425557483188));
    CHECK(p1 == doctest::Approx(0.6 * 0.377540668798 + 0.4 * 0.668187772168));
    auto risks = standardized_risks(data, "W", "Y", {"Z"});
    CHECK(std::abs(risks.p0 - p0) < 0.01);
    CHECK(std::abs(risks.p1 - p1) < 0.01);
    CHECK(std::abs(ace_risk_difference(data, "W", "Y", {"Z"}) - (p1 - p0)) < 0.01);

    Eigen::MatrixXd v(6, 2);
    v << 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0;
    Dataset one_arm({"W", "Y"}, {VarKind::discrete, VarKind::discrete}, v);
    CHECK_THROWS_AS(ace_mcor(one_arm, "W", "Y", {}), EstimationError);
    Eigen::MatrixXd u(4, 2);
    u << 0, 0.5, 1, 1.5, 0, 2.5, 1, 3.5;
    Dataset cont({"W", "Y"}, {VarKind::discrete, VarKind::continuous}, u);
    CHECK_THROWS_AS(ace_mcor(cont, "W", "Y", {}), EstimationError);
}

TEST_CASE("aggregation") {
    auto r = aggregate({{{"a"}, 0.48}, {{"b"}, 0.52}});
    CHECK(r.ace == doctest::Approx(0.50));
    CHECK(r.per_set.size() == 2);
    CHECK(aggregate({{{"a"}, 1.25}}).ace == doctest::Approx(1.25));
    CHECK_THROWS_AS(aggregate({}), EstimationError);
    auto b = aggregate({{{"a"}, 0.1}}, OutcomeKind::binary, EffectScale::log_odds_ratio);
    CHECK(b.outcome_kind == OutcomeKind::binary);
    CHECK(to_string(b.effect_scale) == "log-MCOR");
}

TEST_CASE("estimator dispatch follows the outcome type") {
    auto sem = parse_linear_sem("W -> Y\nweight W Y 0.5\n");
    auto d = sample_linear_sem(sem, 2000, 3);
    CHECK(outcome_kind(d, "Y") == OutcomeKind::continuous);
    CHECK(make_estimator(d, "W", "Y")({}) == doctest::Approx(ace_linear(d, "W", "Y", {})));

    auto bn = parse_discrete_bn("cpt W : 0.5 0.5\ncpt Y | W : 0.7 0.3 ; 0.4 0.6\n");
    auto b = sample_discrete_bn(bn, 5000, 3);
    CHECK(outcome_kind(b, "Y") == OutcomeKind::binary);
    CHECK(make_estimator(b, "W", "Y")({}) == doctest::Approx(ace_mcor(b, "W", "Y", {})));
    CHECK(make_estimator(b, "W", "Y", EffectScale::risk_difference)({}) ==
          doctest::Approx(ace_risk_difference(b, "W", "Y", {})));
    CHECK(effect_scale_for(b, "Y", EffectScale::risk_difference) == EffectScale::risk_difference);
    CHECK(effect_scale_for(d, "Y", EffectScale::risk_difference) == EffectScale::difference);
}
