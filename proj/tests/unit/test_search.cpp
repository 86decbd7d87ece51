#include <doctest.h>

#include "../support/oracles.hpp"

#include <ce2ls/benchmarks.hpp>
#include <ce2ls/graph_io.hpp>
#include <ce2ls/report.hpp>
#include <ce2ls/search.hpp>

#include <random>

using namespace ce2ls;

namespace {

NodeSet pretreatment(const Mag& mag) {
    NodeSet x = mag.node_set();
    x.erase("W");
    x.erase("Y");
    return x;
}

std::vector<NodeSet> psi_sets(const SearchOutcome& out) {
    std::vector<NodeSet> s;
    for (const auto& e : out.psi) s.push_back(e.z);
    return s;
}

// Oracle that lies about one query.
class Scripted : public CiBackend {
public:
    Scripted(const Mag& mag, CiQuery flip) : m_mag(mag), m_flip(std::move(flip)) {}
    bool has_variable(const std::string& n) const override { return m_mag.contains(n); }
    std::vector<std::string> variables() const override { return m_mag.names(); }
    std::string kind() const override { return "scripted"; }

protected:
    CiResult evaluate(const CiQuery& q) const override {
        auto r = oracle_ci(m_mag, q);
        if (q.x == m_flip.x && q.y == m_flip.y && q.z == m_flip.z) r.independent = !r.independent;
        return r;
    }

private:
    const Mag& m_mag;
    CiQuery m_flip;
};

}  // namespace

TEST_CASE("Group I MAG end to end") {
    auto mag = fig1b_mag();
    OracleBackend oracle(mag);
    auto out = run_ce2ls(oracle, "W", "Y", pretreatment(mag), {}, [](const NodeSet& z) { return double(z.size()); });
    CHECK(out.verdict == Verdict::Identifiable);
    CHECK(psi_sets(out) == std::vector<NodeSet>{{"X3", "X5"}, {"X5", "X9"}});
    for (const auto& e : out.psi) {
        CHECK(e.effect == 2.0);
        CHECK(e.level == 2);
        CHECK(e.coso == "X1");
    }
    CHECK(out.stats.levels_explored == 3);
    CHECK_FALSE(out.witness.has_value());

    REQUIRE(!out.trace.empty());
    const auto& t = out.trace.front();
    CHECK(t.coso == "X1");
    std::vector<LevelTrace> levels;
    for (const auto& l : t.levels)
        if (l.k >= 1) levels.push_back(l);
    REQUIRE(levels.size() == 4);
    CHECK(levels[0].candidates == std::vector<NodeSet>{{"X3"}, {"X5"}, {"X8"}, {"X9"}});
    CHECK(levels[0].found.empty());
    CHECK(levels[1].candidates.size() == 6);
    CHECK(levels[1].found == std::vector<NodeSet>{{"X3", "X5"}, {"X5", "X9"}});
    CHECK(levels[1].remaining == std::vector<NodeSet>{{"X3", "X8"}, {"X3", "X9"}, {"X5", "X8"}, {"X8", "X9"}});
    CHECK(levels[2].candidates == std::vector<NodeSet>{{"X3", "X8", "X9"}});
    CHECK(levels[2].found.empty());
    CHECK(levels[3].k == 4);
    CHECK(levels[3].candidates.empty());

    // Three tests per candidate at most, over every COSO and level 0..max_level.
    CHECK(out.stats.search_test_count <= 2 * 16 * 3);
}

TEST_CASE("Group II MAG sets equal the enumerated minimal sets") {
    auto mag = fig5b_mag();
    OracleBackend oracle(mag);
    auto out = run_ce2ls(oracle, "W", "Y", pretreatment(mag));
    CHECK(out.verdict == Verdict::Identifiable);
    CHECK(out.context.omega == NodeSet{"X1", "X3"});
    CHECK(psi_sets(out) == std::vector<NodeSet>{{"X2", "X3"}, {"X2", "X4"}});
    auto ref = oracle::minimal_gac_sets(oracle::from_graph(mag), "W", "Y", out.context.adj_r);
    CHECK(ref == std::vector<oracle::Names>{{"X2", "X3"}, {"X2", "X4"}});
    CHECK(enumerate_minimal_gac_sets(mag, "W", "Y", out.context.adj_r) == psi_sets(out));
}

TEST_CASE("separable treatment and outcome give NoEffect") {
    auto mag = parse_mag("S -> W\nA -> W\nA -> Y\nB -> Y\nC -> A\n");
    CHECK(oracle::path_m_separated(oracle::from_graph(mag), "W", "Y", {"A"}));
    OracleBackend oracle(mag);
    auto out = run_ce2ls(oracle, "W", "Y", pretreatment(mag));
    CHECK(out.verdict == Verdict::NoEffect);
    CHECK(out.psi.empty());
    REQUIRE(out.witness.has_value());
    CHECK(out.witness->rule == Rule::CaseI);
    CHECK(m_separated(mag, "W", "Y", out.witness->z));
}

TEST_CASE("hidden confounding of treatment and outcome gives NonIdentifiable") {
    auto mag = parse_mag("S -> W\nA -> W\nA -> Y\nW <-> Y\n");
    OracleBackend oracle(mag);
    auto out = run_ce2ls(oracle, "W", "Y", pretreatment(mag));
    CHECK(out.verdict == Verdict::NonIdentifiable);
    CHECK(out.psi.empty());
    REQUIRE(out.witness.has_value());
    CHECK(out.witness->rule == Rule::CaseII);
    CHECK(out.witness->coso == "S");
}

TEST_CASE("no COSO gives Undetermined") {
    auto mag = parse_mag("A -> W\nA -> Y\nW -> Y\n");
    OracleBackend oracle(mag);
    auto out = run_ce2ls(oracle, "W", "Y", {"A"});
    CHECK(out.verdict == Verdict::Undetermined);
    CHECK_FALSE(out.note.empty());
    CHECK(out.psi.empty());
}

TEST_CASE("conflicting evidence across COSO variables is an error") {
    auto mag = parse_mag("S1 -> W\nS2 -> W\nA -> W\nA -> Y\nW -> Y\n");
    OracleBackend honest(mag);
    auto out = run_ce2ls(honest, "W", "Y", pretreatment(mag));
    REQUIRE(out.verdict == Verdict::Identifiable);
    CHECK(psi_sets(out) == std::vector<NodeSet>{{"A"}});

    Scripted lying(mag, {"S2", "Y", {}});
    try {
        run_ce2ls(lying, "W", "Y", pretreatment(mag));
        FAIL("expected a conflict");
    } catch (const FaithfulnessConflict& e) {
        CHECK(e.case_two().coso == "S2");
        CHECK(e.case_two().z.empty());
        CHECK(e.case_three().z == NodeSet{"A"});
    }
}

TEST_CASE("literal mode on the Group I MAG") {
    auto mag = fig1b_mag();
    OracleBackend oracle(mag);
    SearchConfig cfg;
    cfg.exhaustive = true;
    auto out = run_ce2ls(oracle, "W", "Y", pretreatment(mag), cfg);
    CHECK(out.verdict == Verdict::Identifiable);
    // Without superset pruning across COSO loops the search via X3 also keeps {X1, X5, X9}.
    CHECK(psi_sets(out) == std::vector<NodeSet>{{"X3", "X5"}, {"X5", "X9"}, {"X1", "X5", "X9"}});
    for (const auto& e : out.psi) CHECK(satisfies_gac(mag, "W", "Y", e.z));
    for (const auto& l : out.trace.front().levels) CHECK(l.k >= 1);
}

TEST_CASE("searches are deterministic") {
    auto mag = fig5b_mag();
    OracleBackend a(mag), b(mag);
    auto x = pretreatment(mag);
    auto first = run_ce2ls(a, "W", "Y", x);
    auto second = run_ce2ls(b, "W", "Y", x);
    CHECK(format_report(first, "W", "Y") == format_report(second, "W", "Y"));
    CHECK(format_trace(first) == format_trace(second));
    CHECK(first.stats.ci_test_count == a.test_count());
}

TEST_CASE("argument checks") {
    auto mag = fig1b_mag();
    OracleBackend oracle(mag);
    CHECK_THROWS_AS(run_ce2ls(oracle, "W", "Q", pretreatment(mag)), std::invalid_argument);
    CHECK_THROWS_AS(run_ce2ls(oracle, "W", "Y", {"X1", "Q"}), std::invalid_argument);
    SearchConfig cfg;
    cfg.max_level = 0;
    CHECK_THROWS_AS(run_ce2ls(oracle, "W", "Y", pretreatment(mag), cfg), std::invalid_argument);
}

TEST_CASE("every set found with the oracle is an adjustment set") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 60; ++i) {
        auto model = oracle::random_pretreatment(rng, 11, i % 3);
        auto mag = latent_project(model.dag, model.latents);
        OracleBackend backend(mag);
        auto out = run_ce2ls(backend, "W", "Y", pretreatment(mag));
        for (std::size_t a = 0; a < out.psi.size(); ++a) {
            CHECK(satisfies_gac(mag, "W", "Y", out.psi[a].z));
            for (std::size_t b = 0; b < out.psi.size(); ++b)
                if (a != b)
                    CHECK_FALSE(std::includes(out.psi[b].z.begin(), out.psi[b].z.end(), out.psi[a].z.begin(),
                                              out.psi[a].z.end()));
        }
    }
}
