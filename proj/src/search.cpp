#include <ce2ls/search.hpp>

#include <algorithm>

namespace ce2ls {

namespace {

bool is_subset(const NodeSet& small, const NodeSet& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

enum class Step { none, no_effect, non_identifiable, found };

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::NoEffect: return "NoEffect";
        case Verdict::NonIdentifiable: return "NonIdentifiable";
        case Verdict::Identifiable: return "Identifiable";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "?";
}

std::string to_string(Rule r) { return r == Rule::CaseI ? "CaseI" : "CaseII"; }

FaithfulnessConflict::FaithfulnessConflict(Witness case_two, PsiEntry case_three)
    : std::runtime_error("conflicting evidence: " + case_two.coso + " is separated from the outcome by " +
                         to_string(case_two.z) + " while " + to_string(case_three.z) +
                         " was accepted as an adjustment set via " + case_three.coso),
      m_case_two(std::move(case_two)),
      m_case_three(std::move(case_three)) {}

SearchOutcome classify_and_search(const CiBackend& backend, const AdjacencyContext& ctx, const std::string& w,
                                  const std::string& y, const SearchConfig& config,
                                  const EffectEstimator& estimator) {
    if (config.max_level < 1) throw std::invalid_argument("max_level must be at least 1");
    const std::size_t start = backend.test_count();

    SearchOutcome out;
    out.context = ctx;
    auto finish = [&]() {
        out.stats.search_test_count = backend.test_count() - start;
        out.stats.ci_test_count = out.stats.search_test_count;
        for (const auto& t : out.trace) {
            int nonempty = 0;
            for (const auto& l : t.levels)
                if (l.k >= 1 && !l.candidates.empty()) ++nonempty;
            out.stats.levels_explored = std::max(out.stats.levels_explored, nonempty);
        }
        std::sort(out.psi.begin(), out.psi.end(),
                  [](const PsiEntry& a, const PsiEntry& b) { return size_then_lex(a.z, b.z); });
        if (out.verdict == Verdict::Identifiable && estimator)
            for (auto& e : out.psi) e.effect = estimator(e.z);
        return out;
    };

    if (ctx.omega.empty()) {
        out.note = "no COSO candidate: every learned neighbour of the treatment is also adjacent to the outcome";
        return finish();
    }

    // Looks for a W-Y separating set among subsets of Adj_R, COSO included.
    std::optional<std::optional<NodeSet>> case_one;
    auto case_one_scan = [&]() -> std::optional<NodeSet> {
        if (case_one) return *case_one;
        const std::vector<std::string> items(ctx.adj_r.begin(), ctx.adj_r.end());
        std::optional<NodeSet> hit;
        const auto top = std::min<std::size_t>(items.size(), static_cast<std::size_t>(config.max_level));
        for (std::size_t k = 0; k <= top && !hit; ++k)
            for_each_subset(items, k, [&](const NodeSet& s) {
                if (backend.independent(w, y, s)) hit = s;
                return hit.has_value();
            });
        case_one = hit;
        return hit;
    };

    bool no_effect = false, non_identifiable = false;
    auto evaluate = [&](const std::string& s, const NodeSet& z) -> Step {
        if (backend.independent(w, y, z)) {
            out.all_witnesses.push_back({s, z, Rule::CaseI});
            if (!no_effect) out.witness = out.all_witnesses.back();
            no_effect = true;
            return Step::no_effect;
        }
        if (backend.independent(s, y, z)) {
            if (!config.exhaustive) {
                if (auto sep = case_one_scan()) {
                    out.witness = Witness{"", *sep, Rule::CaseI};
                    out.all_witnesses.push_back(*out.witness);
                    no_effect = true;
                    return Step::no_effect;
                }
                if (!out.psi.empty()) throw FaithfulnessConflict({s, z, Rule::CaseII}, out.psi.front());
            }
            out.all_witnesses.push_back({s, z, Rule::CaseII});
            if (!non_identifiable && !no_effect) out.witness = out.all_witnesses.back();
            non_identifiable = true;
            return Step::non_identifiable;
        }
        NodeSet with_w = z;
        with_w.insert(w);
        if (backend.independent(s, y, with_w)) return Step::found;
        return Step::none;
    };

    auto record = [&](const NodeSet& z, int level, const std::string& s) {
        if (!config.exhaustive)
            std::erase_if(out.psi, [&](const PsiEntry& e) { return is_subset(z, e.z); });
        out.psi.push_back({z, std::numeric_limits<double>::quiet_NaN(), level, s});
    };

    bool stop = false;
    for (const auto& s : ctx.omega) {
        CosoTrace tr{s, {}};
        NodeSet universe = ctx.adj_r;
        universe.erase(s);

        if (!config.exhaustive) {
            LevelTrace l0{0, {NodeSet{}}, {}, {}, {}};
            bool covered = std::any_of(out.psi.begin(), out.psi.end(), [](const PsiEntry& e) { return e.z.empty(); });
            if (covered) {
                l0.skipped.push_back({});
            } else {
                auto step = evaluate(s, {});
                if (step == Step::found) {
                    record({}, 0, s);
                    l0.found.push_back({});
                } else if (step != Step::none) {
                    stop = true;
                } else {
                    l0.remaining.push_back({});
                }
            }
            tr.levels.push_back(std::move(l0));
        }

        CandidateLevel current = singletons(universe);
        int k = 1;
        while (!stop && k <= config.max_level) {
            LevelTrace lt{k, current.sets, {}, {}, {}};
            if (current.sets.empty()) {
                tr.levels.push_back(std::move(lt));
                break;
            }
            std::vector<NodeSet> keep;
            for (const auto& z : current.sets) {
                if (config.exhaustive) {
                    bool listed = std::any_of(out.psi.begin(), out.psi.end(), [&](const PsiEntry& e) { return e.z == z; });
                    if (listed) {
                        lt.skipped.push_back(z);
                        keep.push_back(z);
                        continue;
                    }
                } else {
                    bool covered =
                        std::any_of(out.psi.begin(), out.psi.end(), [&](const PsiEntry& e) { return is_subset(e.z, z); });
                    if (covered) {
                        lt.skipped.push_back(z);
                        continue;
                    }
                }
                auto step = evaluate(s, z);
                if (step == Step::found) {
                    record(z, k, s);
                    lt.found.push_back(z);
                    continue;
                }
                if (step != Step::none && !config.exhaustive) {
                    stop = true;
                    break;
                }
                keep.push_back(z);
            }
            lt.remaining = keep;
            tr.levels.push_back(std::move(lt));
            if (stop) break;
            ++k;
            current = candidate_gen({k - 1, keep}, k);
        }
        out.trace.push_back(std::move(tr));
        if (stop) break;
    }

    if (no_effect) {
        out.verdict = Verdict::NoEffect;
        out.psi.clear();
    } else if (non_identifiable) {
        out.verdict = Verdict::NonIdentifiable;
        out.psi.clear();
    } else if (!out.psi.empty()) {
        out.verdict = Verdict::Identifiable;
    } else if (!config.exhaustive && case_one_scan()) {
        out.verdict = Verdict::NoEffect;
        out.witness = Witness{"", **case_one, Rule::CaseI};
        out.all_witnesses.push_back(*out.witness);
    } else {
        out.note = "no adjustment set found up to level " + std::to_string(config.max_level);
    }
    return finish();
}

SearchOutcome run_ce2ls(const CiBackend& backend, const std::string& w, const std::string& y, const NodeSet& x,
                        const SearchConfig& config, const EffectEstimator& estimator) {
    for (const auto* v : {&w, &y})
        if (!backend.has_variable(*v)) throw std::invalid_argument("unknown variable: " + *v);
    for (const auto& v : x)
        if (!backend.has_variable(v)) throw std::invalid_argument("unknown variable: " + v);
    const std::size_t start = backend.test_count();
    auto ctx = build_context(backend, w, y, x, config.max_cond, config.q_scan);
    auto out = classify_and_search(backend, ctx, w, y, config, estimator);
    out.stats.ci_test_count = backend.test_count() - start;
    return out;
}

}  // namespace ce2ls
