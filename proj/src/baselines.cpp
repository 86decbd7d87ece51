#include <ce2ls/baselines.hpp>

namespace ce2ls {

namespace {

const std::vector<std::pair<BaselineKind, std::string>>& names() {
    static const std::vector<std::pair<BaselineKind, std::string>> table{
        {BaselineKind::Null, "null"},       {BaselineKind::Pre, "pre"},
        {BaselineKind::MassXW, "mass-xw"},  {BaselineKind::MassXY, "mass-xy"},
        {BaselineKind::MassQW, "mass-qw"},  {BaselineKind::MassZY, "mass-zy"},
        {BaselineKind::Disjunctive, "disjunctive"}, {BaselineKind::Ehs, "ehs"}};
    return table;
}

std::vector<NodeSet> ehs_sets(const CiBackend& backend, const std::string& w, const std::string& y, const NodeSet& x,
                              int max_cond) {
    if (max_cond <= 0 && x.size() > kEhsUnboundedLimit)
        throw CapacityError("exhaustive search over " + std::to_string(x.size()) +
                            " covariates needs a subset-size cap");
    std::set<NodeSet> found;
    for (const auto& s : x) {
        std::vector<std::string> rest;
        for (const auto& v : x)
            if (v != s) rest.push_back(v);
        const std::size_t top = max_cond <= 0 ? rest.size() : std::min(rest.size(), static_cast<std::size_t>(max_cond));
        for (std::size_t k = 0; k <= top; ++k) {
            for_each_subset(rest, k, [&](const NodeSet& z) {
                NodeSet with_w = z;
                with_w.insert(w);
                if (backend.independent(s, y, with_w) && !backend.independent(s, y, z)) found.insert(z);
                return false;
            });
        }
    }
    std::vector<NodeSet> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), size_then_lex);
    return out;
}

}  // namespace

std::string to_string(BaselineKind k) {
    for (const auto& [kind, name] : names())
        if (kind == k) return name;
    return "?";
}

BaselineKind parse_baseline(const std::string& name) {
    for (const auto& [kind, n] : names())
        if (n == name) return kind;
    throw std::invalid_argument("unknown strategy: " + name);
}

const std::vector<BaselineKind>& all_baselines() {
    static const std::vector<BaselineKind> kinds = [] {
        std::vector<BaselineKind> out;
        for (const auto& entry : names()) out.push_back(entry.first);
        return out;
    }();
    return kinds;
}

std::vector<NodeSet> baseline_adjustment_sets(const CiBackend& backend, const std::string& w, const std::string& y,
                                              const NodeSet& x, const BaselineSpec& spec) {
    if (x.count(w) || x.count(y)) throw std::invalid_argument("covariates must not include treatment or outcome");
    switch (spec.kind) {
        case BaselineKind::Null: return {NodeSet{}};
        case BaselineKind::Pre: return {x};
        case BaselineKind::Ehs: return ehs_sets(backend, w, y, x, spec.max_cond);
        default: break;
    }
    NodeSet pool = x;
    pool.insert(y);
    NodeSet cause_w = learn_adjacency(backend, w, pool, spec.learn_max_cond);
    cause_w.erase(y);
    pool = x;
    pool.insert(w);
    NodeSet cause_y = learn_adjacency(backend, y, pool, spec.learn_max_cond);
    cause_y.erase(w);

    NodeSet out;
    switch (spec.kind) {
        case BaselineKind::MassXW: out = cause_w; break;
        case BaselineKind::MassXY: out = cause_y; break;
        case BaselineKind::MassQW:
            for (const auto& v : cause_w)
                if (!cause_y.count(v)) out.insert(v);
            break;
        case BaselineKind::MassZY:
            for (const auto& v : cause_y)
                if (!cause_w.count(v)) out.insert(v);
            break;
        case BaselineKind::Disjunctive:
            out = cause_w;
            out.insert(cause_y.begin(), cause_y.end());
            break;
        default: break;
    }
    return {out};
}

EstimationResult run_baseline(const CiBackend& backend, const Dataset& data, const std::string& w,
                              const std::string& y, const NodeSet& x, const BaselineSpec& spec,
                              EffectScale binary_scale) {
    auto sets = baseline_adjustment_sets(backend, w, y, x, spec);
    if (sets.empty()) throw EstimationError("strategy " + to_string(spec.kind) + " found no adjustment set");
    auto estimate = make_estimator(data, w, y, binary_scale);
    std::vector<SetEffect> per_set;
    for (const auto& z : sets) per_set.push_back({z, estimate(z)});
    return aggregate(per_set, outcome_kind(data, y), effect_scale_for(data, y, binary_scale));
}

}  // namespace ce2ls
