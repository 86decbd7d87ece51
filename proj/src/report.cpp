#include <ce2ls/report.hpp>

#include <cmath>
#include <sstream>

namespace ce2ls {

namespace {

std::string members(const NodeSet& s) {
    std::string out;
    for (const auto& v : s) {
        if (!out.empty()) out += ' ';
        out += v;
    }
    return out;
}

std::string set_list(const std::vector<NodeSet>& sets) {
    std::string out = "{";
    for (std::size_t i = 0; i < sets.size(); ++i) out += (i ? ", " : "") + to_string(sets[i]);
    return out + "}";
}

}  // namespace

std::string format_effect(double v) {
    if (std::isnan(v)) return "NaN";
    std::ostringstream s;
    s.precision(6);
    s << std::fixed << v;
    return s.str();
}

std::string format_report(const SearchOutcome& out, const std::string& w, const std::string& y,
                          const std::optional<EstimationResult>& estimate) {
    std::ostringstream s;
    const auto& c = out.context;
    s << "treatment: " << w << "\noutcome: " << y << '\n';
    s << "verdict: " << to_string(out.verdict) << '\n';
    if (out.witness) {
        s << "witness: " << to_string(out.witness->rule);
        if (!out.witness->coso.empty()) s << " via " << out.witness->coso;
        s << " given " << to_string(out.witness->z) << '\n';
    }
    if (!out.note.empty()) s << "note: " << out.note << '\n';
    s << "Adj(W): " << to_string(c.adj_w) << '\n';
    s << "Adj(Y): " << to_string(c.adj_y) << '\n';
    s << "Q: " << to_string(c.q_removed) << '\n';
    s << "Adj_R: " << to_string(c.adj_r) << '\n';
    s << "Omega: " << to_string(c.omega) << '\n';
    s << "adjustment sets: " << out.psi.size() << '\n';
    for (const auto& e : out.psi)
        s << "  " << to_string(e.z) << "  effect " << format_effect(e.effect) << "  level " << e.level << "  via "
          << e.coso << '\n';
    if (estimate) {
        s << "ACE (" << to_string(estimate->effect_scale) << "): " << format_effect(estimate->ace) << '\n';
    }
    s << "CI tests: " << out.stats.ci_test_count << " (search " << out.stats.search_test_count << ")\n";
    s << "levels explored: " << out.stats.levels_explored << '\n';
    return s.str();
}

std::string format_psi_csv(const SearchOutcome& out) {
    std::ostringstream s;
    s << "set,effect,level,coso\n";
    for (const auto& e : out.psi) s << members(e.z) << ',' << format_effect(e.effect) << ',' << e.level << ',' << e.coso << '\n';
    return s.str();
}

std::string format_trace(const SearchOutcome& out) {
    std::ostringstream s;
    for (const auto& t : out.trace) {
        s << "COSO " << t.coso << '\n';
        for (const auto& l : t.levels) {
            s << "  C" << l.k << " = " << set_list(l.candidates);
            if (!l.skipped.empty()) s << "; skipped " << set_list(l.skipped);
            if (!l.found.empty()) s << "; found " << set_list(l.found);
            s << "; remaining " << set_list(l.remaining) << '\n';
        }
    }
    return s.str();
}

}  // namespace ce2ls
