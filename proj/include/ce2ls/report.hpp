#ifndef CE2LS_REPORT_HPP
#define CE2LS_REPORT_HPP

#include <ce2ls/estimation.hpp>
#include <ce2ls/search.hpp>

#include <optional>
#include <string>

namespace ce2ls {

std::string format_effect(double v);

// Human-readable summary: verdict, context sets, Psi table, aggregated effect, counters.
std::string format_report(const SearchOutcome& out, const std::string& w, const std::string& y,
                          const std::optional<EstimationResult>& estimate = std::nullopt);

// One row per Psi entry: set,effect,level,coso. Set members are space separated.
std::string format_psi_csv(const SearchOutcome& out);

// Level-by-level candidate trace for every COSO variable.
std::string format_trace(const SearchOutcome& out);

}  // namespace ce2ls

#endif  // CE2LS_REPORT_HPP
