#include <ce2ls/benchmarks.hpp>
#include <ce2ls/benchmarks_data.hpp>
#include <ce2ls/graph_io.hpp>

namespace ce2ls {

std::string fig1a_text() { return embedded::kFig1a; }
std::string fig1b_text() { return embedded::kFig1b; }
std::string fig5a_text() { return embedded::kFig5a; }
std::string fig5b_text() { return embedded::kFig5b; }

LinearSem fig1a_sem() { return parse_linear_sem(fig1a_text()); }
LinearSem fig5a_sem() { return parse_linear_sem(fig5a_text()); }
Mag fig1b_mag() { return parse_mag(fig1b_text()); }
Mag fig5b_mag() { return parse_mag(fig5b_text()); }

}  // namespace ce2ls
