#ifndef CE2LS_BENCHMARKS_HPP
#define CE2LS_BENCHMARKS_HPP

#include <ce2ls/datagen.hpp>
#include <ce2ls/graph.hpp>

#include <string>

namespace ce2ls {

// Shipped models: fig1a/fig5a are generating DAGs with hidden nodes, fig1b/fig5b
// the graphs over the observed variables. Texts are the files under data/.
inline constexpr double kGroupOneAce = 0.5;
inline constexpr double kGroupTwoAce = 2.0;

std::string fig1a_text();
std::string fig1b_text();
std::string fig5a_text();
std::string fig5b_text();

LinearSem fig1a_sem();
LinearSem fig5a_sem();
Mag fig1b_mag();
Mag fig5b_mag();

}  // namespace ce2ls

#endif  // CE2LS_BENCHMARKS_HPP
