#pragma once

#include <string>

namespace percolab {

// How much a reported number can be trusted.
enum class Provenance {
  exact,             // computed exactly (rationals or closed form)
  certified_bound,   // a rigorous one-sided bound
  heuristic,         // numerically reasonable, not a certificate
  monte_carlo_ci,    // sampled estimate with a confidence interval
  none,              // no value available
};

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::certified_bound: return "certified-bound";
    case Provenance::heuristic: return "heuristic";
    case Provenance::monte_carlo_ci: return "monte-carlo-ci";
    case Provenance::none: return "none";
  }
  return "none";
}

inline bool is_certified(Provenance p) {
  return p == Provenance::exact || p == Provenance::certified_bound;
}

}  // namespace percolab
