#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "minen/sim.hpp"

namespace minen {

/// Linearly interpolated quantile (the R type 7 rule) of a non-empty sample.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

struct LifetimeRounds {
  double first_death = 0.0;
  double rounds_30pct = 0.0;
  double rounds_50pct = 0.0;
  double rounds_total = 0.0;
};

/// Lifetime metrics with unreached thresholds replaced by rounds_total, so a
/// run truncated at the round cap counts as lasting at least that long.
LifetimeRounds lifetime_rounds(const RunSummary& s);

}  // namespace minen
