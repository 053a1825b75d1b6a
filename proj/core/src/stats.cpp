#include "minen/stats.hpp"

#include <algorithm>
#include <cmath>

#include "minen/error.hpp"

namespace minen {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw ContractError("quantile of an empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ContractError("quantile level must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

LifetimeRounds lifetime_rounds(const RunSummary& s) {
  const auto total = static_cast<double>(s.rounds_total);
  auto or_total = [total](const std::optional<std::uint64_t>& v) {
    return v ? static_cast<double>(*v) : total;
  };
  return {or_total(s.first_death_round), or_total(s.rounds_to_30pct_dead),
          or_total(s.rounds_to_50pct_dead), total};
}

}  // namespace minen
