#include "minen/coverage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "minen/error.hpp"

namespace minen {

Position GridSpec::cell_center(std::size_t row, std::size_t col) const {
  const double cw = width / static_cast<double>(cells_per_axis);
  const double ch = height / static_cast<double>(cells_per_axis);
  return {(static_cast<double>(col) + 0.5) * cw, (static_cast<double>(row) + 0.5) * ch};
}

CoverageMap::CoverageMap(const GridSpec& grid, std::span<const NodeState> nodes)
    : grid_(grid), words_((grid.cell_count() + 63) / 64) {
  NodeId max_id = 0;
  for (const auto& n : nodes) {
    max_id = std::max(max_id, n.id);
  }
  node_count_ = nodes.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
  bits_.assign(node_count_ * words_, 0);

  const std::size_t g = grid_.cells_per_axis;
  const double cw = grid_.width / static_cast<double>(g);
  const double ch = grid_.height / static_cast<double>(g);
  const double r = grid_.sensing_radius;
  const auto clamp_index = [g](double v) {
    if (v < 0.0) return std::size_t{0};
    return std::min(g - 1, static_cast<std::size_t>(v));
  };

  for (const auto& n : nodes) {
    std::uint64_t* row_bits = bits_.data() + static_cast<std::size_t>(n.id) * words_;
    // Candidate cells: bounding box of the sensing disc, widened by one cell.
    const std::size_t c0 = clamp_index((n.pos.x - r) / cw - 1.0);
    const std::size_t c1 = clamp_index((n.pos.x + r) / cw + 1.0);
    const std::size_t r0 = clamp_index((n.pos.y - r) / ch - 1.0);
    const std::size_t r1 = clamp_index((n.pos.y + r) / ch + 1.0);
    for (std::size_t row = r0; row <= r1; ++row) {
      for (std::size_t col = c0; col <= c1; ++col) {
        if (distance(grid_.cell_center(row, col), n.pos) <= r) {
          const std::size_t cell = row * g + col;
          row_bits[cell / 64] |= std::uint64_t{1} << (cell % 64);
        }
      }
    }
  }
}

namespace {

// Integer-only kernel; every clone computes identical results.
#if defined(__x86_64__) && defined(__GNUC__) && !defined(__clang__)
__attribute__((target_clones("avx2", "default")))
#endif
std::size_t masked_union_kernel(const std::uint64_t* __restrict bits, std::size_t words,
                                const NodeId* ids, const std::uint8_t* asleep, std::size_t n,
                                std::uint64_t* __restrict acc) {
  for (std::size_t w = 0; w < words; ++w) {
    acc[w] = 0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (asleep[i] != 0) {
      continue;
    }
    const std::uint64_t* __restrict src = bits + static_cast<std::size_t>(ids[i]) * words;
    for (std::size_t w = 0; w < words; ++w) {
      acc[w] |= src[w];
    }
  }
  std::size_t total = 0;
  for (std::size_t w = 0; w < words; ++w) {
    total += static_cast<std::size_t>(std::popcount(acc[w]));
  }
  return total;
}

}  // namespace

std::size_t CoverageMap::masked_union_count(std::span<const NodeId> ids,
                                            std::span<const std::uint8_t> asleep,
                                            std::span<std::uint64_t> scratch) const {
  if (ids.size() != asleep.size() || scratch.size() < words_) {
    throw ContractError("masked_union_count: mismatched spans");
  }
  return masked_union_kernel(bits_.data(), words_, ids.data(), asleep.data(), ids.size(),
                             scratch.data());
}

std::size_t CoverageMap::union_count(std::span<const NodeId> ids) const {
  std::vector<std::uint64_t> acc(words_, 0);
  for (NodeId id : ids) {
    accumulate(acc, id);
  }
  return popcount(acc);
}

std::size_t popcount(std::span<const std::uint64_t> words) {
  std::size_t total = 0;
  for (auto w : words) {
    total += static_cast<std::size_t>(std::popcount(w));
  }
  return total;
}

std::size_t coverage_of(std::span<const NodeState> nodes, const CoverageMap& map) {
  std::vector<std::uint64_t> acc(map.words_per_node(), 0);
  for (const auto& n : nodes) {
    if (n.active()) {
      map.accumulate(acc, n.id);
    }
  }
  return popcount(acc);
}

}  // namespace minen
