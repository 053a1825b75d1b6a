#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minen/types.hpp"

namespace minen {

/// Square sensing grid laid over the simulation area. A cell is covered by a
/// node when the cell center lies within the sensing radius (inclusive).
struct GridSpec {
  double width = 250.0;
  double height = 250.0;
  std::size_t cells_per_axis = 50;
  double sensing_radius = 25.0;

  std::size_t cell_count() const { return cells_per_axis * cells_per_axis; }
  Position cell_center(std::size_t row, std::size_t col) const;
};

/// Per-node bitsets of covered cells, indexed by node id. Positions are
/// static, so one map serves a whole simulation.
class CoverageMap {
 public:
  CoverageMap(const GridSpec& grid, std::span<const NodeState> nodes);

  const GridSpec& grid() const { return grid_; }
  std::size_t cell_count() const { return grid_.cell_count(); }
  std::size_t words_per_node() const { return words_; }
  std::size_t node_count() const { return node_count_; }

  std::span<const std::uint64_t> cells_of(NodeId id) const {
    return {bits_.data() + static_cast<std::size_t>(id) * words_, words_};
  }

  /// Number of cells covered by at least one of `ids`.
  std::size_t union_count(std::span<const NodeId> ids) const;

  /// Cells covered by ids[i] for every i with asleep[i] == 0. `scratch`
  /// must hold words_per_node() words.
  std::size_t masked_union_count(std::span<const NodeId> ids, std::span<const std::uint8_t> asleep,
                                 std::span<std::uint64_t> scratch) const;

  /// ORs the cells of `id` into `acc` (sized words_per_node()).
  void accumulate(std::span<std::uint64_t> acc, NodeId id) const {
    std::uint64_t* __restrict dst = acc.data();
    const std::uint64_t* __restrict src = bits_.data() + static_cast<std::size_t>(id) * words_;
    for (std::size_t w = 0; w < words_; ++w) {
      dst[w] |= src[w];
    }
  }

 private:
  GridSpec grid_;
  std::size_t words_ = 0;
  std::size_t node_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Cells covered by at least one alive, awake node among `nodes`.
std::size_t coverage_of(std::span<const NodeState> nodes, const CoverageMap& map);

std::size_t popcount(std::span<const std::uint64_t> words);

}  // namespace minen
