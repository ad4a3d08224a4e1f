#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "binpack/instance.hpp"

namespace binpack {

// Where to put the next item: an existing bin by index, or a fresh bin.
struct Placement {
  static constexpr std::int32_t kNewBin = -1;
  std::int32_t bin{kNewBin};

  static Placement new_bin() { return Placement{}; }
  static Placement existing(std::int32_t index) { return Placement{index}; }
  bool is_new() const { return bin == kNewBin; }
};

struct PackedItem {
  std::int32_t id{0};
  std::int64_t size{0};
};

struct Bin {
  std::int64_t load{0};
  std::vector<PackedItem> items;
};

// Mutable state of one online packing run.  Bins are append-only and never
// close: a full bin simply stops being a candidate.  The level histogram
// counts open partially-filled bins by load and excludes empty and exactly
// full bins, which is the bookkeeping the level-LP policy and sum-of-squares
// baseline both read.
struct PackingState {
  std::int64_t den{0};
  std::vector<Bin> bins;
  std::map<std::int64_t, std::int64_t> level_histogram;
  std::int64_t opened_total{0};
  std::int32_t next_item_id{0};

  explicit PackingState(std::int64_t capacity_den = 0) : den(capacity_den) {}
};

// Applies one placement and returns the id assigned to the item (ids are
// consecutive from 0 in placement order).  Throws CapacityExceeded if the
// target bin cannot hold the item, BadIndex if the index does not name an
// existing bin.  The item must satisfy 0 < value <= den.
std::int32_t place_item(PackingState& state, Size item, Placement where);

inline std::int64_t bins_used(const PackingState& state) { return state.opened_total; }

// nullopt when internally consistent: loads equal item sums, no load exceeds
// capacity, histogram matches the bins, opened_total equals bins.size(),
// item ids are 0..n-1 exactly once.
std::optional<std::string> validate_state(const PackingState& state);

}  // namespace binpack
