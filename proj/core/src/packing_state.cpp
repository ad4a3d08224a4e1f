#include "binpack/packing_state.hpp"

#include <algorithm>

#include "binpack/errors.hpp"

namespace binpack {
namespace {

void histogram_add(PackingState& state, std::int64_t load, std::int64_t delta) {
  if (load <= 0 || load >= state.den) return;
  auto it = state.level_histogram.find(load);
  if (it == state.level_histogram.end()) {
    if (delta > 0) state.level_histogram.emplace(load, delta);
    return;
  }
  it->second += delta;
  if (it->second <= 0) state.level_histogram.erase(it);
}

}  // namespace

std::int32_t place_item(PackingState& state, Size item, Placement where) {
  if (item.value <= 0 || item.value > state.den) {
    throw CapacityExceeded("item size " + std::to_string(item.value) +
                           " outside (0, " + std::to_string(state.den) + "]");
  }
  std::int32_t target = where.bin;
  if (where.is_new()) {
    state.bins.emplace_back();
    ++state.opened_total;
    target = static_cast<std::int32_t>(state.bins.size()) - 1;
  } else if (target < 0 || target >= static_cast<std::int32_t>(state.bins.size())) {
    throw BadIndex("bin index " + std::to_string(target) + " out of range");
  }
  Bin& bin = state.bins[target];
  if (bin.load + item.value > state.den) {
    throw CapacityExceeded("bin " + std::to_string(target) + " load " + std::to_string(bin.load) +
                           " cannot take item " + std::to_string(item.value));
  }
  histogram_add(state, bin.load, -1);
  bin.load += item.value;
  histogram_add(state, bin.load, +1);
  const std::int32_t id = state.next_item_id++;
  bin.items.push_back(PackedItem{id, item.value});
  return id;
}

std::optional<std::string> validate_state(const PackingState& state) {
  if (state.den < 1) return "capacity denominator must be >= 1";
  if (state.opened_total != static_cast<std::int64_t>(state.bins.size())) {
    return "opened_total disagrees with bin count";
  }
  std::map<std::int64_t, std::int64_t> expect_hist;
  std::vector<char> seen(static_cast<std::size_t>(state.next_item_id), 0);
  for (std::size_t b = 0; b < state.bins.size(); ++b) {
    const Bin& bin = state.bins[b];
    std::int64_t sum = 0;
    for (const PackedItem& it : bin.items) {
      if (it.size <= 0 || it.size > state.den) {
        return "bin " + std::to_string(b) + " holds an item of invalid size";
      }
      if (it.id < 0 || it.id >= state.next_item_id) {
        return "bin " + std::to_string(b) + " holds an unknown item id";
      }
      if (seen[static_cast<std::size_t>(it.id)]) {
        return "item id " + std::to_string(it.id) + " appears twice";
      }
      seen[static_cast<std::size_t>(it.id)] = 1;
      sum += it.size;
    }
    if (sum != bin.load) return "bin " + std::to_string(b) + " load disagrees with its items";
    if (bin.load > state.den) return "bin " + std::to_string(b) + " exceeds capacity";
    if (bin.load > 0 && bin.load < state.den) ++expect_hist[bin.load];
  }
  if (!std::all_of(seen.begin(), seen.end(), [](char c) { return c == 1; })) {
    return "an item id was assigned but is missing from every bin";
  }
  if (expect_hist != state.level_histogram) return "level histogram out of sync";
  return std::nullopt;
}

}  // namespace binpack
