#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mislabel/dataset.hpp"

namespace mislabel {

// Pairwise label corruption: an instance whose class belongs to some pair
// is flipped to its pair partner with the given probability.
struct NoiseSpec {
  std::vector<std::pair<int, int>> pairs;
  double rate = 0.0;

  void validate(int class_count) const;
  // partner lists per class, sorted ascending; empty for classes outside
  // every pair
  std::vector<std::vector<int>> partners(int class_count) const;
};

// Which instances were corrupted and what their labels were.
struct CorruptionMask {
  std::map<std::size_t, int> original_label;

  std::size_t size() const { return original_label.size(); }
  bool contains(std::size_t t) const { return original_label.count(t) > 0; }

  // Delimited export: instance id, original label name, new label name.
  std::string to_table(const Dataset& corrupted) const;
  static CorruptionMask from_table(const std::string& text,
                                   const Dataset& corrupted);
};

// Flips labels within the declared pairs, independently per instance with
// probability spec.rate. An instance belonging to several pairs picks its
// partner uniformly (after the corruption decision). Pure function of
// (dataset, spec, seed).
std::pair<Dataset, CorruptionMask> inject_noise(const Dataset& train,
                                                const NoiseSpec& spec,
                                                std::uint64_t seed);

// Realized fraction of corrupted instances.
double actual_noise_rate(const CorruptionMask& mask, std::size_t train_size);

// Restores the original labels recorded in the mask.
Dataset restore_labels(const Dataset& corrupted, const CorruptionMask& mask);

std::vector<std::pair<int, int>> parse_pairs(const std::string& text);

}  // namespace mislabel
