#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mislabel/dataset.hpp"

namespace mislabel {

// Gaussian blob generator. Classes come in confusable pairs: the two
// members of a pair sit pair_separation apart (in sigma units) while
// distinct pairs sit group_separation apart, so injected label noise
// between pair members mimics plausible labeling confusion.
struct SyntheticSpec {
  std::vector<std::size_t> class_counts;  // instances per class, >= 2 classes
  std::size_t dims = 2;
  double pair_separation = 6.0;
  double group_separation = 60.0;
  double sigma = 1.0;

  static SyntheticSpec uniform(int classes, std::size_t per_class) {
    SyntheticSpec s;
    s.class_counts.assign(static_cast<std::size_t>(classes), per_class);
    return s;
  }
};

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// The pairs the generator places adjacently: (0,1), (2,3), ...; a trailing
// odd class belongs to no pair.
std::vector<std::pair<int, int>> synthetic_confusable_pairs(int class_count);

}  // namespace mislabel
