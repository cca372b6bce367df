#pragma once

#include <cstddef>

#include "qrule/data.hpp"
#include "qrule/rule.hpp"

namespace qrule {

struct MinerParams {
  double min_support = 0.01;
  double min_confidence = 0.5;
  std::size_t max_length = 5;
  std::size_t max_rules = 50000;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// True when count / total reaches `threshold`. Support and confidence
/// thresholds everywhere go through this one comparison.
bool meets_threshold(std::size_t count, std::size_t total, double threshold);

/// Class association rules on an all-nominal dataset, mined level-wise
/// (Apriori). A rule X => c is returned when count(X and c) / N reaches
/// min_support, its confidence reaches min_confidence and 1 <= |X| <= max_length.
/// Output is sorted by `compare`, ties kept in generation order (by length,
/// then lexicographically by (attribute, value code)), and truncated to
/// max_rules. Stats are filled in.
///
/// Missing values are items of their own unless the attribute was produced
/// by discretization (AttributeSchema::missing_is_item == false).
RuleList mine_car_rules(const Dataset& ds, const MinerParams& params, std::size_t jobs = 1);

}  // namespace qrule
