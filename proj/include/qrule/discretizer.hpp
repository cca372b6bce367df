#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrule/data.hpp"
#include "qrule/rule.hpp"

namespace qrule {

/// Cut points for one quantitative attribute. With cuts c1 < ... < ck the
/// bins are [min;c1], (c1;c2], ..., (ck;max]; values outside [min,max] are
/// clamped into the first or last bin.
struct AttributeBins {
  std::string name;
  std::vector<double> cuts;
  double min = 0.0;
  double max = 0.0;

  std::size_t bin_count() const { return cuts.size() + 1; }
  std::size_t bin_of(double value) const;
  std::string label(std::size_t bin) const;
  /// The bin as a raw-value interval; the outer bins are unbounded so the
  /// interval agrees with clamping.
  Interval interval(std::size_t bin) const;

  bool operator==(const AttributeBins&) const = default;
};

class DiscretizationMap {
 public:
  DiscretizationMap() = default;
  explicit DiscretizationMap(std::vector<AttributeBins> bins);

  const std::vector<AttributeBins>& bins() const { return bins_; }
  const AttributeBins* find(const std::string& name) const;
  bool empty() const { return bins_.empty(); }

  nlohmann::json to_json() const;
  static DiscretizationMap from_json(const nlohmann::json& j);

  bool operator==(const DiscretizationMap&) const = default;

 private:
  std::vector<AttributeBins> bins_;
};

/// Recursive entropy-minimising binary splits per quantitative attribute,
/// accepted while the MDL stopping criterion holds. Ties between equally
/// good cuts go to the smallest cut value.
DiscretizationMap mdlp_discretize(const Dataset& ds, std::size_t jobs = 1);

/// Cut points for one column; exposed for testing against a brute-force
/// reference. `values` and `classes` are parallel; missing values excluded.
std::vector<double> mdlp_cuts(std::vector<double> values, std::vector<int> classes,
                              std::size_t class_count);

/// Splits each quantitative attribute's [min,max] into `bin_count` equal-width bins.
DiscretizationMap equal_width_discretize(const Dataset& ds, std::size_t bin_count);

/// Replaces each mapped quantitative column with a nominal column of bin
/// labels (codes equal bin indices). Other columns pass through unchanged.
Dataset apply(const DiscretizationMap& map, const Dataset& ds);

}  // namespace qrule
