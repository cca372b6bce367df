#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qrule/data.hpp"
#include "qrule/discretizer.hpp"
#include "qrule/rule.hpp"

namespace qrule {

enum class DropMode { None, Transaction, Range };

const char* to_string(DropMode mode);
/// "none", "transaction" or "range"; throws std::invalid_argument otherwise.
DropMode parse_drop_mode(const std::string& text);

struct QcbaConfig {
  bool refit = true;
  bool literal_pruning = true;
  bool trimming = true;
  bool extension = true;
  bool postpruning = true;
  DropMode drop = DropMode::Transaction;
  double min_improvement = 0.0;
  double min_cond_improvement = -1.0;

  /// Ablation configurations 1..7: each enables one more stage than the
  /// previous, 6 adds transaction-based and 7 range-based overlap pruning.
  static QcbaConfig preset(int number);

  /// Throws std::invalid_argument on out-of-range thresholds.
  void validate() const;

  bool operator==(const QcbaConfig&) const = default;
};

/// Sorted distinct training values of every quantitative attribute (empty for
/// nominal attributes); the lattice refit and extension move along.
class FinerGrid {
 public:
  explicit FinerGrid(const Dataset& raw);

  const std::vector<double>& values(std::size_t attribute) const { return values_.at(attribute); }
  /// Largest grid value the interval does not reach on its lower side.
  std::optional<double> step_down(std::size_t attribute, const Interval& iv) const;
  /// Smallest grid value the interval does not reach on its upper side.
  std::optional<double> step_up(std::size_t attribute, const Interval& iv) const;

 private:
  std::vector<std::vector<double>> values_;
};

/// Rewrites literals in bin codes of `map` on attributes that are
/// quantitative in `raw` as the equivalent raw intervals. Interval literals
/// and literals on nominal attributes are kept. Throws DataError on schema
/// mismatches.
Rule to_raw(const Rule& rule, const Dataset& raw, const DiscretizationMap& map);

/// Each interval becomes [min, max] of the training values it contains; a
/// literal containing no training value is left alone.
Rule refit(Rule rule, const Dataset& raw);

/// Repeatedly removes the first literal whose removal keeps confidence at or
/// above the current value.
Rule prune_literals(Rule rule, const Dataset& raw);

/// Shrinks each interval to the values of correctly covered instances;
/// literals matching at most one distinct value are left alone.
Rule trim(Rule rule, const Dataset& raw);

/// Direct extensions: for each interval literal in antecedent order, the
/// lower then the higher one-grid-step widening, when one exists.
std::vector<Rule> get_extensions(const Rule& rule, const FinerGrid& grid);

/// Greedy widening of interval literals along the grid with crisp and
/// conditional acceptance. Stats of the result are computed on `raw`.
Rule extend_rule(Rule rule, const Dataset& raw, const FinerGrid& grid, const QcbaConfig& config);

/// Removes rules predicting the default class when no training instance they
/// classify would be classified differently without them.
RuleList drop_transaction(RuleList rules, const Dataset& train);

/// Removes rules predicting the default class when every lower rule of another
/// class is disjoint from them on some shared attribute.
RuleList drop_range(RuleList rules);

/// Full tuning pipeline. Rules may be expressed over the bins of `map` or
/// directly over raw intervals; empty-antecedent rules are discarded first.
/// The result is classifier-ready with stats on `raw`, and is identical for
/// every `jobs` value.
RuleList optimize(RuleList rules, const Dataset& raw, const DiscretizationMap& map,
                  const QcbaConfig& config, std::size_t jobs = 1);

}  // namespace qrule
