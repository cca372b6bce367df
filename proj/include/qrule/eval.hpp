#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrule/data.hpp"
#include "qrule/miner.hpp"

namespace qrule {

struct Fold {
  std::vector<std::size_t> train;  ///< ascending row indices
  std::vector<std::size_t> test;   ///< ascending row indices
};

/// k stratified folds. Rows of each class are shuffled with a seeded
/// mt19937_64 and dealt round-robin, continuing the deal across classes, so
/// per-class counts of any two folds differ by at most one.
std::vector<Fold> stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed);

/// One model built on one fold.
struct FoldResult {
  double accuracy = 0.0;
  std::size_t rules = 0;       ///< including the default rule
  std::size_t conditions = 0;  ///< antecedent literals over all rules
  double seconds = 0.0;        ///< build time of this model
  std::size_t input_rules = 0; ///< non-default rules handed to the tuner (0 for the baseline)

  bool operator==(const FoldResult&) const = default;
};

/// All folds of one preset on one dataset. Preset 0 is the CBA baseline.
struct PresetResult {
  std::string dataset;
  int preset = 0;
  std::vector<FoldResult> folds;

  double accuracy() const;               ///< unweighted mean over folds
  double avg_rule_count() const;
  double avg_conditions_per_rule() const;  ///< pooled: all conditions / all rules
  double avg_conditions_per_model() const; ///< avg_rule_count * avg_conditions_per_rule
  double median_seconds() const;
  double mean_seconds() const;

  bool operator==(const PresetResult&) const = default;
};

struct WinTieLoss {
  std::size_t won = 0;
  std::size_t tie = 0;
  std::size_t lost = 0;
};

struct EvalReport {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::vector<PresetResult> results;

  const PresetResult* find(const std::string& dataset, int preset) const;
  /// Per-dataset mean accuracy of `preset` against `baseline`; differences
  /// below 1e-9 are ties.
  WinTieLoss versus(int preset, int baseline = 0) const;

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
  void write_csv(std::ostream& out) const;
  void write_table(std::ostream& out) const;

  bool operator==(const EvalReport&) const = default;
};

struct BenchmarkOptions {
  std::vector<int> presets{0, 1, 2, 3, 4, 5, 6, 7};
  std::size_t k = 10;
  std::uint64_t seed = 42;
  MinerParams miner;
  std::size_t jobs = 1;  ///< folds evaluated concurrently
};

/// Cross-validates the baseline and the requested presets on one dataset.
/// Per fold: MDLP is fitted on the training rows only, rules are mined on the
/// discretized training rows, the baseline is the pruned rule list evaluated
/// on the discretized test rows, and each preset tunes the unpruned
/// (default-rule pruning off) list on raw training rows and is evaluated on
/// raw test rows. Results are appended to `report`.
void run_benchmark(const Dataset& ds, const std::string& name, const BenchmarkOptions& options,
                   EvalReport& report);

}  // namespace qrule
