#pragma once

// Random data generators and brute-force reference implementations shared by
// the unit tests and the acceptance runner. The references deliberately avoid
// the library's own satisfaction, coverage and ranking code.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "qrule/data.hpp"
#include "qrule/miner.hpp"
#include "qrule/rule.hpp"

namespace testkit {

using qrule::Dataset;
using qrule::Rule;
using qrule::RuleList;
using qrule::RuleStats;

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
bool coin(Rng& rng, double p);

/// Quantitative attributes named q0, q1, ... with the given columns; numeric
/// domains are derived from the data. Class labels are "c0", "c1", ...
Dataset quantitative_dataset(std::vector<std::vector<double>> columns, std::vector<int> classes,
                             std::size_t class_count);

/// Nominal attributes named n0, n1, ... whose labels are "v0".."v{levels-1}".
Dataset nominal_dataset(std::vector<std::vector<double>> codes, std::vector<int> classes,
                        std::size_t levels, std::size_t class_count);

struct Shape {
  std::size_t rows = 50;
  std::size_t quantitative = 2;
  std::size_t nominal = 0;
  std::size_t classes = 2;
  std::size_t levels = 6;      ///< distinct values per attribute
  double missing_rate = 0.0;
};

/// Integer-valued quantitative columns in [0, levels) followed by nominal
/// columns; classes depend weakly on the first attribute so rules have
/// structure to find.
Dataset random_dataset(Rng& rng, const Shape& shape);

Shape random_shape(Rng& rng, std::size_t max_attributes, std::size_t max_rows);

/// Antecedent over distinct attributes in ascending attribute order. Interval
/// bounds are drawn from the domain, from between domain values and from
/// beyond it, with random openness and occasional infinite sides.
Rule random_rule(Rng& rng, const Dataset& ds, std::size_t max_length);

/// Distinct (antecedent, consequent) rules with oracle stats, in random order.
RuleList random_rules(Rng& rng, const Dataset& ds, std::size_t count, std::size_t max_length);

/// Appends a default rule predicting `cls`.
RuleList with_default(RuleList rules, int cls, const Dataset& ds);

bool oracle_satisfies(const Dataset& ds, std::size_t row, const Rule& rule);
RuleStats oracle_stats(const Rule& rule, const Dataset& ds);
std::vector<std::size_t> oracle_covered(const Rule& rule, const Dataset& ds);
int oracle_classify(const RuleList& rules, const Dataset& ds, std::size_t row);
std::size_t oracle_hits(const RuleList& rules, const Dataset& ds);

/// conf(a) >= conf(b) by cross-multiplication, zero coverage counting as 0.
bool confidence_geq(const RuleStats& a, const RuleStats& b);

/// Every antecedent of up to max_length literals (one value per attribute,
/// including the missing marker where it is an item) crossed with every
/// class, filtered by the thresholds and ordered like the miner's output.
RuleList exhaustive_car_rules(const Dataset& ds, const qrule::MinerParams& params);

/// Step-by-step data coverage and default rule pruning: rules ranked by
/// confidence, support and length; a rule is kept and its matches removed
/// from the training data when it classifies at least one remaining
/// instance correctly; the list is cut at the first kept rule reaching the
/// lowest total error and closed with a default rule.
RuleList transcribed_post_prune(RuleList rules, const Dataset& train, bool keep_all = false);

/// Cartesian grid with one point in every cell the rules can tell apart:
/// domain values and interval bounds, midpoints between neighbours, a point
/// beyond each end and missing; nominal attributes take every label plus
/// missing. Classes are all zero.
Dataset instance_grid(const Dataset& ds, const RuleList& rules);

/// Directory of the bundled datasets.
std::string data_dir();
/// Directory of small fixtures used by the tests.
std::string fixture_dir();

}  // namespace testkit
