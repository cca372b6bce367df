#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "qrule/data.hpp"

namespace qrule {

/// Contiguous range of raw values of a quantitative attribute. Bounds may be
/// open; infinite bounds leave a side unconstrained.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;
  bool hi_open = false;

  static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }

  /// Missing (NaN) is never contained.
  bool contains(double v) const {
    if (std::isnan(v)) return false;
    if (lo_open ? !(v > lo) : !(v >= lo)) return false;
    return hi_open ? v < hi : v <= hi;
  }
  bool intersects(const Interval& other) const;

  bool operator==(const Interval&) const = default;
};

/// Set of nominal codes (sorted, unique). May hold kMissingCode.
struct NominalSet {
  std::vector<int> codes;

  bool contains(int code) const;
  bool intersects(const NominalSet& other) const;

  bool operator==(const NominalSet&) const = default;
};

using ValueRange = std::variant<NominalSet, Interval>;

struct Literal {
  std::size_t attribute = 0;
  ValueRange range;

  bool is_interval() const { return std::holds_alternative<Interval>(range); }
  const Interval& interval() const { return std::get<Interval>(range); }
  Interval& interval() { return std::get<Interval>(range); }
  const NominalSet& set() const { return std::get<NominalSet>(range); }

  bool operator==(const Literal&) const = default;
};

/// Counted statistics of a rule on the dataset it was last evaluated on.
struct RuleStats {
  std::size_t covered = 0;  ///< instances satisfying the antecedent
  std::size_t correct = 0;  ///< of those, instances of the consequent class (abs_supp)
  std::size_t total = 0;    ///< dataset size

  /// Zero when nothing is covered.
  double confidence() const {
    return covered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(covered);
  }
  double support() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }

  bool operator==(const RuleStats&) const = default;
};

struct Rule {
  std::vector<Literal> antecedent;
  int consequent = 0;
  RuleStats stats;

  std::size_t length() const { return antecedent.size(); }
  bool is_default() const { return antecedent.empty(); }
  const Literal* literal_on(std::size_t attribute) const;

  bool operator==(const Rule&) const = default;
};

/// Ordered rules; a classifier-ready list ends with an empty-antecedent rule.
using RuleList = std::vector<Rule>;

bool classifier_ready(const RuleList& rules);

bool satisfies(const Dataset& ds, std::size_t row, const Literal& literal);
/// Body satisfaction; an empty antecedent is satisfied by every row.
bool satisfies(const Dataset& ds, std::size_t row, const Rule& rule);

struct Coverage {
  std::vector<std::size_t> covered;
  std::vector<std::size_t> correct;
};

Coverage coverage(const Rule& rule, const Dataset& ds);
RuleStats evaluate(const Rule& rule, const Dataset& ds);
void refresh_stats(Rule& rule, const Dataset& ds);
void refresh_stats(RuleList& rules, const Dataset& ds);

/// Product over all predictors of the normalised literal length (1 for
/// attributes the rule does not constrain, and for constant attributes).
double volume(const Rule& rule, const Dataset& ds);
/// abs_supp / volume; nullopt when the volume is zero.
std::optional<double> density(const Rule& rule, const Dataset& ds);

/// Rule precedence: higher confidence, then higher support, then shorter
/// antecedent. `less` means `a` ranks above `b`.
std::weak_ordering compare(const Rule& a, const Rule& b);
std::weak_ordering compare(const RuleStats& a, std::size_t length_a, const RuleStats& b,
                           std::size_t length_b);
inline bool ranks_higher(const Rule& a, const Rule& b) { return compare(a, b) < 0; }

/// Stable sort by `compare`, so equal rules keep their input order.
void sort_rules(RuleList& rules);

/// Total number of antecedent literals in the list.
std::size_t condition_count(const RuleList& rules);

}  // namespace qrule
