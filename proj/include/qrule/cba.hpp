#pragma once

#include <cstddef>
#include <vector>

#include "qrule/data.hpp"
#include "qrule/rule.hpp"

namespace qrule {

struct PostPruneOptions {
  /// Skip default-rule pruning (no truncation at the error-minimising cutoff).
  /// A default rule is still appended.
  bool keep_all = false;
};

/// Data coverage pruning followed by default-rule pruning.
///
/// Rules are re-evaluated on `train` and stably sorted by `compare`. Walking
/// the list, a rule that correctly covers at least one still-uncovered
/// instance is kept and all uncovered instances it matches are removed;
/// otherwise it is dropped. The list is cut after the kept rule that minimises
/// (errors made by kept rules + errors of a majority default on what is left),
/// an empty prefix included, and one default rule predicting that remainder's
/// majority class is appended. Majority ties go to the smallest class code; an
/// empty remainder falls back to the training majority.
RuleList post_prune(RuleList rules, const Dataset& train, const PostPruneOptions& options = {});

/// Consequent of the first rule the row satisfies, or kMissingCode when no
/// rule fires (only possible for lists that are not classifier-ready).
int classify(const RuleList& rules, const Dataset& ds, std::size_t row);

std::vector<int> predict(const RuleList& rules, const Dataset& ds, std::size_t jobs = 1);

/// Fraction of rows whose predicted class equals their label. Throws DataError
/// on an empty dataset.
double accuracy(const RuleList& rules, const Dataset& ds);

/// Empty-antecedent rule predicting `cls`, with stats on `ds`.
Rule default_rule(int cls, const Dataset& ds);

}  // namespace qrule
