#include "qrule/cba.hpp"

#include <algorithm>

#include "qrule/parallel.hpp"

namespace qrule {

namespace {

int majority(const std::vector<std::size_t>& counts, int fallback) {
  const auto it = std::max_element(counts.begin(), counts.end());
  if (it == counts.end() || *it == 0) return fallback;
  return static_cast<int>(it - counts.begin());
}

}  // namespace

Rule default_rule(int cls, const Dataset& ds) {
  Rule r{.consequent = cls};
  refresh_stats(r, ds);
  return r;
}

RuleList post_prune(RuleList rules, const Dataset& train, const PostPruneOptions& options) {
  if (train.empty()) throw DataError("cannot prune rules on an empty training set");
  refresh_stats(rules, train);
  sort_rules(rules);

  const int global_majority = *train.majority_class();
  std::vector<char> remaining(train.size(), 1);
  auto counts = train.class_histogram();
  std::size_t left = train.size();

  std::size_t cutoff = 0;
  int cutoff_class = global_majority;
  int def_class = global_majority;
  std::size_t lowest_error = left - counts[static_cast<std::size_t>(global_majority)];
  std::size_t errors_without_default = 0;

  RuleList kept;
  std::vector<std::size_t> matched;
  for (auto& rule : rules) {
    matched.clear();
    std::size_t correct = 0;
    for (std::size_t r = 0; r < train.size(); ++r) {
      if (!remaining[r] || !satisfies(train, r, rule)) continue;
      matched.push_back(r);
      if (train.label(r) == rule.consequent) ++correct;
    }
    if (correct == 0) continue;

    for (auto r : matched) {
      remaining[r] = 0;
      --counts[static_cast<std::size_t>(train.label(r))];
    }
    left -= matched.size();
    errors_without_default += matched.size() - correct;
    def_class = majority(counts, global_majority);
    const std::size_t total = errors_without_default + left - counts[static_cast<std::size_t>(def_class)];
    const bool ends_list = rule.is_default();
    kept.push_back(std::move(rule));
    if (total < lowest_error) {
      lowest_error = total;
      cutoff = kept.size();
      cutoff_class = def_class;
    }
    if (ends_list) break;
  }

  if (options.keep_all) {
    cutoff_class = def_class;
  } else {
    kept.resize(cutoff);
  }
  if (kept.empty() || !kept.back().is_default()) kept.push_back(default_rule(cutoff_class, train));
  return kept;
}

int classify(const RuleList& rules, const Dataset& ds, std::size_t row) {
  for (const auto& r : rules) {
    if (satisfies(ds, row, r)) return r.consequent;
  }
  return kMissingCode;
}

std::vector<int> predict(const RuleList& rules, const Dataset& ds, std::size_t jobs) {
  std::vector<int> out(ds.size());
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (ds.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::size_t end = std::min(ds.size(), (c + 1) * kChunk);
    for (std::size_t r = c * kChunk; r < end; ++r) out[r] = classify(rules, ds, r);
  });
  return out;
}

double accuracy(const RuleList& rules, const Dataset& ds) {
  if (ds.empty()) throw DataError("accuracy of an empty dataset is undefined");
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (classify(rules, ds, r) == ds.label(r)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ds.size());
}

}  // namespace qrule
