#include "qrule/miner.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include <boost/dynamic_bitset.hpp>

#include "qrule/parallel.hpp"

namespace qrule {

namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;
using Itemset = std::vector<std::uint32_t>;

struct Item {
  std::size_t attribute;
  int code;
};

// Itemsets of one length, lexicographically sorted, with their covers and
// per-class counts.
struct Level {
  std::vector<Itemset> sets;
  std::vector<Bits> covers;
  std::vector<std::vector<std::size_t>> class_counts;
};

struct Candidate {
  std::uint32_t level;
  std::uint32_t index;
  int cls;
  RuleStats stats;
};

std::vector<std::size_t> count_classes(const Bits& cover, const std::vector<Bits>& class_bits) {
  std::vector<std::size_t> counts(class_bits.size());
  for (std::size_t c = 0; c < class_bits.size(); ++c) counts[c] = (cover & class_bits[c]).count();
  return counts;
}

}  // namespace

void MinerParams::validate() const {
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw std::invalid_argument("min support must be in (0, 1]");
  }
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw std::invalid_argument("min confidence must be in [0, 1]");
  }
  if (max_length < 1) throw std::invalid_argument("max antecedent length must be at least 1");
}

bool meets_threshold(std::size_t count, std::size_t total, double threshold) {
  return static_cast<double>(count) / static_cast<double>(total) >= threshold;
}

RuleList mine_car_rules(const Dataset& ds, const MinerParams& params, std::size_t jobs) {
  params.validate();
  if (ds.empty()) throw DataError("cannot mine rules on an empty dataset");
  if (ds.class_count() == 0) throw DataError("dataset has no class values");
  for (const auto& attr : ds.attributes()) {
    if (attr.quantitative()) {
      throw DataError("attribute '" + attr.name + "' must be discretized before mining");
    }
  }

  const std::size_t n = ds.size();
  std::vector<Bits> class_bits(ds.class_count(), Bits(n));
  for (std::size_t r = 0; r < n; ++r) class_bits[static_cast<std::size_t>(ds.label(r))].set(r);

  auto frequent = [&](const std::vector<std::size_t>& counts) {
    return std::any_of(counts.begin(), counts.end(),
                       [&](std::size_t c) { return meets_threshold(c, n, params.min_support); });
  };

  // Level 1: one item per observed (attribute, code).
  std::vector<Item> items;
  Level level;
  for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
    const auto& attr = ds.attribute(a);
    const int first = attr.missing_is_item ? kMissingCode : 0;
    for (int code = first; code < static_cast<int>(attr.labels.size()); ++code) {
      Bits cover(n);
      for (std::size_t r = 0; r < n; ++r) {
        if (static_cast<int>(ds.value(r, a)) == code) cover.set(r);
      }
      if (cover.none()) continue;
      auto counts = count_classes(cover, class_bits);
      if (!frequent(counts)) continue;
      level.sets.push_back({static_cast<std::uint32_t>(items.size())});
      items.push_back({a, code});
      level.covers.push_back(std::move(cover));
      level.class_counts.push_back(std::move(counts));
    }
  }

  const std::vector<Bits> item_covers = level.covers;
  std::vector<Level> levels;
  std::vector<Candidate> candidates;
  auto collect = [&](const Level& lv, std::uint32_t depth) {
    for (std::size_t i = 0; i < lv.sets.size(); ++i) {
      const std::size_t covered = lv.covers[i].count();
      for (std::size_t c = 0; c < lv.class_counts[i].size(); ++c) {
        const std::size_t correct = lv.class_counts[i][c];
        if (!meets_threshold(correct, n, params.min_support)) continue;
        if (!meets_threshold(correct, covered, params.min_confidence)) continue;
        candidates.push_back({depth, static_cast<std::uint32_t>(i), static_cast<int>(c),
                              {covered, correct, n}});
      }
    }
  };

  for (std::uint32_t depth = 0; !level.sets.empty(); ++depth) {
    collect(level, depth);
    if (depth + 1 >= params.max_length) {
      levels.push_back(std::move(level));
      level = {};
      break;
    }

    // Join itemsets sharing all but the last item; keep a candidate only if
    // every subset one item shorter is frequent.
    std::vector<std::pair<std::size_t, std::uint32_t>> joins;
    std::vector<Itemset> next_sets;
    const auto& sets = level.sets;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        if (!std::equal(sets[i].begin(), sets[i].end() - 1, sets[j].begin())) break;
        const auto a = sets[i].back();
        const auto b = sets[j].back();
        if (items[a].attribute == items[b].attribute) continue;
        Itemset cand = sets[i];
        cand.push_back(b);
        bool all_frequent = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && all_frequent; ++drop) {
          Itemset sub;
          sub.reserve(cand.size() - 1);
          for (std::size_t k = 0; k < cand.size(); ++k) {
            if (k != drop) sub.push_back(cand[k]);
          }
          all_frequent = std::binary_search(sets.begin(), sets.end(), sub);
        }
        if (!all_frequent) continue;
        joins.emplace_back(i, b);
        next_sets.push_back(std::move(cand));
      }
    }

    Level next;
    std::vector<Bits> covers(joins.size());
    std::vector<std::vector<std::size_t>> counts(joins.size());
    parallel_for(joins.size(), jobs, [&](std::size_t k) {
      const auto [parent, item] = joins[k];
      covers[k] = level.covers[parent] & item_covers[item];
      counts[k] = count_classes(covers[k], class_bits);
    });
    for (std::size_t k = 0; k < joins.size(); ++k) {
      if (!frequent(counts[k])) continue;
      next.sets.push_back(std::move(next_sets[k]));
      next.covers.push_back(std::move(covers[k]));
      next.class_counts.push_back(std::move(counts[k]));
    }
    level.covers.clear();
    level.class_counts.clear();
    levels.push_back(std::move(level));
    level = std::move(next);
  }
  if (!level.sets.empty()) levels.push_back(std::move(level));

  std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    return compare(a.stats, a.level + 1, b.stats, b.level + 1) < 0;
  });
  if (candidates.size() > params.max_rules) candidates.resize(params.max_rules);

  RuleList rules;
  rules.reserve(candidates.size());
  for (const auto& c : candidates) {
    Rule r{.consequent = c.cls, .stats = c.stats};
    for (auto item : levels[c.level].sets[c.index]) {
      r.antecedent.push_back({items[item].attribute, NominalSet{{items[item].code}}});
    }
    rules.push_back(std::move(r));
  }
  return rules;
}

}  // namespace qrule
