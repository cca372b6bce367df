#include "qrule/qcba.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include <boost/dynamic_bitset.hpp>

#include "qrule/cba.hpp"
#include "qrule/parallel.hpp"

namespace qrule {

namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;

// conf(a) >= conf(b) on the counts, without rounding.
bool confidence_at_least(const RuleStats& a, const RuleStats& b) {
  if (b.covered == 0) return true;
  if (a.covered == 0) return b.correct == 0;
  return a.correct * b.covered >= b.correct * a.covered;
}

// Index of the first grid value inside the interval and one past the last.
std::pair<std::size_t, std::size_t> grid_span(const std::vector<double>& g, const Interval& iv) {
  const auto first = iv.lo_open ? std::upper_bound(g.begin(), g.end(), iv.lo)
                                : std::lower_bound(g.begin(), g.end(), iv.lo);
  const auto last = iv.hi_open ? std::lower_bound(g.begin(), g.end(), iv.hi)
                               : std::upper_bound(g.begin(), g.end(), iv.hi);
  return {static_cast<std::size_t>(first - g.begin()),
          static_cast<std::size_t>(std::max(first, last) - g.begin())};
}

Bits cover_bits(const Rule& rule, const Dataset& ds) {
  Bits b(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (satisfies(ds, r, rule)) b.set(r);
  }
  return b;
}

bool ranges_intersect(const Literal& a, const Literal& b) {
  if (a.is_interval() && b.is_interval()) return a.interval().intersects(b.interval());
  if (!a.is_interval() && !b.is_interval()) return a.set().intersects(b.set());
  return true;
}

// Incremental search state for extending one rule. For every row it keeps the
// number of antecedent literals the row fails; rows failing exactly one
// interval literal are tallied by that literal's grid position, so widening a
// literal by any number of steps is priced without rescanning the data.
class Extender {
 public:
  enum class Direction { Down, Up };

  struct Candidate {
    std::size_t literal;
    Direction dir;
    std::size_t position;  // grid index the bound moves to
    RuleStats stats;
  };

  Extender(Rule rule, const Dataset& raw, const FinerGrid& grid)
      : rule_(std::move(rule)), raw_(raw), grid_(grid) {
    const std::size_t m = rule_.antecedent.size();
    rows_at_.resize(m);
    single_.resize(m);
    span_.resize(m);
    position_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const auto& lit = rule_.antecedent[k];
      if (!lit.is_interval()) continue;
      const auto& g = grid_.values(lit.attribute);
      span_[k] = grid_span(g, lit.interval());
      rows_at_[k].resize(g.size());
      single_[k].resize(g.size());
      position_[k].assign(raw_.size(), kNoPosition);
      for (std::size_t r = 0; r < raw_.size(); ++r) {
        const double v = raw_.value(r, lit.attribute);
        const auto it = std::lower_bound(g.begin(), g.end(), v);
        if (it == g.end() || *it != v) continue;
        position_[k][r] = static_cast<std::size_t>(it - g.begin());
        rows_at_[k][position_[k][r]].push_back(r);
      }
    }
    failed_.assign(raw_.size(), 0);
    rule_.stats = RuleStats{.total = raw_.size()};
    for (std::size_t r = 0; r < raw_.size(); ++r) {
      for (const auto& lit : rule_.antecedent) {
        if (!satisfies(raw_, r, lit)) ++failed_[r];
      }
      if (failed_[r] == 0) {
        ++rule_.stats.covered;
        if (hit(r)) ++rule_.stats.correct;
      } else if (failed_[r] == 1) {
        tally_single(r);
      }
    }
  }

  const Rule& rule() const { return rule_; }

  // Direct extensions in generation order: literals in antecedent order,
  // lower side before upper side.
  std::vector<Candidate> candidates() const {
    std::vector<Candidate> out;
    for (std::size_t k = 0; k < rule_.antecedent.size(); ++k) {
      if (!rule_.antecedent[k].is_interval()) continue;
      if (auto c = step({k, Direction::Down, span_[k].first, rule_.stats})) out.push_back(*c);
      if (auto c = step({k, Direction::Up, span_[k].second - 1, rule_.stats})) out.push_back(*c);
    }
    return out;
  }

  // The same literal and direction widened one more grid step.
  std::optional<Candidate> step(const Candidate& c) const {
    const auto& counts = single_[c.literal];
    std::size_t next;
    if (c.dir == Direction::Down) {
      if (c.position == 0) return std::nullopt;
      next = c.position - 1;
    } else {
      next = c.position + 1;
      if (next >= counts.size()) return std::nullopt;
    }
    Candidate out = c;
    out.position = next;
    out.stats.covered += counts[next].covered;
    out.stats.correct += counts[next].correct;
    return out;
  }

  void accept(const Candidate& c) {
    auto& [first, last] = span_[c.literal];
    std::size_t from, to;
    if (c.dir == Direction::Down) {
      from = c.position;
      to = first;
      first = c.position;
    } else {
      from = last;
      to = c.position + 1;
      last = c.position + 1;
    }
    auto& iv = rule_.antecedent[c.literal].interval();
    const auto& g = grid_.values(rule_.antecedent[c.literal].attribute);
    if (c.dir == Direction::Down) {
      iv.lo = g[c.position];
      iv.lo_open = false;
    } else {
      iv.hi = g[c.position];
      iv.hi_open = false;
    }
    for (std::size_t p = from; p < to; ++p) {
      for (auto r : rows_at_[c.literal][p]) {
        if (--failed_[r] == 1) tally_single(r);
      }
    }
    rule_.stats = c.stats;
  }

 private:
  struct Counts {
    std::size_t covered = 0;
    std::size_t correct = 0;
  };
  static constexpr std::size_t kNoPosition = static_cast<std::size_t>(-1);

  bool hit(std::size_t row) const { return raw_.label(row) == rule_.consequent; }

  void tally_single(std::size_t row) {
    for (std::size_t k = 0; k < rule_.antecedent.size(); ++k) {
      if (satisfies(raw_, row, rule_.antecedent[k])) continue;
      if (rule_.antecedent[k].is_interval() && position_[k][row] != kNoPosition) {
        auto& c = single_[k][position_[k][row]];
        ++c.covered;
        if (hit(row)) ++c.correct;
      }
      return;
    }
  }

  Rule rule_;
  const Dataset& raw_;
  const FinerGrid& grid_;
  std::vector<std::uint32_t> failed_;
  std::vector<std::vector<std::vector<std::size_t>>> rows_at_;
  std::vector<std::vector<std::size_t>> position_;
  std::vector<std::vector<Counts>> single_;
  std::vector<std::pair<std::size_t, std::size_t>> span_;
};

}  // namespace

const char* to_string(DropMode mode) {
  switch (mode) {
    case DropMode::None: return "none";
    case DropMode::Transaction: return "transaction";
    case DropMode::Range: return "range";
  }
  return "none";
}

DropMode parse_drop_mode(const std::string& text) {
  if (text == "none") return DropMode::None;
  if (text == "transaction") return DropMode::Transaction;
  if (text == "range") return DropMode::Range;
  throw std::invalid_argument("drop mode must be none, transaction or range");
}

QcbaConfig QcbaConfig::preset(int number) {
  if (number < 1 || number > 7) throw std::invalid_argument("QCBA presets are numbered 1 to 7");
  QcbaConfig c;
  c.literal_pruning = number >= 2;
  c.trimming = number >= 3;
  c.extension = number >= 4;
  c.postpruning = number >= 5;
  c.drop = number == 6 ? DropMode::Transaction : number == 7 ? DropMode::Range : DropMode::None;
  return c;
}

void QcbaConfig::validate() const {
  if (!(min_improvement >= -1.0 && min_improvement <= 1.0)) {
    throw std::invalid_argument("min improvement must be in [-1, 1]");
  }
  if (!(min_cond_improvement >= -1.0 && min_cond_improvement <= 1.0)) {
    throw std::invalid_argument("min conditional improvement must be in [-1, 1]");
  }
}

FinerGrid::FinerGrid(const Dataset& raw) {
  for (const auto& attr : raw.attributes()) {
    values_.push_back(attr.quantitative() ? attr.numeric_domain : std::vector<double>{});
  }
}

std::optional<double> FinerGrid::step_down(std::size_t attribute, const Interval& iv) const {
  const auto& g = values(attribute);
  const auto first = grid_span(g, iv).first;
  if (first == 0) return std::nullopt;
  return g[first - 1];
}

std::optional<double> FinerGrid::step_up(std::size_t attribute, const Interval& iv) const {
  const auto& g = values(attribute);
  const auto last = grid_span(g, iv).second;
  if (last >= g.size()) return std::nullopt;
  return g[last];
}

Rule to_raw(const Rule& rule, const Dataset& raw, const DiscretizationMap& map) {
  Rule out = rule;
  for (auto& lit : out.antecedent) {
    if (lit.attribute >= raw.attribute_count()) {
      throw DataError("rule refers to attribute #" + std::to_string(lit.attribute) +
                      " but the data has " + std::to_string(raw.attribute_count()));
    }
    const auto& attr = raw.attribute(lit.attribute);
    if (!attr.quantitative()) {
      if (lit.is_interval()) throw DataError("interval literal on nominal attribute '" + attr.name + "'");
      continue;
    }
    if (lit.is_interval()) continue;
    const auto* bins = map.find(attr.name);
    if (!bins) throw DataError("no bins for quantitative attribute '" + attr.name + "'");
    const auto& codes = lit.set().codes;
    if (codes.empty() || codes.front() < 0 ||
        static_cast<std::size_t>(codes.back()) >= bins->bin_count() ||
        static_cast<std::size_t>(codes.back() - codes.front()) + 1 != codes.size()) {
      throw DataError("literal on '" + attr.name + "' is not a run of bins");
    }
    Interval iv = bins->interval(static_cast<std::size_t>(codes.front()));
    const Interval last = bins->interval(static_cast<std::size_t>(codes.back()));
    iv.hi = last.hi;
    iv.hi_open = last.hi_open;
    lit.range = iv;
  }
  return out;
}

Rule refit(Rule rule, const Dataset& raw) {
  for (auto& lit : rule.antecedent) {
    if (!lit.is_interval()) continue;
    const auto& g = raw.attribute(lit.attribute).numeric_domain;
    const auto [first, last] = grid_span(g, lit.interval());
    if (first < last) lit.range = Interval::closed(g[first], g[last - 1]);
  }
  refresh_stats(rule, raw);
  return rule;
}

Rule prune_literals(Rule rule, const Dataset& raw) {
  refresh_stats(rule, raw);
  bool removed = true;
  while (removed && !rule.antecedent.empty()) {
    removed = false;
    for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
      Rule shorter = rule;
      shorter.antecedent.erase(shorter.antecedent.begin() + static_cast<std::ptrdiff_t>(i));
      refresh_stats(shorter, raw);
      if (confidence_at_least(shorter.stats, rule.stats)) {
        rule = std::move(shorter);
        removed = true;
        break;
      }
    }
  }
  return rule;
}

Rule trim(Rule rule, const Dataset& raw) {
  const auto correct = coverage(rule, raw).correct;
  if (correct.empty()) {
    refresh_stats(rule, raw);
    return rule;
  }
  for (auto& lit : rule.antecedent) {
    if (!lit.is_interval()) continue;
    std::vector<double> seen;
    for (std::size_t r = 0; r < raw.size(); ++r) {
      if (satisfies(raw, r, lit)) seen.push_back(raw.value(r, lit.attribute));
    }
    std::sort(seen.begin(), seen.end());
    if (std::unique(seen.begin(), seen.end()) - seen.begin() <= 1) continue;
    double lo = raw.value(correct.front(), lit.attribute);
    double hi = lo;
    for (auto r : correct) {
      lo = std::min(lo, raw.value(r, lit.attribute));
      hi = std::max(hi, raw.value(r, lit.attribute));
    }
    lit.range = Interval::closed(lo, hi);
  }
  refresh_stats(rule, raw);
  return rule;
}

std::vector<Rule> get_extensions(const Rule& rule, const FinerGrid& grid) {
  std::vector<Rule> out;
  for (std::size_t k = 0; k < rule.antecedent.size(); ++k) {
    const auto& lit = rule.antecedent[k];
    if (!lit.is_interval()) continue;
    if (auto v = grid.step_down(lit.attribute, lit.interval())) {
      Rule r = rule;
      r.antecedent[k].interval().lo = *v;
      r.antecedent[k].interval().lo_open = false;
      out.push_back(std::move(r));
    }
    if (auto v = grid.step_up(lit.attribute, lit.interval())) {
      Rule r = rule;
      r.antecedent[k].interval().hi = *v;
      r.antecedent[k].interval().hi_open = false;
      out.push_back(std::move(r));
    }
  }
  return out;
}

Rule extend_rule(Rule rule, const Dataset& raw, const FinerGrid& grid, const QcbaConfig& config) {
  Extender ext(std::move(rule), raw, grid);
  const std::size_t length = ext.rule().length();
  auto crisp = [&](const RuleStats& cand, const RuleStats& best) {
    return cand.confidence() - best.confidence() >= config.min_improvement &&
           cand.support() - best.support() >= 0.0;
  };
  auto conditional = [&](const RuleStats& cand, const RuleStats& best) {
    return cand.confidence() - best.confidence() >= config.min_cond_improvement;
  };

  bool extended = true;
  while (extended) {
    extended = false;
    auto cands = ext.candidates();
    std::stable_sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
      return compare(a.stats, length, b.stats, length) < 0;
    });
    const RuleStats best = ext.rule().stats;
    for (const auto& cand : cands) {
      if (crisp(cand.stats, best)) {
        ext.accept(cand);
        extended = true;
        break;
      }
      if (!conditional(cand.stats, best)) continue;
      auto beam = ext.step(cand);
      while (beam) {
        if (crisp(beam->stats, best)) {
          ext.accept(*beam);
          extended = true;
          break;
        }
        if (!conditional(beam->stats, best)) break;
        beam = ext.step(*beam);
      }
      if (extended) break;
    }
  }
  return ext.rule();
}

RuleList drop_transaction(RuleList rules, const Dataset& train) {
  if (rules.size() < 2) return rules;
  const int def = rules.back().consequent;
  std::vector<Bits> covers;
  covers.reserve(rules.size());
  for (const auto& r : rules) covers.push_back(cover_bits(r, train));

  // A candidate only decides rows no kept rule above it claims; dropping it
  // hands them to the next matching rule, which must then predict the same.
  Bits claimed(train.size());
  std::vector<char> keep(rules.size(), 1);
  for (std::size_t i = 0; i + 1 < rules.size(); ++i) {
    if (rules[i].consequent == def) {
      const Bits fires = covers[i] - claimed;
      bool clash = false;
      for (std::size_t j = i + 1; j + 1 < rules.size() && !clash; ++j) {
        clash = rules[j].consequent != def && fires.intersects(covers[j]);
      }
      keep[i] = clash;
    }
    if (keep[i]) claimed |= covers[i];
  }

  RuleList out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (keep[i]) out.push_back(std::move(rules[i]));
  }
  return out;
}

RuleList drop_range(RuleList rules) {
  if (rules.size() < 2) return rules;
  const int def = rules.back().consequent;
  std::vector<char> keep(rules.size(), 1);
  for (std::size_t i = 0; i + 1 < rules.size(); ++i) {
    if (rules[i].consequent != def) continue;
    bool clash = false;
    for (std::size_t j = i + 1; j + 1 < rules.size() && !clash; ++j) {
      if (rules[j].consequent == def) continue;
      bool shared = false;
      bool disjoint = false;
      for (const auto& lit : rules[j].antecedent) {
        const Literal* mine = rules[i].literal_on(lit.attribute);
        if (!mine) continue;
        shared = true;
        if (!ranges_intersect(*mine, lit)) {
          disjoint = true;
          break;
        }
      }
      clash = !shared || !disjoint;
    }
    keep[i] = clash;
  }
  RuleList out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (keep[i]) out.push_back(std::move(rules[i]));
  }
  return out;
}

RuleList optimize(RuleList rules, const Dataset& raw, const DiscretizationMap& map,
                  const QcbaConfig& config, std::size_t jobs) {
  config.validate();
  if (raw.empty()) throw DataError("cannot tune rules on an empty training set");
  std::erase_if(rules, [](const Rule& r) { return r.is_default(); });
  for (auto& r : rules) {
    r = to_raw(r, raw, map);
    refresh_stats(r, raw);
  }
  sort_rules(rules);

  const FinerGrid grid(raw);
  parallel_for(rules.size(), jobs, [&](std::size_t i) {
    Rule r = std::move(rules[i]);
    if (config.refit) r = refit(std::move(r), raw);
    if (config.literal_pruning) r = prune_literals(std::move(r), raw);
    if (config.trimming) r = trim(std::move(r), raw);
    if (config.extension) r = extend_rule(std::move(r), raw, grid, config);
    refresh_stats(r, raw);
    rules[i] = std::move(r);
  });

  if (config.postpruning) {
    rules = post_prune(std::move(rules), raw);
  } else {
    rules.push_back(default_rule(*raw.majority_class(), raw));
  }
  switch (config.drop) {
    case DropMode::Transaction: return drop_transaction(std::move(rules), raw);
    case DropMode::Range: return drop_range(std::move(rules));
    case DropMode::None: break;
  }
  return rules;
}

}  // namespace qrule
