#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

namespace testkit {

using qrule::AttributeKind;
using qrule::AttributeSchema;
using qrule::Interval;
using qrule::kMissingCode;
using qrule::Literal;
using qrule::NominalSet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AttributeSchema class_schema(std::size_t class_count) {
  AttributeSchema cls{.name = "class"};
  for (std::size_t c = 0; c < class_count; ++c) cls.labels.push_back("c" + std::to_string(c));
  return cls;
}

std::vector<double> sorted_unique(std::span<const double> column) {
  std::vector<double> v;
  for (double x : column) {
    if (!std::isnan(x)) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool literal_holds(const Dataset& ds, std::size_t row, const Literal& lit) {
  const double v = ds.value(row, lit.attribute);
  if (const auto* iv = std::get_if<Interval>(&lit.range)) {
    if (std::isnan(v)) return false;
    const bool above = iv->lo_open ? v > iv->lo : v >= iv->lo;
    const bool below = iv->hi_open ? v < iv->hi : v <= iv->hi;
    return above && below;
  }
  const auto& codes = std::get<NominalSet>(lit.range).codes;
  return std::find(codes.begin(), codes.end(), static_cast<int>(v)) != codes.end();
}

// Confidence as a fraction; nothing covered counts as 0/1.
std::pair<std::size_t, std::size_t> conf_fraction(const RuleStats& s) {
  return s.covered == 0 ? std::pair<std::size_t, std::size_t>{0, 1} : std::pair{s.correct, s.covered};
}

// Strict "ranks above" by confidence, support, then length.
bool ranks_above(const RuleStats& a, std::size_t la, const RuleStats& b, std::size_t lb) {
  const auto [an, ad] = conf_fraction(a);
  const auto [bn, bd] = conf_fraction(b);
  if (an * bd != bn * ad) return an * bd > bn * ad;
  if (a.correct != b.correct) return a.correct > b.correct;
  return la < lb;
}

int most_frequent(const std::vector<std::size_t>& counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

}  // namespace

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Dataset quantitative_dataset(std::vector<std::vector<double>> columns, std::vector<int> classes,
                             std::size_t class_count) {
  std::vector<AttributeSchema> attrs;
  for (std::size_t a = 0; a < columns.size(); ++a) {
    attrs.push_back({.name = "q" + std::to_string(a),
                     .kind = AttributeKind::Quantitative,
                     .numeric_domain = sorted_unique(columns[a])});
  }
  return Dataset(std::move(attrs), class_schema(class_count), std::move(columns), std::move(classes));
}

Dataset nominal_dataset(std::vector<std::vector<double>> codes, std::vector<int> classes,
                        std::size_t levels, std::size_t class_count) {
  std::vector<AttributeSchema> attrs;
  for (std::size_t a = 0; a < codes.size(); ++a) {
    AttributeSchema s{.name = "n" + std::to_string(a)};
    for (std::size_t v = 0; v < levels; ++v) s.labels.push_back("v" + std::to_string(v));
    attrs.push_back(std::move(s));
  }
  return Dataset(std::move(attrs), class_schema(class_count), std::move(codes), std::move(classes));
}

Dataset random_dataset(Rng& rng, const Shape& shape) {
  const std::size_t width = shape.quantitative + shape.nominal;
  std::vector<std::vector<double>> cols(width, std::vector<double>(shape.rows));
  std::vector<int> classes(shape.rows);
  // A few columns get half steps so the value grid is not always regular.
  std::vector<char> halves(width);
  for (auto& h : halves) h = coin(rng, 0.3);

  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t a = 0; a < width; ++a) {
      const bool quant = a < shape.quantitative;
      if (coin(rng, shape.missing_rate)) {
        cols[a][r] = quant ? std::nan("") : kMissingCode;
        continue;
      }
      double v = static_cast<double>(uniform(rng, 0, shape.levels - 1));
      if (quant && halves[a] && coin(rng, 0.5)) v += 0.5;
      cols[a][r] = v;
    }
    const double lead = std::isnan(cols[0][r]) || cols[0][r] < 0 ? 0.0 : cols[0][r];
    const auto signal = static_cast<std::size_t>(lead) * shape.classes / shape.levels;
    classes[r] = static_cast<int>(coin(rng, 0.35) ? uniform(rng, 0, shape.classes - 1) : signal % shape.classes);
  }

  std::vector<AttributeSchema> attrs;
  for (std::size_t a = 0; a < width; ++a) {
    if (a < shape.quantitative) {
      attrs.push_back({.name = "q" + std::to_string(a),
                       .kind = AttributeKind::Quantitative,
                       .numeric_domain = sorted_unique(cols[a])});
    } else {
      AttributeSchema s{.name = "n" + std::to_string(a)};
      for (std::size_t v = 0; v < shape.levels; ++v) s.labels.push_back("v" + std::to_string(v));
      attrs.push_back(std::move(s));
    }
  }
  return Dataset(std::move(attrs), class_schema(shape.classes), std::move(cols), std::move(classes));
}

Shape random_shape(Rng& rng, std::size_t max_attributes, std::size_t max_rows) {
  Shape s;
  s.rows = uniform(rng, std::min<std::size_t>(10, max_rows), max_rows);
  const std::size_t width = uniform(rng, 1, max_attributes);
  s.quantitative = uniform(rng, 0, width);
  s.nominal = width - s.quantitative;
  s.classes = uniform(rng, 2, 4);
  s.levels = uniform(rng, 2, 8);
  s.missing_rate = coin(rng, 0.3) ? 0.1 : 0.0;
  return s;
}

Rule random_rule(Rng& rng, const Dataset& ds, std::size_t max_length) {
  std::vector<std::size_t> order(ds.attribute_count());
  for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t length = uniform(rng, 0, std::min(max_length, order.size()));
  order.resize(length);
  std::sort(order.begin(), order.end());

  Rule rule{.consequent = static_cast<int>(uniform(rng, 0, ds.class_count() - 1))};
  for (auto a : order) {
    const auto& attr = ds.attribute(a);
    if (attr.quantitative()) {
      const auto& dom = attr.numeric_domain;
      auto pick = [&]() -> double {
        if (dom.empty()) return static_cast<double>(uniform(rng, 0, 5));
        const double v = dom[uniform(rng, 0, dom.size() - 1)];
        switch (uniform(rng, 0, 5)) {
          case 0: return v - 0.25;
          case 1: return v + 0.25;
          default: return v;
        }
      };
      double lo = pick();
      double hi = pick();
      if (lo > hi) std::swap(lo, hi);
      Interval iv{lo, hi, coin(rng, 0.3), coin(rng, 0.3)};
      if (coin(rng, 0.1)) iv.lo = -kInf, iv.lo_open = true;
      if (coin(rng, 0.1)) iv.hi = kInf, iv.hi_open = true;
      if (iv.lo == iv.hi) iv.lo_open = iv.hi_open = false;
      rule.antecedent.push_back({a, iv});
    } else {
      std::vector<int> codes;
      for (int c = 0; c < static_cast<int>(attr.labels.size()); ++c) {
        if (coin(rng, 0.4)) codes.push_back(c);
      }
      if (coin(rng, 0.1)) codes.insert(codes.begin(), kMissingCode);
      if (codes.empty()) codes.push_back(static_cast<int>(uniform(rng, 0, attr.labels.size() - 1)));
      rule.antecedent.push_back({a, NominalSet{codes}});
    }
  }
  rule.stats = oracle_stats(rule, ds);
  return rule;
}

RuleList random_rules(Rng& rng, const Dataset& ds, std::size_t count, std::size_t max_length) {
  RuleList out;
  for (std::size_t attempt = 0; out.size() < count && attempt < count * 20; ++attempt) {
    Rule r = random_rule(rng, ds, max_length);
    if (r.is_default()) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Rule& o) {
      return o.antecedent == r.antecedent && o.consequent == r.consequent;
    });
    if (!seen) out.push_back(std::move(r));
  }
  return out;
}

RuleList with_default(RuleList rules, int cls, const Dataset& ds) {
  Rule d{.consequent = cls};
  d.stats = oracle_stats(d, ds);
  rules.push_back(std::move(d));
  return rules;
}

bool oracle_satisfies(const Dataset& ds, std::size_t row, const Rule& rule) {
  for (const auto& lit : rule.antecedent) {
    if (!literal_holds(ds, row, lit)) return false;
  }
  return true;
}

RuleStats oracle_stats(const Rule& rule, const Dataset& ds) {
  RuleStats s{.total = ds.size()};
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (!oracle_satisfies(ds, r, rule)) continue;
    ++s.covered;
    if (ds.label(r) == rule.consequent) ++s.correct;
  }
  return s;
}

std::vector<std::size_t> oracle_covered(const Rule& rule, const Dataset& ds) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (oracle_satisfies(ds, r, rule)) rows.push_back(r);
  }
  return rows;
}

int oracle_classify(const RuleList& rules, const Dataset& ds, std::size_t row) {
  for (const auto& r : rules) {
    if (oracle_satisfies(ds, row, r)) return r.consequent;
  }
  return kMissingCode;
}

std::size_t oracle_hits(const RuleList& rules, const Dataset& ds) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ds.size(); ++r) hits += oracle_classify(rules, ds, r) == ds.label(r);
  return hits;
}

bool confidence_geq(const RuleStats& a, const RuleStats& b) {
  const auto [an, ad] = conf_fraction(a);
  const auto [bn, bd] = conf_fraction(b);
  return an * bd >= bn * ad;
}

RuleList exhaustive_car_rules(const Dataset& ds, const qrule::MinerParams& params) {
  const std::size_t width = ds.attribute_count();
  const std::size_t n = ds.size();

  struct Found {
    std::vector<std::pair<std::size_t, int>> items;
    int cls;
    RuleStats stats;
  };
  std::vector<Found> found;

  std::vector<std::pair<std::size_t, int>> current;
  // Depth-first over attributes, choosing for each either nothing or one value.
  auto visit = [&](auto&& self, std::size_t attr) -> void {
    if (attr == width) {
      if (current.empty() || current.size() > params.max_length) return;
      std::vector<std::size_t> per_class(ds.class_count());
      std::size_t covered = 0;
      for (std::size_t r = 0; r < n; ++r) {
        bool match = true;
        for (const auto& [a, code] : current) {
          if (static_cast<int>(ds.value(r, a)) != code) {
            match = false;
            break;
          }
        }
        if (!match) continue;
        ++covered;
        ++per_class[static_cast<std::size_t>(ds.label(r))];
      }
      for (std::size_t c = 0; c < per_class.size(); ++c) {
        const double supp = static_cast<double>(per_class[c]) / static_cast<double>(n);
        const double conf = covered == 0 ? 0.0 : static_cast<double>(per_class[c]) / static_cast<double>(covered);
        if (per_class[c] == 0 || supp < params.min_support || conf < params.min_confidence) continue;
        found.push_back({current, static_cast<int>(c), {covered, per_class[c], n}});
      }
      return;
    }
    self(self, attr + 1);
    const auto& schema = ds.attribute(attr);
    const int first = schema.missing_is_item ? kMissingCode : 0;
    for (int code = first; code < static_cast<int>(schema.labels.size()); ++code) {
      current.emplace_back(attr, code);
      self(self, attr + 1);
      current.pop_back();
    }
  };
  visit(visit, 0);

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    return std::make_tuple(a.items.size(), a.items, a.cls) < std::make_tuple(b.items.size(), b.items, b.cls);
  });
  std::stable_sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    return ranks_above(a.stats, a.items.size(), b.stats, b.items.size());
  });
  if (found.size() > params.max_rules) found.resize(params.max_rules);

  RuleList out;
  for (const auto& f : found) {
    Rule r{.consequent = f.cls, .stats = f.stats};
    for (const auto& [a, code] : f.items) r.antecedent.push_back({a, NominalSet{{code}}});
    out.push_back(std::move(r));
  }
  return out;
}

RuleList transcribed_post_prune(RuleList rules, const Dataset& train, bool keep_all) {
  std::vector<char> in_t(train.size(), 1);  // T
  auto class_counts_in_t = [&] {
    std::vector<std::size_t> counts(train.class_count());
    for (std::size_t r = 0; r < train.size(); ++r) {
      if (in_t[r]) ++counts[static_cast<std::size_t>(train.label(r))];
    }
    return counts;
  };
  auto size_of_t = [&] { return static_cast<std::size_t>(std::count(in_t.begin(), in_t.end(), 1)); };
  const int global = most_frequent(class_counts_in_t());
  auto most_frequent_in_t = [&] { return size_of_t() == 0 ? global : most_frequent(class_counts_in_t()); };

  // cutoffRule as a position in the kept list; 0 is the empty cutoff.
  std::size_t cutoff_rule = 0;
  int cutoff_class = global;
  int def_class = global;
  std::size_t lowest_total_error = train.size() - class_counts_in_t()[static_cast<std::size_t>(cutoff_class)];
  std::size_t total_errors_without_default = 0;

  for (auto& r : rules) r.stats = oracle_stats(r, train);
  std::stable_sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    return ranks_above(a.stats, a.length(), b.stats, b.length());
  });

  RuleList kept;
  for (const auto& r : rules) {
    std::vector<std::size_t> covered;
    std::size_t corr_covered = 0;
    for (std::size_t t = 0; t < train.size(); ++t) {
      if (!in_t[t] || !oracle_satisfies(train, t, r)) continue;
      covered.push_back(t);
      corr_covered += train.label(t) == r.consequent;
    }
    if (corr_covered == 0) continue;  // r removed, T untouched
    for (auto t : covered) in_t[t] = 0;
    kept.push_back(r);
    const std::size_t misclassified = covered.size() - corr_covered;
    def_class = most_frequent_in_t();
    total_errors_without_default += misclassified;
    const std::size_t default_rule_error = size_of_t() - class_counts_in_t()[static_cast<std::size_t>(def_class)];
    const std::size_t total_error_with_default = default_rule_error + total_errors_without_default;
    if (total_error_with_default < lowest_total_error) {
      cutoff_rule = kept.size();
      lowest_total_error = total_error_with_default;
      cutoff_class = def_class;
    }
  }

  if (keep_all) {
    cutoff_class = def_class;
  } else {
    kept.resize(cutoff_rule);
  }
  if (kept.empty() || !kept.back().is_default()) kept.push_back(with_default({}, cutoff_class, train).back());
  for (auto& r : kept) r.stats = oracle_stats(r, train);
  return kept;
}

Dataset instance_grid(const Dataset& ds, const RuleList& rules) {
  std::vector<std::vector<double>> axes(ds.attribute_count());
  for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
    const auto& attr = ds.attribute(a);
    auto& axis = axes[a];
    if (!attr.quantitative()) {
      for (int c = 0; c < static_cast<int>(attr.labels.size()); ++c) axis.push_back(c);
      axis.push_back(kMissingCode);
      continue;
    }
    std::vector<double> marks = attr.numeric_domain;
    for (const auto& r : rules) {
      for (const auto& lit : r.antecedent) {
        if (lit.attribute != a || !lit.is_interval()) continue;
        for (double b : {lit.interval().lo, lit.interval().hi}) {
          if (std::isfinite(b)) marks.push_back(b);
        }
      }
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    if (marks.empty()) marks.push_back(0.0);
    axis.push_back(marks.front() - 1.0);
    for (std::size_t i = 0; i < marks.size(); ++i) {
      axis.push_back(marks[i]);
      if (i + 1 < marks.size()) axis.push_back((marks[i] + marks[i + 1]) / 2.0);
    }
    axis.push_back(marks.back() + 1.0);
    axis.push_back(std::nan(""));
  }

  std::size_t rows = 1;
  for (const auto& axis : axes) rows *= axis.size();
  std::vector<std::vector<double>> cols(axes.size(), std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t rest = r;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      cols[a][r] = axes[a][rest % axes[a].size()];
      rest /= axes[a].size();
    }
  }
  return Dataset(ds.attributes(), ds.class_attribute(), std::move(cols), std::vector<int>(rows, 0));
}

std::string data_dir() { return std::string(QRULE_SOURCE_DIR) + "/data"; }
std::string fixture_dir() { return std::string(QRULE_SOURCE_DIR) + "/tests/data"; }

}  // namespace testkit
