#include "qrule/rule.hpp"

#include <algorithm>

namespace qrule {

bool Interval::intersects(const Interval& o) const {
  // Empty when one range ends before the other starts; touching bounds
  // overlap only if both are closed.
  if (hi < o.lo || o.hi < lo) return false;
  if (hi == o.lo && (hi_open || o.lo_open)) return false;
  if (o.hi == lo && (o.hi_open || lo_open)) return false;
  if (lo == hi && (lo_open || hi_open)) return false;
  if (o.lo == o.hi && (o.lo_open || o.hi_open)) return false;
  return true;
}

bool NominalSet::contains(int code) const {
  return std::binary_search(codes.begin(), codes.end(), code);
}

bool NominalSet::intersects(const NominalSet& other) const {
  auto a = codes.begin();
  auto b = other.codes.begin();
  while (a != codes.end() && b != other.codes.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

const Literal* Rule::literal_on(std::size_t attribute) const {
  for (const auto& l : antecedent) {
    if (l.attribute == attribute) return &l;
  }
  return nullptr;
}

bool classifier_ready(const RuleList& rules) {
  return !rules.empty() && rules.back().is_default();
}

bool satisfies(const Dataset& ds, std::size_t row, const Literal& literal) {
  const double v = ds.value(row, literal.attribute);
  if (const auto* iv = std::get_if<Interval>(&literal.range)) {
    return ds.attribute(literal.attribute).quantitative() && iv->contains(v);
  }
  if (ds.attribute(literal.attribute).quantitative()) return false;
  return std::get<NominalSet>(literal.range).contains(static_cast<int>(v));
}

bool satisfies(const Dataset& ds, std::size_t row, const Rule& rule) {
  return std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                     [&](const Literal& l) { return satisfies(ds, row, l); });
}

Coverage coverage(const Rule& rule, const Dataset& ds) {
  Coverage c;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (!satisfies(ds, r, rule)) continue;
    c.covered.push_back(r);
    if (ds.label(r) == rule.consequent) c.correct.push_back(r);
  }
  return c;
}

RuleStats evaluate(const Rule& rule, const Dataset& ds) {
  RuleStats s{.total = ds.size()};
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (!satisfies(ds, r, rule)) continue;
    ++s.covered;
    if (ds.label(r) == rule.consequent) ++s.correct;
  }
  return s;
}

void refresh_stats(Rule& rule, const Dataset& ds) { rule.stats = evaluate(rule, ds); }

void refresh_stats(RuleList& rules, const Dataset& ds) {
  for (auto& r : rules) refresh_stats(r, ds);
}

double volume(const Rule& rule, const Dataset& ds) {
  double v = 1.0;
  for (const auto& lit : rule.antecedent) {
    const auto& attr = ds.attribute(lit.attribute);
    if (const auto* iv = std::get_if<Interval>(&lit.range)) {
      if (attr.numeric_domain.size() < 2) continue;
      const double amin = attr.numeric_domain.front();
      const double amax = attr.numeric_domain.back();
      const double lo = std::max(iv->lo, amin);
      const double hi = std::min(iv->hi, amax);
      v *= hi > lo ? (hi - lo) / (amax - amin) : 0.0;
    } else {
      const auto observed = distinct_values(ds, lit.attribute).size();
      if (observed == 0) continue;
      std::size_t in_domain = 0;
      for (int code : std::get<NominalSet>(lit.range).codes) {
        if (code != kMissingCode) ++in_domain;
      }
      v *= std::min(1.0, static_cast<double>(in_domain) / static_cast<double>(observed));
    }
  }
  return v;
}

std::optional<double> density(const Rule& rule, const Dataset& ds) {
  const double vol = volume(rule, ds);
  if (vol <= 0.0) return std::nullopt;
  return static_cast<double>(evaluate(rule, ds).correct) / vol;
}

std::weak_ordering compare(const RuleStats& a, std::size_t length_a, const RuleStats& b,
                           std::size_t length_b) {
  const double ca = a.confidence();
  const double cb = b.confidence();
  if (ca != cb) return ca > cb ? std::weak_ordering::less : std::weak_ordering::greater;
  const double sa = a.support();
  const double sb = b.support();
  if (sa != sb) return sa > sb ? std::weak_ordering::less : std::weak_ordering::greater;
  if (length_a != length_b) {
    return length_a < length_b ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  return std::weak_ordering::equivalent;
}

std::weak_ordering compare(const Rule& a, const Rule& b) {
  return compare(a.stats, a.length(), b.stats, b.length());
}

void sort_rules(RuleList& rules) {
  std::stable_sort(rules.begin(), rules.end(),
                   [](const Rule& a, const Rule& b) { return compare(a, b) < 0; });
}

std::size_t condition_count(const RuleList& rules) {
  std::size_t n = 0;
  for (const auto& r : rules) n += r.length();
  return n;
}

}  // namespace qrule
