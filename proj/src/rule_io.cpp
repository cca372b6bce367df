#include "qrule/rule_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace qrule {

namespace {

constexpr const char* kFormat = "qrule-rules/1";

std::string label_text(const AttributeSchema& attr, int code) {
  if (code == kMissingCode) return "?";
  return attr.labels.at(static_cast<std::size_t>(code));
}

int label_code(const AttributeSchema& attr, const std::string& label) {
  if (label == "?") return kMissingCode;
  if (auto c = attr.code_of(label)) return *c;
  throw DataError("attribute '" + attr.name + "' has no value '" + label + "'");
}

std::string interval_text(const Interval& iv) {
  std::string s = iv.lo_open ? "(" : "[";
  s += format_number(iv.lo) + ";" + format_number(iv.hi);
  s += iv.hi_open ? ")" : "]";
  return s;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double parse_bound(const std::string& s) {
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("bad interval bound '" + s + "'");
  }
  return v;
}

Interval parse_interval(const std::string& s) {
  if (s.size() < 5 || (s.front() != '(' && s.front() != '[') ||
      (s.back() != ')' && s.back() != ']')) {
    throw DataError("bad interval '" + s + "'");
  }
  const auto semi = s.find(';');
  if (semi == std::string::npos) throw DataError("bad interval '" + s + "'");
  Interval iv;
  iv.lo_open = s.front() == '(';
  iv.hi_open = s.back() == ')';
  iv.lo = parse_bound(trim(std::string_view(s).substr(1, semi - 1)));
  iv.hi = parse_bound(trim(std::string_view(s).substr(semi + 1, s.size() - semi - 2)));
  if (iv.lo > iv.hi) throw DataError("empty interval '" + s + "'");
  return iv;
}

NominalSet make_set(std::vector<int> codes) {
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  if (codes.empty()) throw DataError("empty nominal value set");
  return NominalSet{std::move(codes)};
}

// Bin labels of one attribute converted to the interval their union spans.
Interval bins_to_interval(const AttributeBins& bins, const std::vector<std::string>& labels) {
  std::vector<std::size_t> idx;
  for (const auto& l : labels) {
    std::size_t b = 0;
    while (b < bins.bin_count() && bins.label(b) != l) ++b;
    if (b == bins.bin_count()) {
      throw DataError("'" + l + "' is not a bin of attribute '" + bins.name + "'");
    }
    idx.push_back(b);
  }
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] != idx[i - 1] + 1) {
      throw DataError("bins of '" + bins.name + "' in one literal are not contiguous");
    }
  }
  Interval iv = bins.interval(idx.front());
  const Interval last = bins.interval(idx.back());
  iv.hi = last.hi;
  iv.hi_open = last.hi_open;
  return iv;
}

void check_unique_attributes(const Rule& r, const Dataset& schema) {
  for (std::size_t i = 0; i < r.antecedent.size(); ++i) {
    for (std::size_t j = i + 1; j < r.antecedent.size(); ++j) {
      if (r.antecedent[i].attribute == r.antecedent[j].attribute) {
        throw DataError("two literals on attribute '" +
                        schema.attribute(r.antecedent[i].attribute).name + "'");
      }
    }
  }
}

nlohmann::json bound_json(double v) {
  return std::isinf(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

double bound_from_json(const nlohmann::json& j, double infinity) {
  return j.is_null() ? infinity : j.get<double>();
}

}  // namespace

std::string to_text(const Literal& literal, const Dataset& schema) {
  const auto& attr = schema.attribute(literal.attribute);
  if (literal.is_interval()) return attr.name + "=" + interval_text(literal.interval());
  const auto& codes = literal.set().codes;
  if (codes.size() == 1) return attr.name + "=" + label_text(attr, codes.front());
  std::string s = attr.name + "={";
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i) s += ",";
    s += label_text(attr, codes[i]);
  }
  return s + "}";
}

std::string to_text(const Rule& rule, const Dataset& schema) {
  std::string s;
  if (rule.antecedent.empty()) s = "{}";
  for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
    if (i) s += " and ";
    s += to_text(rule.antecedent[i], schema);
  }
  const auto& cls = schema.class_attribute();
  return s + " => " + cls.name + "=" + label_text(cls, rule.consequent);
}

Rule parse_rule(std::string_view text, const Dataset& schema) {
  std::string_view arrow = "=>";
  auto pos = text.find(arrow);
  if (pos == std::string_view::npos) {
    arrow = "\xE2\x86\x92";  // U+2192
    pos = text.find(arrow);
  }
  if (pos == std::string_view::npos) throw DataError("rule text has no '=>'");

  Rule rule;
  const auto rhs = trim(text.substr(pos + arrow.size()));
  const auto& cls = schema.class_attribute();
  const auto eq = rhs.find('=');
  if (eq == std::string::npos || trim(rhs.substr(0, eq)) != cls.name) {
    throw DataError("rule consequent must be '" + cls.name + "=<value>'");
  }
  rule.consequent = label_code(cls, trim(rhs.substr(eq + 1)));
  if (rule.consequent == kMissingCode) throw DataError("consequent cannot be missing");

  std::string lhs = trim(text.substr(0, pos));
  if (lhs == "{}") lhs.clear();
  std::size_t start = 0;
  while (start < lhs.size()) {
    auto next = lhs.find(" and ", start);
    const auto part = trim(std::string_view(lhs).substr(
        start, next == std::string::npos ? std::string::npos : next - start));
    start = next == std::string::npos ? lhs.size() : next + 5;

    const auto leq = part.find('=');
    if (leq == std::string::npos) throw DataError("literal '" + part + "' has no '='");
    Literal lit{.attribute = schema.attribute_index(trim(part.substr(0, leq)))};
    const auto value = trim(part.substr(leq + 1));
    const auto& attr = schema.attribute(lit.attribute);
    if (attr.quantitative()) {
      lit.range = parse_interval(value);
    } else if (value.size() >= 2 && value.front() == '{' && value.back() == '}') {
      std::vector<int> codes;
      for (const auto& f : split_csv_record(value.substr(1, value.size() - 2))) {
        codes.push_back(label_code(attr, trim(f)));
      }
      lit.range = make_set(std::move(codes));
    } else {
      lit.range = NominalSet{{label_code(attr, value)}};
    }
    rule.antecedent.push_back(std::move(lit));
  }
  check_unique_attributes(rule, schema);
  return rule;
}

nlohmann::json to_json(const RuleList& rules, const Dataset& schema,
                       const DiscretizationMap* map) {
  nlohmann::json doc;
  doc["format"] = kFormat;
  doc["class_attribute"] = schema.class_attribute().name;
  if (map) doc["discretization"] = map->to_json();
  auto arr = nlohmann::json::array();
  for (const auto& r : rules) {
    auto ante = nlohmann::json::array();
    for (const auto& l : r.antecedent) {
      const auto& attr = schema.attribute(l.attribute);
      if (l.is_interval()) {
        const auto& iv = l.interval();
        ante.push_back({{"attribute", attr.name},
                        {"kind", "interval"},
                        {"lo", bound_json(iv.lo)},
                        {"hi", bound_json(iv.hi)},
                        {"lo_open", iv.lo_open},
                        {"hi_open", iv.hi_open}});
      } else {
        auto values = nlohmann::json::array();
        for (int c : l.set().codes) values.push_back(label_text(attr, c));
        ante.push_back({{"attribute", attr.name}, {"kind", "set"}, {"values", values}});
      }
    }
    arr.push_back({{"antecedent", ante},
                   {"consequent", label_text(schema.class_attribute(), r.consequent)},
                   {"covered", r.stats.covered},
                   {"abs_support", r.stats.correct},
                   {"total", r.stats.total},
                   {"confidence", r.stats.confidence()},
                   {"support", r.stats.support()}});
  }
  doc["rules"] = std::move(arr);
  return doc;
}

std::optional<DiscretizationMap> map_from_json(const nlohmann::json& doc) {
  if (!doc.contains("discretization")) return std::nullopt;
  return DiscretizationMap::from_json(doc.at("discretization"));
}

RuleList rules_from_json(const nlohmann::json& doc, const Dataset& schema) {
  const auto map = map_from_json(doc);
  RuleList rules;
  try {
    if (doc.value("format", std::string{}) != kFormat) {
      throw DataError("not a rule-list document (format must be '" + std::string(kFormat) + "')");
    }
    const auto cls_name = doc.at("class_attribute").get<std::string>();
    if (cls_name != schema.class_attribute().name) {
      throw DataError("rules predict '" + cls_name + "' but the data's class is '" +
                      schema.class_attribute().name + "'");
    }
    for (const auto& jr : doc.at("rules")) {
      Rule r;
      for (const auto& jl : jr.at("antecedent")) {
        const auto name = jl.at("attribute").get<std::string>();
        const auto idx = schema.find_attribute(name);
        if (!idx) throw DataError("rule references unknown attribute '" + name + "'");
        const auto& attr = schema.attribute(*idx);
        const auto kind = jl.at("kind").get<std::string>();
        Literal lit{.attribute = *idx};
        if (kind == "interval") {
          if (!attr.quantitative()) {
            throw DataError("interval literal on nominal attribute '" + name + "'");
          }
          lit.range = Interval{bound_from_json(jl.at("lo"), -std::numeric_limits<double>::infinity()),
                               bound_from_json(jl.at("hi"), std::numeric_limits<double>::infinity()),
                               jl.value("lo_open", false), jl.value("hi_open", false)};
        } else if (kind == "set") {
          const auto values = jl.at("values").get<std::vector<std::string>>();
          if (values.empty()) throw DataError("empty value set on '" + name + "'");
          if (attr.quantitative()) {
            const AttributeBins* bins = map ? map->find(name) : nullptr;
            if (!bins) {
              throw DataError("set literal on quantitative attribute '" + name +
                              "' without a discretization map");
            }
            lit.range = bins_to_interval(*bins, values);
          } else {
            std::vector<int> codes;
            for (const auto& v : values) codes.push_back(label_code(attr, v));
            lit.range = make_set(std::move(codes));
          }
        } else {
          throw DataError("unknown literal kind '" + kind + "'");
        }
        r.antecedent.push_back(std::move(lit));
      }
      check_unique_attributes(r, schema);
      r.consequent = label_code(schema.class_attribute(), jr.at("consequent").get<std::string>());
      if (r.consequent == kMissingCode) throw DataError("consequent cannot be missing");
      r.stats.covered = jr.value("covered", std::size_t{0});
      r.stats.correct = jr.value("abs_support", std::size_t{0});
      r.stats.total = jr.value("total", std::size_t{0});
      rules.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed rule document: ") + e.what());
  }
  return rules;
}

nlohmann::json schema_to_json(const Dataset& ds) {
  auto attrs = nlohmann::json::array();
  for (const auto& a : ds.attributes()) {
    nlohmann::json ja{{"name", a.name}, {"kind", to_string(a.kind)}};
    if (!a.quantitative()) ja["labels"] = a.labels;
    attrs.push_back(std::move(ja));
  }
  return {{"attributes", attrs},
          {"class", {{"name", ds.class_attribute().name}, {"labels", ds.class_attribute().labels}}}};
}

Dataset schema_from_json(const nlohmann::json& j) {
  try {
    std::vector<AttributeSchema> attrs;
    std::vector<std::vector<double>> cols;
    for (const auto& ja : j.at("attributes")) {
      AttributeSchema a{.name = ja.at("name").get<std::string>()};
      const auto kind = ja.at("kind").get<std::string>();
      if (kind == to_string(AttributeKind::Quantitative)) {
        a.kind = AttributeKind::Quantitative;
      } else if (kind == to_string(AttributeKind::Nominal)) {
        a.labels = ja.at("labels").get<std::vector<std::string>>();
      } else {
        throw DataError("unknown attribute kind '" + kind + "'");
      }
      attrs.push_back(std::move(a));
      cols.emplace_back();
    }
    AttributeSchema cls{.name = j.at("class").at("name").get<std::string>(),
                        .labels = j.at("class").at("labels").get<std::vector<std::string>>()};
    return Dataset(std::move(attrs), std::move(cls), std::move(cols), {});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed schema: ") + e.what());
  }
}

}  // namespace qrule
