#include "qrule/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace qrule {

namespace {

bool is_missing_text(const std::string& s) { return s.empty() || s == "?"; }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;  // row-major
};

RawTable read_table(std::istream& in) {
  RawTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv_record(line);
    for (auto& f : fields) f = trim(f);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw DataError("ragged row " + std::to_string(t.cells.size() + 2) + ": expected " +
                      std::to_string(t.header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    t.cells.push_back(std::move(fields));
  }
  if (t.header.empty()) throw DataError("missing header row");
  if (t.header.size() < 2) throw DataError("need at least one predictor and a class column");
  std::set<std::string> seen;
  for (const auto& h : t.header) {
    if (!seen.insert(h).second) throw DataError("duplicate column name '" + h + "'");
  }
  return t;
}

std::vector<double> sorted_domain(const std::vector<double>& column) {
  std::vector<double> dom;
  dom.reserve(column.size());
  for (double v : column) {
    if (!std::isnan(v)) dom.push_back(v);
  }
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  return dom;
}

int intern(AttributeSchema& attr, const std::string& label) {
  if (auto code = attr.code_of(label)) return *code;
  attr.labels.push_back(label);
  return static_cast<int>(attr.labels.size() - 1);
}

std::vector<int> encode_classes(const RawTable& t, std::size_t col, AttributeSchema& cls) {
  std::vector<int> classes;
  classes.reserve(t.cells.size());
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    const auto& v = t.cells[r][col];
    if (is_missing_text(v)) {
      throw DataError("class column '" + cls.name + "' has a missing value on row " +
                      std::to_string(r + 2));
    }
    classes.push_back(intern(cls, v));
  }
  return classes;
}

std::vector<double> encode_quantitative(const RawTable& t, std::size_t col) {
  std::vector<double> out;
  out.reserve(t.cells.size());
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    const auto& v = t.cells[r][col];
    if (is_missing_text(v)) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    auto num = parse_number(v);
    if (!num) {
      throw DataError("column '" + t.header[col] + "' row " + std::to_string(r + 2) +
                      ": '" + v + "' is not a number");
    }
    out.push_back(*num);
  }
  return out;
}

std::vector<double> encode_nominal(const RawTable& t, std::size_t col, AttributeSchema& attr) {
  std::vector<double> out;
  out.reserve(t.cells.size());
  for (const auto& row : t.cells) {
    const auto& v = row[col];
    out.push_back(is_missing_text(v) ? kMissingCode : intern(attr, v));
  }
  return out;
}

}  // namespace

const char* to_string(AttributeKind kind) {
  return kind == AttributeKind::Quantitative ? "quantitative" : "nominal";
}

std::optional<int> AttributeSchema::code_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<int>(it - labels.begin());
}

Dataset::Dataset(std::vector<AttributeSchema> attributes, AttributeSchema class_attribute,
                 std::vector<std::vector<double>> columns, std::vector<int> classes)
    : attributes_(std::move(attributes)),
      class_attribute_(std::move(class_attribute)),
      columns_(std::move(columns)),
      classes_(std::move(classes)) {
  if (columns_.size() != attributes_.size()) {
    throw DataError("column count does not match schema arity");
  }
  for (const auto& c : columns_) {
    if (c.size() != classes_.size()) throw DataError("column length does not match row count");
  }
  for (int c : classes_) {
    if (c < 0 || static_cast<std::size_t>(c) >= class_attribute_.labels.size()) {
      throw DataError("class code outside class domain");
    }
  }
}

std::optional<std::size_t> Dataset::find_attribute(const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::attribute_index(const std::string& name) const {
  if (auto i = find_attribute(name)) return *i;
  throw DataError("unknown attribute '" + name + "'");
}

bool Dataset::is_missing(std::size_t row, std::size_t attr) const {
  const double v = columns_[attr][row];
  return attributes_[attr].quantitative() ? std::isnan(v) : v == kMissingCode;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t a = 0; a < columns_.size(); ++a) {
    cols[a].reserve(rows.size());
    for (auto r : rows) cols[a].push_back(columns_[a].at(r));
  }
  std::vector<int> cls;
  cls.reserve(rows.size());
  for (auto r : rows) cls.push_back(classes_.at(r));
  auto attrs = attributes_;
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    if (attrs[a].quantitative()) attrs[a].numeric_domain = sorted_domain(cols[a]);
  }
  return Dataset(std::move(attrs), class_attribute_, std::move(cols), std::move(cls));
}

std::vector<std::size_t> Dataset::class_histogram() const {
  std::vector<std::size_t> h(class_count(), 0);
  for (int c : classes_) ++h[static_cast<std::size_t>(c)];
  return h;
}

std::optional<int> Dataset::majority_class() const {
  if (empty()) return std::nullopt;
  auto h = class_histogram();
  return static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
}

std::string Dataset::cell_text(std::size_t row, std::size_t attr) const {
  if (is_missing(row, attr)) return "?";
  const double v = columns_[attr][row];
  if (attributes_[attr].quantitative()) return format_number(v);
  return attributes_[attr].labels.at(static_cast<std::size_t>(v));
}

SchemaHint SchemaHint::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read schema file '" + path + "'");
  SchemaHint hint;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected name=kind");
    }
    const auto name = trim(line.substr(0, eq));
    const auto kind = trim(line.substr(eq + 1));
    if (kind == "nominal") {
      hint.kinds[name] = AttributeKind::Nominal;
    } else if (kind == "quantitative") {
      hint.kinds[name] = AttributeKind::Quantitative;
    } else if (kind == "class") {
      hint.class_column = name;
    } else {
      throw DataError(path + ":" + std::to_string(lineno) + ": unknown kind '" + kind + "'");
    }
  }
  return hint;
}

Dataset load_csv(const std::string& path, const SchemaHint& hint) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read '" + path + "'");
  return parse_csv(in, hint);
}

Dataset parse_csv(std::istream& in, const SchemaHint& hint) {
  const RawTable t = read_table(in);

  std::size_t class_col = t.header.size() - 1;
  if (hint.class_column) {
    auto it = std::find(t.header.begin(), t.header.end(), *hint.class_column);
    if (it == t.header.end()) throw DataError("class column '" + *hint.class_column + "' not found");
    class_col = static_cast<std::size_t>(it - t.header.begin());
  }
  for (const auto& [name, kind] : hint.kinds) {
    if (std::find(t.header.begin(), t.header.end(), name) == t.header.end()) {
      throw DataError("schema names unknown column '" + name + "'");
    }
  }

  AttributeSchema cls{.name = t.header[class_col]};
  auto classes = encode_classes(t, class_col, cls);

  std::vector<AttributeSchema> attrs;
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == class_col) continue;
    AttributeSchema a{.name = t.header[c]};
    auto forced = hint.kinds.find(a.name);
    bool numeric = true;
    std::set<double> distinct;
    for (const auto& row : t.cells) {
      if (is_missing_text(row[c])) continue;
      auto v = parse_number(row[c]);
      if (!v) {
        numeric = false;
        break;
      }
      distinct.insert(*v);
    }
    bool quantitative = numeric && distinct.size() >= 3;
    if (forced != hint.kinds.end()) quantitative = forced->second == AttributeKind::Quantitative;
    if (quantitative) {
      a.kind = AttributeKind::Quantitative;
      auto col = encode_quantitative(t, c);
      a.numeric_domain = sorted_domain(col);
      cols.push_back(std::move(col));
    } else {
      cols.push_back(encode_nominal(t, c, a));
    }
    attrs.push_back(std::move(a));
  }
  return Dataset(std::move(attrs), std::move(cls), std::move(cols), std::move(classes));
}

Dataset load_csv_like(const std::string& path, const Dataset& reference) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read '" + path + "'");
  return parse_csv_like(in, reference);
}

Dataset parse_csv_like(std::istream& in, const Dataset& reference) {
  const RawTable t = read_table(in);
  auto column_of = [&](const std::string& name) {
    auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw DataError("column '" + name + "' missing from input");
    return static_cast<std::size_t>(it - t.header.begin());
  };

  auto cls = reference.class_attribute();
  auto classes = encode_classes(t, column_of(cls.name), cls);

  auto attrs = reference.attributes();
  std::vector<std::vector<double>> cols;
  for (auto& a : attrs) {
    const auto c = column_of(a.name);
    if (a.quantitative()) {
      auto col = encode_quantitative(t, c);
      a.numeric_domain = sorted_domain(col);
      cols.push_back(std::move(col));
    } else {
      cols.push_back(encode_nominal(t, c, a));
    }
  }
  return Dataset(std::move(attrs), std::move(cls), std::move(cols), std::move(classes));
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
    out << quote_csv_field(ds.attribute(a).name) << ',';
  }
  out << quote_csv_field(ds.class_attribute().name) << '\n';
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
      out << quote_csv_field(ds.cell_text(r, a)) << ',';
    }
    out << quote_csv_field(ds.class_attribute().labels[static_cast<std::size_t>(ds.label(r))])
        << '\n';
  }
}

std::vector<std::string> distinct_values(const Dataset& ds, std::size_t attr) {
  if (attr >= ds.attribute_count()) {
    throw DataError("unknown attribute index " + std::to_string(attr));
  }
  const auto& a = ds.attribute(attr);
  std::vector<std::string> out;
  if (a.quantitative()) {
    for (double v : a.numeric_domain) out.push_back(format_number(v));
    return out;
  }
  std::vector<bool> seen(a.labels.size(), false);
  for (double v : ds.column(attr)) {
    if (v != kMissingCode) seen[static_cast<std::size_t>(v)] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(a.labels[i]);
  }
  return out;
}

std::vector<std::string> distinct_values(const Dataset& ds, const std::string& attr) {
  return distinct_values(ds, ds.attribute_index(attr));
}

std::string format_number(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw DataError("unterminated quote in record: " + line);
  fields.push_back(std::move(cur));
  return fields;
}

std::string quote_csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace qrule
