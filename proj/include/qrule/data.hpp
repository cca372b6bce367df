#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrule {

/// Raised for malformed input files and schema violations.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AttributeKind { Nominal, Quantitative };

/// Nominal cells store a code into AttributeSchema::labels; missing is this code.
inline constexpr int kMissingCode = -1;

const char* to_string(AttributeKind kind);

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::Nominal;
  /// Quantitative: distinct non-missing training values, strictly ascending.
  std::vector<double> numeric_domain;
  /// Nominal: value labels in first-seen order; a cell's code indexes this list.
  std::vector<std::string> labels;
  /// When false the miner never emits an item for the missing marker of this
  /// attribute (set on columns produced by discretizing a quantitative column).
  bool missing_is_item = true;

  bool quantitative() const { return kind == AttributeKind::Quantitative; }
  std::optional<int> code_of(const std::string& label) const;
};

/// Column-major table of instances with one nominal class attribute.
///
/// Quantitative cells hold the raw value (NaN when missing); nominal cells hold
/// the label code as a double (kMissingCode when missing). The class column is
/// never missing.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<AttributeSchema> attributes, AttributeSchema class_attribute,
          std::vector<std::vector<double>> columns, std::vector<int> classes);

  std::size_t size() const { return classes_.size(); }
  bool empty() const { return classes_.empty(); }
  std::size_t attribute_count() const { return attributes_.size(); }

  const AttributeSchema& attribute(std::size_t index) const { return attributes_.at(index); }
  const std::vector<AttributeSchema>& attributes() const { return attributes_; }
  const AttributeSchema& class_attribute() const { return class_attribute_; }
  std::size_t class_count() const { return class_attribute_.labels.size(); }

  /// Index of the predictor named `name`; throws DataError if unknown.
  std::size_t attribute_index(const std::string& name) const;
  std::optional<std::size_t> find_attribute(const std::string& name) const;

  double value(std::size_t row, std::size_t attr) const { return columns_[attr][row]; }
  bool is_missing(std::size_t row, std::size_t attr) const;
  std::span<const double> column(std::size_t attr) const { return columns_.at(attr); }

  int label(std::size_t row) const { return classes_[row]; }
  std::span<const int> labels() const { return classes_; }

  /// Rows in the given order. Nominal label tables are kept so codes stay
  /// stable; quantitative domains are recomputed from the selected rows.
  Dataset subset(std::span<const std::size_t> rows) const;

  /// Per-class instance counts, indexed by class code.
  std::vector<std::size_t> class_histogram() const;

  /// Smallest class code among the most frequent classes; nullopt when empty.
  std::optional<int> majority_class() const;

  /// Text form of a cell ("?" when missing).
  std::string cell_text(std::size_t row, std::size_t attr) const;

 private:
  std::vector<AttributeSchema> attributes_;
  AttributeSchema class_attribute_;
  std::vector<std::vector<double>> columns_;
  std::vector<int> classes_;
};

/// Per-column type overrides, read from an optional sidecar file of
/// `name=nominal|quantitative|class` lines.
struct SchemaHint {
  std::map<std::string, AttributeKind> kinds;
  std::optional<std::string> class_column;

  static SchemaHint load(const std::string& path);
};

/// Parses a CSV file with a header row. The class is the last column unless
/// the hint names another. A column becomes quantitative when every
/// non-missing cell parses as a number and it has at least three distinct
/// values; empty cells and "?" are missing.
Dataset load_csv(const std::string& path, const SchemaHint& hint = {});
Dataset parse_csv(std::istream& in, const SchemaHint& hint = {});

/// Loads rows laid out like `reference`: the same columns (matched by name),
/// the same attribute kinds and label codes. Unseen nominal labels are
/// appended after the reference labels so they match no existing literal.
Dataset load_csv_like(const std::string& path, const Dataset& reference);
Dataset parse_csv_like(std::istream& in, const Dataset& reference);

void write_csv(std::ostream& out, const Dataset& ds);

/// dom(A): the sorted numeric domain for quantitative attributes, the observed
/// labels in first-seen order for nominal ones. Missing is excluded.
std::vector<std::string> distinct_values(const Dataset& ds, std::size_t attr);
std::vector<std::string> distinct_values(const Dataset& ds, const std::string& attr);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Splits one CSV record (RFC 4180 quoting). Exposed for the tools.
std::vector<std::string> split_csv_record(const std::string& line);
std::string quote_csv_field(const std::string& field);

}  // namespace qrule
