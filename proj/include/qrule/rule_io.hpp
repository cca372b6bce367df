#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "qrule/data.hpp"
#include "qrule/discretizer.hpp"
#include "qrule/rule.hpp"

namespace qrule {

/// Human-readable form, e.g. `Temperature=(25;30] and Humidity=[42;58] => Class=4`.
/// The default rule renders as `{} => Class=c`.
std::string to_text(const Literal& literal, const Dataset& schema);
std::string to_text(const Rule& rule, const Dataset& schema);

/// Inverse of to_text. Values on quantitative attributes parse as intervals
/// ("(25;30]", "[26;30]", "(-inf;20]"); on nominal attributes as a label or a
/// "{a,b}" set. Stats are left zeroed.
Rule parse_rule(std::string_view text, const Dataset& schema);

/// Rule-list document:
///
///     {
///       "format": "qrule-rules/1",
///       "class_attribute": "Class",
///       "discretization": { ... },            // optional, see DiscretizationMap
///       "rules": [
///         { "antecedent": [
///             {"attribute": "Temperature", "kind": "interval",
///              "lo": 26, "hi": 30, "lo_open": false, "hi_open": false},
///             {"attribute": "Colour", "kind": "set", "values": ["red", "?"]} ],
///           "consequent": "4",
///           "covered": 8, "abs_support": 6, "total": 75,
///           "confidence": 0.75, "support": 0.08 } ]
///     }
///
/// Infinite interval bounds are written as null. "?" in a value set is the
/// missing marker.
nlohmann::json to_json(const RuleList& rules, const Dataset& schema,
                       const DiscretizationMap* map = nullptr);

/// Reads a rule-list document against `schema`. A "set" literal on an
/// attribute that is quantitative in `schema` is read as bin labels of the
/// document's discretization map and converted to the equivalent interval.
/// Throws DataError on unknown attributes, labels, or kind mismatches.
RuleList rules_from_json(const nlohmann::json& doc, const Dataset& schema);

/// The discretization map embedded in a document, if any.
std::optional<DiscretizationMap> map_from_json(const nlohmann::json& doc);

/// Column layout of a dataset (names, kinds, nominal labels, class labels),
/// stored in model documents under "schema" so new data can be read with the
/// same codes:
///
///     {"attributes": [{"name": "Temperature", "kind": "quantitative"},
///                     {"name": "Colour", "kind": "nominal", "labels": ["red", "blue"]}],
///      "class": {"name": "Class", "labels": ["1", "4"]}}
nlohmann::json schema_to_json(const Dataset& ds);
/// A dataset with that layout and no rows.
Dataset schema_from_json(const nlohmann::json& j);

}  // namespace qrule
