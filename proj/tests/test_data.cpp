#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qrule/data.hpp"
#include "support.hpp"

using namespace qrule;

namespace {

Dataset parse(const std::string& text, const SchemaHint& hint = {}) {
  std::istringstream in(text);
  return parse_csv(in, hint);
}

}  // namespace

TEST(Csv, InfersKindsAndLastColumnClass) {
  const auto ds = parse("a,b,c,y\n1,x,1,p\n2,y,2,q\n3,x,1,p\n");
  ASSERT_EQ(ds.attribute_count(), 3u);
  EXPECT_TRUE(ds.attribute(0).quantitative());
  EXPECT_FALSE(ds.attribute(1).quantitative());
  // Only two distinct numbers: treated as nominal.
  EXPECT_FALSE(ds.attribute(2).quantitative());
  EXPECT_EQ(ds.class_attribute().name, "y");
  EXPECT_EQ(ds.class_attribute().labels, (std::vector<std::string>{"p", "q"}));
  EXPECT_EQ(ds.attribute(0).numeric_domain, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(std::string(to_string(AttributeKind::Quantitative)), "quantitative");
}

TEST(Csv, MissingCells) {
  const auto ds = parse("a,b,y\n1,x,p\n?,,q\n3,y,p\n4,x,q\n");
  EXPECT_TRUE(ds.is_missing(1, 0));
  EXPECT_TRUE(std::isnan(ds.value(1, 0)));
  EXPECT_TRUE(ds.is_missing(1, 1));
  EXPECT_EQ(ds.value(1, 1), kMissingCode);
  EXPECT_EQ(ds.cell_text(1, 0), "?");
  EXPECT_EQ(distinct_values(ds, "a"), (std::vector<std::string>{"1", "3", "4"}));
  EXPECT_EQ(distinct_values(ds, "b"), (std::vector<std::string>{"x", "y"}));
}

TEST(Csv, Errors) {
  EXPECT_THROW(parse(""), DataError);
  EXPECT_THROW(parse("y\np\n"), DataError);
  EXPECT_THROW(parse("a,a,y\n1,2,p\n"), DataError);
  EXPECT_THROW(parse("a,y\n1,p\n2\n"), DataError);
  EXPECT_THROW(parse("a,y\n1,?\n"), DataError);
  EXPECT_THROW(parse("a,y\n\"1,p\n"), DataError);
  const auto ds = parse("a,y\n1,p\n");
  EXPECT_THROW(ds.attribute_index("nope"), DataError);
}

TEST(Csv, SchemaHintOverrides) {
  SchemaHint hint;
  hint.kinds["a"] = AttributeKind::Nominal;
  hint.kinds["b"] = AttributeKind::Quantitative;
  hint.class_column = "y";
  const auto ds = parse("y,a,b\np,1,5\nq,2,6\np,3,5\n", hint);
  EXPECT_EQ(ds.class_attribute().name, "y");
  EXPECT_FALSE(ds.attribute(ds.attribute_index("a")).quantitative());
  EXPECT_TRUE(ds.attribute(ds.attribute_index("b")).quantitative());

  SchemaHint bad;
  bad.kinds["zzz"] = AttributeKind::Nominal;
  EXPECT_THROW(parse("a,y\n1,p\n", bad), DataError);
}

TEST(Csv, QuotedFields) {
  EXPECT_EQ(split_csv_record("a,\"b,c\",\"d\"\"e\""), (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_EQ(quote_csv_field("b,c"), "\"b,c\"");
  EXPECT_EQ(quote_csv_field("plain"), "plain");
}

TEST(Csv, RoundTrip) {
  testkit::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto shape = testkit::random_shape(rng, 5, 60);
    shape.missing_rate = 0.1;
    const auto ds = testkit::random_dataset(rng, shape);
    std::ostringstream out;
    write_csv(out, ds);
    std::istringstream in(out.str());
    const auto back = parse_csv_like(in, ds);
    ASSERT_EQ(back.size(), ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
      EXPECT_EQ(back.label(r), ds.label(r));
      for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
        EXPECT_EQ(back.cell_text(r, a), ds.cell_text(r, a));
      }
    }
  }
}

TEST(Csv, LikeReferenceKeepsCodes) {
  const auto train = parse("a,b,y\n1,x,p\n2,y,q\n3,z,p\n");
  std::istringstream in("b,a,y\nz,5,q\nw,1,p\n");
  const auto test = parse_csv_like(in, train);
  EXPECT_EQ(test.value(0, 1), 2);  // "z" keeps its training code
  EXPECT_EQ(test.value(1, 1), 3);  // unseen label appended
  EXPECT_EQ(test.value(0, 0), 5);
  EXPECT_EQ(test.label(0), 1);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(26), "26");
  EXPECT_EQ(format_number(-2.5), "-2.5");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_number(third)), third);
}

TEST(DatasetOps, SubsetAndMajority) {
  const auto ds = testkit::quantitative_dataset({{5, 1, 3, 1}}, {1, 0, 1, 1}, 2);
  EXPECT_EQ(ds.majority_class(), 1);
  EXPECT_EQ(ds.class_histogram(), (std::vector<std::size_t>{1, 3}));
  const std::vector<std::size_t> rows{1, 3};
  const auto sub = ds.subset(rows);
  EXPECT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.attribute(0).numeric_domain, (std::vector<double>{1}));
  EXPECT_FALSE(Dataset().majority_class().has_value());
  // Ties go to the smallest code.
  const auto tie = testkit::quantitative_dataset({{1, 2}}, {1, 0}, 2);
  EXPECT_EQ(tie.majority_class(), 0);
}
