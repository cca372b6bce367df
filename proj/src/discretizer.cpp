#include "qrule/discretizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrule/parallel.hpp"

namespace qrule {

namespace {

// Two partitions whose entropies differ by less than this are a tie.
constexpr double kEntropyTolerance = 1e-12;

double entropy(const std::vector<std::size_t>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double e = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    e -= p * std::log2(p);
  }
  return e;
}

std::size_t distinct_classes(const std::vector<std::size_t>& counts) {
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
}

struct Sample {
  double value;
  int cls;
};

class MdlpSplitter {
 public:
  MdlpSplitter(std::vector<Sample> samples, std::size_t class_count)
      : s_(std::move(samples)), k_(class_count) {}

  std::vector<double> run() {
    std::vector<double> cuts;
    split(0, s_.size(), cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
  }

 private:
  // A cut between two adjacent value groups can only be optimal if the
  // groups are not both pure in the same class.
  bool is_boundary(std::size_t left_begin, std::size_t right_end) const {
    const int c = s_[left_begin].cls;
    for (std::size_t i = left_begin; i < right_end; ++i) {
      if (s_[i].cls != c) return true;
    }
    return false;
  }

  void split(std::size_t begin, std::size_t end, std::vector<double>& cuts) {
    const std::size_t n = end - begin;
    if (n < 2) return;

    std::vector<std::size_t> all(k_, 0);
    for (std::size_t i = begin; i < end; ++i) ++all[static_cast<std::size_t>(s_[i].cls)];
    const double ent_all = entropy(all, n);
    if (ent_all == 0.0) return;

    std::vector<std::size_t> left(k_, 0);
    std::vector<std::size_t> right(k_, 0);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;

    std::size_t group_begin = begin;
    std::size_t prev_group_begin = begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (i > begin && s_[i].value != s_[i - 1].value) {
        // Candidate between the group ending at i-1 and the one starting at i.
        std::size_t next_end = i;
        while (next_end < end && s_[next_end].value == s_[i].value) ++next_end;
        prev_group_begin = group_begin;
        group_begin = i;
        if (is_boundary(prev_group_begin, next_end)) {
          for (std::size_t c = 0; c < k_; ++c) right[c] = all[c] - left[c];
          const std::size_t nl = i - begin;
          const std::size_t nr = end - i;
          const double e = (static_cast<double>(nl) * entropy(left, nl) +
                            static_cast<double>(nr) * entropy(right, nr)) /
                           static_cast<double>(n);
          if (e < best - kEntropyTolerance) {
            best = e;
            best_pos = i;
          }
        }
      }
      ++left[static_cast<std::size_t>(s_[i].cls)];
    }
    if (best_pos == 0) return;

    std::fill(left.begin(), left.end(), 0);
    for (std::size_t i = begin; i < best_pos; ++i) ++left[static_cast<std::size_t>(s_[i].cls)];
    for (std::size_t c = 0; c < k_; ++c) right[c] = all[c] - left[c];
    const std::size_t nl = best_pos - begin;
    const std::size_t nr = end - best_pos;
    const double ent_l = entropy(left, nl);
    const double ent_r = entropy(right, nr);

    const double gain = ent_all - best;
    const double k = static_cast<double>(distinct_classes(all));
    const double k1 = static_cast<double>(distinct_classes(left));
    const double k2 = static_cast<double>(distinct_classes(right));
    const double delta = std::log2(std::pow(3.0, k) - 2.0) - (k * ent_all - k1 * ent_l - k2 * ent_r);
    const double threshold =
        (std::log2(static_cast<double>(n - 1)) + delta) / static_cast<double>(n);
    if (!(gain > threshold)) return;

    cuts.push_back((s_[best_pos - 1].value + s_[best_pos].value) / 2.0);
    split(begin, best_pos, cuts);
    split(best_pos, end, cuts);
  }

  std::vector<Sample> s_;
  std::size_t k_;
};

}  // namespace

std::size_t AttributeBins::bin_of(double value) const {
  return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), value) -
                                  cuts.begin());
}

std::string AttributeBins::label(std::size_t bin) const {
  const std::string lo = bin == 0 ? "[" + format_number(min) : "(" + format_number(cuts[bin - 1]);
  const std::string hi = bin == cuts.size() ? format_number(max) : format_number(cuts[bin]);
  return lo + ";" + hi + "]";
}

Interval AttributeBins::interval(std::size_t bin) const {
  Interval iv;
  if (bin > 0) {
    iv.lo = cuts[bin - 1];
    iv.lo_open = true;
  }
  if (bin < cuts.size()) iv.hi = cuts[bin];
  return iv;
}

DiscretizationMap::DiscretizationMap(std::vector<AttributeBins> bins) : bins_(std::move(bins)) {
  for (const auto& b : bins_) {
    if (!std::is_sorted(b.cuts.begin(), b.cuts.end()) ||
        std::adjacent_find(b.cuts.begin(), b.cuts.end()) != b.cuts.end()) {
      throw DataError("cut points for '" + b.name + "' are not strictly ascending");
    }
  }
}

const AttributeBins* DiscretizationMap::find(const std::string& name) const {
  for (const auto& b : bins_) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

nlohmann::json DiscretizationMap::to_json() const {
  auto attrs = nlohmann::json::array();
  for (const auto& b : bins_) {
    attrs.push_back({{"name", b.name}, {"cuts", b.cuts}, {"min", b.min}, {"max", b.max}});
  }
  return {{"attributes", attrs}};
}

DiscretizationMap DiscretizationMap::from_json(const nlohmann::json& j) {
  std::vector<AttributeBins> bins;
  try {
    for (const auto& a : j.at("attributes")) {
      bins.push_back({a.at("name").get<std::string>(), a.at("cuts").get<std::vector<double>>(),
                      a.at("min").get<double>(), a.at("max").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed discretization map: ") + e.what());
  }
  return DiscretizationMap(std::move(bins));
}

std::vector<double> mdlp_cuts(std::vector<double> values, std::vector<int> classes,
                              std::size_t class_count) {
  std::vector<Sample> samples;
  samples.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isnan(values[i])) samples.push_back({values[i], classes[i]});
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.value != b.value ? a.value < b.value : a.cls < b.cls;
  });
  return MdlpSplitter(std::move(samples), class_count).run();
}

DiscretizationMap mdlp_discretize(const Dataset& ds, std::size_t jobs) {
  std::vector<std::size_t> quant;
  for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
    if (ds.attribute(a).quantitative()) quant.push_back(a);
  }
  std::vector<AttributeBins> bins(quant.size());
  std::vector<int> classes(ds.labels().begin(), ds.labels().end());
  parallel_for(quant.size(), jobs, [&](std::size_t i) {
    const auto& attr = ds.attribute(quant[i]);
    std::vector<double> values(ds.column(quant[i]).begin(), ds.column(quant[i]).end());
    bins[i].name = attr.name;
    if (!attr.numeric_domain.empty()) {
      bins[i].min = attr.numeric_domain.front();
      bins[i].max = attr.numeric_domain.back();
    }
    bins[i].cuts = mdlp_cuts(std::move(values), classes, ds.class_count());
  });
  return DiscretizationMap(std::move(bins));
}

DiscretizationMap equal_width_discretize(const Dataset& ds, std::size_t bin_count) {
  if (bin_count < 2) throw std::invalid_argument("equal-width discretization needs at least 2 bins");
  std::vector<AttributeBins> bins;
  for (const auto& attr : ds.attributes()) {
    if (!attr.quantitative()) continue;
    AttributeBins b{.name = attr.name};
    if (!attr.numeric_domain.empty()) {
      b.min = attr.numeric_domain.front();
      b.max = attr.numeric_domain.back();
    }
    if (b.max > b.min) {
      const double width = (b.max - b.min) / static_cast<double>(bin_count);
      for (std::size_t i = 1; i < bin_count; ++i) {
        b.cuts.push_back(b.min + static_cast<double>(i) * width);
      }
    }
    bins.push_back(std::move(b));
  }
  return DiscretizationMap(std::move(bins));
}

Dataset apply(const DiscretizationMap& map, const Dataset& ds) {
  auto attrs = ds.attributes();
  std::vector<std::vector<double>> cols;
  cols.reserve(attrs.size());
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    auto col = std::vector<double>(ds.column(a).begin(), ds.column(a).end());
    const auto* bins = map.find(attrs[a].name);
    if (bins) {
      if (!attrs[a].quantitative()) {
        throw DataError("discretization map covers nominal attribute '" + attrs[a].name + "'");
      }
      for (auto& v : col) {
        v = std::isnan(v) ? kMissingCode : static_cast<double>(bins->bin_of(v));
      }
      auto& attr = attrs[a];
      attr.kind = AttributeKind::Nominal;
      attr.numeric_domain.clear();
      attr.labels.clear();
      for (std::size_t b = 0; b < bins->bin_count(); ++b) attr.labels.push_back(bins->label(b));
      attr.missing_is_item = false;
    }
    cols.push_back(std::move(col));
  }
  std::vector<int> classes(ds.labels().begin(), ds.labels().end());
  return Dataset(std::move(attrs), ds.class_attribute(), std::move(cols), std::move(classes));
}

}  // namespace qrule
