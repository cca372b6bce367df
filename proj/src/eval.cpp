#include "qrule/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "qrule/cba.hpp"
#include "qrule/discretizer.hpp"
#include "qrule/parallel.hpp"
#include "qrule/qcba.hpp"

namespace qrule {

namespace {

// Uniform in [0, n) by rejection, so the draw sequence does not depend on the
// standard library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = rng.max() - rng.max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <typename Fn>
double timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

FoldResult measure(const RuleList& model, const Dataset& test, double seconds) {
  return {accuracy(model, test), model.size(), condition_count(model), seconds, 0};
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string preset_name(int preset) { return preset == 0 ? "cba" : "#" + std::to_string(preset); }

}  // namespace

std::vector<Fold> stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (k > ds.size()) throw std::invalid_argument("more folds than instances");

  std::vector<std::vector<std::size_t>> by_class(ds.class_count());
  for (std::size_t r = 0; r < ds.size(); ++r) by_class[static_cast<std::size_t>(ds.label(r))].push_back(r);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold_of(ds.size());
  std::size_t deal = 0;
  for (auto& rows : by_class) {
    for (std::size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[uniform_below(rng, i)]);
    }
    for (auto r : rows) fold_of[r] = deal++ % k;
  }

  std::vector<Fold> folds(k);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[r] ? folds[f].test : folds[f].train).push_back(r);
  }
  return folds;
}

double PresetResult::accuracy() const {
  if (folds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : folds) sum += f.accuracy;
  return sum / static_cast<double>(folds.size());
}

double PresetResult::avg_rule_count() const {
  if (folds.empty()) return 0.0;
  std::size_t sum = 0;
  for (const auto& f : folds) sum += f.rules;
  return static_cast<double>(sum) / static_cast<double>(folds.size());
}

double PresetResult::avg_conditions_per_rule() const {
  std::size_t rules = 0;
  std::size_t conditions = 0;
  for (const auto& f : folds) {
    rules += f.rules;
    conditions += f.conditions;
  }
  return rules == 0 ? 0.0 : static_cast<double>(conditions) / static_cast<double>(rules);
}

double PresetResult::avg_conditions_per_model() const {
  return avg_rule_count() * avg_conditions_per_rule();
}

double PresetResult::median_seconds() const {
  if (folds.empty()) return 0.0;
  std::vector<double> t;
  for (const auto& f : folds) t.push_back(f.seconds);
  std::sort(t.begin(), t.end());
  const std::size_t mid = t.size() / 2;
  return t.size() % 2 ? t[mid] : (t[mid - 1] + t[mid]) / 2.0;
}

double PresetResult::mean_seconds() const {
  if (folds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : folds) sum += f.seconds;
  return sum / static_cast<double>(folds.size());
}

const PresetResult* EvalReport::find(const std::string& dataset, int preset) const {
  for (const auto& r : results) {
    if (r.dataset == dataset && r.preset == preset) return &r;
  }
  return nullptr;
}

WinTieLoss EvalReport::versus(int preset, int baseline) const {
  WinTieLoss wtl;
  for (const auto& r : results) {
    if (r.preset != preset) continue;
    const auto* base = find(r.dataset, baseline);
    if (!base) continue;
    const double d = r.accuracy() - base->accuracy();
    if (std::abs(d) < 1e-9) {
      ++wtl.tie;
    } else if (d > 0) {
      ++wtl.won;
    } else {
      ++wtl.lost;
    }
  }
  return wtl;
}

nlohmann::json EvalReport::to_json() const {
  auto rows = nlohmann::json::array();
  for (const auto& r : results) {
    auto folds = nlohmann::json::array();
    for (const auto& f : r.folds) {
      folds.push_back({{"accuracy", f.accuracy},
                       {"rules", f.rules},
                       {"conditions", f.conditions},
                       {"seconds", f.seconds},
                       {"input_rules", f.input_rules}});
    }
    rows.push_back({{"dataset", r.dataset}, {"preset", r.preset}, {"folds", folds}});
  }
  return {{"k", k}, {"seed", seed}, {"results", rows}};
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  EvalReport report;
  try {
    report.k = j.at("k").get<std::size_t>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jr : j.at("results")) {
      PresetResult r{jr.at("dataset").get<std::string>(), jr.at("preset").get<int>(), {}};
      for (const auto& jf : jr.at("folds")) {
        r.folds.push_back({jf.at("accuracy").get<double>(), jf.at("rules").get<std::size_t>(),
                           jf.at("conditions").get<std::size_t>(), jf.at("seconds").get<double>(),
                           jf.at("input_rules").get<std::size_t>()});
      }
      report.results.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  return report;
}

void EvalReport::write_csv(std::ostream& out) const {
  out << "dataset,preset,folds,accuracy,avg_rules,avg_conditions_per_rule,"
         "avg_conditions_per_model,median_build_seconds,mean_build_seconds\n";
  for (const auto& r : results) {
    out << quote_csv_field(r.dataset) << ',' << r.preset << ',' << r.folds.size() << ','
        << format_number(r.accuracy()) << ',' << format_number(r.avg_rule_count()) << ','
        << format_number(r.avg_conditions_per_rule()) << ','
        << format_number(r.avg_conditions_per_model()) << ','
        << format_number(r.median_seconds()) << ',' << format_number(r.mean_seconds()) << '\n';
  }
}

void EvalReport::write_table(std::ostream& out) const {
  std::vector<int> presets;
  std::vector<std::string> datasets;
  for (const auto& r : results) {
    if (std::find(presets.begin(), presets.end(), r.preset) == presets.end()) presets.push_back(r.preset);
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
  }
  std::sort(presets.begin(), presets.end());

  constexpr int kLabel = 26;
  constexpr int kCell = 10;
  auto header = [&](const std::string& title) {
    out << std::left << std::setw(kLabel) << title << std::right;
    for (int p : presets) out << std::setw(kCell) << preset_name(p);
    out << '\n';
  };
  auto row = [&](const std::string& label, auto&& cell) {
    out << std::left << std::setw(kLabel) << label << std::right;
    for (int p : presets) out << std::setw(kCell) << cell(p);
    out << '\n';
  };
  // Mean of a metric over datasets that have results for the preset.
  auto average = [&](int p, double (PresetResult::*metric)() const) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& d : datasets) {
      if (const auto* r = find(d, p)) {
        sum += (r->*metric)();
        ++n;
      }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
  };

  out << k << "-fold stratified cross-validation, seed " << seed << "\n\n";
  for (const auto& d : datasets) {
    header(d);
    auto metric = [&](double (PresetResult::*m)() const, int digits) {
      return [&, m, digits](int p) {
        const auto* r = find(d, p);
        return r ? fixed((r->*m)(), digits) : std::string("-");
      };
    };
    row("  accuracy", metric(&PresetResult::accuracy, 3));
    row("  avg number of rules", metric(&PresetResult::avg_rule_count, 1));
    row("  avg conditions/rule", metric(&PresetResult::avg_conditions_per_rule, 2));
    row("  avg conditions/model", metric(&PresetResult::avg_conditions_per_model, 1));
    row("  build time [s] (median)", metric(&PresetResult::median_seconds, 3));
    out << '\n';
  }
  if (!datasets.empty()) {
    header("average over datasets");
    row("  accuracy", [&](int p) { return fixed(average(p, &PresetResult::accuracy), 3); });
    row("  avg number of rules", [&](int p) { return fixed(average(p, &PresetResult::avg_rule_count), 1); });
    row("  avg conditions/rule", [&](int p) { return fixed(average(p, &PresetResult::avg_conditions_per_rule), 2); });
    row("  avg conditions/model", [&](int p) { return fixed(average(p, &PresetResult::avg_conditions_per_model), 1); });
    row("  build time [s] (mean)", [&](int p) { return fixed(average(p, &PresetResult::mean_seconds), 3); });
    row("  won/tie/lost vs cba", [&](int p) {
      if (p == 0) return std::string("-");
      const auto w = versus(p, 0);
      return std::to_string(w.won) + "-" + std::to_string(w.tie) + "-" + std::to_string(w.lost);
    });
  }
}

void run_benchmark(const Dataset& ds, const std::string& name, const BenchmarkOptions& options,
                   EvalReport& report) {
  for (int p : options.presets) {
    if (p != 0) QcbaConfig::preset(p);  // validates the number
  }
  const auto folds = stratified_folds(ds, options.k, options.seed);
  report.k = options.k;
  report.seed = options.seed;

  // results[fold][preset index]
  std::vector<std::vector<FoldResult>> results(folds.size(),
                                               std::vector<FoldResult>(options.presets.size()));
  parallel_for(folds.size(), options.jobs, [&](std::size_t f) {
    const Dataset train = ds.subset(folds[f].train);
    const Dataset test = ds.subset(folds[f].test);
    const auto map = mdlp_discretize(train);
    const Dataset dtrain = apply(map, train);
    const Dataset dtest = apply(map, test);

    RuleList mined;
    RuleList baseline;
    const double cba_seconds = timed([&] {
      mined = mine_car_rules(dtrain, options.miner);
      baseline = post_prune(mined, dtrain);
    });
    const RuleList input = post_prune(std::move(mined), dtrain, {.keep_all = true});
    const std::size_t input_rules = static_cast<std::size_t>(
        std::count_if(input.begin(), input.end(), [](const Rule& r) { return !r.is_default(); }));

    for (std::size_t i = 0; i < options.presets.size(); ++i) {
      const int p = options.presets[i];
      if (p == 0) {
        results[f][i] = measure(baseline, dtest, cba_seconds);
        continue;
      }
      RuleList model;
      const double seconds =
          timed([&] { model = optimize(input, train, map, QcbaConfig::preset(p)); });
      results[f][i] = measure(model, test, seconds);
      results[f][i].input_rules = input_rules;
    }
  });

  for (std::size_t i = 0; i < options.presets.size(); ++i) {
    PresetResult r{name, options.presets[i], {}};
    for (const auto& fold : results) r.folds.push_back(fold[i]);
    report.results.push_back(std::move(r));
  }
}

}  // namespace qrule
