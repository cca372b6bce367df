// Command-line front end: discretize, mine, build, optimize, predict, benchmark.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrule/cba.hpp"
#include "qrule/data.hpp"
#include "qrule/discretizer.hpp"
#include "qrule/eval.hpp"
#include "qrule/miner.hpp"
#include "qrule/parallel.hpp"
#include "qrule/qcba.hpp"
#include "qrule/rule_io.hpp"

namespace fs = std::filesystem;
using namespace qrule;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kInternal = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes through a sibling temp file and renames, so a failed run never
// leaves a truncated artifact. "-" or an empty path means stdout.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw DataError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot write '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct DataOptions {
  std::string path;
  std::string class_column;
  std::string schema;

  void add(CLI::App* cmd) {
    cmd->add_option("data", path, "CSV file with a header row")->required();
    cmd->add_option("--class-column", class_column, "class column (default: last column)");
    cmd->add_option("--schema", schema, "sidecar file of name=nominal|quantitative|class lines");
  }

  Dataset load() const {
    SchemaHint hint = schema.empty() ? SchemaHint{} : SchemaHint::load(schema);
    if (!class_column.empty()) hint.class_column = class_column;
    return load_csv(path, hint);
  }
};

struct MinerOptions {
  MinerParams params;

  void add(CLI::App* cmd) {
    cmd->add_option("--min-support", params.min_support, "minimum rule support (fraction)")
        ->capture_default_str();
    cmd->add_option("--min-confidence", params.min_confidence, "minimum rule confidence")
        ->capture_default_str();
    cmd->add_option("--max-length", params.max_length, "maximum antecedent length")
        ->capture_default_str();
    cmd->add_option("--max-rules", params.max_rules, "keep at most this many mined rules")
        ->capture_default_str();
  }
};

// Discretization used by mine/build: a map file if given, MDLP otherwise.
DiscretizationMap discretization_for(const Dataset& ds, const std::string& map_path,
                                     std::size_t jobs) {
  if (!map_path.empty()) return DiscretizationMap::from_json(read_json(map_path));
  bool any_quantitative = false;
  for (const auto& a : ds.attributes()) any_quantitative |= a.quantitative();
  return any_quantitative ? mdlp_discretize(ds, jobs) : DiscretizationMap{};
}

std::string model_document(const RuleList& rules, const Dataset& rule_schema, const Dataset& raw,
                           const DiscretizationMap* map) {
  auto doc = to_json(rules, rule_schema, map && !map->empty() ? map : nullptr);
  doc["schema"] = schema_to_json(raw);
  return dump(doc);
}

void print_rules(const RuleList& rules, const Dataset& schema) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::cerr << (i + 1) << ". " << to_text(rules[i], schema) << "  (conf "
              << format_number(rules[i].stats.confidence()) << ", supp "
              << format_number(rules[i].stats.support()) << ")\n";
  }
}

std::vector<int> parse_presets(const std::string& text) {
  std::vector<int> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      std::size_t used = 0;
      const int p = std::stoi(item, &used);
      if (used != item.size() || p < 0 || p > 7) throw std::invalid_argument(item);
      out.push_back(p);
    } catch (const std::exception&) {
      throw UsageError("preset list must be comma-separated numbers 0-7, got '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty preset list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Association rule classification with rule-list tuning"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t jobs = 0;
  app.add_option("--jobs,-j", jobs, "worker threads (default: QRULE_JOBS or all cores)");

  // discretize
  auto* disc = app.add_subcommand("discretize", "fit cut points and write the bin map");
  DataOptions disc_data;
  disc_data.add(disc);
  std::string disc_out, disc_binned;
  std::size_t equal_width = 0;
  disc->add_option("-o,--output", disc_out, "map JSON (default: stdout)");
  disc->add_option("--binned", disc_binned, "also write the discretized CSV here");
  disc->add_option("--equal-width", equal_width, "equal-width bins instead of MDLP");

  // mine
  auto* mine = app.add_subcommand("mine", "mine class association rules");
  DataOptions mine_data;
  mine_data.add(mine);
  MinerOptions mine_opts;
  mine_opts.add(mine);
  std::string mine_out, mine_map;
  mine->add_option("-o,--output", mine_out, "rules JSON (default: stdout)");
  mine->add_option("--map", mine_map, "discretization map JSON (default: fit MDLP)");

  // build
  auto* build = app.add_subcommand("build", "mine rules and prune them into a CBA classifier");
  DataOptions build_data;
  build_data.add(build);
  MinerOptions build_opts;
  build_opts.add(build);
  std::string build_out, build_map;
  bool keep_all = false;
  build->add_option("-o,--output", build_out, "classifier JSON (default: stdout)");
  build->add_option("--map", build_map, "discretization map JSON (default: fit MDLP)");
  build->add_flag("--keep-all", keep_all, "skip default-rule pruning (input for optimize)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "tune a rule list on raw data");
  std::string opt_rules, opt_out;
  DataOptions opt_data;
  opt->add_option("rules", opt_rules, "rules JSON (from mine, build or another learner)")->required();
  opt_data.add(opt);
  opt->add_option("-o,--output", opt_out, "tuned classifier JSON (default: stdout)");
  int preset = 0;
  QcbaConfig cfg;
  std::string drop_text;
  opt->add_option("--preset", preset, "start from ablation configuration 1-7 (default: 6)");
  auto* f_refit = opt->add_flag("--refit,!--no-refit", cfg.refit, "refit intervals to data values");
  auto* f_prune = opt->add_flag("--literal-pruning,!--no-literal-pruning", cfg.literal_pruning,
                                "remove redundant literals");
  auto* f_trim = opt->add_flag("--trimming,!--no-trimming", cfg.trimming, "trim interval boundaries");
  auto* f_ext = opt->add_flag("--extension,!--no-extension", cfg.extension, "extend intervals");
  auto* f_post = opt->add_flag("--postpruning,!--no-postpruning", cfg.postpruning,
                               "data coverage and default rule pruning");
  auto* f_drop = opt->add_option("--drop", drop_text, "default rule overlap pruning")
                     ->check(CLI::IsMember({"none", "transaction", "range"}));
  auto* f_min = opt->add_option("--min-improvement", cfg.min_improvement, "crisp accept threshold");
  auto* f_cond = opt->add_option("--min-cond-improvement", cfg.min_cond_improvement,
                                 "conditional accept threshold");

  // predict
  auto* pred = app.add_subcommand("predict", "classify rows with a model");
  std::string pred_model, pred_data, pred_out;
  pred->add_option("model", pred_model, "classifier JSON")->required();
  pred->add_option("data", pred_data, "CSV file with the model's columns")->required();
  pred->add_option("-o,--output", pred_out, "predictions CSV (default: stdout)");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "cross-validate the baseline and tuning presets");
  std::vector<std::string> bench_files;
  std::string bench_presets = "0,1,2,3,4,5,6,7";
  std::string bench_csv, bench_json, bench_table, bench_class, bench_schema;
  BenchmarkOptions bopts;
  MinerOptions bench_miner;
  bench->add_option("data", bench_files, "CSV files")->required();
  bench->add_option("--presets", bench_presets, "comma-separated presets (0 = CBA baseline)")
      ->capture_default_str();
  bench->add_option("--k", bopts.k, "folds")->capture_default_str();
  bench->add_option("--seed", bopts.seed, "fold assignment seed")->capture_default_str();
  bench->add_option("--csv", bench_csv, "write the summary CSV here");
  bench->add_option("--json", bench_json, "write the full per-fold report here");
  bench->add_option("--table", bench_table, "write the text table here (default: stdout)");
  bench->add_option("--class-column", bench_class, "class column (default: last column)");
  bench->add_option("--schema", bench_schema, "sidecar schema file");
  bool no_timing = false;
  bench->add_flag("--no-timing", no_timing, "report build times as 0 so reruns are byte-identical");
  bench_miner.add(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (jobs == 0) jobs = default_jobs();

  try {
    if (*disc) {
      const Dataset ds = disc_data.load();
      const auto map = equal_width ? equal_width_discretize(ds, equal_width) : mdlp_discretize(ds, jobs);
      if (!disc_binned.empty()) {
        std::ostringstream csv;
        write_csv(csv, apply(map, ds));
        write_output(disc_binned, csv.str());
      }
      write_output(disc_out, dump(map.to_json()));
    } else if (*mine) {
      const Dataset ds = mine_data.load();
      const auto map = discretization_for(ds, mine_map, jobs);
      const Dataset binned = apply(map, ds);
      const auto rules = mine_car_rules(binned, mine_opts.params, jobs);
      std::cerr << rules.size() << " rules\n";
      write_output(mine_out, model_document(rules, binned, ds, &map));
    } else if (*build) {
      const Dataset ds = build_data.load();
      const auto map = discretization_for(ds, build_map, jobs);
      const Dataset binned = apply(map, ds);
      const auto model = post_prune(mine_car_rules(binned, build_opts.params, jobs), binned,
                                    {.keep_all = keep_all});
      print_rules(model, binned);
      std::cerr << "training accuracy " << format_number(accuracy(model, binned)) << "\n";
      write_output(build_out, model_document(model, binned, ds, &map));
    } else if (*opt) {
      if (preset != 0) {
        const auto overrides = cfg;
        cfg = QcbaConfig::preset(preset);
        if (f_refit->count()) cfg.refit = overrides.refit;
        if (f_prune->count()) cfg.literal_pruning = overrides.literal_pruning;
        if (f_trim->count()) cfg.trimming = overrides.trimming;
        if (f_ext->count()) cfg.extension = overrides.extension;
        if (f_post->count()) cfg.postpruning = overrides.postpruning;
        if (f_min->count()) cfg.min_improvement = overrides.min_improvement;
        if (f_cond->count()) cfg.min_cond_improvement = overrides.min_cond_improvement;
      }
      if (f_drop->count()) cfg.drop = parse_drop_mode(drop_text);
      const Dataset raw = opt_data.load();
      const auto rules = rules_from_json(read_json(opt_rules), raw);
      const auto model = optimize(rules, raw, {}, cfg, jobs);
      print_rules(model, raw);
      std::cerr << "training accuracy " << format_number(accuracy(model, raw)) << "\n";
      write_output(opt_out, model_document(model, raw, raw, nullptr));
    } else if (*pred) {
      const auto doc = read_json(pred_model);
      if (!doc.contains("schema")) throw DataError("model has no \"schema\" section");
      const Dataset reference = schema_from_json(doc.at("schema"));
      const std::string class_name = reference.class_attribute().name;

      // Unlabelled input gets a placeholder class column so it can be read
      // with the model's layout.
      std::string text = read_file(pred_data);
      const auto header_end = text.find('\n');
      auto header = split_csv_record(text.substr(0, header_end));
      if (!header.empty() && !header.back().empty() && header.back().back() == '\r') {
        header.back().pop_back();
      }
      const bool labelled = std::find(header.begin(), header.end(), class_name) != header.end();
      if (!labelled) {
        if (reference.class_count() == 0) throw DataError("model has no class labels");
        const std::string filler = quote_csv_field(reference.class_attribute().labels.front());
        std::ostringstream patched;
        std::istringstream lines(text);
        std::string line;
        bool first = true;
        while (std::getline(lines, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty()) continue;
          patched << line << ',' << (first ? quote_csv_field(class_name) : filler) << '\n';
          first = false;
        }
        text = patched.str();
      }
      std::istringstream in(text);
      const Dataset ds = parse_csv_like(in, reference);
      const auto rules = rules_from_json(doc, ds);
      const auto predicted = predict(rules, ds, jobs);
      std::ostringstream out;
      out << quote_csv_field(class_name) << '\n';
      for (int c : predicted) {
        out << quote_csv_field(c == kMissingCode ? "?" : ds.class_attribute().labels.at(static_cast<std::size_t>(c)))
            << '\n';
      }
      if (labelled && !ds.empty()) std::cerr << "accuracy " << format_number(accuracy(rules, ds)) << "\n";
      write_output(pred_out, out.str());
    } else if (*bench) {
      bopts.presets = parse_presets(bench_presets);
      bopts.miner = bench_miner.params;
      bopts.jobs = jobs;
      EvalReport report;
      for (const auto& file : bench_files) {
        DataOptions d{file, bench_class, bench_schema};
        const Dataset ds = d.load();
        std::cerr << "benchmarking " << file << "\n";
        run_benchmark(ds, fs::path(file).stem().string(), bopts, report);
      }
      if (no_timing) {
        for (auto& r : report.results) {
          for (auto& f : r.folds) f.seconds = 0.0;
        }
      }
      std::ostringstream table;
      report.write_table(table);
      write_output(bench_table, table.str());
      if (!bench_csv.empty()) {
        std::ostringstream csv;
        report.write_csv(csv);
        write_output(bench_csv, csv.str());
      }
      if (!bench_json.empty()) write_output(bench_json, dump(report.to_json()));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
