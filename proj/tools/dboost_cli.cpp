// dboost: train, evaluate, predict and curate with the difference-boosting
// classifier.
//
//   dboost train letters.data --seed-split 16000 --out model.json
//   dboost evaluate model.json letters.data --range 16000:20000
//   dboost predict model.json --record A,1,1,3,2,1,8,2,2,2,8,2,8,1,6,2,7
//   dboost curate letters.data --seed-split 16000 --out-model curated.json

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "dboost/boost.hpp"
#include "dboost/curate.hpp"
#include "dboost/dataset.hpp"
#include "dboost/eval.hpp"
#include "dboost/model_io.hpp"

namespace {

using namespace dboost;
using json = nlohmann::ordered_json;

struct DataOptions {
  std::string path;
  std::string format = "letters";
  bool header = false;

  void add(CLI::App& cmd) {
    cmd.add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"letters", "csv"}))
        ->capture_default_str();
    cmd.add_flag("--header", header, "CSV input has a header row");
  }
};

Dataset load_data(const DataOptions& opt) {
  std::ifstream in(opt.path);
  if (!in) throw std::runtime_error("cannot read data file '" + opt.path + "'");
  return opt.format == "letters" ? parse_letters(in) : parse_csv(in, {opt.header});
}

/// "a:b", "a:" or ":b", 0-based half-open rows.
std::pair<std::size_t, std::size_t> parse_range(const std::string& text, std::size_t size) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::runtime_error("range must look like start:end");
  auto number = [&](const std::string& s, std::size_t fallback) -> std::size_t {
    if (s.empty()) return fallback;
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::runtime_error("bad range bound '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  const auto first = number(text.substr(0, colon), 0);
  const auto last = number(text.substr(colon + 1), size);
  if (first > last || last > size) {
    throw std::runtime_error("range " + text + " is outside the " + std::to_string(size) +
                             " available rows");
  }
  return {first, last};
}

struct TrainOptions {
  std::size_t bins = 16;
  double alpha = 0.5;
  std::size_t rounds = 30;
  double gain = 0.25;
  bool no_tags = false;
  bool compound = false;
  bool batch = false;
  bool no_keep_best = false;

  void add(CLI::App& cmd) {
    cmd.add_option("--bins", bins, "Bins per attribute")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--alpha", alpha, "Weight learning rate")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--rounds", rounds, "Maximum boosting epochs")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--gain", gain, "Likelihood multiplier outside a window tag")
        ->check(CLI::Range(1e-300, 1.0))
        ->capture_default_str();
    cmd.add_flag("--no-tags", no_tags, "Disable window tags");
    cmd.add_flag("--compound-gain", compound, "Apply the gain once per violating attribute");
    cmd.add_flag("--batch", batch, "Apply weight updates at the end of each epoch");
    cmd.add_flag("--no-keep-best", no_keep_best, "Return the last epoch's weights");
  }

  TrainConfig config() const {
    TrainConfig cfg;
    cfg.bins = bins;
    cfg.tags = {!no_tags, gain, compound};
    cfg.boost.alpha = alpha;
    cfg.boost.max_rounds = rounds;
    cfg.boost.keep_best = !no_keep_best;
    cfg.boost.mode = batch ? UpdateMode::batch : UpdateMode::online;
    return cfg;
  }

  json echo() const {
    return {{"bins", bins},        {"alpha", alpha},          {"rounds", rounds},
            {"gain", gain},        {"tags", !no_tags},        {"compound_gain", compound},
            {"mode", batch ? "batch" : "online"}, {"keep_best", !no_keep_best}};
  }
};

void print_epoch(const EpochRecord& r, const CountModel&) {
  std::cout << "epoch " << r.epoch << " misclassified " << r.misclassified << " errors_after "
            << r.errors_after << " seconds " << std::fixed << std::setprecision(3) << r.seconds
            << std::defaultfloat << '\n'
            << std::flush;
}

void print_trace_summary(const TrainTrace& t) {
  std::cout << "initial_errors " << t.initial_errors << "\nepochs " << t.final_epoch
            << "\nconverged " << (t.converged ? "true" : "false") << "\nreturned_epoch "
            << t.returned_epoch << "\nreturned_errors " << t.returned_errors << '\n';
}

int run_train(const DataOptions& data, const TrainOptions& opts,
              const std::optional<std::size_t>& seed_split, const std::string& out) {
  auto ds = load_data(data);
  std::size_t rows = seed_split.value_or(ds.size());
  auto [train_set, rest] = split(ds, rows);
  auto result = train(train_set, opts.config(), print_epoch);
  print_trace_summary(result.trace);

  ModelInfo info;
  info.training = opts.echo();
  info.training["rows"] = "0:" + std::to_string(rows);
  info.dataset_digest = digest(train_set);
  save_model(out, result.model, info);
  std::cout << "model " << out << '\n';
  return 0;
}

int run_evaluate(const std::string& model_path, const DataOptions& data,
                 const std::optional<std::string>& range, const std::string& confusion_csv) {
  const auto file = load_model(model_path);
  auto ds = load_data(data);
  if (range) {
    const auto [first, last] = parse_range(*range, ds.size());
    ds = ds.rows(first, last);
  }
  const auto metrics = evaluate(file.model, ds);
  write_metrics(std::cout, metrics);
  if (!confusion_csv.empty()) {
    std::ofstream out(confusion_csv);
    if (!out) throw std::runtime_error("cannot write '" + confusion_csv + "'");
    write_confusion_csv(out, metrics);
  }
  return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& record) {
  const auto file = load_model(model_path);
  const auto& model = file.model;
  std::vector<Record> records;
  if (!record.empty()) {
    std::istringstream in(record);
    records = parse_records(in, model.attribute_count());
  } else {
    std::ifstream in(data_path);
    if (!in) throw std::runtime_error("cannot read data file '" + data_path + "'");
    records = parse_records(in, model.attribute_count());
  }

  std::cout << "truth,first,p_first,second,p_second,gap\n" << std::setprecision(6) << std::fixed;
  for (const auto& r : records) {
    const auto p = predict(model, r.attributes);
    std::cout << r.label.value_or("") << ',' << model.classes()[p.first] << ','
              << p.probs[p.first] << ',' << model.classes()[p.second] << ','
              << p.probs[p.second] << ',' << p.confidence_gap << '\n';
  }
  return 0;
}

struct CurateOptions {
  std::size_t seed_split = 0;
  CurationConfig cfg;
  std::string out_set;
  std::string out_model;
  std::string report;
};

int run_curate(const DataOptions& data, const TrainOptions& opts, const CurateOptions& c) {
  const auto pool = load_data(data);
  if (c.seed_split == 0 || c.seed_split > pool.size()) {
    throw std::runtime_error("--seed-split must be between 1 and " + std::to_string(pool.size()));
  }
  std::vector<std::size_t> seed(c.seed_split);
  std::iota(seed.begin(), seed.end(), std::size_t{0});
  const auto result = curate(pool, seed, opts.config(), c.cfg);

  if (c.report.empty()) {
    write_report(std::cout, result.report);
  } else {
    std::ofstream out(c.report);
    if (!out) throw std::runtime_error("cannot write '" + c.report + "'");
    write_report(out, result.report);
    std::cout << "report " << c.report << '\n';
  }
  if (!c.out_set.empty()) {
    std::ofstream out(c.out_set);
    if (!out) throw std::runtime_error("cannot write '" + c.out_set + "'");
    for (auto r : result.rows) out << r << '\n';
  }
  if (!c.out_model.empty()) {
    ModelInfo info;
    info.training = opts.echo();
    info.training["curation"] = {{"seed_rows", "0:" + std::to_string(c.seed_split)},
                                 {"high_confidence", c.cfg.high_confidence},
                                 {"gap_high", c.cfg.gap_high},
                                 {"gap_low", c.cfg.gap_low},
                                 {"max_passes", c.cfg.max_passes},
                                 {"final_size", result.rows.size()}};
    info.dataset_digest = digest(result.curated);
    save_model(c.out_model, result.model, info);
  }
  std::cout << "pool metrics\n";
  write_metrics(std::cout, evaluate(result.model, pool));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Difference-boosting naive Bayes classifier"};
  app.require_subcommand(1);

  DataOptions train_data;
  TrainOptions train_opts;
  std::optional<std::size_t> train_split;
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write it to a file");
  train_cmd->add_option("data", train_data.path, "Training data file")->required();
  train_data.add(*train_cmd);
  train_opts.add(*train_cmd);
  train_cmd->add_option("--seed-split", train_split, "Train on the first N rows only");
  train_cmd->add_option("--out", train_out, "Model file to write")->required();

  std::string eval_model;
  DataOptions eval_data;
  std::optional<std::string> eval_range;
  std::string eval_confusion;
  auto* eval_cmd = app.add_subcommand("evaluate", "Report error rates of a model on a dataset");
  eval_cmd->add_option("model", eval_model, "Model file")->required();
  eval_cmd->add_option("data", eval_data.path, "Labeled data file")->required();
  eval_data.add(*eval_cmd);
  eval_cmd->add_option("--range", eval_range, "Rows start:end (0-based, end exclusive)");
  eval_cmd->add_option("--confusion-csv", eval_confusion, "Write the confusion matrix as CSV");

  std::string predict_model;
  std::string predict_data;
  std::string predict_record;
  auto* predict_cmd = app.add_subcommand("predict", "First and second guesses per record");
  predict_cmd->add_option("model", predict_model, "Model file")->required();
  auto* data_opt = predict_cmd->add_option("data", predict_data, "Records, labeled or not");
  auto* record_opt = predict_cmd->add_option("--record", predict_record, "A single record");
  data_opt->excludes(record_opt);
  predict_cmd->callback([&] {
    if (predict_data.empty() && predict_record.empty()) {
      throw CLI::RequiredError("a data file or --record");
    }
  });

  DataOptions curate_data;
  TrainOptions curate_train;
  CurateOptions curate_opts;
  auto* curate_cmd = app.add_subcommand("curate", "Grow a training set from a labeled pool");
  curate_cmd->add_option("data", curate_data.path, "Labeled pool")->required();
  curate_data.add(*curate_cmd);
  curate_train.add(*curate_cmd);
  curate_cmd->add_option("--seed-split", curate_opts.seed_split, "Seed with the first N rows")
      ->required();
  curate_cmd->add_option("--high-confidence", curate_opts.cfg.high_confidence)->capture_default_str();
  curate_cmd->add_option("--gap-high", curate_opts.cfg.gap_high)->capture_default_str();
  curate_cmd->add_option("--gap-low", curate_opts.cfg.gap_low)->capture_default_str();
  curate_cmd->add_option("--max-passes", curate_opts.cfg.max_passes)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  curate_cmd->add_option("--out-set", curate_opts.out_set, "Write curated pool rows, one per line");
  curate_cmd->add_option("--out-model", curate_opts.out_model, "Write the final model");
  curate_cmd->add_option("--report", curate_opts.report, "Write the pass report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(train_data, train_opts, train_split, train_out);
    if (*eval_cmd) return run_evaluate(eval_model, eval_data, eval_range, eval_confusion);
    if (*predict_cmd) return run_predict(predict_model, predict_data, predict_record);
    if (*curate_cmd) return run_curate(curate_data, curate_train, curate_opts);
  } catch (const std::exception& e) {
    std::cerr << "dboost: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
