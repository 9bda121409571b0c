#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "app/pipeline.hpp"
#include "app/run_config.hpp"
#include "pathtext/classifiers.hpp"
#include "pathtext/error.hpp"
#include "pathtext/text_io.hpp"

namespace {

using pathtext::app::RunConfig;

struct Overrides {
  std::string config;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> classifiers;
  std::string stopwords;
  std::optional<std::size_t> topics;
  std::optional<std::size_t> top_n;
  std::string report_id = "random";
  std::string format = "text";
};

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : RunConfig::load(o.config);
  if (!o.manifest.empty()) cfg.manifest = o.manifest;
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (!o.stopwords.empty()) cfg.stopwords_file = o.stopwords;
  if (!o.classifiers.empty()) {
    std::vector<pathtext::ClassifierSpec> chosen;
    for (const std::string& name : o.classifiers) {
      const auto kind = pathtext::parse_classifier_kind(name);
      pathtext::ClassifierSpec spec;
      spec.kind = kind;
      // keep hyperparameters from the config file when it lists this kind
      for (const auto& c : cfg.classifiers) {
        if (c.kind == kind) spec = c;
      }
      chosen.push_back(spec);
    }
    cfg.classifiers = chosen;
  }
  if (o.topics) cfg.keywords.topics = *o.topics;
  if (o.top_n) cfg.keywords.top_n = *o.top_n;
  cfg.validate();
  return cfg;
}

int print_results(const pathtext::app::TrainEvalOutcome& te, const std::string& format) {
  if (format == "json") {
    std::cout << pathtext::app::results_json(te.results);
  } else {
    std::cout << pathtext::app::format_results_table(te.results);
  }
  for (const auto& r : te.results) {
    if (!r.ok) {
      std::cerr << "error: " << r.classifier << ": " << r.error << '\n';
    }
  }
  for (const auto& r : te.results) {
    if (!r.ok) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathology report classification and keyword extraction"};
  app.require_subcommand(1);
  Overrides o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--manifest", o.manifest, "CSV manifest (id,path,diagnosis,site)");
    sub->add_option("--seed", o.seed, "Root seed for every stochastic stage");
    sub->add_option("--out-dir", o.out_dir, "Output directory");
    sub->add_option("--stopwords", o.stopwords, "Stopword file replacing the bundled list");
  };
  auto add_train = [&](CLI::App* sub) {
    sub->add_option("--classifier", o.classifiers,
                    "svm_linear, svm_rbf, logreg or gbt; repeatable")
        ->delimiter(',');
    sub->add_option("--format", o.format, "Metrics output on stdout")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto add_keywords = [&](CLI::App* sub) {
    sub->add_option("--report-id", o.report_id, "Report to render, or 'random'");
    sub->add_option("--topics", o.topics, "Number of LDA topics");
    sub->add_option("--top-n", o.top_n, "Keywords per report");
  };

  auto* pre = app.add_subcommand("preprocess", "Split, tokenize and filter the corpus");
  add_common(pre);
  auto* te = app.add_subcommand("train-eval", "Train and evaluate classifiers");
  add_common(te);
  add_train(te);
  auto* kw = app.add_subcommand("keywords", "Render topic-colored keywords for one report");
  add_common(kw);
  add_keywords(kw);
  auto* all = app.add_subcommand("run-all", "Run every stage");
  add_common(all);
  add_train(all);
  add_keywords(all);
  auto* rep = app.add_subcommand("report", "Print stored evaluation reports");
  add_common(rep);
  add_train(rep);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(o);
    if (*pre) {
      pathtext::app::cmd_preprocess(cfg, std::cerr);
      std::cout << pathtext::read_text_file(pathtext::app::preprocess_dir(cfg) / "stats.txt");
      return 0;
    }
    if (*te) return print_results(pathtext::app::cmd_train_eval(cfg, std::cerr), o.format);
    if (*kw) {
      const auto out = pathtext::app::cmd_keywords(cfg, o.report_id, std::cerr);
      std::cout << out.html.string() << '\n' << out.json.string() << '\n';
      return 0;
    }
    if (*all) {
      const auto out = pathtext::app::cmd_run_all(cfg, o.report_id, std::cerr);
      const int rc = print_results(out.train_eval, o.format);
      std::cout << out.keywords.html.string() << '\n' << out.keywords.json.string() << '\n';
      return rc;
    }
    if (*rep) {
      const auto dir = pathtext::app::train_eval_dir(cfg);
      for (const auto& spec : cfg.classifiers) {
        const std::string name(pathtext::to_string(spec.kind));
        const std::string ext = o.format == "json" ? ".json" : ".txt";
        for (const char* side : {"train", "test"}) {
          const auto path = dir / "reports" / (name + "." + side + ext);
          if (!std::filesystem::exists(path)) continue;
          std::cout << "== " << name << " (" << side << ")\n"
                    << pathtext::read_text_file(path) << '\n';
        }
      }
      return 0;
    }
  } catch (const pathtext::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
