// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "app/pipeline.hpp"
#include "support/fixtures.hpp"

namespace pt = pathtext;
namespace ptt = pathtext::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(const char* name, double limit_seconds, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    o.pass = false;
    o.detail += " (over time limit " + std::to_string(limit_seconds) + " s)";
  }
  std::printf("%s  %-34s %.2fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome tfidf_oracle() {
  pt::Rng rng(1001);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const auto train = ptt::random_micro_corpus(rng);
    const auto model = pt::TfidfModel::fit(train);
    for (const auto& doc : train) {
      const auto expected = ptt::tfidf_oracle(train, doc);
      const auto got = model.transform(doc);
      if (got.nnz() != expected.size()) return {false, "support mismatch in corpus " + std::to_string(c)};
      for (const auto& e : got.entries()) {
        worst = std::max(worst, std::abs(e.weight - expected.at(model.vocabulary().term(e.index))));
      }
    }
  }
  return {worst <= 1e-12, "max abs error " + fmt(worst)};
}

Outcome metric_oracle() {
  pt::Rng rng(1002);
  for (int f = 0; f < 1000; ++f) {
    const std::size_t n = 1 + rng.uniform_index(50), k = 1 + rng.uniform_index(10);
    std::vector<std::size_t> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = rng.uniform_index(k);
      pred[i] = rng.uniform_index(k);
    }
    const auto t = pt::tally(gold, pred, k);
    const auto o = ptt::metric_oracle(gold, pred, k);
    if (pt::micro_f(t) != o.micro_f || pt::macro_f(t) != o.macro_f) {
      return {false, "oracle mismatch at fixture " + std::to_string(f)};
    }
    if (pt::micro_f(t) != o.accuracy) return {false, "micro-F != accuracy at fixture " + std::to_string(f)};
  }
  return {true, "1000 fixtures exact, micro-F == accuracy"};
}

Outcome split_arithmetic() {
  std::vector<pt::Report> reports;
  for (int i = 0; i < 1949; ++i) reports.push_back({"r" + std::to_string(i), "t", "dx" + std::to_string(i % 37), "s"});
  const auto s = pt::split_train_test(pt::Corpus(reports), {0.70, 7, false});
  return {s.train.size() == 1364 && s.test.size() == 585,
          std::to_string(s.train.size()) + "/" + std::to_string(s.test.size())};
}

Outcome separable_classifiers() {
  const auto d = ptt::vectorize_split(ptt::separable_reports(200, 7), 8);
  std::map<pt::ClassifierKind, std::pair<double, double>> f;
  for (auto kind : pt::kAllClassifierKinds) {
    pt::ClassifierSpec s;
    s.kind = kind;
    s.seed = pt::derive_seed(42, std::string("classifier/") + std::string(pt::to_string(kind)));
    const auto m = pt::train(d.X_train, d.y_train, d.encoding, d.tfidf.dimension(), s);
    f[kind] = {ptt::micro_f_of(m, d.X_train, d.y_train), ptt::micro_f_of(m, d.X_test, d.y_test)};
  }
  bool ok = true;
  std::string detail;
  for (auto kind : pt::kAllClassifierKinds) {
    const auto [tr, te] = f[kind];
    detail += std::string(pt::to_string(kind)) + " " + fmt(tr) + "/" + fmt(te) + " ";
    ok = ok && tr >= te;
    if (kind != pt::ClassifierKind::SvmRbf) ok = ok && te >= 0.95;
  }
  ok = ok && f[pt::ClassifierKind::Gbt].first >= f[pt::ClassifierKind::SvmLinear].first;
  return {ok, detail + "(train/test micro-F)"};
}

Outcome gradient_checks() {
  double worst_lr = 0.0, worst_gbt = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    pt::Rng rng(5000 + seed);
    std::vector<pt::SparseVector> X;
    std::vector<int> labels;
    std::vector<std::size_t> y;
    std::vector<double> scores;
    for (int i = 0; i < 10; ++i) {
      X.push_back(ptt::random_sparse(rng, 6, 3));
      labels.push_back(rng.uniform_index(2) ? 1 : -1);
      y.push_back(rng.uniform_index(3));
      for (int k = 0; k < 3; ++k) scores.push_back(2 * rng.uniform_real() - 1);
    }
    std::vector<double> theta(7);
    for (double& v : theta) v = 2 * rng.uniform_real() - 1;
    const auto g = pt::logreg_gradient(theta, X, labels, 1.0, true);
    std::vector<double> fd(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
      auto hi = theta, lo = theta;
      hi[j] += 1e-5;
      lo[j] -= 1e-5;
      fd[j] = (pt::logreg_objective(hi, X, labels, 1.0, true) - pt::logreg_objective(lo, X, labels, 1.0, true)) / 2e-5;
    }
    worst_lr = std::max(worst_lr, ptt::relative_error(g, fd));

    std::vector<std::size_t> leaf(10);
    for (auto& l : leaf) l = rng.uniform_index(3);
    std::vector<double> w(3);
    for (double& v : w) v = 2 * rng.uniform_real() - 1;
    const std::size_t k = seed % 3;
    const auto gg = pt::leaf_weight_gradient(scores, y, 3, k, leaf, w, 1.0);
    std::vector<double> fd2(3);
    for (std::size_t j = 0; j < 3; ++j) {
      auto hi = w, lo = w;
      hi[j] += 1e-5;
      lo[j] -= 1e-5;
      fd2[j] = (pt::leaf_weight_objective(scores, y, 3, k, leaf, hi, 1.0) -
                pt::leaf_weight_objective(scores, y, 3, k, leaf, lo, 1.0)) / 2e-5;
    }
    worst_gbt = std::max(worst_gbt, ptt::relative_error(gg, fd2));
  }
  return {worst_lr <= 1e-5 && worst_gbt <= 1e-5,
          "max relative error logreg " + fmt(worst_lr) + ", gbt " + fmt(worst_gbt)};
}

Outcome boosting_monotonicity() {
  const auto d = ptt::vectorize_split(ptt::separable_reports(200, 7), 8);
  pt::ClassifierSpec s;
  s.kind = pt::ClassifierKind::Gbt;
  s.n_rounds = 100;
  s.early_stopping_rounds = 0;
  const auto m = pt::train(d.X_train, d.y_train, d.encoding, d.tfidf.dimension(), s);
  const auto& h = m.info().loss_history;
  if (h.size() != 100) return {false, "expected 100 rounds, got " + std::to_string(h.size())};
  double worst = 0.0;
  for (std::size_t r = 1; r < h.size(); ++r) worst = std::max(worst, h[r] - h[r - 1]);
  return {worst <= 1e-9, "largest increase " + fmt(worst) + ", final loss " + fmt(h.back())};
}

Outcome lda_recovery() {
  const auto docs = ptt::two_group_docs(40, 50, 11);
  pt::LdaConfig cfg;
  cfg.topics = 2;
  cfg.iterations = 500;
  cfg.seed = 13;
  pt::LdaSampler sampler(docs, cfg);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    sampler.sweep();
    const auto snap = sampler.snapshot();
    worst = std::max({worst, ptt::max_row_sum_error(snap.phi), ptt::max_row_sum_error(snap.theta)});
  }
  const double purity = sampler.topic_purity();
  return {purity >= 0.9 && worst <= 1e-9,
          "purity " + fmt(purity) + " (alpha " + fmt(cfg.effective_alpha()) + "), row-sum error " + fmt(worst)};
}

Outcome preprocessing_rules() {
  std::vector<std::string> failed;
  // lowercase / strip
  if (pt::normalize_and_tokenize("Lung, Parenchyma!") != pt::Tokens{"lung", "parenchyma"}) failed.push_back("normalize");
  // stopwords
  const auto cfg = pt::PreprocessConfig::with_default_stopwords();
  if (pt::remove_stopwords({"the", "tumor", "was", "necrotic"}, cfg) != pt::Tokens{"tumor", "necrotic"}) failed.push_back("stopwords");
  // bigram join
  {
    std::vector<pt::Tokens> docs;
    pt::Rng rng(3);
    for (int d = 0; d < 50; ++d) {
      pt::Tokens t;
      for (int i = 0; i < 30; ++i) t.push_back("f" + std::to_string(rng.uniform_index(40)));
      t.insert(t.begin() + 5, {"lymph", "node"});
      docs.push_back(t);
    }
    const auto table = pt::detect_bigrams(docs, cfg);
    if (!table.contains("lymph", "node") ||
        pt::join_bigrams({"lymph", "node", "biopsy"}, table) != pt::Tokens{"lymph-node", "biopsy"}) {
      failed.push_back("bigram");
    }
  }
  // low-df rule, every-category semantics: 0/10 in A, 1/10 in B -> kept
  {
    std::vector<pt::TokenizedReport> docs;
    for (int i = 0; i < 10; ++i) docs.push_back({"a" + std::to_string(i), {"filler"}, "A"});
    for (int i = 0; i < 10; ++i) docs.push_back({"b" + std::to_string(i), i ? pt::Tokens{"other"} : pt::Tokens{"other", "marker"}, "B"});
    auto c = cfg;
    c.high_df_threshold = 0.99;
    const bool kept = pt::frequency_filter(docs, c).kept_vocabulary.contains("marker");
    c.low_df_threshold = 0.15;
    const bool removed = !pt::frequency_filter(docs, c).kept_vocabulary.contains("marker");
    if (!kept || !removed) failed.push_back("low-df");
  }
  // high-df rule: a word in 95% of documents is removed at 0.90
  {
    std::vector<pt::TokenizedReport> docs;
    for (int i = 0; i < 20; ++i) {
      pt::Tokens t = {"w" + std::to_string(i % 4)};
      if (i) t.push_back("common");
      docs.push_back({"d" + std::to_string(i), t, i % 2 ? "A" : "B"});
    }
    const auto r = pt::frequency_filter(docs, cfg);
    if (r.kept_vocabulary.contains("common") || r.stats.removed_high_df != 1) failed.push_back("high-df");
  }
  std::string detail = failed.empty() ? "5/5 rules" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

std::map<std::string, std::string> result_files(const fs::path& out) {
  std::map<std::string, std::string> files;
  for (const auto& sub : {"train-eval/metrics", "keywords"}) {
    for (const auto& e : fs::directory_iterator(out / sub)) {
      const auto name = e.path().filename().string();
      if (name.ends_with(".model") || name == "stage.json") continue;
      files[std::string(sub) + "/" + name] = pt::read_text_file(e.path(), false);
    }
  }
  return files;
}

Outcome run_all_determinism() {
  ptt::TempDir dir("acceptance");
  std::vector<ptt::ManifestRow> rows;
  pt::Rng rng(77);
  const char* sites[] = {"kidney", "lung", "testis", "thymus"};
  for (int i = 0; i < 60; ++i) {
    std::string text = "Specimen received.";
    for (int k = 0; k < 15; ++k) text += " " + std::string(sites[i % 4]) + "w" + std::to_string(rng.uniform_index(8));
    rows.push_back({"report-" + std::to_string(i), text, std::string(sites[i % 4]) + " dx", sites[i % 4]});
  }
  pathtext::app::RunConfig cfg;
  cfg.manifest = ptt::write_corpus(dir / "data", rows);
  cfg.seed = 2019;
  cfg.keywords.iterations = 200;
  std::ostringstream log;
  cfg.out_dir = dir / "run1";
  const auto a = pathtext::app::cmd_run_all(cfg, "random", log);
  cfg.out_dir = dir / "run2";
  const auto b = pathtext::app::cmd_run_all(cfg, "random", log);
  const auto fa = result_files(dir / "run1"), fb = result_files(dir / "run2");
  return {fa == fb && a.keywords.report_id == b.keywords.report_id && fa.size() >= 10,
          std::to_string(fa.size()) + " metric/keyword files compared"};
}

Outcome keyword_rendering() {
  pt::TokenizedReport report{"thymus-7", {"epithelial", "cells", "thymoma", "of", "epithelial", "origin"}, "Thymoma"};
  pt::KeywordSet kws{"thymus-7", {{"epithelial", 0.37749}, {"thymoma", 0.2}, {"cells", 0.0004}}};
  const std::vector<std::size_t> topics = {0, 1, 2};
  const auto r = pt::render_highlighted(report, kws, topics, 3);
  const std::string legend = pt::format_top_keywords(kws);
  const bool format_ok = legend == "1. epithelial (0.377), 2. thymoma (0.200), 3. cells (0.000)" &&
                         r.html.find("epithelial (0.377)") != std::string::npos;
  const bool roundtrip = pt::rendered_report_text(r.html) == "epithelial cells thymoma of epithelial origin";
  return {format_ok && roundtrip, "legend \"" + legend.substr(0, 22) + "...\", round-trip " + (roundtrip ? "exact" : "differs")};
}

}  // namespace

int main() {
  run("tfidf-oracle-equivalence", 5, tfidf_oracle);
  run("metric-oracle-equivalence", 5, metric_oracle);
  run("split-arithmetic-1949", 1, split_arithmetic);
  run("classifiers-separable-fixture", 60, separable_classifiers);
  run("gradient-checks", 10, gradient_checks);
  run("boosting-monotonicity", 0, boosting_monotonicity);
  run("lda-recovery", 30, lda_recovery);
  run("preprocessing-rules", 0, preprocessing_rules);
  run("run-all-determinism", 0, run_all_determinism);
  run("keyword-rendering", 0, keyword_rendering);
  std::printf("%d failed\n", failures);
  return failures;
}
