#include "pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pathtext/csv.hpp"
#include "pathtext/pathtext.hpp"
#include "pathtext/random.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext::app {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kStageFile = "stage.json";

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string read_if_exists(const fs::path& p) {
  if (!fs::is_regular_file(p)) return {};
  return read_text_file(p, false);
}

/// A stage is reusable when its stage.json matches the expected key and
/// every listed artifact is still there.
bool stage_current(const fs::path& dir, const std::string& key,
                   std::initializer_list<const char*> artifacts) {
  if (read_if_exists(dir / kStageFile) != key) return false;
  for (const char* a : artifacts) {
    if (!fs::exists(dir / a)) return false;
  }
  return true;
}

void reset_dir(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
}

std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  out.push_back('\n');
  return out;
}

std::string preprocess_key(const RunConfig& cfg, const Corpus& corpus) {
  std::uint64_t h = fnv1a("corpus");
  for (const Report& r : corpus.reports()) {
    for (const std::string* f : {&r.id, &r.text, &r.diagnosis, &r.site}) {
      h = fnv1a(*f, h);
      h = fnv1a(std::string_view("\0", 1), h);
    }
  }
  if (cfg.stopwords_file) h = fnv1a(read_text_file(*cfg.stopwords_file), h);
  ordered_json key;
  key["stage"] = "preprocess";
  key["settings"] = json::parse(cfg.preprocess_settings());
  key["inputs"] = hex64(h);
  return key.dump(2) + "\n";
}

std::string upstream_hash(const fs::path& stage_dir) {
  return hex64(fnv1a(read_if_exists(stage_dir / kStageFile)));
}

std::string downstream_key(const char* stage, const std::string& settings,
                           const std::string& upstream) {
  ordered_json key;
  key["stage"] = stage;
  key["settings"] = json::parse(settings);
  key["upstream"] = upstream;
  return key.dump(2) + "\n";
}

struct Preprocessed {
  std::vector<TokenizedReport> train;
  std::vector<TokenizedReport> test;
  std::vector<std::string> labels;
};

Preprocessed load_preprocessed(const fs::path& dir) {
  Preprocessed out;
  const auto records = parse_csv(read_text_file(dir / "split.csv"));
  if (records.empty() || records[0].fields != std::vector<std::string>{"id", "side", "diagnosis", "tokens"}) {
    throw FormatError((dir / "split.csv").string() + ": bad header");
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i].fields;
    if (f.size() != 4) {
      throw FormatError((dir / "split.csv").string() + ":" + std::to_string(records[i].line) +
                        ": expected 4 fields");
    }
    TokenizedReport doc{f[0], split_whitespace(read_text_file(dir / f[3])), f[2]};
    if (f[1] == "train") out.train.push_back(std::move(doc));
    else if (f[1] == "test") out.test.push_back(std::move(doc));
    else throw FormatError((dir / "split.csv").string() + ": unknown side '" + f[1] + "'");
  }
  for (const auto* side : {&out.train, &out.test}) {
    for (const auto& d : *side) out.labels.push_back(d.diagnosis);
  }
  std::sort(out.labels.begin(), out.labels.end());
  out.labels.erase(std::unique(out.labels.begin(), out.labels.end()), out.labels.end());
  return out;
}

std::vector<Tokens> token_lists(const std::vector<TokenizedReport>& docs) {
  std::vector<Tokens> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(d.tokens);
  return out;
}

std::vector<std::size_t> encode_labels(const std::vector<TokenizedReport>& docs,
                                       const LabelEncoding& enc) {
  std::vector<std::size_t> y;
  y.reserve(docs.size());
  for (const auto& d : docs) y.push_back(enc.id(d.diagnosis));
  return y;
}

ordered_json result_json(const ClassifierResult& r) {
  ordered_json j;
  j["classifier"] = r.classifier;
  j["status"] = r.ok ? "ok" : "failed";
  if (!r.ok) j["error"] = r.error;
  ordered_json m;
  m["train-microF"] = r.train_micro_f;
  m["test-microF"] = r.test_micro_f;
  m["train-macroF"] = r.train_macro_f;
  m["test-macroF"] = r.test_macro_f;
  j["metrics"] = m;
  j["warnings"] = r.warnings;
  return j;
}

ClassifierResult result_from_json(const json& j) {
  ClassifierResult r;
  r.classifier = j.at("classifier").get<std::string>();
  r.ok = j.at("status").get<std::string>() == "ok";
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  const json& m = j.at("metrics");
  r.train_micro_f = m.at("train-microF").get<double>();
  r.test_micro_f = m.at("test-microF").get<double>();
  r.train_macro_f = m.at("train-macroF").get<double>();
  r.test_macro_f = m.at("test-macroF").get<double>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::string metrics_text(const ClassifierResult& r) {
  std::ostringstream out;
  const char* cols[] = {"train-microF", "test-microF", "train-macroF", "test-macroF"};
  const double vals[] = {r.train_micro_f, r.test_micro_f, r.train_macro_f, r.test_macro_f};
  for (int i = 0; i < 4; ++i) out << (i ? "  " : "") << cols[i];
  out << '\n';
  for (int i = 0; i < 4; ++i) {
    std::string v = r.ok ? fixed4(vals[i]) : "-";
    v.resize(std::string_view(cols[i]).size(), ' ');
    out << (i ? "  " : "") << v;
  }
  // strip trailing padding
  std::string s = out.str();
  while (!s.empty() && s.back() == ' ') s.pop_back();
  s.push_back('\n');
  if (!r.ok) s += "error: " + r.error + "\n";
  for (const auto& w : r.warnings) s += "warning: " + w + "\n";
  return s;
}

}  // namespace

fs::path preprocess_dir(const RunConfig& cfg) { return cfg.out_dir / "preprocess"; }
fs::path train_eval_dir(const RunConfig& cfg) { return cfg.out_dir / "train-eval"; }
fs::path keywords_dir(const RunConfig& cfg) { return cfg.out_dir / "keywords"; }

std::string safe_file_id(std::string_view id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < id.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(id[i]);
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                       c == '_' || c == '-' || (c == '.' && i > 0);
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

StageOutcome cmd_preprocess(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const fs::path dir = preprocess_dir(cfg);
  const Corpus corpus = load_corpus(cfg.manifest);
  const std::string key = preprocess_key(cfg, corpus);
  if (stage_current(dir, key, {"split.csv", "vocabulary.txt", "bigrams.tsv", "stats.json"})) {
    log << "preprocess: up to date (" << dir.string() << ")\n";
    return {true, dir};
  }
  reset_dir(dir);

  TrainTestSplit split = split_train_test(corpus, cfg.split_config());
  const PreprocessConfig pc = cfg.preprocess_config();
  auto [model, train_docs] = fit_preprocess(split.train, pc);
  const auto test_docs = apply_preprocess(split.test, pc, model);

  std::string manifest = "id,side,diagnosis,tokens\n";
  auto emit = [&](const std::vector<TokenizedReport>& docs, const char* side) {
    for (const auto& d : docs) {
      const std::string rel = "tokens/" + safe_file_id(d.id) + ".txt";
      write_file_atomic(dir / rel, join_tokens(d.tokens));
      manifest += csv_escape(d.id) + "," + side + "," + csv_escape(d.diagnosis) + "," +
                  csv_escape(rel) + "\n";
    }
  };
  emit(train_docs, "train");
  emit(test_docs, "test");
  write_file_atomic(dir / "split.csv", manifest);
  write_file_atomic(dir / "bigrams.tsv", model.bigrams.serialize());
  std::string vocab;
  for (const auto& t : model.kept_vocabulary) vocab += t + "\n";
  write_file_atomic(dir / "vocabulary.txt", vocab);

  std::vector<std::string> warnings = split.warnings;
  warnings.insert(warnings.end(), model.warnings.begin(), model.warnings.end());
  const FrequencyFilterStats& st = model.stats;
  ordered_json stats;
  stats["reports"] = corpus.size();
  stats["train_reports"] = split.train.size();
  stats["test_reports"] = split.test.size();
  stats["bigrams"] = model.bigrams.size();
  stats["vocabulary_before_filter"] = st.vocabulary_before;
  stats["vocabulary_kept"] = st.kept;
  stats["removed_low_df"] = st.removed_low_df;
  stats["removed_high_df"] = st.removed_high_df;
  stats["removed_by_both"] = st.removed_both;
  stats["low_df_threshold"] = cfg.low_df_threshold;
  stats["high_df_threshold"] = cfg.high_df_threshold;
  stats["low_df_rule"] = cfg.low_df_rule == LowDfRule::Every ? "every" : "any";
  stats["warnings"] = warnings;
  write_file_atomic(dir / "stats.json", stats.dump(2) + "\n");

  std::ostringstream txt;
  auto row = [&](std::string_view k, const std::string& v) {
    std::string key(k);
    key.resize(28, ' ');
    txt << key << v << '\n';
  };
  row("reports", std::to_string(corpus.size()));
  row("train reports", std::to_string(split.train.size()));
  row("test reports", std::to_string(split.test.size()));
  row("bigrams joined", std::to_string(model.bigrams.size()));
  row("vocabulary before filter", std::to_string(st.vocabulary_before));
  row("removed, low df rule", std::to_string(st.removed_low_df));
  row("removed, high df rule", std::to_string(st.removed_high_df));
  row("removed by both rules", std::to_string(st.removed_both));
  row("vocabulary kept", std::to_string(st.kept));
  for (const auto& w : warnings) txt << "warning: " << w << '\n';
  write_file_atomic(dir / "stats.txt", txt.str());

  write_file_atomic(dir / kStageFile, key);
  log << "preprocess: " << split.train.size() << " train, " << split.test.size() << " test, "
      << st.kept << " terms kept (" << dir.string() << ")\n";
  for (const auto& w : warnings) log << "warning: " << w << '\n';
  return {false, dir};
}

TrainEvalOutcome cmd_train_eval(const RunConfig& cfg, std::ostream& log) {
  cmd_preprocess(cfg, log);
  const fs::path dir = train_eval_dir(cfg);
  const std::string key =
      downstream_key("train-eval", cfg.train_eval_settings(), upstream_hash(preprocess_dir(cfg)));
  TrainEvalOutcome outcome;
  outcome.dir = dir;
  if (stage_current(dir, key, {"summary.json", "tfidf.model"})) {
    const json summary = json::parse(read_text_file(dir / "summary.json"));
    for (const json& r : summary.at("classifiers")) outcome.results.push_back(result_from_json(r));
    outcome.cached = true;
    log << "train-eval: up to date (" << dir.string() << ")\n";
    return outcome;
  }
  reset_dir(dir);

  const Preprocessed data = load_preprocessed(preprocess_dir(cfg));
  const TfidfModel tfidf = TfidfModel::fit(token_lists(data.train));
  write_file_atomic(dir / "tfidf.model", tfidf.serialize());
  const auto X_train = tfidf.transform_all(token_lists(data.train));
  const auto X_test = tfidf.transform_all(token_lists(data.test));
  const LabelEncoding encoding(data.labels);
  const auto y_train = encode_labels(data.train, encoding);
  const auto y_test = encode_labels(data.test, encoding);

  for (const ClassifierSpec& base : cfg.classifiers) {
    const ClassifierSpec spec = cfg.seeded(base);
    const std::string name(to_string(spec.kind));
    ClassifierResult r;
    r.classifier = name;
    try {
      const TrainedModel model = train(X_train, y_train, encoding, tfidf.dimension(), spec);
      write_file_atomic(dir / "models" / (name + ".model"), model.serialize());
      r.warnings = model.info().warnings;
      const EvalReport tr = evaluate(y_train, model.predict_all(X_train), encoding.classes(),
                                     cfg.macro_present_only);
      const EvalReport te = evaluate(y_test, model.predict_all(X_test), encoding.classes(),
                                     cfg.macro_present_only);
      r.train_micro_f = tr.micro_f;
      r.test_micro_f = te.micro_f;
      r.train_macro_f = tr.macro_f;
      r.test_macro_f = te.macro_f;
      r.ok = true;
      write_file_atomic(dir / "reports" / (name + ".train.txt"), tr.to_text());
      write_file_atomic(dir / "reports" / (name + ".test.txt"), te.to_text());
      write_file_atomic(dir / "reports" / (name + ".train.json"), tr.to_json());
      write_file_atomic(dir / "reports" / (name + ".test.json"), te.to_json());
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
    write_file_atomic(dir / "metrics" / (name + ".json"), result_json(r).dump(2) + "\n");
    write_file_atomic(dir / "metrics" / (name + ".txt"), metrics_text(r));
    log << "train-eval: " << name << (r.ok ? " done" : " failed: " + r.error) << '\n';
    for (const auto& w : r.warnings) log << "warning: " << name << ": " << w << '\n';
    outcome.results.push_back(std::move(r));
  }

  write_file_atomic(dir / "summary.txt", format_results_table(outcome.results));
  write_file_atomic(dir / "summary.json", results_json(outcome.results));
  write_file_atomic(dir / kStageFile, key);
  return outcome;
}

std::string format_results_table(const std::vector<ClassifierResult>& results) {
  const std::vector<std::string> header = {"classifier",   "train-microF", "test-microF",
                                           "train-macroF", "test-macroF",  "status"};
  std::vector<std::vector<std::string>> rows = {header};
  for (const auto& r : results) {
    if (r.ok) {
      rows.push_back({r.classifier, fixed4(r.train_micro_f), fixed4(r.test_micro_f),
                      fixed4(r.train_macro_f), fixed4(r.test_macro_f),
                      r.warnings.empty() ? "ok" : "ok (warnings)"});
    } else {
      rows.push_back({r.classifier, "-", "-", "-", "-", "failed"});
    }
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      // numbers right-aligned, text left-aligned
      const bool numeric = c > 0 && c + 1 < row.size();
      if (numeric) cell.insert(0, width[c] - cell.size(), ' ');
      else cell.resize(width[c], ' ');
      line += (c ? "  " : "") + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string results_json(const std::vector<ClassifierResult>& results) {
  ordered_json j;
  j["classifiers"] = ordered_json::array();
  for (const auto& r : results) j["classifiers"].push_back(result_json(r));
  return j.dump(2) + "\n";
}

KeywordsOutcome cmd_keywords(const RunConfig& cfg, const std::string& report_id,
                             std::ostream& log) {
  cmd_preprocess(cfg, log);
  const fs::path dir = keywords_dir(cfg);
  const std::string upstream = upstream_hash(preprocess_dir(cfg));
  const Preprocessed data = load_preprocessed(preprocess_dir(cfg));

  // Pick the report before any expensive work so a bad id fails fast.
  std::vector<const TokenizedReport*> all;
  for (const auto& d : data.train) all.push_back(&d);
  for (const auto& d : data.test) all.push_back(&d);
  if (all.empty()) throw ValidationError("keywords: corpus has no reports");
  std::size_t pick = all.size();
  if (report_id == "random") {
    Rng rng(derive_seed(cfg.seed, "keywords/report"));
    pick = rng.uniform_index(all.size());
  } else {
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i]->id == report_id) pick = i;
    }
  }
  if (pick == all.size()) {
    std::vector<std::string> ids;
    for (const auto* d : all) ids.push_back(d->id);
    std::sort(ids.begin(), ids.end());
    std::string msg = "unknown report id '" + report_id + "'; available ids:";
    for (const auto& id : ids) msg += " " + id;
    throw ValidationError(msg);
  }
  const TokenizedReport& report = *all[pick];

  // Reuse the classifier stage's TF-IDF model when it is current, else fit it.
  TfidfModel tfidf;
  const fs::path te_dir = train_eval_dir(cfg);
  const std::string te_key =
      downstream_key("train-eval", cfg.train_eval_settings(), upstream);
  if (stage_current(te_dir, te_key, {"tfidf.model"})) {
    tfidf = TfidfModel::deserialize(read_text_file(te_dir / "tfidf.model"));
  } else {
    tfidf = TfidfModel::fit(token_lists(data.train));
  }

  const std::string key = downstream_key("keywords", cfg.keywords_settings(), upstream);
  TopicModel lda;
  if (stage_current(dir, key, {"lda.model"})) {
    lda = TopicModel::deserialize(read_text_file(dir / "lda.model"));
    log << "keywords: reusing topic model (" << dir.string() << ")\n";
  } else {
    reset_dir(dir);
    lda = fit_lda(token_lists(data.train), cfg.lda_config());
    write_file_atomic(dir / "lda.model", lda.serialize());
    write_file_atomic(dir / kStageFile, key);
    log << "keywords: fitted " << lda.n_topics << "-topic model on " << data.train.size()
        << " reports\n";
  }

  const KeywordSet keywords =
      top_keywords(tfidf.transform(report.tokens), tfidf, cfg.keywords.top_n, report.id);
  std::vector<double> theta;
  if (pick < data.train.size()) {
    theta = lda.theta[pick];
  } else {
    theta = lda.infer_theta(report.tokens, cfg.keywords.infer_iterations,
                            derive_seed(cfg.seed, "keywords/infer"));
  }
  const auto topics = assign_topics(keywords, lda, theta);
  const RenderedReport rendered = render_highlighted(report, keywords, topics, lda.n_topics);

  KeywordsOutcome out;
  out.report_id = report.id;
  out.html = dir / (safe_file_id(report.id) + ".keywords.html");
  out.json = dir / (safe_file_id(report.id) + ".keywords.json");
  write_file_atomic(out.html, rendered.html);
  write_file_atomic(out.json, rendered.json);
  log << "keywords: " << report.id << ": " << format_top_keywords(keywords) << '\n';
  return out;
}

RunAllOutcome cmd_run_all(const RunConfig& cfg, const std::string& report_id, std::ostream& log) {
  RunAllOutcome out;
  out.train_eval = cmd_train_eval(cfg, log);
  out.keywords = cmd_keywords(cfg, report_id, log);
  return out;
}

}  // namespace pathtext::app
