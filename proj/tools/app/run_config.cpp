#include "run_config.hpp"

#include <json.hpp>

#include "pathtext/error.hpp"
#include "pathtext/random.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("config: unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<T>();
}

ClassifierSpec parse_classifier(const json& j) {
  if (j.is_string()) {
    ClassifierSpec spec;
    spec.kind = parse_classifier_kind(j.get<std::string>());
    return spec;
  }
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError("config: classifier entries must be a kind name or an object with 'kind'");
  }
  reject_unknown(j,
                 {"kind", "C", "gamma", "l2_penalty", "shrinking", "max_iter", "tol", "max_depth",
                  "learning_rate", "n_rounds", "reg_lambda", "min_child_weight",
                  "early_stopping_rounds"},
                 "classifier");
  ClassifierSpec spec;
  spec.kind = parse_classifier_kind(j.at("kind").get<std::string>());
  read_if(j, "C", spec.C);
  read_if(j, "gamma", spec.gamma);
  read_if(j, "l2_penalty", spec.l2_penalty);
  read_if(j, "shrinking", spec.shrinking);
  read_if(j, "max_iter", spec.max_iter);
  read_if(j, "tol", spec.tol);
  read_if(j, "max_depth", spec.max_depth);
  read_if(j, "learning_rate", spec.learning_rate);
  read_if(j, "n_rounds", spec.n_rounds);
  read_if(j, "reg_lambda", spec.reg_lambda);
  read_if(j, "min_child_weight", spec.min_child_weight);
  read_if(j, "early_stopping_rounds", spec.early_stopping_rounds);
  return spec;
}

json spec_json(const ClassifierSpec& s) {
  return json{{"kind", to_string(s.kind)},
              {"C", s.C},
              {"gamma", s.gamma},
              {"l2_penalty", s.l2_penalty},
              {"shrinking", s.shrinking},
              {"max_iter", s.max_iter},
              {"tol", s.tol},
              {"max_depth", s.max_depth},
              {"learning_rate", s.learning_rate},
              {"n_rounds", s.n_rounds},
              {"reg_lambda", s.reg_lambda},
              {"min_child_weight", s.min_child_weight},
              {"early_stopping_rounds", s.early_stopping_rounds}};
}

}  // namespace

std::vector<ClassifierSpec> RunConfig::default_classifiers() {
  std::vector<ClassifierSpec> specs;
  for (ClassifierKind k : kAllClassifierKinds) {
    ClassifierSpec s;
    s.kind = k;
    specs.push_back(s);
  }
  return specs;
}

RunConfig RunConfig::from_json(std::string_view text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  reject_unknown(j, {"manifest", "out_dir", "seed", "split", "preprocess", "classifiers", "eval",
                     "keywords"},
                 "config");

  RunConfig cfg;
  auto resolve = [&](const std::string& p) {
    fs::path path = p;
    return path.is_relative() ? base_dir / path : path;
  };
  try {
    if (j.contains("manifest")) cfg.manifest = resolve(j.at("manifest").get<std::string>());
    if (j.contains("out_dir")) cfg.out_dir = resolve(j.at("out_dir").get<std::string>());
    read_if(j, "seed", cfg.seed);

    if (j.contains("split")) {
      const json& s = j.at("split");
      reject_unknown(s, {"train_fraction", "stratified"}, "split");
      read_if(s, "train_fraction", cfg.train_fraction);
      read_if(s, "stratified", cfg.stratified);
    }
    if (j.contains("preprocess")) {
      const json& p = j.at("preprocess");
      reject_unknown(p,
                     {"stopwords_file", "bigram_min_count", "bigram_min_score", "low_df_threshold",
                      "high_df_threshold", "low_df_rule"},
                     "preprocess");
      if (p.contains("stopwords_file") && !p.at("stopwords_file").is_null()) {
        cfg.stopwords_file = resolve(p.at("stopwords_file").get<std::string>());
      }
      read_if(p, "bigram_min_count", cfg.bigram_min_count);
      read_if(p, "bigram_min_score", cfg.bigram_min_score);
      read_if(p, "low_df_threshold", cfg.low_df_threshold);
      read_if(p, "high_df_threshold", cfg.high_df_threshold);
      if (p.contains("low_df_rule")) {
        const auto rule = p.at("low_df_rule").get<std::string>();
        if (rule == "every") cfg.low_df_rule = LowDfRule::Every;
        else if (rule == "any") cfg.low_df_rule = LowDfRule::Any;
        else throw ValidationError("config: low_df_rule must be 'every' or 'any'");
      }
    }
    if (j.contains("classifiers")) {
      cfg.classifiers.clear();
      for (const json& c : j.at("classifiers")) cfg.classifiers.push_back(parse_classifier(c));
    }
    if (j.contains("eval")) {
      const json& e = j.at("eval");
      reject_unknown(e, {"macro_over"}, "eval");
      if (e.contains("macro_over")) {
        const auto over = e.at("macro_over").get<std::string>();
        if (over == "all") cfg.macro_present_only = false;
        else if (over == "present") cfg.macro_present_only = true;
        else throw ValidationError("config: eval.macro_over must be 'all' or 'present'");
      }
    }
    if (j.contains("keywords")) {
      const json& k = j.at("keywords");
      reject_unknown(k, {"top_n", "topics", "alpha", "beta", "iterations", "infer_iterations"},
                     "keywords");
      read_if(k, "top_n", cfg.keywords.top_n);
      read_if(k, "topics", cfg.keywords.topics);
      read_if(k, "alpha", cfg.keywords.alpha);
      read_if(k, "beta", cfg.keywords.beta);
      read_if(k, "iterations", cfg.keywords.iterations);
      read_if(k, "infer_iterations", cfg.keywords.infer_iterations);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig RunConfig::load(const fs::path& path) {
  return from_json(read_text_file(path), path.parent_path());
}

void RunConfig::validate() const {
  if (manifest.empty()) throw ValidationError("config: no manifest given");
  if (!fs::is_regular_file(manifest)) {
    throw ValidationError("config: manifest not found: " + manifest.string());
  }
  if (stopwords_file && !fs::is_regular_file(*stopwords_file)) {
    throw ValidationError("config: stopword file not found: " + stopwords_file->string());
  }
  split_config().validate();
  PreprocessConfig pc;
  pc.bigram_min_count = bigram_min_count;
  pc.bigram_min_score = bigram_min_score;
  pc.low_df_threshold = low_df_threshold;
  pc.high_df_threshold = high_df_threshold;
  pc.validate();
  if (classifiers.empty()) throw ValidationError("config: no classifiers selected");
  for (std::size_t i = 0; i < classifiers.size(); ++i) {
    classifiers[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (classifiers[j].kind == classifiers[i].kind) {
        throw ValidationError("config: classifier '" + std::string(to_string(classifiers[i].kind)) +
                              "' listed twice");
      }
    }
  }
  if (keywords.top_n < 1) throw ValidationError("config: keywords.top_n must be >= 1");
  lda_config().validate();
}

SplitConfig RunConfig::split_config() const {
  return SplitConfig{train_fraction, derive_seed(seed, "split"), stratified};
}

PreprocessConfig RunConfig::preprocess_config() const {
  PreprocessConfig pc;
  pc.stopwords = stopwords_file ? load_stopwords(*stopwords_file) : default_stopwords();
  pc.bigram_min_count = bigram_min_count;
  pc.bigram_min_score = bigram_min_score;
  pc.low_df_threshold = low_df_threshold;
  pc.high_df_threshold = high_df_threshold;
  pc.low_df_rule = low_df_rule;
  return pc;
}

ClassifierSpec RunConfig::seeded(const ClassifierSpec& spec) const {
  ClassifierSpec s = spec;
  s.seed = derive_seed(seed, std::string("classifier/") + std::string(to_string(spec.kind)));
  return s;
}

LdaConfig RunConfig::lda_config() const {
  LdaConfig lc;
  lc.topics = keywords.topics;
  lc.alpha = keywords.alpha;
  lc.beta = keywords.beta;
  lc.iterations = keywords.iterations;
  lc.seed = derive_seed(seed, "lda");
  return lc;
}

std::string RunConfig::preprocess_settings() const {
  json j{{"seed", seed},
         {"train_fraction", train_fraction},
         {"stratified", stratified},
         {"stopwords_file", stopwords_file ? stopwords_file->string() : std::string()},
         {"bigram_min_count", bigram_min_count},
         {"bigram_min_score", bigram_min_score},
         {"low_df_threshold", low_df_threshold},
         {"high_df_threshold", high_df_threshold},
         {"low_df_rule", low_df_rule == LowDfRule::Every ? "every" : "any"}};
  return j.dump();
}

std::string RunConfig::train_eval_settings() const {
  json specs = json::array();
  for (const auto& c : classifiers) specs.push_back(spec_json(c));
  return json{{"seed", seed}, {"classifiers", specs}, {"macro_present_only", macro_present_only}}
      .dump();
}

std::string RunConfig::keywords_settings() const {
  return json{{"seed", seed},
              {"topics", keywords.topics},
              {"alpha", keywords.alpha},
              {"beta", keywords.beta},
              {"iterations", keywords.iterations}}
      .dump();
}

}  // namespace pathtext::app
