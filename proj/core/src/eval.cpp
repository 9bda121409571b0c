#include "pathtext/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "pathtext/error.hpp"

namespace pathtext {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

/// Harmonic mean of precision and recall in count form, 2TP / (2TP + FP + FN),
/// so the result is rounded once. For single-label data the summed FP and FN
/// are equal and micro F reduces to TP / n exactly.
double f_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  return ratio(2 * tp, 2 * tp + fp + fn);
}

std::size_t sum(const std::vector<std::size_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{0});
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::size_t ConfusionTally::n_instances() const { return sum(tp) + sum(fn); }

ConfusionTally tally(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                     std::size_t n_classes) {
  if (gold.size() != pred.size()) {
    throw ValidationError("tally: gold has " + std::to_string(gold.size()) +
                          " labels but pred has " + std::to_string(pred.size()));
  }
  if (gold.empty()) throw ValidationError("tally: no instances");
  ConfusionTally t{std::vector<std::size_t>(n_classes, 0), std::vector<std::size_t>(n_classes, 0),
                   std::vector<std::size_t>(n_classes, 0)};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= n_classes || pred[i] >= n_classes) {
      throw ValidationError("tally: class id out of range at position " + std::to_string(i));
    }
    if (gold[i] == pred[i]) {
      ++t.tp[gold[i]];
    } else {
      ++t.fp[pred[i]];
      ++t.fn[gold[i]];
    }
  }
  return t;
}

ClassScores class_scores(const ConfusionTally& t, std::size_t j) {
  ClassScores s;
  s.support = t.tp[j] + t.fn[j];
  s.predicted = t.tp[j] + t.fp[j];
  s.precision = ratio(t.tp[j], s.predicted);
  s.recall = ratio(t.tp[j], s.support);
  s.f = f_from_counts(t.tp[j], t.fp[j], t.fn[j]);
  return s;
}

double micro_precision(const ConfusionTally& t) { return ratio(sum(t.tp), sum(t.tp) + sum(t.fp)); }

double micro_recall(const ConfusionTally& t) { return ratio(sum(t.tp), sum(t.tp) + sum(t.fn)); }

double micro_f(const ConfusionTally& t) { return f_from_counts(sum(t.tp), sum(t.fp), sum(t.fn)); }

double macro_f(const ConfusionTally& t, bool present_only) {
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t j = 0; j < t.n_classes(); ++j) {
    if (present_only && t.tp[j] + t.fp[j] + t.fn[j] == 0) continue;
    total += class_scores(t, j).f;
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

EvalReport evaluate(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                    const std::vector<std::string>& classes, bool macro_present_only) {
  const ConfusionTally t = tally(gold, pred, classes.size());
  EvalReport r;
  r.micro_precision = micro_precision(t);
  r.micro_recall = micro_recall(t);
  r.micro_f = micro_f(t);
  r.macro_f = macro_f(t, macro_present_only);
  r.n_instances = gold.size();
  r.classes = classes;
  for (std::size_t j = 0; j < classes.size(); ++j) r.per_class.push_back(class_scores(t, j));
  return r;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "instances        " << n_instances << '\n';
  out << "micro_precision  " << fixed(micro_precision, 4) << '\n';
  out << "micro_recall     " << fixed(micro_recall, 4) << '\n';
  out << "micro_f          " << fixed(micro_f, 4) << '\n';
  out << "macro_f          " << fixed(macro_f, 4) << '\n';
  std::size_t width = 5;
  for (const auto& c : classes) width = std::max(width, c.size());
  char line[64];
  out << '\n' << std::string("class") << std::string(width - 5 + 2, ' ');
  std::snprintf(line, sizeof line, "%9s %9s %9s %8s %9s\n", "precision", "recall", "f", "support",
                "predicted");
  out << line;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    const ClassScores& s = per_class[j];
    out << classes[j] << std::string(width - classes[j].size() + 2, ' ');
    std::snprintf(line, sizeof line, "%9.4f %9.4f %9.4f %8zu %9zu\n", s.precision, s.recall, s.f,
                  s.support, s.predicted);
    out << line;
  }
  return out.str();
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["instances"] = n_instances;
  j["micro_precision"] = micro_precision;
  j["micro_recall"] = micro_recall;
  j["micro_f"] = micro_f;
  j["macro_f"] = macro_f;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ClassScores& s = per_class[c];
    rows.push_back({{"class", classes[c]},
                    {"precision", s.precision},
                    {"recall", s.recall},
                    {"f", s.f},
                    {"support", s.support},
                    {"predicted", s.predicted}});
  }
  j["per_class"] = std::move(rows);
  return j.dump(2);
}

}  // namespace pathtext
