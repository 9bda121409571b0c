#include <sstream>

#include "pathtext/classifiers.hpp"
#include "pathtext/error.hpp"
#include "pathtext/text_io.hpp"

namespace pathtext {

namespace {

constexpr std::string_view kMagic = "pathtext-model";
constexpr int kFormatVersion = 1;

std::string join_doubles(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(' ');
    out += format_double_exact(values[i]);
  }
  return out;
}

void check_single_line(const std::string& s, const char* what) {
  if (s.find_first_of("\r\n") != std::string::npos) {
    throw FormatError(std::string(what) + " contains a line break and cannot be serialized");
  }
}

/// Sequential reader over the lines of a model file.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : lines_(split_lines(text)) {}

  const std::string& next() {
    if (pos_ >= lines_.size()) throw FormatError("model: unexpected end of file");
    return lines_[pos_++];
  }

  /// Reads a line "key rest..." and returns the fields after the key.
  std::vector<std::string> expect(std::string_view key) {
    auto fields = split_whitespace(next());
    if (fields.empty() || fields[0] != key) {
      throw FormatError("model line " + std::to_string(pos_) + ": expected '" + std::string(key) +
                        "'");
    }
    fields.erase(fields.begin());
    return fields;
  }

  /// Reads "key value" where the value is the raw remainder of the line.
  std::string expect_text(std::string_view key) {
    const std::string& line = next();
    if (line.size() < key.size() + 1 || line.compare(0, key.size(), key) != 0 ||
        line[key.size()] != ' ') {
      throw FormatError("model line " + std::to_string(pos_) + ": expected '" + std::string(key) +
                        "'");
    }
    return line.substr(key.size() + 1);
  }

  std::span<const std::string> lines() const { return lines_; }
  std::size_t& pos() { return pos_; }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

std::vector<double> parse_doubles(const std::vector<std::string>& fields, std::size_t expected) {
  if (fields.size() != expected) {
    throw FormatError("model: expected " + std::to_string(expected) + " values, found " +
                      std::to_string(fields.size()));
  }
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(parse_double(f));
  return out;
}

std::size_t single_size(const std::vector<std::string>& fields) {
  if (fields.size() != 1) throw FormatError("model: expected one integer");
  return parse_size(fields[0]);
}

}  // namespace

std::string TrainedModel::serialize() const {
  std::ostringstream out;
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "kind " << to_string(spec_.kind) << '\n';
  out << "n_features " << n_features_ << '\n';
  out << "classes " << encoding_.size() << '\n';
  for (const std::string& label : encoding_.classes()) {
    check_single_line(label, "label");
    out << "label " << label << '\n';
  }
  const ClassifierSpec& s = spec_;
  out << "spec C " << format_double_exact(s.C) << " gamma " << format_double_exact(s.gamma)
      << " l2_penalty " << s.l2_penalty << " shrinking " << s.shrinking << " max_iter "
      << s.max_iter << " tol " << format_double_exact(s.tol) << " max_depth " << s.max_depth
      << " learning_rate " << format_double_exact(s.learning_rate) << " n_rounds " << s.n_rounds
      << " reg_lambda " << format_double_exact(s.reg_lambda) << " min_child_weight "
      << format_double_exact(s.min_child_weight) << " early_stopping_rounds "
      << s.early_stopping_rounds << " seed " << s.seed << '\n';
  out << "iterations " << info_.iterations << '\n';
  out << "final_objective " << format_double_exact(info_.final_objective) << '\n';
  out << "loss_history " << info_.loss_history.size();
  for (double v : info_.loss_history) out << ' ' << format_double_exact(v);
  out << '\n';
  out << "warnings " << info_.warnings.size() << '\n';
  for (const std::string& w : info_.warnings) {
    check_single_line(w, "warning");
    out << "warning " << w << '\n';
  }

  if (const auto* c = std::get_if<ConstantParams>(&params_)) {
    out << "params constant\n";
    out << "class " << c->class_id << '\n';
  } else if (const auto* lin = std::get_if<LinearParams>(&params_)) {
    out << "params linear\n";
    for (std::size_t k = 0; k < lin->weights.size(); ++k) {
      out << "bias " << format_double_exact(lin->bias[k]) << '\n';
      out << "weights " << join_doubles(lin->weights[k]) << '\n';
    }
  } else if (const auto* ker = std::get_if<KernelParams>(&params_)) {
    out << "params kernel\n";
    out << "gamma " << format_double_exact(ker->gamma) << '\n';
    out << "support " << ker->support.size() << '\n';
    for (const SparseVector& sv : ker->support) out << "sv " << sv.to_string() << '\n';
    for (std::size_t k = 0; k < ker->coef.size(); ++k) {
      out << "rho " << format_double_exact(ker->rho[k]) << '\n';
      out << "coef " << join_doubles(ker->coef[k]) << '\n';
    }
  } else {
    const auto& ens = std::get<TreeEnsemble>(params_);
    out << "params trees\n";
    out << "rounds " << ens.rounds.size() << '\n';
    for (std::size_t r = 0; r < ens.rounds.size(); ++r) {
      for (std::size_t k = 0; k < ens.rounds[r].size(); ++k) {
        out << "tree " << r << ' ' << k << ' ' << ens.rounds[r][k].size() << '\n';
        out << ens.rounds[r][k].serialize();
      }
    }
  }
  out << "end\n";
  return out.str();
}

TrainedModel TrainedModel::deserialize(std::string_view text) {
  LineReader in(text);
  auto magic = in.expect(kMagic);
  if (magic.size() != 1 || magic[0] != std::to_string(kFormatVersion)) {
    throw FormatError("model: unsupported format version");
  }
  auto kind_fields = in.expect("kind");
  if (kind_fields.size() != 1) throw FormatError("model: bad kind line");
  ClassifierSpec spec;
  try {
    spec.kind = parse_classifier_kind(kind_fields[0]);
  } catch (const ValidationError& e) {
    throw FormatError(e.what());
  }
  const std::size_t n_features = single_size(in.expect("n_features"));
  const std::size_t n_classes = single_size(in.expect("classes"));
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n_classes; ++k) labels.push_back(in.expect_text("label"));
  LabelEncoding encoding(labels);
  if (encoding.classes() != labels) throw FormatError("model: labels not sorted and unique");

  auto sf = in.expect("spec");
  if (sf.size() % 2 != 0) throw FormatError("model: malformed spec line");
  for (std::size_t i = 0; i < sf.size(); i += 2) {
    const std::string& key = sf[i];
    const std::string& v = sf[i + 1];
    if (key == "C") spec.C = parse_double(v);
    else if (key == "gamma") spec.gamma = parse_double(v);
    else if (key == "l2_penalty") spec.l2_penalty = parse_size(v) != 0;
    else if (key == "shrinking") spec.shrinking = parse_size(v) != 0;
    else if (key == "max_iter") spec.max_iter = static_cast<int>(parse_size(v));
    else if (key == "tol") spec.tol = parse_double(v);
    else if (key == "max_depth") spec.max_depth = static_cast<int>(parse_size(v));
    else if (key == "learning_rate") spec.learning_rate = parse_double(v);
    else if (key == "n_rounds") spec.n_rounds = static_cast<int>(parse_size(v));
    else if (key == "reg_lambda") spec.reg_lambda = parse_double(v);
    else if (key == "min_child_weight") spec.min_child_weight = parse_double(v);
    else if (key == "early_stopping_rounds") spec.early_stopping_rounds = static_cast<int>(parse_size(v));
    else if (key == "seed") spec.seed = parse_size(v);
    else throw FormatError("model: unknown spec key '" + key + "'");
  }

  TrainingInfo info;
  info.iterations = single_size(in.expect("iterations"));
  {
    auto f = in.expect("final_objective");
    info.final_objective = parse_doubles(f, 1)[0];
  }
  {
    auto f = in.expect("loss_history");
    if (f.empty()) throw FormatError("model: bad loss_history line");
    const std::size_t count = parse_size(f[0]);
    f.erase(f.begin());
    info.loss_history = parse_doubles(f, count);
  }
  const std::size_t n_warnings = single_size(in.expect("warnings"));
  for (std::size_t i = 0; i < n_warnings; ++i) info.warnings.push_back(in.expect_text("warning"));

  auto pf = in.expect("params");
  if (pf.size() != 1) throw FormatError("model: bad params line");
  Params params;
  if (pf[0] == "constant") {
    const std::size_t id = single_size(in.expect("class"));
    if (id >= n_classes) throw FormatError("model: constant class out of range");
    params = ConstantParams{id};
  } else if (pf[0] == "linear") {
    LinearParams lin;
    for (std::size_t k = 0; k < n_classes; ++k) {
      lin.bias.push_back(parse_doubles(in.expect("bias"), 1)[0]);
      lin.weights.push_back(parse_doubles(in.expect("weights"), n_features));
    }
    params = std::move(lin);
  } else if (pf[0] == "kernel") {
    KernelParams ker;
    ker.gamma = parse_doubles(in.expect("gamma"), 1)[0];
    const std::size_t n_sv = single_size(in.expect("support"));
    for (std::size_t s = 0; s < n_sv; ++s) {
      const std::string& line = in.next();
      if (line != "sv" && !line.starts_with("sv ")) throw FormatError("model: expected 'sv'");
      ker.support.push_back(SparseVector::parse(std::string_view(line).substr(2)));
    }
    for (std::size_t k = 0; k < n_classes; ++k) {
      ker.rho.push_back(parse_doubles(in.expect("rho"), 1)[0]);
      ker.coef.push_back(parse_doubles(in.expect("coef"), n_sv));
    }
    params = std::move(ker);
  } else if (pf[0] == "trees") {
    TreeEnsemble ens;
    ens.n_classes = n_classes;
    const std::size_t rounds = single_size(in.expect("rounds"));
    for (std::size_t r = 0; r < rounds; ++r) {
      std::vector<RegressionTree> trees;
      for (std::size_t k = 0; k < n_classes; ++k) {
        auto tf = in.expect("tree");
        if (tf.size() != 3 || parse_size(tf[0]) != r || parse_size(tf[1]) != k) {
          throw FormatError("model: bad tree header");
        }
        const std::size_t count = parse_size(tf[2]);
        const std::size_t start = in.pos();
        trees.push_back(RegressionTree::deserialize(in.lines(), in.pos()));
        if (in.pos() - start != count || trees.back().size() != count) {
          throw FormatError("model: tree node count mismatch");
        }
      }
      ens.rounds.push_back(std::move(trees));
    }
    params = std::move(ens);
  } else {
    throw FormatError("model: unknown params kind '" + pf[0] + "'");
  }
  in.expect("end");
  return TrainedModel(spec, std::move(encoding), n_features, std::move(params), std::move(info));
}

}  // namespace pathtext
