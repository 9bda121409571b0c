#include <gtest/gtest.h>

#include <set>

#include "support/fixtures.hpp"

namespace pt = pathtext;
using pathtext::testing::ManifestRow;
using pathtext::testing::TempDir;
using pathtext::testing::write_corpus;
using pathtext::testing::write_file;

namespace {

pt::Corpus numbered_corpus(std::size_t n, std::size_t n_labels = 3) {
  std::vector<pt::Report> reports;
  for (std::size_t i = 0; i < n; ++i) {
    reports.push_back({"r" + std::to_string(i), "text " + std::to_string(i),
                       "label" + std::to_string(i % n_labels), "site"});
  }
  return pt::Corpus(std::move(reports));
}

std::vector<std::string> ids(const pt::Corpus& c) {
  std::vector<std::string> out;
  for (const auto& r : c.reports()) out.push_back(r.id);
  return out;
}

}  // namespace

TEST(LoadCorpus, ThreeRowsInManifestOrder) {
  TempDir dir;
  const auto manifest = write_corpus(dir.path(), {{"c", "Kidney mass.", "B", "kidney"},
                                                  {"a", "Lung, left.", "A", "lung"},
                                                  {"b", "Thymus.", "A", "thymus"}});
  const pt::Corpus corpus = pt::load_corpus(manifest);
  ASSERT_EQ(corpus.size(), 3u);
  EXPECT_EQ(ids(corpus), (std::vector<std::string>{"c", "a", "b"}));
  EXPECT_EQ(corpus.label_set(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(corpus[1].text, "Lung, left.");
  EXPECT_EQ(corpus[0].site, "kidney");
}

TEST(LoadCorpus, QuotedDiagnosisWithComma) {
  TempDir dir;
  const auto manifest =
      write_corpus(dir.path(), {{"x", "t", "Clear cell adenocarcinoma, NOS", "kidney"}});
  EXPECT_EQ(pt::load_corpus(manifest)[0].diagnosis, "Clear cell adenocarcinoma, NOS");
}

TEST(LoadCorpus, MissingFileNamesThePath) {
  TempDir dir;
  write_file(dir / "manifest.csv", "id,path,diagnosis,site\nr1,nowhere.txt,A,lung\n");
  try {
    pt::load_corpus(dir / "manifest.csv");
    FAIL() << "expected IngestionError";
  } catch (const pt::IngestionError& e) {
    EXPECT_NE(std::string(e.what()).find("nowhere.txt"), std::string::npos);
  }
}

TEST(LoadCorpus, MissingManifest) {
  TempDir dir;
  EXPECT_THROW(pt::load_corpus(dir / "absent.csv"), pt::IngestionError);
}

TEST(LoadCorpus, DuplicateIdIsValidationError) {
  TempDir dir;
  const auto manifest = write_corpus(dir.path(), {{"a", "t1", "A", "s"}, {"a", "t2", "B", "s"}});
  EXPECT_THROW(pt::load_corpus(manifest), pt::ValidationError);
}

TEST(LoadCorpus, EmptyTextNamesTheId) {
  TempDir dir;
  const auto manifest = write_corpus(dir.path(), {{"good", "t", "A", "s"}, {"hollow", "", "A", "s"}});
  try {
    pt::load_corpus(manifest);
    FAIL() << "expected ValidationError";
  } catch (const pt::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("hollow"), std::string::npos);
  }
}

TEST(LoadCorpus, MalformedUtf8IsIngestionError) {
  TempDir dir;
  const auto manifest = write_corpus(dir.path(), {{"a", std::string("caf\xC3", 4), "A", "s"}});
  EXPECT_THROW(pt::load_corpus(manifest), pt::IngestionError);
}

TEST(LoadCorpus, WrongHeaderRejected) {
  TempDir dir;
  write_file(dir / "m.csv", "name,file\nx,y\n");
  EXPECT_THROW(pt::load_corpus(dir / "m.csv"), pt::IngestionError);
}

TEST(Corpus, RejectsEmptyDiagnosis) {
  EXPECT_THROW(pt::Corpus({{"a", "t", "", "s"}}), pt::ValidationError);
}

TEST(ClassDistribution, CountsPerLabel) {
  pt::Corpus c({{"1", "t", "A", "x"}, {"2", "t", "A", "y"}, {"3", "t", "B", "y"}});
  const auto dist = pt::class_distribution(c, pt::DistributionKey::Diagnosis);
  EXPECT_EQ(dist, (std::map<std::string, std::size_t>{{"A", 2}, {"B", 1}}));
  const auto sites = pt::class_distribution(c, pt::DistributionKey::Site);
  EXPECT_EQ(sites.at("y"), 2u);
}

TEST(ClassDistribution, SingleLabel) {
  const auto c = numbered_corpus(9, 1);
  const auto dist = pt::class_distribution(c, pt::DistributionKey::Diagnosis);
  ASSERT_EQ(dist.size(), 1u);
  EXPECT_EQ(dist.begin()->second, 9u);
}

// Site and diagnosis counts from the study's distribution table.
TEST(ClassDistribution, FourSiteManifest) {
  TempDir dir;
  std::vector<ManifestRow> rows;
  auto add = [&](std::size_t n, const std::string& dx, const std::string& site) {
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({site + "-" + std::to_string(rows.size()), "report text", dx, site});
    }
  };
  add(523, "Clear cell adenocarcinoma, NOS", "kidney");
  add(937 - 523, "Renal cell carcinoma, NOS", "kidney");
  add(340, "Squamous cell carcinoma, NOS", "lung");
  add(749 - 340, "Adenocarcinoma, NOS", "lung");
  add(139, "Seminoma, NOS", "testis");
  add(124, "Thymoma, NOS", "thymus");
  const pt::Corpus corpus = pt::load_corpus(write_corpus(dir.path(), rows));
  ASSERT_EQ(corpus.size(), 1949u);

  const auto sites = pt::class_distribution(corpus, pt::DistributionKey::Site);
  EXPECT_EQ(sites.at("kidney"), 937u);
  EXPECT_EQ(sites.at("lung"), 749u);
  EXPECT_EQ(sites.at("testis"), 139u);
  EXPECT_EQ(sites.at("thymus"), 124u);
  const auto dx = pt::class_distribution(corpus, pt::DistributionKey::Diagnosis);
  EXPECT_EQ(dx.at("Clear cell adenocarcinoma, NOS"), 523u);
  EXPECT_EQ(dx.at("Squamous cell carcinoma, NOS"), 340u);

  const auto split = pt::split_train_test(corpus, {0.70, 11, false});
  EXPECT_EQ(split.train.size(), 1364u);
  EXPECT_EQ(split.test.size(), 585u);
}

TEST(Split, SizeLaw) {
  EXPECT_EQ(pt::split_train_test(numbered_corpus(10), {0.70, 1, false}).train.size(), 7u);
  EXPECT_EQ(pt::split_train_test(numbered_corpus(1949), {0.70, 1, false}).train.size(), 1364u);
  for (std::size_t n = 2; n < 60; ++n) {
    for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto s = pt::split_train_test(numbered_corpus(n), {f, n, false});
      EXPECT_EQ(s.train.size(), static_cast<std::size_t>(std::floor(n * f + 1e-9)))
          << "n=" << n << " f=" << f;
      EXPECT_EQ(s.train.size() + s.test.size(), n);
    }
  }
}

TEST(Split, RejectsFractionOutsideOpenInterval) {
  const auto c = numbered_corpus(10);
  EXPECT_THROW(pt::split_train_test(c, {0.0, 1, false}), pt::ValidationError);
  EXPECT_THROW(pt::split_train_test(c, {1.0, 1, false}), pt::ValidationError);
}

class SplitProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SplitProperty, PartitionAndDeterminism) {
  const std::uint64_t seed = GetParam();
  pt::Rng rng(seed);
  const std::size_t n = 2 + rng.uniform_index(80);
  const auto corpus = numbered_corpus(n, 1 + rng.uniform_index(6));
  for (bool stratified : {false, true}) {
    const pt::SplitConfig cfg{0.05 + 0.9 * rng.uniform_real(), seed, stratified};
    const auto a = pt::split_train_test(corpus, cfg);
    const auto b = pt::split_train_test(corpus, cfg);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);

    const auto tr_ids = ids(a.train);
    std::set<std::string> tr(tr_ids.begin(), tr_ids.end());
    const auto te_ids = ids(a.test);
    for (const auto& id : te_ids) EXPECT_EQ(tr.count(id), 0u) << id;
    std::set<std::string> all(tr);
    all.insert(te_ids.begin(), te_ids.end());
    EXPECT_EQ(all.size(), n);
    EXPECT_EQ(a.train.size(), static_cast<std::size_t>(std::floor(n * cfg.train_fraction + 1e-9)));

    // relative order within each side follows the corpus
    for (const auto* side : {&a.train, &a.test}) {
      for (std::size_t i = 1; i < side->size(); ++i) {
        EXPECT_LT(corpus.find((*side)[i - 1].id), corpus.find((*side)[i].id));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SplitProperty, ::testing::Range<std::uint64_t>(0, 40));

TEST(Split, DifferentSeedsUsuallyDiffer) {
  const auto c = numbered_corpus(100);
  EXPECT_NE(pt::split_train_test(c, {0.7, 1, false}).train,
            pt::split_train_test(c, {0.7, 2, false}).train);
}

TEST(Split, StratifiedProportions) {
  std::vector<pt::Report> reports;
  for (int i = 0; i < 100; ++i) reports.push_back({"a" + std::to_string(i), "t", "A", "s"});
  for (int i = 0; i < 50; ++i) reports.push_back({"b" + std::to_string(i), "t", "B", "s"});
  for (int i = 0; i < 10; ++i) reports.push_back({"c" + std::to_string(i), "t", "C", "s"});
  const auto s = pt::split_train_test(pt::Corpus(reports), {0.7, 3, true});
  ASSERT_EQ(s.train.size(), 112u);
  const auto dist = pt::class_distribution(s.train, pt::DistributionKey::Diagnosis);
  EXPECT_EQ(dist.at("A"), 70u);
  EXPECT_EQ(dist.at("B"), 35u);
  EXPECT_EQ(dist.at("C"), 7u);
}

TEST(Split, StratifiedSingletonGoesToTrainWithWarning) {
  std::vector<pt::Report> reports;
  for (int i = 0; i < 9; ++i) reports.push_back({"a" + std::to_string(i), "t", "A", "s"});
  reports.push_back({"lonely", "t", "Rare", "s"});
  const auto s = pt::split_train_test(pt::Corpus(reports), {0.7, 5, true});
  EXPECT_EQ(s.train.size(), 7u);
  EXPECT_LT(s.train.find("lonely"), s.train.size());
  EXPECT_FALSE(s.warnings.empty());
}
