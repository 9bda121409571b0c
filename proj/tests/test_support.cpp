#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "support/fixtures.hpp"

namespace pt = pathtext;

TEST(Csv, QuotedFieldsAndLineNumbers) {
  const auto recs = pt::parse_csv("a,b\n\"x, y\",\"he said \"\"hi\"\"\"\n\n\"multi\nline\",z\n");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[1].fields, (std::vector<std::string>{"x, y", "he said \"hi\""}));
  EXPECT_EQ(recs[2].fields[0], "multi\nline");
  EXPECT_EQ(recs[2].line, 4u);
  EXPECT_THROW(pt::parse_csv("\"open\n"), pt::FormatError);
  EXPECT_THROW(pt::parse_csv("\"a\"b\n"), pt::FormatError);
  EXPECT_EQ(pt::csv_escape("plain"), "plain");
  EXPECT_EQ(pt::csv_escape("a,\"b\""), "\"a,\"\"b\"\"\"");
}

TEST(TextIo, Utf8Validation) {
  EXPECT_TRUE(pt::is_valid_utf8("caf\xC3\xA9 \xE2\x82\xAC \xF0\x9F\x98\x80"));
  EXPECT_FALSE(pt::is_valid_utf8("\xC0\xAF"));          // overlong
  EXPECT_FALSE(pt::is_valid_utf8("\xED\xA0\x80"));      // surrogate
  EXPECT_FALSE(pt::is_valid_utf8("\xF4\x90\x80\x80"));  // above U+10FFFF
  EXPECT_FALSE(pt::is_valid_utf8("\xE2\x82"));
}

TEST(TextIo, ExactDoubleRoundTrip) {
  pt::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform_real() - 0.5) * std::pow(10.0, static_cast<double>(rng.uniform_index(40)) - 20);
    EXPECT_EQ(pt::parse_double(pt::format_double_exact(v)), v);
  }
  EXPECT_EQ(pt::parse_double(pt::format_double_exact(std::numeric_limits<double>::denorm_min())),
            std::numeric_limits<double>::denorm_min());
  EXPECT_THROW(pt::parse_double("1.5x"), pt::FormatError);
  EXPECT_THROW(pt::parse_size("-1"), pt::FormatError);
}

TEST(TextIo, LinesAndAtomicWrite) {
  EXPECT_EQ(pt::split_lines("a\r\nb\n"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(pt::split_whitespace("  a \t b\n"), (std::vector<std::string>{"a", "b"}));
  pathtext::testing::TempDir dir;
  pt::write_file_atomic(dir / "sub/f.txt", "one");
  pt::write_file_atomic(dir / "sub/f.txt", "two");
  EXPECT_EQ(pt::read_text_file(dir / "sub/f.txt"), "two");
  EXPECT_THROW(pt::read_text_file(dir / "none"), pt::IngestionError);
}

TEST(Random, ReproducibleAndInRange) {
  pt::Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  pt::Rng r(6);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[r.uniform_index(7)];
  for (int h : hist) EXPECT_GT(h, 800);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform_real();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  const std::vector<double> w = {0.0, 1.0, 0.0};
  EXPECT_EQ(r.sample_discrete(w), 1u);
}

TEST(Random, DeriveSeedStable) {
  EXPECT_EQ(pt::derive_seed(1, "split"), pt::derive_seed(1, "split"));
  EXPECT_NE(pt::derive_seed(1, "split"), pt::derive_seed(1, "lda"));
  EXPECT_NE(pt::derive_seed(1, "split"), pt::derive_seed(2, "split"));
}
