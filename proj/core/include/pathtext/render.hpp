#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathtext/keywords.hpp"
#include "pathtext/preprocess.hpp"

namespace pathtext {

/// Eight colorblind-safe colors (Paul Tol's "muted" scheme), "#RRGGBB".
const std::vector<std::string>& default_palette();

/// A report with its keywords mapped to topics and topics mapped to colors.
struct HighlightedReport {
  std::string report_id;
  Tokens tokens;
  KeywordSet keywords;
  /// Parallel to keywords.keywords.
  std::vector<std::size_t> keyword_topics;
  /// One color per topic; cycles through the palette when topics exceed it.
  std::vector<std::string> topic_colors;
};

struct RenderedReport {
  HighlightedReport report;
  /// Self-contained HTML with inline styles.
  std::string html;
  /// Machine-readable sidecar: keywords, weights, topics, colors.
  std::string json;
};

/// "1. term (0.377), 2. term (0.269), ..." over the first `count` keywords,
/// weights with three decimals.
std::string format_top_keywords(const KeywordSet& keywords, std::size_t count = 10);

/// Wraps each keyword occurrence in its topic color and appends a legend of
/// topics with member keywords and the top-10 keyword list. Throws
/// ValidationError when ids or lengths disagree.
RenderedReport render_highlighted(const TokenizedReport& report, const KeywordSet& keywords,
                                  std::span<const std::size_t> keyword_topics,
                                  std::size_t n_topics,
                                  std::span<const std::string> palette = default_palette());

/// Removes tags and decodes the five XML entities.
std::string strip_markup(std::string_view html);

/// The plain token text of the report body inside a rendered page.
std::string rendered_report_text(std::string_view html);

}  // namespace pathtext
