#include "pathtext/render.hpp"

#include <cstdio>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "pathtext/error.hpp"

namespace pathtext {

namespace {

constexpr std::string_view kBodyBegin = "<!-- report:begin -->";
constexpr std::string_view kBodyEnd = "<!-- report:end -->";

std::string escape_html(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string weight3(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", w);
  return buf;
}

}  // namespace

const std::vector<std::string>& default_palette() {
  static const std::vector<std::string> palette = {"#CC6677", "#332288", "#DDCC77", "#117733",
                                                   "#88CCEE", "#882255", "#44AA99", "#999933"};
  return palette;
}

std::string format_top_keywords(const KeywordSet& keywords, std::size_t count) {
  std::string out;
  const std::size_t n = std::min(count, keywords.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += std::to_string(i + 1) + ". " + keywords.keywords[i].term + " (" +
           weight3(keywords.keywords[i].weight) + ")";
  }
  return out;
}

RenderedReport render_highlighted(const TokenizedReport& report, const KeywordSet& keywords,
                                  std::span<const std::size_t> keyword_topics,
                                  std::size_t n_topics, std::span<const std::string> palette) {
  if (!keywords.report_id.empty() && keywords.report_id != report.id) {
    throw ValidationError("render: keyword set belongs to '" + keywords.report_id +
                          "', not '" + report.id + "'");
  }
  if (keyword_topics.size() != keywords.size()) {
    throw ValidationError("render: one topic per keyword required");
  }
  if (palette.empty()) throw ValidationError("render: empty palette");
  for (std::size_t t : keyword_topics) {
    if (t >= n_topics) throw ValidationError("render: topic id out of range");
  }

  HighlightedReport hr{report.id, report.tokens, keywords,
                       std::vector<std::size_t>(keyword_topics.begin(), keyword_topics.end()),
                       {}};
  for (std::size_t k = 0; k < n_topics; ++k) hr.topic_colors.push_back(palette[k % palette.size()]);

  std::unordered_map<std::string_view, std::size_t> topic_of;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    topic_of.emplace(keywords.keywords[i].term, keyword_topics[i]);
  }

  std::string html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>Keywords: " + escape_html(report.id) + "</title>\n";
  html += "<style>body{font-family:sans-serif;max-width:60em;margin:2em auto;line-height:1.6}"
          ".kw{padding:0 2px;border-radius:3px;color:#fff}"
          "table{border-collapse:collapse}td,th{padding:4px 8px;border:1px solid #ccc;"
          "text-align:left}</style>\n";
  html += "</head>\n<body>\n<h1>Report " + escape_html(report.id) + "</h1>\n";
  html += "<p class=\"report\">";
  html += kBodyBegin;
  for (std::size_t i = 0; i < report.tokens.size(); ++i) {
    if (i) html.push_back(' ');
    const std::string& tok = report.tokens[i];
    auto it = topic_of.find(tok);
    if (it == topic_of.end()) {
      html += escape_html(tok);
    } else {
      html += "<span class=\"kw topic-" + std::to_string(it->second + 1) +
              "\" style=\"background-color:" + hr.topic_colors[it->second] + "\">" +
              escape_html(tok) + "</span>";
    }
  }
  html += kBodyEnd;
  html += "</p>\n";

  html += "<h2>Top 10 Keywords</h2>\n<p class=\"top-keywords\">" +
          escape_html(format_top_keywords(keywords, 10)) + "</p>\n";
  html += "<h2>Topics</h2>\n<table class=\"legend\">\n<tr><th>Topic #</th><th>Keywords</th></tr>\n";
  for (std::size_t k = 0; k < n_topics; ++k) {
    std::string members;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
      if (keyword_topics[i] != k) continue;
      if (!members.empty()) members += ", ";
      members += escape_html(keywords.keywords[i].term);
    }
    html += "<tr><td><span class=\"kw\" style=\"background-color:" + hr.topic_colors[k] +
            "\">Topic " + std::to_string(k + 1) + "</span></td><td>" + members + "</td></tr>\n";
  }
  html += "</table>\n</body>\n</html>\n";

  nlohmann::ordered_json j;
  j["report_id"] = report.id;
  j["n_keywords"] = keywords.size();
  j["n_topics"] = n_topics;
  nlohmann::ordered_json kws = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    kws.push_back({{"rank", i + 1},
                   {"term", keywords.keywords[i].term},
                   {"weight", keywords.keywords[i].weight},
                   {"topic", keyword_topics[i] + 1},
                   {"color", hr.topic_colors[keyword_topics[i]]}});
  }
  j["keywords"] = std::move(kws);
  nlohmann::ordered_json topics = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < n_topics; ++k) {
    nlohmann::ordered_json members = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < keywords.size(); ++i) {
      if (keyword_topics[i] == k) members.push_back(keywords.keywords[i].term);
    }
    topics.push_back({{"topic", k + 1}, {"color", hr.topic_colors[k]}, {"keywords", members}});
  }
  j["topics"] = std::move(topics);
  j["top10"] = format_top_keywords(keywords, 10);

  return RenderedReport{std::move(hr), std::move(html), j.dump(2) + "\n"};
}

std::string strip_markup(std::string_view html) {
  std::string text;
  text.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
    } else if (html[i] == '<') {
      auto end = html.find('>', i);
      i = end == std::string_view::npos ? html.size() : end + 1;
    } else {
      text.push_back(html[i++]);
    }
  }
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}, {"&amp;", '&'}};
  std::string out;
  out.reserve(text.size());
  for (std::size_t p = 0; p < text.size();) {
    bool matched = false;
    if (text[p] == '&') {
      for (auto [entity, ch] : kEntities) {
        if (std::string_view(text).substr(p, entity.size()) == entity) {
          out.push_back(ch);
          p += entity.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(text[p++]);
  }
  return out;
}

std::string rendered_report_text(std::string_view html) {
  auto begin = html.find(kBodyBegin);
  auto end = html.find(kBodyEnd);
  if (begin == std::string_view::npos || end == std::string_view::npos || end < begin) {
    throw FormatError("rendered page has no report body markers");
  }
  begin += kBodyBegin.size();
  return strip_markup(html.substr(begin, end - begin));
}

}  // namespace pathtext
