#include "reviewscore/decompose.hpp"

#include <fstream>
#include <sstream>

namespace reviewscore::decompose {

using nlohmann::json;

namespace {

std::string squeeze_ws(const std::string& s) {
  std::string out;
  bool in_ws = true;  // also trims leading whitespace
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_ws = true;
    } else {
      if (in_ws && !out.empty()) out += ' ';
      out += c;
      in_ws = false;
    }
  }
  return out;
}

std::string hash8(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(8, '0');
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace

bool normalized_contains(const std::string& haystack, const std::string& needle) {
  return squeeze_ws(haystack).find(squeeze_ws(needle)) != std::string::npos;
}

OverrideMap load_overrides(const std::string& path) {
  OverrideMap out;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open override file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    out[j.at("point_id").get<std::string>()] = point_kind_from_string(j.at("kind").get<std::string>());
  }
  return out;
}

Decomposer::Decomposer(llm::Gateway& gateway, llm::ModelConfig model, OverrideMap overrides)
    : gateway_(gateway), model_(std::move(model)), overrides_(std::move(overrides)) {}

std::vector<ReviewPoint> Decomposer::extract_points(const RawReview& review, const PaperDoc& paper) {
  const std::string weaknesses = review.section("weaknesses");
  const std::string questions = review.section("questions");
  if (squeeze_ws(weaknesses).empty() && squeeze_ws(questions).empty())
    throw EmptyReview("review '" + review.review_id + "' has no weakness or question content");

  llm::PromptInstance prompt = llm::render(
      "point_extraction", {{"paper_title", paper.title}, {"weaknesses", weaknesses}, {"questions", questions}});
  const std::string sections_text = weaknesses + "\n" + questions;

  llm::StructuredResult result = llm::complete_structured(gateway_, prompt, model_, "point-list");
  // One re-prompt when the model invents text that is not an excerpt of the
  // weaknesses/questions sections.
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string offender;
    for (const auto& p : result.record.at("points")) {
      const std::string text = p.at("text").get<std::string>();
      if (!normalized_contains(sections_text, text)) {
        offender = text;
        break;
      }
    }
    if (offender.empty()) break;
    if (attempt == 1)
      throw llm::SchemaViolation("extracted point is not an excerpt of the review: " + offender, offender);
    llm::PromptInstance retry = prompt;
    retry.messages.push_back({"assistant", result.response.text});
    retry.messages.push_back({"user",
                              "This point is not a verbatim excerpt of the weaknesses/questions sections: \"" +
                                  offender + "\". Extract points strictly as excerpts and reply again."});
    result = llm::complete_structured(gateway_, retry, model_, "point-list");
  }

  std::vector<ReviewPoint> points;
  int index = 0;
  for (const auto& p : result.record.at("points")) {
    ReviewPoint point;
    point.text = p.at("text").get<std::string>();
    point.paper_id = review.paper_id;
    point.review_id = review.review_id;
    std::ostringstream id;
    id << review.review_id << ".p" << index << "-" << hash8(squeeze_ws(point.text));
    point.point_id = id.str();
    ++index;
    points.push_back(std::move(point));
  }
  return points;
}

PointKind Decomposer::classify_type(const ReviewPoint& point, const PaperDoc& paper) {
  auto ov = overrides_.find(point.point_id);
  if (ov != overrides_.end()) return ov->second;
  llm::PromptInstance prompt =
      llm::render("type_classification", {{"paper_title", paper.title}, {"point", point.text}});
  llm::StructuredResult result = llm::complete_structured(gateway_, prompt, model_, "type-choice");
  return point_kind_from_string(result.record.at("kind").get<std::string>());
}

}  // namespace reviewscore::decompose
