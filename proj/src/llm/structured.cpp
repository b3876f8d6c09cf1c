#include "reviewscore/llm/structured.hpp"

#include <set>

namespace reviewscore::llm {

using nlohmann::json;

namespace {

std::string extract_fenced_json(const std::string& text) {
  // Preferred form: the first ```json fence.
  std::size_t open = text.find("```json");
  if (open != std::string::npos) {
    std::size_t content_start = text.find('\n', open);
    if (content_start == std::string::npos) throw NoJsonBlock("unterminated fenced block in model output", text);
    ++content_start;
    std::size_t close = text.find("```", content_start);
    if (close == std::string::npos) throw NoJsonBlock("unterminated fenced block in model output", text);
    return text.substr(content_start, close - content_start);
  }
  // Fallback: bare fence pairs whose body parses as JSON.
  std::size_t pos = 0;
  while (true) {
    open = text.find("```", pos);
    if (open == std::string::npos) throw NoJsonBlock("no fenced JSON block in model output", text);
    std::size_t content_start = open + 3;
    std::size_t close = text.find("```", content_start);
    if (close == std::string::npos) throw NoJsonBlock("unterminated fenced block in model output", text);
    std::string body = text.substr(content_start, close - content_start);
    json parsed = json::parse(body, nullptr, false);
    if (!parsed.is_discarded()) return body;
    pos = close + 3;  // move past the whole fence pair
  }
}

void require_field(const json& j, const std::string& field, json::value_t type, const std::string& raw) {
  if (!j.contains(field)) throw SchemaViolation("missing required field '" + field + "'", raw);
  const json& v = j.at(field);
  bool ok = v.type() == type;
  // accept unsigned where signed integers are expected
  if (type == json::value_t::number_integer && v.is_number_integer()) ok = true;
  if (!ok) throw SchemaViolation("field '" + field + "' has the wrong type", raw);
}

void require_int_range(const json& j, const std::string& field, int lo, int hi, const std::string& raw) {
  require_field(j, field, json::value_t::number_integer, raw);
  const int v = j.at(field).get<int>();
  if (v < lo || v > hi)
    throw SchemaViolation("field '" + field + "' = " + std::to_string(v) + " outside [" + std::to_string(lo) + "," +
                              std::to_string(hi) + "]",
                          raw);
}

void require_string_choice(const json& j, const std::string& field, const std::set<std::string>& allowed,
                           const std::string& raw) {
  require_field(j, field, json::value_t::string, raw);
  if (!allowed.count(j.at(field).get<std::string>()))
    throw SchemaViolation("field '" + field + "' has unexpected value '" + j.at(field).get<std::string>() + "'", raw);
}

void validate(const json& j, const std::string& schema_id, const std::string& raw) {
  if (!j.is_object()) throw SchemaViolation("top-level JSON value must be an object", raw);
  if (schema_id == "point-list") {
    require_field(j, "points", json::value_t::array, raw);
    for (const auto& p : j.at("points")) {
      if (!p.is_object()) throw SchemaViolation("each point must be an object", raw);
      require_field(p, "text", json::value_t::string, raw);
      if (p.at("text").get<std::string>().empty()) throw SchemaViolation("point text must be non-empty", raw);
      require_string_choice(p, "section", {"weaknesses", "questions"}, raw);
    }
  } else if (schema_id == "type-choice") {
    require_string_choice(j, "kind", {"claim", "argument", "question"}, raw);
  } else if (schema_id == "verbatim-extract") {
    require_field(j, "conjecture", json::value_t::string, raw);
    if (j.at("conjecture").get<std::string>().empty()) throw SchemaViolation("conjecture must be non-empty", raw);
    require_field(j, "reasons", json::value_t::array, raw);
    for (const auto& r : j.at("reasons"))
      if (!r.is_string()) throw SchemaViolation("each reason must be a string", raw);
  } else if (schema_id == "reconstruction") {
    require_field(j, "premises", json::value_t::array, raw);
    if (j.at("premises").empty()) throw SchemaViolation("at least one premise required", raw);
    for (const auto& p : j.at("premises")) {
      if (!p.is_object()) throw SchemaViolation("each premise must be an object", raw);
      require_field(p, "nl", json::value_t::string, raw);
      require_field(p, "fol", json::value_t::string, raw);
      require_field(p, "implicit", json::value_t::boolean, raw);
    }
    require_field(j, "conclusion", json::value_t::object, raw);
    require_field(j.at("conclusion"), "nl", json::value_t::string, raw);
    require_field(j.at("conclusion"), "fol", json::value_t::string, raw);
    require_field(j, "keys", json::value_t::object, raw);
    for (const auto& [sym, meaning] : j.at("keys").items()) {
      (void)sym;
      if (!meaning.is_string()) throw SchemaViolation("each key meaning must be a string", raw);
    }
    require_field(j, "proof", json::value_t::string, raw);
  } else if (schema_id == "streamline") {
    require_field(j, "premises", json::value_t::array, raw);
    for (const auto& p : j.at("premises"))
      if (!p.is_string() || p.get<std::string>().empty())
        throw SchemaViolation("each streamlined premise must be a non-empty string", raw);
    require_field(j, "conclusion", json::value_t::string, raw);
    if (j.at("conclusion").get<std::string>().empty())
      throw SchemaViolation("streamlined conclusion must be non-empty", raw);
  } else if (schema_id == "faithfulness-verdict") {
    require_field(j, "faithful", json::value_t::boolean, raw);
    require_field(j, "justification", json::value_t::string, raw);
  } else if (schema_id == "score-verdict") {
    require_int_range(j, "score", 1, 5, raw);
    require_field(j, "justification", json::value_t::string, raw);
  } else if (schema_id == "untrivialness-verdict") {
    require_int_range(j, "untrivialness", 0, 2, raw);
    require_field(j, "justification", json::value_t::string, raw);
  } else if (schema_id == "kb-choice") {
    require_string_choice(j, "kb", {"submitted_paper", "internal_knowledge", "referred_papers"}, raw);
  } else {
    throw std::invalid_argument("unregistered schema id: " + schema_id);
  }
}

}  // namespace

bool has_schema(const std::string& schema_id) {
  static const std::set<std::string> ids = {"point-list",          "type-choice",         "verbatim-extract",
                                            "reconstruction",      "streamline",          "faithfulness-verdict",
                                            "score-verdict",       "untrivialness-verdict", "kb-choice"};
  return ids.count(schema_id) > 0;
}

nlohmann::json parse_structured(const std::string& text, const std::string& schema_id) {
  if (!has_schema(schema_id)) throw std::invalid_argument("unregistered schema id: " + schema_id);
  std::string body = extract_fenced_json(text);
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw SchemaViolation("fenced block does not parse as JSON", text);
  validate(parsed, schema_id, text);
  return parsed;
}

}  // namespace reviewscore::llm
