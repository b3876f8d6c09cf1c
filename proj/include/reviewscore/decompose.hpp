#pragma once

#include <map>
#include <string>
#include <vector>

#include "reviewscore/core.hpp"
#include "reviewscore/llm/gateway.hpp"

// Review splitting and point typing. Points come only from the weaknesses and
// questions sections; kinds follow the supporting-reasons criterion with an
// override file taking precedence over the model.
namespace reviewscore::decompose {

struct EmptyReview : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using OverrideMap = std::map<std::string, PointKind>;  // point_id -> kind

// JSONL of {"point_id": ..., "kind": ...}.
OverrideMap load_overrides(const std::string& path);

// Whitespace-insensitive substring test used for excerpt enforcement.
bool normalized_contains(const std::string& haystack, const std::string& needle);

class Decomposer {
 public:
  Decomposer(llm::Gateway& gateway, llm::ModelConfig model, OverrideMap overrides = {});

  // Point ids are review-scoped and content-addressed:
  // "<review_id>.p<index>-<hash8 of normalized text>".
  std::vector<ReviewPoint> extract_points(const RawReview& review, const PaperDoc& paper);

  // Model classification with override precedence.
  PointKind classify_type(const ReviewPoint& point, const PaperDoc& paper);

 private:
  llm::Gateway& gateway_;
  llm::ModelConfig model_;
  OverrideMap overrides_;
};

}  // namespace reviewscore::decompose
