#include "reviewscore/core.hpp"

namespace reviewscore {

const char* to_string(PointKind k) {
  switch (k) {
    case PointKind::Claim: return "claim";
    case PointKind::Argument: return "argument";
    case PointKind::Question: return "question";
  }
  return "claim";
}

PointKind point_kind_from_string(const std::string& s) {
  if (s == "claim") return PointKind::Claim;
  if (s == "argument") return PointKind::Argument;
  if (s == "question") return PointKind::Question;
  throw std::invalid_argument("unknown point kind: " + s);
}

const char* to_string(BinaryLabel b) {
  return b == BinaryLabel::Misinformed ? "misinformed" : "not_misinformed";
}

const char* to_string(KnowledgeBase kb) {
  switch (kb) {
    case KnowledgeBase::SubmittedPaper: return "submitted_paper";
    case KnowledgeBase::InternalKnowledge: return "internal_knowledge";
    case KnowledgeBase::ReferredPapers: return "referred_papers";
  }
  return "submitted_paper";
}

KnowledgeBase knowledge_base_from_string(const std::string& s) {
  if (s == "submitted_paper") return KnowledgeBase::SubmittedPaper;
  if (s == "internal_knowledge") return KnowledgeBase::InternalKnowledge;
  if (s == "referred_papers") return KnowledgeBase::ReferredPapers;
  throw std::invalid_argument("unknown knowledge base: " + s);
}

}  // namespace reviewscore
