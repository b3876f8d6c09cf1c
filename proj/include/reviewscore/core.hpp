#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Shared domain types: papers, review points, the 5-point / binary / untrivialness
// label algebra, and the per-subject human annotation record.
namespace reviewscore {

struct PaperDoc {
  std::string paper_id;
  std::string title;
  std::string body_text;  // pre-parsed full text, UTF-8
  std::vector<std::string> referred_titles;
};

enum class PointKind { Claim, Argument, Question };

const char* to_string(PointKind k);
PointKind point_kind_from_string(const std::string& s);

struct ReviewPoint {
  std::string point_id;
  std::string paper_id;
  std::string review_id;
  std::string text;
  std::optional<PointKind> kind;  // assigned exactly once, by classification or override
};

// 5-point score, 1..5.
class Score5 {
 public:
  explicit Score5(int value) : value_(value) {
    if (value < 1 || value > 5) throw std::out_of_range("Score5 must be in [1,5], got " + std::to_string(value));
  }
  int value() const { return value_; }
  friend bool operator==(Score5 a, Score5 b) { return a.value_ == b.value_; }
  friend bool operator!=(Score5 a, Score5 b) { return a.value_ != b.value_; }
  friend bool operator<(Score5 a, Score5 b) { return a.value_ < b.value_; }

 private:
  int value_;
};

enum class BinaryLabel { Misinformed, NotMisinformed };

const char* to_string(BinaryLabel b);

// Untrivialness weight, 0..2. 0 marks a trivially-true connective premise.
class Untrivialness {
 public:
  explicit Untrivialness(int value) : value_(value) {
    if (value < 0 || value > 2) throw std::out_of_range("Untrivialness must be in [0,2], got " + std::to_string(value));
  }
  int value() const { return value_; }
  friend bool operator==(Untrivialness a, Untrivialness b) { return a.value_ == b.value_; }

 private:
  int value_;
};

enum class KnowledgeBase { SubmittedPaper, InternalKnowledge, ReferredPapers };

const char* to_string(KnowledgeBase kb);
KnowledgeBase knowledge_base_from_string(const std::string& s);

// Score 1-2 maps to Misinformed, 3-5 to NotMisinformed.
inline BinaryLabel to_binary(Score5 s) {
  return s.value() <= 2 ? BinaryLabel::Misinformed : BinaryLabel::NotMisinformed;
}

// Middle of the sorted triple.
inline Score5 median3(Score5 a, Score5 b, Score5 c) {
  std::array<int, 3> v{a.value(), b.value(), c.value()};
  std::sort(v.begin(), v.end());
  return Score5(v[1]);
}

// median3 over small ints (untrivialness, faithfulness on raw integer scale).
inline int median3i(int a, int b, int c) {
  std::array<int, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  return v[1];
}

// Human annotation for one subject (a review point or a premise). Premise
// records may be missing entirely when annotators skipped them; a record with
// fewer than 3 scores is surfaced as incomplete and yields no final label.
struct AnnotationRecord {
  std::string subject_id;
  std::optional<PointKind> kind;
  std::vector<int> scores;               // 5-point annotator scores, 3 when complete
  std::vector<int> untrivialness;        // premises only, 0..2 each
  std::vector<int> faithfulness;         // argument points only, 1..5 each
  std::optional<KnowledgeBase> kb;
  std::string group;                     // annotator group tag, "" when unknown

  bool complete() const { return scores.size() == 3; }

  std::optional<Score5> final_label() const {
    if (!complete()) return std::nullopt;
    return median3(Score5(scores[0]), Score5(scores[1]), Score5(scores[2]));
  }

  std::optional<int> final_untrivialness() const {
    if (untrivialness.size() != 3) return std::nullopt;
    return median3i(untrivialness[0], untrivialness[1], untrivialness[2]);
  }

  std::optional<int> final_faithfulness() const {
    if (faithfulness.size() != 3) return std::nullopt;
    return median3i(faithfulness[0], faithfulness[1], faithfulness[2]);
  }
};

// A raw peer review split into the four OpenReview-visible sections.
struct RawReview {
  std::string review_id;
  std::string paper_id;
  std::map<std::string, std::string> sections;  // summary, strengths, weaknesses, questions
  std::string raw_text;

  std::string section(const std::string& name) const {
    auto it = sections.find(name);
    return it == sections.end() ? std::string() : it->second;
  }
};

}  // namespace reviewscore
