#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reviewscore/core.hpp"

using namespace reviewscore;

TEST_CASE("to_binary threshold") {
  CHECK(to_binary(Score5(1)) == BinaryLabel::Misinformed);
  CHECK(to_binary(Score5(2)) == BinaryLabel::Misinformed);
  CHECK(to_binary(Score5(3)) == BinaryLabel::NotMisinformed);
  CHECK(to_binary(Score5(5)) == BinaryLabel::NotMisinformed);
}

TEST_CASE("to_binary is monotone") {
  auto rank = [](BinaryLabel b) { return b == BinaryLabel::Misinformed ? 0 : 1; };
  for (int s1 = 1; s1 <= 5; ++s1)
    for (int s2 = s1; s2 <= 5; ++s2) CHECK(rank(to_binary(Score5(s1))) <= rank(to_binary(Score5(s2))));
}

TEST_CASE("median3 on annotated examples") {
  CHECK(median3(Score5(3), Score5(4), Score5(4)).value() == 4);
  CHECK(median3(Score5(2), Score5(2), Score5(5)).value() == 2);
  CHECK(median3(Score5(5), Score5(5), Score5(5)).value() == 5);
}

TEST_CASE("median3 exhaustive: permutation-invariant, matches sort oracle, returns an input") {
  for (int a = 1; a <= 5; ++a) {
    for (int b = 1; b <= 5; ++b) {
      for (int c = 1; c <= 5; ++c) {
        int v[3] = {a, b, c};
        std::sort(v, v + 3);
        const int expected = v[1];
        const int perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
        for (const auto& p : perms)
          CHECK(median3(Score5(p[0]), Score5(p[1]), Score5(p[2])).value() == expected);
        CHECK((expected == a || expected == b || expected == c));
      }
    }
  }
}

TEST_CASE("score bounds enforced") {
  CHECK_THROWS_AS(Score5(0), std::out_of_range);
  CHECK_THROWS_AS(Score5(6), std::out_of_range);
  CHECK_THROWS_AS(Untrivialness(3), std::out_of_range);
  CHECK_NOTHROW(Untrivialness(0));
}

TEST_CASE("annotation record: median label and incompleteness") {
  AnnotationRecord rec;
  rec.subject_id = "pt1";
  rec.scores = {3, 4, 4};
  REQUIRE(rec.final_label().has_value());
  CHECK(rec.final_label()->value() == 4);

  AnnotationRecord partial;
  partial.scores = {4, 5};  // skipped third annotator: surfaced as incomplete
  CHECK_FALSE(partial.complete());
  CHECK_FALSE(partial.final_label().has_value());
}

TEST_CASE("annotation record: untrivialness and faithfulness medians") {
  AnnotationRecord rec;
  rec.untrivialness = {0, 2, 2};
  rec.faithfulness = {4, 5, 3};
  CHECK(rec.final_untrivialness() == 2);
  CHECK(rec.final_faithfulness() == 4);
}

TEST_CASE("enum string round trips") {
  for (PointKind k : {PointKind::Claim, PointKind::Argument, PointKind::Question})
    CHECK(point_kind_from_string(to_string(k)) == k);
  for (KnowledgeBase kb : {KnowledgeBase::SubmittedPaper, KnowledgeBase::InternalKnowledge, KnowledgeBase::ReferredPapers})
    CHECK(knowledge_base_from_string(to_string(kb)) == kb);
  CHECK_THROWS_AS(point_kind_from_string("weakness"), std::invalid_argument);
}
