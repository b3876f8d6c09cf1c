#include "reviewscore/llm/templates.hpp"

// Version-pinned prompt catalog. Changing any wording here changes request
// hashes and therefore invalidates caches and recorded transcripts.

namespace reviewscore::llm {

namespace {

constexpr const char* kJsonReminder = "Reply with a single fenced ```json code block and nothing else.";

const char* kFolGrammarNote =
    "Write FOL formulas in this grammar: quantifiers `forall x. (...)` and `exists x. (...)`, "
    "connectives `~` (not), `&` (and), `|` (or), `->` (implies), `<->` (iff), and predicate "
    "applications like `P(a)` or `Relates(a, b)` over plain constant symbols. Do not use function "
    "symbols, equality, or arithmetic. Encode identity claims as ordinary predicates. Every "
    "predicate and constant symbol must have an entry in `keys` giving its natural-language meaning.";

struct TemplateDef {
  std::vector<Message> messages;
};

const std::map<std::string, TemplateDef>& registry() {
  static const std::map<std::string, TemplateDef> reg = [] {
    std::map<std::string, TemplateDef> r;

    r["point_extraction"] = TemplateDef{{
        {"system",
         "You split peer reviews into independent review points. A review point is one atomic "
         "weakness or question. Use only the weaknesses and questions sections; never take material "
         "from the summary or strengths. Prefer the largest units that each make a single evaluative "
         "point. Keep the reviewer's own wording."},
        {"user",
         std::string("Paper title: {{paper_title}}\n\nWeaknesses section:\n{{weaknesses}}\n\nQuestions "
                     "section:\n{{questions}}\n\nList the independent review points. For each give the verbatim text "
                     "and which section it came from (\"weaknesses\" or \"questions\").\n\nExpected fields: "
                     "{\"points\": [{\"text\": \"...\", \"section\": \"...\"}]}\n") +
             kJsonReminder},
    }};

    r["type_classification"] = TemplateDef{{
        {"system",
         "You classify peer-review points. A question asks the authors something. Weaknesses are "
         "categorized into arguments and claims based on whether there are supporting reasons: a "
         "claim is a weakness stated without supporting reasons, an argument is a weakness that "
         "comes with supporting reasons."},
        {"user",
         std::string("Paper title: {{paper_title}}\n\nReview point:\n{{point}}\n\nClassify it.\n\nExpected fields: "
                     "{\"kind\": \"claim\" | \"argument\" | \"question\"}\n") +
             kJsonReminder},
    }};

    r["verbatim_extraction"] = TemplateDef{{
        {"system",
         "You extract the skeleton of an argumentative review point. Return the conjecture (the "
         "point being argued for) and each reason statement supporting it. Every string you return "
         "must be a verbatim substring of the review point; do not paraphrase, reorder words, or fix "
         "grammar."},
        {"user",
         std::string("Argumentative review point:\n{{argument}}\n\nExpected fields: {\"conjecture\": \"...\", "
                     "\"reasons\": [\"...\"]}\n") +
             kJsonReminder},
    }};

    r["reconstruction"] = TemplateDef{{
        {"system",
         std::string(
             "You reconstruct an argumentative peer-review point into an explicit premise-conclusion "
             "structure. Include every explicit premise and add any implicit premise needed so that the "
             "premises deductively imply the conclusion; mark added premises with \"implicit\": true. "
             "For each premise and for the conclusion give both the natural-language sentence and a "
             "first-order-logic formalization. ") +
             kFolGrammarNote +
             " Finish with a deductive proof sketch showing how the premises imply the conclusion."},
        {"user",
         std::string("Paper (context for the argument):\n{{paper}}\n\nArgumentative review "
                     "point:\n{{argument}}\n\nVerbatim conjecture: {{conjecture}}\nVerbatim reasons:\n{{reasons}}\n\n"
                     "Feedback on your previous reconstruction (empty on the first attempt):\n{{feedback}}\n\n"
                     "Previous reconstruction (empty on the first attempt):\n{{previous}}\n\n"
                     "Expected fields: {\"premises\": [{\"nl\": \"...\", \"fol\": \"...\", \"implicit\": false}], "
                     "\"conclusion\": {\"nl\": \"...\", \"fol\": \"...\"}, \"keys\": {\"Symbol\": \"meaning\"}, "
                     "\"proof\": \"...\"}\n") +
             kJsonReminder},
    }};

    r["deformalization"] = TemplateDef{{
        {"system",
         "You translate first-order-logic formulas back into natural language, one transparent "
         "sentence per formula, using the provided keys for the meaning of every predicate and "
         "constant symbol. Keep the logical structure visible (if-then for implications, and/or for "
         "connectives, every/some for quantifiers)."},
        {"user",
         std::string("Keys:\n{{keys}}\n\nPremise formulas:\n{{premises}}\n\nConclusion "
                     "formula:\n{{conclusion}}\n\nTranslate each premise formula and the conclusion formula into one "
                     "sentence each, in order.\n\nExpected fields: {\"premises\": [\"...\"], \"conclusion\": "
                     "\"...\"}\n") +
             kJsonReminder},
    }};

    r["faithfulness_judge"] = TemplateDef{{
        {"system",
         "You judge whether a premise-conclusion reconstruction faithfully represents an original "
         "argument: it must accurately and completely express what the original argues, with the "
         "conclusion at the original's strength (no stronger, no weaker), and premises that neither "
         "add foreign claims nor drop essential ones."},
        {"user",
         std::string("Original argumentative review point:\n{{argument}}\n\nReconstructed "
                     "premises:\n{{premises}}\n\nReconstructed conclusion:\n{{conclusion}}\n\nIs the reconstruction "
                     "faithful? Justify briefly.\n\nExpected fields: {\"faithful\": true | false, \"justification\": "
                     "\"...\"}\n") +
             kJsonReminder},
    }};

    const std::string factuality_rubric =
        "Score the statement's factuality on a 5-point scale:\n"
        "5: clearly true - directly supported by the knowledge base\n"
        "4: likely true - consistent with the knowledge base, minor gaps\n"
        "3: uncertain or partially true - evidence is mixed or incomplete\n"
        "2: likely false - mostly contradicted by the knowledge base\n"
        "1: clearly false - directly contradicted by the knowledge base\n";

    r["factuality_judge"] = TemplateDef{{
        {"system",
         std::string("You judge the factuality of a statement about a submitted paper against a given knowledge "
                     "base. Knowledge bases: submitted_paper (the paper text below), internal_knowledge (your own "
                     "general knowledge), referred_papers (your understanding of the works the paper cites).\n") +
             factuality_rubric},
        {"user",
         std::string("Knowledge base to use: {{kb}}\n\nSubmitted paper:\n{{paper}}\n\nStatement:\n{{statement}}\n\n"
                     "Expected fields: {\"score\": 1-5, \"justification\": \"...\"}\n") +
             kJsonReminder},
    }};

    r["factuality_judge_with_ar"] = TemplateDef{{
        r["factuality_judge"].messages[0],
        {"user",
         std::string("Knowledge base to use: {{kb}}\n\nSubmitted paper:\n{{paper}}\n\nAuthors' response to the "
                     "review (additional context):\n{{author_response}}\n\nStatement:\n{{statement}}\n\n"
                     "Expected fields: {\"score\": 1-5, \"justification\": \"...\"}\n") +
             kJsonReminder},
    }};

    const std::string unanswerability_rubric =
        "Score how unanswerable the question is given the paper, on a 5-point scale:\n"
        "5: not addressed - the paper contains nothing that answers it\n"
        "4: mostly unaddressed - only tangential material exists\n"
        "3: partially addressed - a reader could assemble a partial answer\n"
        "2: mostly answered - the paper answers it with minor gaps\n"
        "1: fully answered - the paper already answers it directly\n";

    r["unanswerability_judge"] = TemplateDef{{
        {"system",
         std::string("You judge whether a reviewer's question is already answered by the submitted paper.\n") +
             unanswerability_rubric},
        {"user",
         std::string("Submitted paper:\n{{paper}}\n\nReviewer question:\n{{question}}\n\nExpected fields: "
                     "{\"score\": 1-5, \"justification\": \"...\"}\n") +
             kJsonReminder},
    }};

    r["unanswerability_judge_with_ar"] = TemplateDef{{
        r["unanswerability_judge"].messages[0],
        {"user",
         std::string("Submitted paper:\n{{paper}}\n\nAuthors' response to the review (additional "
                     "context):\n{{author_response}}\n\nReviewer question:\n{{question}}\n\nExpected fields: "
                     "{\"score\": 1-5, \"justification\": \"...\"}\n") +
             kJsonReminder},
    }};

    r["untrivialness_judge"] = TemplateDef{{
        {"system",
         "You judge how untrivial a premise of a reconstructed argument is:\n"
         "2: substantive - carries factual content that could be wrong\n"
         "1: somewhat informative - mild content, mostly framing\n"
         "0: trivially true - connective glue (e.g. a conditional that merely chains other premises) "
         "whose truth nobody would dispute\n"},
        {"user",
         std::string("Argument (context):\n{{argument}}\n\nPremise:\n{{premise}}\n\nExpected fields: "
                     "{\"untrivialness\": 0-2, \"justification\": \"...\"}\n") +
             kJsonReminder},
    }};

    r["kb_select"] = TemplateDef{{
        {"system",
         "You pick the knowledge base best suited to judge the factuality of a premise: "
         "submitted_paper when the premise is about the paper's own content or results, "
         "internal_knowledge when it is about general knowledge of the field, referred_papers when "
         "it is about works the paper cites or compares against."},
        {"user",
         std::string("Paper title: {{paper_title}}\n\nPremise:\n{{premise}}\n\nExpected fields: {\"kb\": "
                     "\"submitted_paper\" | \"internal_knowledge\" | \"referred_papers\"}\n") +
             kJsonReminder},
    }};

    return r;
  }();
  return reg;
}

std::string substitute(const std::string& tpl, const std::map<std::string, std::string>& bindings,
                       const std::string& template_id) {
  std::string out;
  out.reserve(tpl.size());
  std::size_t i = 0;
  while (i < tpl.size()) {
    std::size_t open = tpl.find("{{", i);
    if (open == std::string::npos) {
      out.append(tpl, i, std::string::npos);
      break;
    }
    std::size_t close = tpl.find("}}", open + 2);
    if (close == std::string::npos) {
      out.append(tpl, i, std::string::npos);
      break;
    }
    out.append(tpl, i, open - i);
    std::string name = tpl.substr(open + 2, close - open - 2);
    auto it = bindings.find(name);
    if (it == bindings.end())
      throw MissingBinding("template '" + template_id + "' placeholder '" + name + "' has no binding");
    out += it->second;
    i = close + 2;
  }
  return out;
}

}  // namespace

std::vector<std::string> template_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, def] : registry()) {
    (void)def;
    ids.push_back(id);
  }
  return ids;
}

bool has_template(const std::string& template_id) { return registry().count(template_id) > 0; }

PromptInstance render(const std::string& template_id, const std::map<std::string, std::string>& bindings) {
  auto it = registry().find(template_id);
  if (it == registry().end()) throw UnknownTemplate("no template registered under '" + template_id + "'");
  PromptInstance out;
  out.template_id = template_id;
  out.bindings = bindings;
  for (const Message& m : it->second.messages) out.messages.push_back({m.role, substitute(m.content, bindings, template_id)});
  return out;
}

}  // namespace reviewscore::llm
