#pragma once

#include <string>
#include <vector>

namespace factreason::prompts {

/// Few-shot decomposition prompt; the reply is a "- " bulleted list of atoms.
std::string atomizer(const std::string& paragraph);

/// Few-shot decontextualization prompt; the reply wraps the rewrite in ####.
std::string reviser(const std::string& context, const std::string& statement);

/// Few-shot NLI prompt; the reply is one of entailment | contradiction | neutral.
std::string nli(const std::string& premise, const std::string& hypothesis,
                const std::string& context);

/// "True or False?" verdict over a numbered context block.
std::string fact_score(const std::string& contexts_block, const std::string& atom);

/// Reasoned verdict in square brackets over KNOWLEDGE points.
std::string fact_verify(const std::string& knowledge_block, const std::string& statement);

/// Search-result verdict wrapped in ### signs.
std::string veri_score(const std::string& claim, const std::string& results_block);

/// Bracketed verdict allowing the model's internal knowledge.
std::string deepseek(const std::string& evidence_block, const std::string& statement);

}  // namespace factreason::prompts
