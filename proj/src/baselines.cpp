#include "factreason/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "factreason/errors.hpp"
#include "factreason/prompts.hpp"

namespace factreason {

namespace {

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string ask(const std::string& prompt, const BaselineConfig& config, ChatClient& client) {
    ChatRequest request;
    request.model = config.model;
    request.messages = {{"user", prompt}};
    request.temperature = config.temperature;
    request.logprobs = false;
    return client.complete(request).content;
}

void require_contexts(const std::vector<ContextRecord>& contexts) {
    if (contexts.empty()) throw ConfigError("baseline assessors require at least one context");
}

/// Last occurrence of any delimited label wins: the prompts ask for reasoning
/// followed by a final answer.
AtomLabel parse_last_delimited(const std::string& reply, const std::string& open,
                               const std::string& close, const char* grammar) {
    const std::string hay = lowercase(reply);
    struct Candidate {
        const char* word;
        AtomLabel label;
    };
    const Candidate candidates[] = {{"supported", AtomLabel::kSupported},
                                    {"contradicted", AtomLabel::kContradicted},
                                    {"undecided", AtomLabel::kUndecided}};
    std::size_t best_pos = std::string::npos;
    AtomLabel best_label = AtomLabel::kUndecided;
    for (const Candidate& c : candidates) {
        const std::string needle = open + c.word + close;
        std::size_t pos = hay.rfind(needle);
        if (pos != std::string::npos && (best_pos == std::string::npos || pos > best_pos)) {
            best_pos = pos;
            best_label = c.label;
        }
    }
    if (best_pos == std::string::npos) {
        throw ReplyParseError(std::string("reply carries no ") + grammar + " verdict: '" + reply +
                              "'");
    }
    return best_label;
}

}  // namespace

BaselineVerdict fs_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                          const BaselineConfig& config, ChatClient& client) {
    require_contexts(contexts);
    std::ostringstream block;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (i) block << "\n\n";
        block << "Context " << (i + 1) << ": " << contexts[i].utterance();
    }
    BaselineVerdict verdict;
    verdict.atom_id = atom.atom_id;
    verdict.raw_reply = ask(prompts::fact_score(block.str(), atom.text), config, client);

    const std::string hay = lowercase(verdict.raw_reply);
    const std::size_t true_pos = hay.find("true");
    const std::size_t false_pos = hay.find("false");
    if (true_pos == std::string::npos && false_pos == std::string::npos) {
        throw ReplyParseError("reply carries neither True nor False: '" + verdict.raw_reply + "'");
    }
    verdict.label = (false_pos == std::string::npos ||
                     (true_pos != std::string::npos && true_pos < false_pos))
                        ? AtomLabel::kSupported
                        : AtomLabel::kContradicted;
    return verdict;
}

BaselineVerdict fv_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                          const BaselineConfig& config, ChatClient& client) {
    require_contexts(contexts);
    std::ostringstream block;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (i) block << "\n";
        block << (i + 1) << ". " << contexts[i].utterance();
    }
    BaselineVerdict verdict;
    verdict.atom_id = atom.atom_id;
    verdict.raw_reply = ask(prompts::fact_verify(block.str(), atom.text), config, client);
    verdict.label = parse_last_delimited(verdict.raw_reply, "[", "]", "bracketed");
    return verdict;
}

BaselineVerdict vs_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                          const BaselineConfig& config, ChatClient& client) {
    require_contexts(contexts);
    std::ostringstream block;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (i) block << "\n\n";
        block << "Search result " << (i + 1) << "\nTitle: " << contexts[i].title
              << "\nContent: " << contexts[i].utterance() << "\nLink: " << contexts[i].link;
    }
    BaselineVerdict verdict;
    verdict.atom_id = atom.atom_id;
    verdict.raw_reply = ask(prompts::veri_score(atom.text, block.str()), config, client);
    verdict.label = parse_last_delimited(verdict.raw_reply, "###", "###", "###-delimited");
    return verdict;
}

BaselineVerdict deepseek_assess(const AtomRecord& atom, const std::vector<ContextRecord>& contexts,
                                const BaselineConfig& config, ChatClient& client) {
    require_contexts(contexts);
    std::ostringstream block;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (i) block << "\n";
        block << (i + 1) << ". " << contexts[i].utterance();
    }
    BaselineVerdict verdict;
    verdict.atom_id = atom.atom_id;
    verdict.raw_reply = ask(prompts::deepseek(block.str(), atom.text), config, client);
    verdict.label = parse_last_delimited(verdict.raw_reply, "[", "]", "bracketed");
    return verdict;
}

}  // namespace factreason
