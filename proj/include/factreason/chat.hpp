#pragma once

#include <optional>
#include <string>
#include <vector>

#include "factreason/http.hpp"

namespace factreason {

class DiskCache;
class RequestBudget;

struct ChatMessage {
    std::string role;
    std::string content;
};

struct TopLogprob {
    std::string token;
    double logprob = 0.0;
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;
    std::vector<TopLogprob> top;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    bool logprobs = true;
    int top_logprobs = 5;
};

struct ChatResponse {
    std::string content;
    std::vector<TokenLogprob> logprobs;
};

/// Chat-completion transport. Implementations must be safe for concurrent calls.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

struct ChatEndpointConfig {
    /// Full URL of the chat-completions resource.
    std::string endpoint;
    int max_retries = 3;
    int backoff_ms = 250;
    /// Bearer token; when empty the FACTREASON_LLM_KEY environment variable is used.
    std::string api_key;
};

/// JSON-over-HTTP chat client speaking the common chat-completions wire protocol.
/// Retries connection failures and 5xx responses with exponential backoff; a 429
/// surfaces as QuotaError.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(HttpTransport& transport, ChatEndpointConfig config);
    ChatResponse complete(const ChatRequest& request) override;

    /// Request serialization, exposed for golden tests of the wire format.
    static std::string encode_request(const ChatRequest& request);
    static ChatResponse decode_response(const std::string& body);

private:
    HttpTransport& transport_;
    ChatEndpointConfig config_;
};

/// Serves chat completions from a disk cache, forwarding misses to the inner
/// client and persisting the result. A warm cache issues zero outbound requests.
class CachingChatClient : public ChatClient {
public:
    CachingChatClient(ChatClient& inner, DiskCache& cache);
    ChatResponse complete(const ChatRequest& request) override;

private:
    ChatClient& inner_;
    DiskCache& cache_;
};

/// Applies the global outstanding-request budget around an inner client.
class BudgetedChatClient : public ChatClient {
public:
    BudgetedChatClient(ChatClient& inner, RequestBudget& budget);
    ChatResponse complete(const ChatRequest& request) override;

private:
    ChatClient& inner_;
    RequestBudget& budget_;
};

}  // namespace factreason
