#include "factreason/chat.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "factreason/cache.hpp"
#include "factreason/concurrency.hpp"
#include "factreason/errors.hpp"

namespace factreason {

using nlohmann::json;

HttpChatClient::HttpChatClient(HttpTransport& transport, ChatEndpointConfig config)
    : transport_(transport), config_(std::move(config)) {
    if (config_.endpoint.empty()) throw ConfigError("chat endpoint must not be empty");
    if (config_.api_key.empty()) {
        if (const char* key = std::getenv("FACTREASON_LLM_KEY")) config_.api_key = key;
    }
}

std::string HttpChatClient::encode_request(const ChatRequest& request) {
    json body;
    body["model"] = request.model;
    body["messages"] = json::array();
    for (const ChatMessage& m : request.messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }
    body["temperature"] = request.temperature;
    if (request.logprobs) {
        body["logprobs"] = true;
        body["top_logprobs"] = request.top_logprobs;
    }
    return body.dump();
}

ChatResponse HttpChatClient::decode_response(const std::string& body) {
    json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
        throw TransportError("malformed chat completion response");
    }
    const json& choice = parsed["choices"][0];
    ChatResponse out;
    out.content = choice.value("message", json::object()).value("content", "");
    if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
        choice["logprobs"].contains("content")) {
        for (const json& tok : choice["logprobs"]["content"]) {
            TokenLogprob t;
            t.token = tok.value("token", "");
            t.logprob = tok.value("logprob", 0.0);
            for (const json& alt : tok.value("top_logprobs", json::array())) {
                t.top.push_back({alt.value("token", ""), alt.value("logprob", 0.0)});
            }
            out.logprobs.push_back(std::move(t));
        }
    }
    return out;
}

ChatResponse HttpChatClient::complete(const ChatRequest& request) {
    HttpHeaders headers;
    if (!config_.api_key.empty()) headers["Authorization"] = "Bearer " + config_.api_key;

    const std::string body = encode_request(request);
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.backoff_ms * (1 << (attempt - 1))));
        }
        try {
            const HttpResponse response =
                transport_.post(config_.endpoint, headers, body, "application/json");
            if (response.status == 429) {
                throw QuotaError("chat endpoint rejected the request with status 429");
            }
            if (response.status >= 500) {
                last_error = "status " + std::to_string(response.status);
                continue;
            }
            if (response.status < 200 || response.status >= 300) {
                throw TransportError("chat endpoint returned status " +
                                     std::to_string(response.status) + ": " + response.body);
            }
            return decode_response(response.body);
        } catch (const QuotaError&) {
            throw;
        } catch (const TransportError& e) {
            last_error = e.what();
            if (attempt == config_.max_retries) break;
        }
    }
    throw TransportError("chat request failed after " + std::to_string(config_.max_retries + 1) +
                         " attempts: " + last_error);
}

// ---------------------------------------------------------------------------

namespace {

json request_to_json(const ChatRequest& request) {
    return json::parse(HttpChatClient::encode_request(request));
}

json response_to_json(const ChatResponse& response) {
    json out;
    out["content"] = response.content;
    out["logprobs"] = json::array();
    for (const TokenLogprob& t : response.logprobs) {
        json tok;
        tok["token"] = t.token;
        tok["logprob"] = t.logprob;
        tok["top"] = json::array();
        for (const TopLogprob& alt : t.top) {
            tok["top"].push_back({{"token", alt.token}, {"logprob", alt.logprob}});
        }
        out["logprobs"].push_back(std::move(tok));
    }
    return out;
}

ChatResponse response_from_json(const json& j) {
    ChatResponse out;
    out.content = j.value("content", "");
    for (const json& tok : j.value("logprobs", json::array())) {
        TokenLogprob t;
        t.token = tok.value("token", "");
        t.logprob = tok.value("logprob", 0.0);
        for (const json& alt : tok.value("top", json::array())) {
            t.top.push_back({alt.value("token", ""), alt.value("logprob", 0.0)});
        }
        out.logprobs.push_back(std::move(t));
    }
    return out;
}

}  // namespace

CachingChatClient::CachingChatClient(ChatClient& inner, DiskCache& cache)
    : inner_(inner), cache_(cache) {}

ChatResponse CachingChatClient::complete(const ChatRequest& request) {
    const json payload = request_to_json(request);
    if (auto hit = cache_.get("chat", payload)) {
        return response_from_json(*hit);
    }
    ChatResponse response = inner_.complete(request);
    cache_.put("chat", payload, response_to_json(response));
    return response;
}

BudgetedChatClient::BudgetedChatClient(ChatClient& inner, RequestBudget& budget)
    : inner_(inner), budget_(budget) {}

ChatResponse BudgetedChatClient::complete(const ChatRequest& request) {
    RequestBudget::Lease lease = budget_.acquire();
    return inner_.complete(request);
}

}  // namespace factreason
