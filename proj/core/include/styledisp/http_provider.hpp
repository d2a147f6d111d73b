#pragma once

#include <string>

#include "styledisp/embedding.hpp"
#include "styledisp/generation.hpp"

namespace styledisp {

// Splits "https://host[:port]/path" into base ("https://host[:port]") and path.
struct Endpoint {
    std::string base;
    std::string path;
};
Endpoint parse_endpoint(const std::string& url);

// OpenAI-compatible chat-completions client:
//   POST {model, messages: [{role: "user", content}], temperature, max_tokens}
//   <- {choices: [{message: {content}}], usage: {prompt_tokens, completion_tokens}}
// HTTP 429 maps to RateLimit, 5xx and transport failures to Transient,
// anything else to Fatal.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(std::string endpoint_url, std::string api_key, int timeout_seconds = 120);

    ChatResponse complete(const std::string& prompt, const GenerationParams& params) override;

private:
    Endpoint endpoint_;
    std::string api_key_;
    int timeout_seconds_;
};

// OpenAI-compatible embeddings client:
//   POST {model, input: [texts]} <- {data: [{index, embedding: [...]}]}
class HttpEmbeddingClient : public EmbeddingClient {
public:
    HttpEmbeddingClient(std::string api_key, int timeout_seconds = 120);

    std::vector<std::vector<double>> embed(std::span<const std::string> texts,
                                           const ProviderSpec& provider) override;

private:
    std::string api_key_;
    int timeout_seconds_;
};

// Payload helpers, exposed for tests of the wire format.
std::string chat_request_body(const std::string& prompt, const GenerationParams& params);
ChatResponse parse_chat_response(const std::string& body);
std::string embedding_request_body(std::span<const std::string> texts, const std::string& model_id);
std::vector<std::vector<double>> parse_embedding_response(const std::string& body, std::size_t expected);

}  // namespace styledisp
