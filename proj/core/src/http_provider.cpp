#include "styledisp/http_provider.hpp"

#include <algorithm>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "styledisp/error.hpp"

namespace styledisp {

using nlohmann::json;

Endpoint parse_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint '" + url + "' lacks a scheme");
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

namespace {

std::string post_json(const Endpoint& endpoint, const std::string& api_key, const std::string& body,
                      int timeout_seconds) {
    httplib::Client client(endpoint.base);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
    auto response = client.Post(endpoint.path, headers, body, "application/json");
    if (!response) {
        throw ProviderError(ProviderError::Kind::Transient,
                            "request to " + endpoint.base + endpoint.path + " failed: " + httplib::to_string(response.error()));
    }
    const int status = response->status;
    if (status == 429) throw ProviderError(ProviderError::Kind::RateLimit, "provider rate limit (HTTP 429)");
    if (status >= 500) {
        throw ProviderError(ProviderError::Kind::Transient, "provider error HTTP " + std::to_string(status));
    }
    if (status < 200 || status >= 300) {
        throw ProviderError(ProviderError::Kind::Fatal,
                            "provider rejected request HTTP " + std::to_string(status) + ": " + response->body.substr(0, 500));
    }
    return response->body;
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ProviderError(ProviderError::Kind::Fatal, std::string("malformed provider response: ") + e.what());
    }
}

}  // namespace

std::string chat_request_body(const std::string& prompt, const GenerationParams& params) {
    json body = json::object();
    body["model"] = params.model_name;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = params.temperature;
    body["max_tokens"] = params.max_tokens;
    return body.dump();
}

ChatResponse parse_chat_response(const std::string& body) {
    const json parsed = parse_body(body);
    try {
        ChatResponse out;
        out.text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        if (parsed.contains("usage")) {
            const json& usage = parsed["usage"];
            out.prompt_tokens = usage.value("prompt_tokens", std::size_t{0});
            out.completion_tokens = usage.value("completion_tokens", std::size_t{0});
        }
        return out;
    } catch (const json::exception& e) {
        throw ProviderError(ProviderError::Kind::Fatal, std::string("unexpected chat response shape: ") + e.what());
    }
}

std::string embedding_request_body(std::span<const std::string> texts, const std::string& model_id) {
    json body = json::object();
    body["model"] = model_id;
    body["input"] = json::array();
    for (const auto& t : texts) body["input"].push_back(t);
    return body.dump();
}

std::vector<std::vector<double>> parse_embedding_response(const std::string& body, std::size_t expected) {
    const json parsed = parse_body(body);
    try {
        const json& data = parsed.at("data");
        std::vector<std::vector<double>> out(expected);
        std::vector<bool> filled(expected, false);
        for (std::size_t k = 0; k < data.size(); ++k) {
            const std::size_t index = data[k].value("index", k);
            if (index >= expected || filled[index]) {
                throw ProviderError(ProviderError::Kind::Fatal, "embedding response has a bad index");
            }
            out[index] = data[k].at("embedding").get<std::vector<double>>();
            filled[index] = true;
        }
        if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
            throw ProviderError(ProviderError::Kind::Fatal, "embedding response is missing vectors");
        }
        return out;
    } catch (const json::exception& e) {
        throw ProviderError(ProviderError::Kind::Fatal, std::string("unexpected embedding response shape: ") + e.what());
    }
}

HttpChatClient::HttpChatClient(std::string endpoint_url, std::string api_key, int timeout_seconds)
    : endpoint_(parse_endpoint(endpoint_url)), api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {}

ChatResponse HttpChatClient::complete(const std::string& prompt, const GenerationParams& params) {
    return parse_chat_response(post_json(endpoint_, api_key_, chat_request_body(prompt, params), timeout_seconds_));
}

HttpEmbeddingClient::HttpEmbeddingClient(std::string api_key, int timeout_seconds)
    : api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {}

std::vector<std::vector<double>> HttpEmbeddingClient::embed(std::span<const std::string> texts,
                                                            const ProviderSpec& provider) {
    const Endpoint endpoint = parse_endpoint(provider.endpoint);
    const std::string body =
        post_json(endpoint, api_key_, embedding_request_body(texts, provider.model_id), timeout_seconds_);
    return parse_embedding_response(body, texts.size());
}

}  // namespace styledisp
