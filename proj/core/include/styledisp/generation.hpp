#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "styledisp/corpus.hpp"
#include "styledisp/error.hpp"
#include "styledisp/retry.hpp"

namespace styledisp {

enum class TemplateId { QueneauGenFr, QueneauGenEn, FeneonGenFr, FeneonGenEn };

std::string_view template_name(TemplateId id);

// Template used to synthesize `target` in `language` ("fr" or "en").
TemplateId template_for(CellId target, std::string_view language);

// Renders the rewrite prompt. FeneonGen templates take the style exemplar,
// QueneauGen templates must not be given one.
std::string render_prompt(TemplateId id, std::string_view source_text,
                          std::optional<std::string_view> exemplar_text = std::nullopt);

struct GenerationParams {
    std::string model_name = "gpt-4o";
    double temperature = 1.0;
    unsigned max_tokens = 512;
    unsigned retry_budget = 3;
    std::size_t max_in_flight = 1;

    void validate() const;
};

struct ChatResponse {
    std::string text;
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
};

// Chat-completion provider. Implementations used with max_in_flight > 1 must
// be safe to call concurrently.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual ChatResponse complete(const std::string& prompt, const GenerationParams& params) = 0;
};

struct CallRecord {
    std::string prompt_sha256;
    std::size_t attempt = 0;
    double latency_ms = 0.0;
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
    bool ok = false;
    std::string error;
};

using CallObserver = std::function<void(const CallRecord&)>;

struct GenerationOptions {
    RetryPolicy retry;  // retry_budget is taken from GenerationParams
    CallObserver observer;
    // Style key stamped on QUENEAU_GEN documents when FENEON_REF does not
    // carry a single shared style_key.
    std::string fallback_target_style = "feneon";
};

// Thrown when some prompts still fail after the retry budget. Successful
// documents are kept in `partial` at their source positions.
class GenerationError : public ProviderError {
public:
    GenerationError(Kind kind, const std::string& message, std::vector<std::optional<Document>> partial,
                    std::vector<std::size_t> failed)
        : ProviderError(kind, message), partial_(std::move(partial)), failed_(std::move(failed)) {}

    const std::vector<std::optional<Document>>& partial() const { return partial_; }
    const std::vector<std::size_t>& failed_positions() const { return failed_; }

private:
    std::vector<std::optional<Document>> partial_;
    std::vector<std::size_t> failed_;
};

// Synthesizes QUENEAU_GEN (from QUENEAU_REF) or FENEON_GEN (FENEON_REF story i
// rewritten in QUENEAU_REF style i) for one language. Output order follows
// the source cell; the corpus is not modified.
std::vector<Document> generate_cell(const Corpus& corpus, CellId target_cell, std::string_view language,
                                    ChatClient& client, const GenerationParams& params,
                                    const GenerationOptions& options = {});

// Appends generated documents to a corpus, returning a new corpus.
Corpus with_documents(const Corpus& corpus, const std::vector<Document>& extra);

}  // namespace styledisp
