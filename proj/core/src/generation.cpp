#include "styledisp/generation.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <set>

#include "styledisp/hash.hpp"
#include "styledisp/parallel.hpp"
#include "styledisp/text.hpp"

namespace styledisp {

std::string_view template_name(TemplateId id) {
    switch (id) {
        case TemplateId::QueneauGenFr: return "QueneauGenFr";
        case TemplateId::QueneauGenEn: return "QueneauGenEn";
        case TemplateId::FeneonGenFr: return "FeneonGenFr";
        case TemplateId::FeneonGenEn: return "FeneonGenEn";
    }
    return "?";
}

TemplateId template_for(CellId target, std::string_view language) {
    const bool fr = language == "fr";
    if (!fr && language != "en") {
        throw InvalidArgument("no prompt template for language '" + std::string(language) + "'");
    }
    if (target == cells::kQueneauGen) return fr ? TemplateId::QueneauGenFr : TemplateId::QueneauGenEn;
    if (target == cells::kFeneonGen) return fr ? TemplateId::FeneonGenFr : TemplateId::FeneonGenEn;
    throw InvalidArgument("cell " + std::string(cell_name(target)) + " is not a generated cell");
}

std::string render_prompt(TemplateId id, std::string_view source_text,
                          std::optional<std::string_view> exemplar_text) {
    if (text::is_blank(source_text)) throw InvalidArgument("render_prompt: empty source text");
    const bool needs_exemplar = id == TemplateId::FeneonGenFr || id == TemplateId::FeneonGenEn;
    if (needs_exemplar && !exemplar_text) throw InvalidArgument("render_prompt: exemplar required");
    if (!needs_exemplar && exemplar_text) throw InvalidArgument("render_prompt: exemplar not accepted");

    const std::string source(source_text);
    switch (id) {
        case TemplateId::QueneauGenFr:
            return "Ré écris ce texte : \n" + source +
                   "\n En copiant le style de Fénéon dans les 'nouvelles en trois lignes'";
        case TemplateId::QueneauGenEn:
            // The English variant carries a length constraint the French one lacks.
            return "Re write this text in strictly less than 30 words and using only 1 to 3 sentences: \n " +
                   source + "\n Copying Feneon's style in 'novels in three lines'";
        case TemplateId::FeneonGenFr:
            return "Ré écris ce texte :\n" + source + "\n En copiant le style de ce deuxième texte :" +
                   std::string(*exemplar_text);
        case TemplateId::FeneonGenEn:
            return "Re write this text: \n" + source + "\n Copying the style of this second text: " +
                   std::string(*exemplar_text);
    }
    throw InvalidArgument("render_prompt: unknown template");
}

void GenerationParams::validate() const {
    if (model_name.empty()) throw InvalidArgument("generation: model_name is empty");
    if (!std::isfinite(temperature) || temperature < 0.0) {
        throw InvalidArgument("generation: temperature must be finite and >= 0");
    }
    if (max_tokens == 0) throw InvalidArgument("generation: max_tokens must be positive");
    if (retry_budget > 100) throw InvalidArgument("generation: retry_budget must be <= 100");
    if (max_in_flight == 0) throw InvalidArgument("generation: max_in_flight must be positive");
}

namespace {

struct Job {
    std::string prompt;
    Document doc;  // everything except text
};

std::string shared_style(const std::vector<Document>& docs) {
    std::set<std::string> styles;
    for (const Document& d : docs) styles.insert(d.style_key);
    return styles.size() == 1 ? *styles.begin() : std::string();
}

}  // namespace

std::vector<Document> generate_cell(const Corpus& corpus, CellId target_cell, std::string_view language,
                                    ChatClient& client, const GenerationParams& params,
                                    const GenerationOptions& options) {
    params.validate();
    const TemplateId tid = template_for(target_cell, language);
    const std::string suffix = target_cell == cells::kQueneauGen ? ".qgen" : ".fgen";

    std::vector<Job> jobs;
    if (target_cell == cells::kQueneauGen) {
        const auto sources = select_cell(corpus, cells::kQueneauRef, language);
        if (sources.empty()) throw InvalidArgument("generate QUENEAU_GEN: no QUENEAU_REF source documents");
        std::string style = shared_style(select_cell(corpus, cells::kFeneonRef, language));
        if (style.empty()) style = options.fallback_target_style;
        for (const Document& src : sources) {
            Job job;
            job.prompt = render_prompt(tid, src.text);
            job.doc = Document{src.doc_id + suffix, src.language, "", cells::kQueneauGen, src.topic_key, style,
                               Origin::Generated};
            jobs.push_back(std::move(job));
        }
    } else {
        const auto stories = select_cell(corpus, cells::kFeneonRef, language);
        const auto styles = select_cell(corpus, cells::kQueneauRef, language);
        if (stories.empty()) throw InvalidArgument("generate FENEON_GEN: no FENEON_REF source documents");
        if (stories.size() != styles.size()) {
            throw InvalidArgument("generate FENEON_GEN: FENEON_REF has " + std::to_string(stories.size()) +
                                  " stories but QUENEAU_REF has " + std::to_string(styles.size()) + " styles");
        }
        for (std::size_t i = 0; i < stories.size(); ++i) {
            Job job;
            job.prompt = render_prompt(tid, stories[i].text, std::string_view(styles[i].text));
            job.doc = Document{stories[i].doc_id + suffix, stories[i].language, "", cells::kFeneonGen,
                               stories[i].topic_key, styles[i].style_key, Origin::Generated};
            jobs.push_back(std::move(job));
        }
    }

    RetryPolicy policy = options.retry;
    policy.retry_budget = params.retry_budget;

    auto run_one = [&](std::size_t i) -> Document {
        const std::string prompt_hash = sha256_hex(jobs[i].prompt);
        RetryPolicy local = policy;
        local.jitter_seed = policy.jitter_seed + i;
        const ChatResponse response = with_retry(local, [&](unsigned attempt) {
            CallRecord record;
            record.prompt_sha256 = prompt_hash;
            record.attempt = attempt;
            const auto start = std::chrono::steady_clock::now();
            try {
                ChatResponse r = client.complete(jobs[i].prompt, params);
                record.latency_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                record.ok = true;
                record.prompt_tokens = r.prompt_tokens;
                record.completion_tokens = r.completion_tokens;
                if (options.observer) options.observer(record);
                return r;
            } catch (const std::exception& e) {
                record.latency_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                record.error = e.what();
                if (options.observer) options.observer(record);
                throw;
            }
        });
        if (text::is_blank(response.text)) {
            throw ProviderError(ProviderError::Kind::Fatal, "provider returned empty text");
        }
        Document doc = jobs[i].doc;
        doc.text = text::nfc(response.text);
        return doc;
    };

    std::vector<std::exception_ptr> errors;
    auto results = ordered_parallel_map(jobs.size(), params.max_in_flight, run_one, &errors);

    std::vector<std::size_t> failed;
    std::optional<ProviderError::Kind> kind;
    std::string first_message;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) continue;
        failed.push_back(i);
        try {
            std::rethrow_exception(errors[i]);
        } catch (const ProviderError& e) {
            if (!kind) {
                kind = e.kind();
                first_message = e.what();
            }
        } catch (const std::exception& e) {
            if (!kind) {
                kind = ProviderError::Kind::Fatal;
                first_message = e.what();
            }
        }
    }
    if (!failed.empty()) {
        throw GenerationError(*kind,
                              "generation of " + std::string(cell_name(target_cell)) + " failed for " +
                                  std::to_string(failed.size()) + " of " + std::to_string(jobs.size()) +
                                  " documents: " + first_message,
                              std::move(results), std::move(failed));
    }

    std::vector<Document> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

Corpus with_documents(const Corpus& corpus, const std::vector<Document>& extra) {
    std::vector<Document> docs = corpus.documents();
    docs.insert(docs.end(), extra.begin(), extra.end());
    return Corpus(std::move(docs));
}

}  // namespace styledisp
