#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "styledisp/corpus.hpp"
#include "styledisp/stats.hpp"

namespace styledisp {

struct CharCounts {
    std::size_t total = 0;  // code points
    std::size_t letters = 0;
    std::size_t digits = 0;
    std::size_t punctuation = 0;
};

struct TokenizedDoc {
    std::vector<std::vector<std::string>> sentences;
    std::vector<std::string> tokens;  // original case, sentence order
    CharCounts chars;
};

// Sentences end at . ! ? or an ellipsis followed by whitespace or end of
// text; closing quotes and brackets stay with the sentence. Words are runs
// of letters and digits, with apostrophes and hyphens allowed inside.
TokenizedDoc tokenize(std::string_view text, std::string_view language);

// Vowel-group count, at least 1. English drops a silent final e.
std::size_t count_syllables(std::string_view word, std::string_view language);

// Over lowercased token types.
double yules_k(std::span<const std::string> tokens);
double shannon_entropy(std::span<const std::string> tokens);
double flesch_kincaid(double words, double sentences, double syllables);

class FunctionWords {
public:
    FunctionWords() = default;
    explicit FunctionWords(std::set<std::string, std::less<>> words);

    // Shipped lists for "en" and "fr"; other languages throw InvalidArgument.
    static FunctionWords builtin(std::string_view language);
    // One word per line; '#' starts a comment.
    static FunctionWords load(const std::filesystem::path& path);

    bool contains(std::string_view lowercase_word) const { return words_.find(lowercase_word) != words_.end(); }
    std::size_t size() const { return words_.size(); }

private:
    std::set<std::string, std::less<>> words_;
};

// Figure order.
enum class FeatureGroup { FunctionWords, Indexes, Letters, Ner, Numbers, Punctuation, Structural, Tag };

inline constexpr std::array<FeatureGroup, 8> kFeatureGroups{
    FeatureGroup::FunctionWords, FeatureGroup::Indexes, FeatureGroup::Letters,    FeatureGroup::Ner,
    FeatureGroup::Numbers,       FeatureGroup::Punctuation, FeatureGroup::Structural, FeatureGroup::Tag};

// function_words, indexes, letters, ner, numbers, punctuation, structural, tag
std::string_view group_name(FeatureGroup group);
std::optional<FeatureGroup> parse_group(std::string_view name);

struct NerSpan {
    std::size_t start = 0;  // token index, inclusive
    std::size_t end = 0;    // exclusive
    std::string label;
};

struct Annotation {
    std::string doc_id;
    std::vector<std::string> pos_tags;
    std::vector<NerSpan> ner_spans;
};

struct AnnotationSource {
    std::string provenance;
    std::map<std::string, Annotation, std::less<>> documents;

    const Annotation* find(std::string_view doc_id) const;
};

// Line-delimited {doc_id, pos_tags, ner_spans: [[start, end, label], ...]}.
AnnotationSource load_annotations(const std::filesystem::path& path);
AnnotationSource parse_annotations(std::istream& in, std::string_view source_name);

struct Subfeatures {
    double yules_k = 0.0;
    double shannon_entropy = 0.0;
    double flesch_kincaid = 0.0;
    double mean_word_length = 0.0;
    double mean_syllables = 0.0;
    double mean_sentence_length = 0.0;
};

struct StyleFeatures {
    std::string doc_id;
    CellId cell;
    std::size_t word_count = 0;
    std::size_t sentence_count = 0;
    Subfeatures sub;
    // indexes and structural hold z-score means only after normalize_groups.
    std::array<double, kFeatureGroups.size()> groups{};
    bool ner_low_confidence = true;
    bool tag_low_confidence = true;

    double group(FeatureGroup g) const { return groups[static_cast<std::size_t>(g)]; }
    double& group(FeatureGroup g) { return groups[static_cast<std::size_t>(g)]; }
};

StyleFeatures extract_features(const Document& doc, std::string_view language, const FunctionWords& function_words,
                               const Annotation* annotation = nullptr);

struct FeatureTable {
    std::string language;
    std::vector<StyleFeatures> rows;  // corpus order

    const StyleFeatures* find(std::string_view doc_id) const;
};

// Sets indexes and structural to the mean of the subfeatures' z-scores over
// all rows. Constant subfeatures contribute 0.
void normalize_groups(FeatureTable& table);

// Extracts every document of one language and normalizes the groups.
FeatureTable build_feature_table(const Corpus& corpus, std::string_view language, const FunctionWords& function_words,
                                 const AnnotationSource* annotations = nullptr);

std::string features_csv(const FeatureTable& table);
FeatureTable parse_features_csv(std::string_view text, std::string_view language);

enum class Arrow { Up, Down, Equal };

std::string_view arrow_name(Arrow arrow);  // up, down, =
std::string_view arrow_glyph(Arrow arrow);

struct GroundComparison {
    CellId from = cells::kQueneauGen;
    CellId to;
    Arrow arrow = Arrow::Equal;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    std::string stars;
};

struct GroundRow {
    FeatureGroup group;
    std::map<CellId, double> means;
    std::vector<GroundComparison> comparisons;  // to QUENEAU_REF, then FENEON_REF
};

struct GroundFrequencyTable {
    std::string language;
    stats::TTestKind test = stats::TTestKind::Welch;
    std::vector<GroundRow> rows;  // figure order

    const GroundComparison& comparison(FeatureGroup group, CellId to) const;
};

GroundFrequencyTable ground_table(const FeatureTable& features,
                                  stats::TTestKind kind = stats::TTestKind::Welch);

std::string ground_csv(const GroundFrequencyTable& table);
std::string ground_json(const GroundFrequencyTable& table);
GroundFrequencyTable parse_ground_json(std::string_view json_text);

}  // namespace styledisp
