#include "styledisp/stylometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "styledisp/csv.hpp"
#include "styledisp/error.hpp"
#include "styledisp/text.hpp"

namespace styledisp {

namespace {

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

bool is_closing(char32_t c) {
    switch (c) {
        case U'"':
        case U'\'':
        case U'”':
        case U'’':
        case U'»':
        case U')':
        case U']':
            return true;
        default:
            return false;
    }
}

bool is_word_char(char32_t c) { return text::is_letter(c) || text::is_digit(c); }

bool is_joiner(char32_t c) { return c == U'\'' || c == U'’' || c == U'-' || c == U'‐'; }

std::vector<std::string> words_of(std::u32string_view segment) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < segment.size()) {
        if (!is_word_char(segment[i])) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < segment.size()) {
            if (is_word_char(segment[i])) {
                ++i;
            } else if (is_joiner(segment[i]) && i + 1 < segment.size() && is_word_char(segment[i + 1])) {
                i += 2;
            } else {
                break;
            }
        }
        out.push_back(text::encode_utf8(segment.substr(start, i - start)));
    }
    return out;
}

std::string fold(std::string_view token) {
    std::string lower = text::to_lower(token);
    // Typographic apostrophe matches the ASCII one in wordlists.
    std::string out;
    out.reserve(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower.compare(i, 3, "\xE2\x80\x99") == 0) {
            out += '\'';
            i += 2;
        } else {
            out += lower[i];
        }
    }
    return out;
}

std::map<std::string, std::size_t> type_counts(std::span<const std::string> tokens) {
    std::map<std::string, std::size_t> counts;
    for (const std::string& t : tokens) ++counts[fold(t)];
    return counts;
}

bool is_english_vowel(char32_t c) {
    return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' || c == U'y';
}

bool is_french_vowel(char32_t c) {
    static constexpr std::u32string_view kVowels = U"aeiouyàâäéèêëîïôöùûüÿœæ";
    return kVowels.find(c) != std::u32string_view::npos;
}

bool is_content_tag(std::string_view tag) {
    static const std::set<std::string, std::less<>> kUniversal{"NOUN", "PROPN", "VERB", "ADJ"};
    if (kUniversal.count(tag) != 0) return true;
    return tag.rfind("NN", 0) == 0 || tag.rfind("VB", 0) == 0 || tag.rfind("JJ", 0) == 0;
}

double checked_ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

TokenizedDoc tokenize(std::string_view input, std::string_view /*language*/) {
    if (text::is_blank(input)) throw InvalidArgument("tokenize: empty text");
    const std::u32string u = text::decode_utf8(input);
    TokenizedDoc doc;
    doc.chars.total = u.size();
    for (char32_t c : u) {
        if (text::is_letter(c)) {
            ++doc.chars.letters;
        } else if (text::is_digit(c)) {
            ++doc.chars.digits;
        } else if (text::is_punctuation(c)) {
            ++doc.chars.punctuation;
        }
    }
    const std::u32string_view view(u);
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        std::vector<std::string> words = words_of(view.substr(start, end - start));
        if (!words.empty()) {
            doc.tokens.insert(doc.tokens.end(), words.begin(), words.end());
            doc.sentences.push_back(std::move(words));
        }
        start = end;
    };
    std::size_t i = 0;
    while (i < u.size()) {
        if (!is_terminal(u[i])) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < u.size() && is_terminal(u[j])) ++j;
        while (j < u.size() && is_closing(u[j])) ++j;
        if (j == u.size() || text::is_whitespace(u[j])) flush(j);
        i = j;
    }
    if (start < u.size()) flush(u.size());
    return doc;
}

std::size_t count_syllables(std::string_view word, std::string_view language) {
    const std::u32string w = text::decode_utf8(text::to_lower(word));
    const bool english = language == "en";
    auto vowel = [english](char32_t c) { return english ? is_english_vowel(c) : is_french_vowel(c); };
    std::size_t groups = 0;
    bool in_group = false;
    for (char32_t c : w) {
        const bool v = vowel(c);
        if (v && !in_group) ++groups;
        in_group = v;
    }
    if (english && groups > 1 && w.size() >= 2 && w.back() == U'e' && !vowel(w[w.size() - 2])) {
        const bool consonant_le = w.size() >= 3 && w[w.size() - 2] == U'l' && text::is_letter(w[w.size() - 3]) &&
                                  !vowel(w[w.size() - 3]);
        if (!consonant_le) --groups;
    }
    return std::max<std::size_t>(groups, 1);
}

double yules_k(std::span<const std::string> tokens) {
    if (tokens.empty()) throw InvalidArgument("yules_k: no tokens");
    std::map<std::size_t, std::uint64_t> spectrum;
    for (const auto& [type, count] : type_counts(tokens)) ++spectrum[count];
    std::uint64_t s2 = 0;
    for (const auto& [i, v] : spectrum) s2 += static_cast<std::uint64_t>(i) * i * v;
    const auto n = static_cast<std::uint64_t>(tokens.size());
    return 1e4 * static_cast<double>(s2 - n) / (static_cast<double>(n) * static_cast<double>(n));
}

double shannon_entropy(std::span<const std::string> tokens) {
    if (tokens.empty()) throw InvalidArgument("shannon_entropy: no tokens");
    const double n = static_cast<double>(tokens.size());
    double h = 0.0;
    for (const auto& [type, count] : type_counts(tokens)) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h == 0.0 ? 0.0 : h;
}

double flesch_kincaid(double words, double sentences, double syllables) {
    if (words <= 0.0 || sentences <= 0.0) throw InvalidArgument("flesch_kincaid: needs words and sentences");
    return 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59;
}

FunctionWords::FunctionWords(std::set<std::string, std::less<>> words) : words_(std::move(words)) {}

FunctionWords FunctionWords::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open function-word list " + path.string());
    std::set<std::string, std::less<>> words;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        words.insert(fold(line.substr(first, last - first + 1)));
    }
    if (words.empty()) throw DataError("function-word list " + path.string() + " is empty");
    return FunctionWords(std::move(words));
}

std::string_view group_name(FeatureGroup group) {
    switch (group) {
        case FeatureGroup::FunctionWords: return "function_words";
        case FeatureGroup::Indexes: return "indexes";
        case FeatureGroup::Letters: return "letters";
        case FeatureGroup::Ner: return "ner";
        case FeatureGroup::Numbers: return "numbers";
        case FeatureGroup::Punctuation: return "punctuation";
        case FeatureGroup::Structural: return "structural";
        case FeatureGroup::Tag: return "tag";
    }
    return "?";
}

std::optional<FeatureGroup> parse_group(std::string_view name) {
    for (FeatureGroup g : kFeatureGroups) {
        if (group_name(g) == name) return g;
    }
    return std::nullopt;
}

const Annotation* AnnotationSource::find(std::string_view doc_id) const {
    const auto it = documents.find(doc_id);
    return it == documents.end() ? nullptr : &it->second;
}

AnnotationSource parse_annotations(std::istream& in, std::string_view source_name) {
    AnnotationSource out;
    out.provenance = std::string(source_name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::is_blank(line)) continue;
        const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
        try {
            const nlohmann::json j = nlohmann::json::parse(line);
            Annotation a;
            a.doc_id = j.at("doc_id").get<std::string>();
            if (j.contains("pos_tags")) a.pos_tags = j.at("pos_tags").get<std::vector<std::string>>();
            if (j.contains("ner_spans")) {
                for (const auto& span : j.at("ner_spans")) {
                    NerSpan s;
                    if (span.is_array()) {
                        s.start = span.at(0).get<std::size_t>();
                        s.end = span.at(1).get<std::size_t>();
                        if (span.size() > 2) s.label = span.at(2).get<std::string>();
                    } else {
                        s.start = span.at("start").get<std::size_t>();
                        s.end = span.at("end").get<std::size_t>();
                        s.label = span.value("label", "");
                    }
                    a.ner_spans.push_back(std::move(s));
                }
            }
            const std::string id = a.doc_id;
            if (!out.documents.emplace(id, std::move(a)).second) {
                throw DataError(where + ": duplicate annotation for " + id);
            }
        } catch (const nlohmann::json::exception& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    return out;
}

AnnotationSource load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open annotation file " + path.string());
    return parse_annotations(in, path.string());
}

StyleFeatures extract_features(const Document& doc, std::string_view language, const FunctionWords& function_words,
                               const Annotation* annotation) {
    const TokenizedDoc t = tokenize(doc.text, language);
    if (t.tokens.empty()) throw DataError("document " + doc.doc_id + " has no word tokens");
    StyleFeatures f;
    f.doc_id = doc.doc_id;
    f.cell = doc.cell;
    f.word_count = t.tokens.size();
    f.sentence_count = t.sentences.size();

    std::size_t function_count = 0;
    std::size_t content_guess = 0;
    std::size_t letters_in_words = 0;
    std::size_t syllables = 0;
    for (const std::string& token : t.tokens) {
        const std::string folded = fold(token);
        const auto apostrophe = folded.find('\'');
        const bool is_function = function_words.contains(folded) ||
                                 (apostrophe != std::string::npos &&
                                  function_words.contains(std::string_view(folded).substr(0, apostrophe + 1)));
        if (is_function) ++function_count;
        std::size_t letters = 0;
        for (char32_t c : text::decode_utf8(token)) {
            if (text::is_letter(c)) ++letters;
        }
        letters_in_words += letters;
        if (!is_function && letters > 0) ++content_guess;
        syllables += count_syllables(token, language);
    }

    const double words = static_cast<double>(f.word_count);
    const double sentences = static_cast<double>(f.sentence_count);
    f.sub.yules_k = yules_k(t.tokens);
    f.sub.shannon_entropy = shannon_entropy(t.tokens);
    f.sub.flesch_kincaid = flesch_kincaid(words, sentences, static_cast<double>(syllables));
    f.sub.mean_word_length = static_cast<double>(letters_in_words) / words;
    f.sub.mean_syllables = static_cast<double>(syllables) / words;
    f.sub.mean_sentence_length = words / sentences;

    f.group(FeatureGroup::FunctionWords) = checked_ratio(function_count, f.word_count);
    f.group(FeatureGroup::Letters) = checked_ratio(t.chars.letters, t.chars.total);
    f.group(FeatureGroup::Numbers) = checked_ratio(t.chars.digits, t.chars.total);
    f.group(FeatureGroup::Punctuation) = checked_ratio(t.chars.punctuation, t.chars.total);

    if (annotation != nullptr && !annotation->pos_tags.empty()) {
        if (annotation->pos_tags.size() != t.tokens.size()) {
            throw DataError("annotation for " + doc.doc_id + " has " + std::to_string(annotation->pos_tags.size()) +
                            " tags but the document has " + std::to_string(t.tokens.size()) + " tokens");
        }
        const auto tagged = std::count_if(annotation->pos_tags.begin(), annotation->pos_tags.end(),
                                          [](const std::string& tag) { return is_content_tag(tag); });
        f.group(FeatureGroup::Tag) = checked_ratio(static_cast<std::size_t>(tagged), t.tokens.size());
        f.tag_low_confidence = false;
    } else {
        f.group(FeatureGroup::Tag) = checked_ratio(content_guess, t.tokens.size());
    }

    if (annotation != nullptr && (!annotation->ner_spans.empty() || !annotation->pos_tags.empty())) {
        for (const NerSpan& s : annotation->ner_spans) {
            if (s.start >= s.end || s.end > t.tokens.size()) {
                throw DataError("annotation for " + doc.doc_id + " has entity span [" + std::to_string(s.start) +
                                ", " + std::to_string(s.end) + ") outside " + std::to_string(t.tokens.size()) +
                                " tokens");
            }
        }
        f.group(FeatureGroup::Ner) = static_cast<double>(annotation->ner_spans.size()) / sentences;
        f.ner_low_confidence = false;
    } else {
        std::size_t entities = 0;
        for (const auto& sentence : t.sentences) {
            bool previous = false;
            for (std::size_t i = 0; i < sentence.size(); ++i) {
                const std::u32string u = text::decode_utf8(sentence[i]);
                const bool capital = i > 0 && text::is_uppercase(u.front()) &&
                                     !function_words.contains(fold(sentence[i]));
                if (capital && !previous) ++entities;
                previous = capital;
            }
        }
        f.group(FeatureGroup::Ner) = static_cast<double>(entities) / sentences;
    }
    return f;
}

const StyleFeatures* FeatureTable::find(std::string_view doc_id) const {
    for (const StyleFeatures& f : rows) {
        if (f.doc_id == doc_id) return &f;
    }
    return nullptr;
}

void normalize_groups(FeatureTable& table) {
    const std::size_t n = table.rows.size();
    auto zscores = [&](double Subfeatures::*member) {
        std::vector<double> values;
        values.reserve(n);
        for (const StyleFeatures& f : table.rows) values.push_back(f.sub.*member);
        std::vector<double> z(n, 0.0);
        if (n < 2) return z;
        const double mu = stats::mean(values);
        const double sd = std::sqrt(stats::sample_variance(values));
        if (!(sd > 0.0)) return z;
        for (std::size_t i = 0; i < n; ++i) z[i] = (values[i] - mu) / sd;
        return z;
    };
    const auto zk = zscores(&Subfeatures::yules_k);
    const auto zh = zscores(&Subfeatures::shannon_entropy);
    const auto zf = zscores(&Subfeatures::flesch_kincaid);
    const auto zw = zscores(&Subfeatures::mean_word_length);
    const auto zs = zscores(&Subfeatures::mean_syllables);
    const auto zl = zscores(&Subfeatures::mean_sentence_length);
    for (std::size_t i = 0; i < n; ++i) {
        table.rows[i].group(FeatureGroup::Indexes) = (zk[i] + zh[i] + zf[i]) / 3.0;
        table.rows[i].group(FeatureGroup::Structural) = (zw[i] + zs[i] + zl[i]) / 3.0;
    }
}

FeatureTable build_feature_table(const Corpus& corpus, std::string_view language, const FunctionWords& function_words,
                                 const AnnotationSource* annotations) {
    FeatureTable table;
    table.language = std::string(language);
    for (std::size_t row : language_rows(corpus, language)) {
        const Document& doc = corpus.documents()[row];
        const Annotation* a = annotations != nullptr ? annotations->find(doc.doc_id) : nullptr;
        table.rows.push_back(extract_features(doc, language, function_words, a));
    }
    if (table.rows.empty()) throw DataError("no documents for language " + std::string(language));
    normalize_groups(table);
    return table;
}

namespace {

constexpr std::array<std::pair<const char*, double Subfeatures::*>, 6> kSubColumns{{
    {"yules_k", &Subfeatures::yules_k},
    {"shannon_entropy", &Subfeatures::shannon_entropy},
    {"flesch_kincaid", &Subfeatures::flesch_kincaid},
    {"mean_word_length", &Subfeatures::mean_word_length},
    {"mean_syllables", &Subfeatures::mean_syllables},
    {"mean_sentence_length", &Subfeatures::mean_sentence_length},
}};

double parse_number(const std::string& s, std::string_view what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("features: bad number \"" + s + "\" in column " + std::string(what));
    }
}

}  // namespace

std::string features_csv(const FeatureTable& table) {
    std::ostringstream out;
    out << "doc_id,cell,words,sentences";
    for (FeatureGroup g : kFeatureGroups) out << ',' << group_name(g);
    for (const auto& [name, member] : kSubColumns) out << ',' << name;
    out << ",ner_low_confidence,tag_low_confidence\n";
    for (const StyleFeatures& f : table.rows) {
        out << csv::field(f.doc_id) << ',' << cell_name(f.cell) << ',' << f.word_count << ',' << f.sentence_count;
        for (FeatureGroup g : kFeatureGroups) out << ',' << csv::number(f.group(g));
        for (const auto& [name, member] : kSubColumns) out << ',' << csv::number(f.sub.*member);
        out << ',' << (f.ner_low_confidence ? "true" : "false") << ',' << (f.tag_low_confidence ? "true" : "false")
            << '\n';
    }
    return out.str();
}

FeatureTable parse_features_csv(std::string_view text, std::string_view language) {
    const auto rows = csv::parse(text);
    const std::size_t columns = 4 + kFeatureGroups.size() + kSubColumns.size() + 2;
    if (rows.empty() || rows.front().size() != columns || rows.front().front() != "doc_id") {
        throw DataError("features: unexpected header");
    }
    FeatureTable table;
    table.language = std::string(language);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != columns) throw DataError("features: row " + std::to_string(r) + " has wrong width");
        StyleFeatures f;
        f.doc_id = row[0];
        const auto cell = parse_cell(row[1]);
        if (!cell) throw DataError("features: unknown cell " + row[1]);
        f.cell = *cell;
        f.word_count = static_cast<std::size_t>(parse_number(row[2], "words"));
        f.sentence_count = static_cast<std::size_t>(parse_number(row[3], "sentences"));
        std::size_t c = 4;
        for (FeatureGroup g : kFeatureGroups) f.group(g) = parse_number(row[c++], group_name(g));
        for (const auto& [name, member] : kSubColumns) f.sub.*member = parse_number(row[c++], name);
        f.ner_low_confidence = row[c++] == "true";
        f.tag_low_confidence = row[c++] == "true";
        table.rows.push_back(std::move(f));
    }
    return table;
}

std::string_view arrow_name(Arrow arrow) {
    switch (arrow) {
        case Arrow::Up: return "up";
        case Arrow::Down: return "down";
        case Arrow::Equal: return "=";
    }
    return "?";
}

std::string_view arrow_glyph(Arrow arrow) {
    switch (arrow) {
        case Arrow::Up: return "↑";
        case Arrow::Down: return "↓";
        case Arrow::Equal: return "=";
    }
    return "?";
}

const GroundComparison& GroundFrequencyTable::comparison(FeatureGroup group, CellId to) const {
    for (const GroundRow& row : rows) {
        if (row.group != group) continue;
        for (const GroundComparison& c : row.comparisons) {
            if (c.to == to) return c;
        }
    }
    throw InvalidArgument("ground table has no comparison for " + std::string(group_name(group)) + " to " +
                          std::string(cell_name(to)));
}

GroundFrequencyTable ground_table(const FeatureTable& features, stats::TTestKind kind) {
    std::map<CellId, std::vector<const StyleFeatures*>> by_cell;
    for (const StyleFeatures& f : features.rows) by_cell[f.cell].push_back(&f);
    for (CellId cell : {cells::kQueneauGen, cells::kQueneauRef, cells::kFeneonRef}) {
        if (by_cell[cell].size() < 2) {
            throw InvalidArgument("ground_table: cell " + std::string(cell_name(cell)) +
                                  " needs at least 2 documents");
        }
    }
    GroundFrequencyTable table;
    table.language = features.language;
    table.test = kind;
    for (FeatureGroup g : kFeatureGroups) {
        GroundRow row{g, {}, {}};
        std::map<CellId, std::vector<double>> values;
        for (CellId cell : cells::kAll) {
            const auto it = by_cell.find(cell);
            if (it == by_cell.end() || it->second.empty()) continue;
            for (const StyleFeatures* f : it->second) values[cell].push_back(f->group(g));
            row.means[cell] = stats::mean(values[cell]);
        }
        for (CellId to : {cells::kQueneauRef, cells::kFeneonRef}) {
            GroundComparison c;
            c.to = to;
            const double diff = row.means[to] - row.means[cells::kQueneauGen];
            c.arrow = diff > 0.0 ? Arrow::Up : (diff < 0.0 ? Arrow::Down : Arrow::Equal);
            try {
                const stats::TTestResult t = stats::two_sample_t(kind, values[to], values[cells::kQueneauGen]);
                c.t = t.t;
                c.df = t.df;
                c.p = t.p;
            } catch (const InvalidArgument&) {
                // Both cells constant at different values.
                c.t = diff > 0.0 ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
                c.df = 0.0;
                c.p = stats::kPValueFloor;
            }
            c.stars = std::string(stats::stars(c.p));
            row.comparisons.push_back(std::move(c));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string ground_csv(const GroundFrequencyTable& table) {
    std::ostringstream out;
    std::vector<CellId> present;
    for (CellId cell : cells::kAll) {
        if (!table.rows.empty() && table.rows.front().means.count(cell) != 0) present.push_back(cell);
    }
    out << "feature";
    for (CellId cell : present) out << ",mean_" << cell_name(cell);
    for (CellId to : {cells::kQueneauRef, cells::kFeneonRef}) {
        const std::string name = "QUENEAU_GEN->" + std::string(cell_name(to));
        out << ',' << name << ',' << name << "_stars," << name << "_p";
    }
    out << '\n';
    for (const GroundRow& row : table.rows) {
        out << group_name(row.group);
        for (CellId cell : present) out << ',' << csv::number(row.means.at(cell));
        for (const GroundComparison& c : row.comparisons) {
            out << ',' << arrow_name(c.arrow) << ',' << c.stars << ',' << csv::number(c.p);
        }
        out << '\n';
    }
    return out.str();
}

std::string ground_json(const GroundFrequencyTable& table) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    out["language"] = table.language;
    out["test"] = std::string(stats::to_string(table.test)) + " two-sided";
    out["features"] = nlohmann::ordered_json::array();
    for (const GroundRow& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        r["feature"] = std::string(group_name(row.group));
        r["means"] = nlohmann::ordered_json::object();
        for (CellId cell : cells::kAll) {
            if (const auto it = row.means.find(cell); it != row.means.end()) {
                r["means"][std::string(cell_name(cell))] = it->second;
            }
        }
        r["comparisons"] = nlohmann::ordered_json::array();
        for (const GroundComparison& c : row.comparisons) {
            nlohmann::ordered_json j = nlohmann::ordered_json::object();
            j["from"] = std::string(cell_name(c.from));
            j["to"] = std::string(cell_name(c.to));
            j["arrow"] = std::string(arrow_name(c.arrow));
            j["t"] = c.t;
            j["df"] = c.df;
            j["p"] = c.p;
            j["stars"] = c.stars;
            r["comparisons"].push_back(j);
        }
        out["features"].push_back(r);
    }
    return out.dump(2) + "\n";
}

GroundFrequencyTable parse_ground_json(std::string_view json_text) {
    try {
        const nlohmann::json in = nlohmann::json::parse(json_text);
        GroundFrequencyTable table;
        table.language = in.at("language").get<std::string>();
        const std::string test = in.at("test").get<std::string>();
        table.test = stats::parse_ttest_kind(test.substr(0, test.find(' ')));
        for (const auto& r : in.at("features")) {
            const auto group = parse_group(r.at("feature").get<std::string>());
            if (!group) throw DataError("ground table: unknown feature " + r.at("feature").dump());
            GroundRow row{*group, {}, {}};
            for (const auto& [name, value] : r.at("means").items()) {
                const auto cell = parse_cell(name);
                if (!cell) throw DataError("ground table: unknown cell " + name);
                row.means[*cell] = value.get<double>();
            }
            for (const auto& j : r.at("comparisons")) {
                GroundComparison c;
                const auto from = parse_cell(j.at("from").get<std::string>());
                const auto to = parse_cell(j.at("to").get<std::string>());
                if (!from || !to) throw DataError("ground table: unknown comparison cell");
                c.from = *from;
                c.to = *to;
                const std::string arrow = j.at("arrow").get<std::string>();
                c.arrow = arrow == "up" ? Arrow::Up : (arrow == "down" ? Arrow::Down : Arrow::Equal);
                c.t = j.at("t").get<double>();
                c.df = j.at("df").get<double>();
                c.p = j.at("p").get<double>();
                c.stars = j.at("stars").get<std::string>();
                row.comparisons.push_back(std::move(c));
            }
            table.rows.push_back(std::move(row));
        }
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("ground table artifact: ") + e.what());
    }
}

}  // namespace styledisp
