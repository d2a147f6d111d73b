#include "styledisp/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "styledisp/error.hpp"
#include "styledisp/text.hpp"

namespace styledisp {

using nlohmann::json;

std::string_view cell_name(CellId cell) {
    if (cell == cells::kQueneauRef) return "QUENEAU_REF";
    if (cell == cells::kFeneonRef) return "FENEON_REF";
    if (cell == cells::kQueneauGen) return "QUENEAU_GEN";
    return "FENEON_GEN";
}

int class_index(CellId cell) {
    if (cell == cells::kFeneonGen) return 0;
    if (cell == cells::kFeneonRef) return 1;
    if (cell == cells::kQueneauGen) return 2;
    return 3;
}

std::optional<CellId> parse_cell(std::string_view name) {
    for (CellId cell : cells::kAll) {
        if (cell_name(cell) == name) return cell;
    }
    return std::nullopt;
}

std::string_view origin_name(Origin origin) {
    return origin == Origin::Reference ? "reference" : "generated";
}

namespace {

std::optional<Origin> parse_origin(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "reference") return Origin::Reference;
    if (lower == "generated") return Origin::Generated;
    return std::nullopt;
}

std::string where(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line);
}

std::string required_string(const json& record, const char* field, std::string_view source,
                            std::size_t line) {
    const auto it = record.find(field);
    if (it == record.end()) {
        throw DataError(where(source, line) + ": missing required field \"" + field + "\"");
    }
    if (!it->is_string()) {
        throw DataError(where(source, line) + ": field \"" + field + "\" must be a string");
    }
    return it->get<std::string>();
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        Document& doc = documents_[i];
        if (doc.doc_id.empty()) throw DataError("document " + std::to_string(i) + " has empty doc_id");
        doc.text = text::nfc(doc.text);
        if (text::is_blank(doc.text)) throw DataError("document '" + doc.doc_id + "' has empty text");
        if (!index_.emplace(doc.doc_id, i).second) {
            throw DataError("duplicate doc_id '" + doc.doc_id + "'");
        }
        languages_.insert(doc.language);
    }
}

const Document* Corpus::find(std::string_view doc_id) const {
    const auto it = index_.find(doc_id);
    return it == index_.end() ? nullptr : &documents_[it->second];
}

Corpus parse_manifest(std::istream& in, std::string_view source_name) {
    std::vector<Document> docs;
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(where(source_name, line_no) + ": malformed record: " + e.what());
        }
        if (!record.is_object()) throw DataError(where(source_name, line_no) + ": record is not an object");

        Document doc;
        doc.doc_id = required_string(record, "doc_id", source_name, line_no);
        doc.language = required_string(record, "language", source_name, line_no);
        doc.text = required_string(record, "text", source_name, line_no);
        const std::string cell = required_string(record, "cell", source_name, line_no);
        doc.topic_key = required_string(record, "topic_key", source_name, line_no);
        doc.style_key = required_string(record, "style_key", source_name, line_no);
        const std::string origin = required_string(record, "origin", source_name, line_no);

        const auto parsed_cell = parse_cell(cell);
        if (!parsed_cell) {
            throw DataError(where(source_name, line_no) + ": unknown cell label '" + cell + "'");
        }
        doc.cell = *parsed_cell;
        const auto parsed_origin = parse_origin(origin);
        if (!parsed_origin) {
            throw DataError(where(source_name, line_no) + ": unknown origin '" + origin + "'");
        }
        doc.origin = *parsed_origin;
        if (doc.doc_id.empty()) throw DataError(where(source_name, line_no) + ": empty doc_id");
        if (text::is_blank(doc.text)) {
            throw DataError(where(source_name, line_no) + ": empty text for '" + doc.doc_id + "'");
        }
        if (!seen.insert(doc.doc_id).second) {
            throw DataError(where(source_name, line_no) + ": duplicate doc_id '" + doc.doc_id + "'");
        }
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) throw DataError(std::string(source_name) + ": no documents");
    return Corpus(std::move(docs));
}

Corpus load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path.string());
    return parse_manifest(in, path.string());
}

void write_manifest(const Corpus& corpus, std::ostream& out) {
    for (const Document& doc : corpus.documents()) {
        json record = json::object();
        record["doc_id"] = doc.doc_id;
        record["language"] = doc.language;
        record["text"] = doc.text;
        record["cell"] = cell_name(doc.cell);
        record["topic_key"] = doc.topic_key;
        record["style_key"] = doc.style_key;
        record["origin"] = origin_name(doc.origin);
        out << record.dump() << '\n';
    }
}

void export_manifest(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest " + path.string());
    write_manifest(corpus, out);
}

std::vector<Document> select_cell(const Corpus& corpus, CellId cell, std::string_view language) {
    std::vector<Document> out;
    for (const Document& doc : corpus.documents()) {
        if (doc.cell == cell && doc.language == language) out.push_back(doc);
    }
    return out;
}

std::vector<std::size_t> language_rows(const Corpus& corpus, std::string_view language) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus.documents()[i].language == language) rows.push_back(i);
    }
    return rows;
}

DesignReport validate_design(const Corpus& corpus, std::string_view language) {
    if (!corpus.languages().contains(std::string(language))) {
        throw InvalidArgument("language '" + std::string(language) + "' absent from corpus");
    }
    DesignReport report;
    report.language = language;

    std::map<CellId, std::set<std::string>> topics;
    std::map<CellId, std::set<std::string>> styles;
    for (CellId cell : cells::kAll) report.per_cell_counts[cell] = 0;
    for (const Document& doc : corpus.documents()) {
        if (doc.language != language) continue;
        ++report.per_cell_counts[doc.cell];
        topics[doc.cell].insert(doc.topic_key);
        styles[doc.cell].insert(doc.style_key);
    }

    const std::size_t first = report.per_cell_counts.begin()->second;
    report.balanced = std::all_of(report.per_cell_counts.begin(), report.per_cell_counts.end(),
                                  [first](const auto& kv) { return kv.second == first; });
    if (!report.balanced) {
        std::ostringstream msg;
        msg << "unbalanced cells:";
        for (CellId cell : cells::kAll) msg << ' ' << cell_name(cell) << '=' << report.per_cell_counts[cell];
        report.issues.push_back(msg.str());
    }

    bool empty_cell = false;
    for (CellId cell : cells::kAll) {
        if (report.per_cell_counts[cell] == 0) {
            empty_cell = true;
            report.issues.push_back("empty cell " + std::string(cell_name(cell)));
            continue;
        }
        if (cell.topic_mode == Mode::Fixed && topics[cell].size() > 1) {
            report.issues.push_back(std::string(cell_name(cell)) + ": fixed-topic cell has " +
                                    std::to_string(topics[cell].size()) + " topic_keys");
        }
        if (cell.style_mode == Mode::Fixed && styles[cell].size() > 1) {
            report.issues.push_back(std::string(cell_name(cell)) + ": fixed-style cell has " +
                                    std::to_string(styles[cell].size()) + " style_keys");
        }
    }

    bool pairing = !empty_cell;
    if (!empty_cell) {
        const auto& ref_styles = styles[cells::kQueneauRef];
        for (const std::string& style : styles[cells::kFeneonGen]) {
            if (!ref_styles.contains(style)) {
                pairing = false;
                report.issues.push_back("FENEON_GEN style_key '" + style + "' has no QUENEAU_REF source");
            }
        }
        const auto& ref_topics = topics[cells::kQueneauRef];
        if (ref_topics.size() != 1) {
            pairing = false;
        } else {
            for (const std::string& topic : topics[cells::kQueneauGen]) {
                if (topic != *ref_topics.begin()) {
                    pairing = false;
                    report.issues.push_back("QUENEAU_GEN topic_key '" + topic +
                                            "' differs from the shared QUENEAU_REF topic");
                }
            }
        }
    }
    report.pairing_complete = pairing;
    return report;
}

}  // namespace styledisp
