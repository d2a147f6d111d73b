#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace styledisp {

enum class Mode { Fixed, Varied };

// One cell of the 2x2 design: topic mode x style mode.
struct CellId {
    Mode topic_mode = Mode::Fixed;
    Mode style_mode = Mode::Fixed;

    auto operator<=>(const CellId&) const = default;
};

namespace cells {
inline constexpr CellId kQueneauRef{Mode::Fixed, Mode::Varied};
inline constexpr CellId kFeneonRef{Mode::Varied, Mode::Fixed};
inline constexpr CellId kQueneauGen{Mode::Fixed, Mode::Fixed};
inline constexpr CellId kFeneonGen{Mode::Varied, Mode::Varied};

// Canonical reporting order.
inline constexpr std::array<CellId, 4> kAll{kQueneauRef, kFeneonRef, kQueneauGen, kFeneonGen};
}  // namespace cells

// QUENEAU_REF, FENEON_REF, QUENEAU_GEN or FENEON_GEN.
std::string_view cell_name(CellId cell);
std::optional<CellId> parse_cell(std::string_view name);

// Integer class label, ordered by cell name: FENEON_GEN 0 ... QUENEAU_REF 3.
int class_index(CellId cell);

enum class Origin { Reference, Generated };

std::string_view origin_name(Origin origin);

struct Document {
    std::string doc_id;
    std::string language;  // ISO-639-1
    std::string text;      // NFC-normalized UTF-8
    CellId cell;
    std::string topic_key;
    std::string style_key;
    Origin origin = Origin::Reference;

    bool operator==(const Document&) const = default;
};

// Immutable once loaded. Document order defines row order downstream.
class Corpus {
public:
    Corpus() = default;
    // Validates doc_id uniqueness and non-blank text; normalizes text to NFC.
    explicit Corpus(std::vector<Document> documents);

    const std::vector<Document>& documents() const { return documents_; }
    const std::set<std::string>& languages() const { return languages_; }
    std::size_t size() const { return documents_.size(); }
    bool empty() const { return documents_.empty(); }

    const Document* find(std::string_view doc_id) const;

    bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

private:
    std::vector<Document> documents_;
    std::set<std::string> languages_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

struct DesignReport {
    std::string language;
    std::map<CellId, std::size_t> per_cell_counts;
    bool balanced = false;
    bool pairing_complete = false;
    std::vector<std::string> issues;
};

// Line-delimited JSON, one document per line. Errors carry the line number.
Corpus load_manifest(const std::filesystem::path& path);
Corpus parse_manifest(std::istream& in, std::string_view source_name = "<stream>");

void export_manifest(const Corpus& corpus, const std::filesystem::path& path);
void write_manifest(const Corpus& corpus, std::ostream& out);

DesignReport validate_design(const Corpus& corpus, std::string_view language);

std::vector<Document> select_cell(const Corpus& corpus, CellId cell, std::string_view language);

// Row indices (into corpus.documents()) of one language, in corpus order.
std::vector<std::size_t> language_rows(const Corpus& corpus, std::string_view language);

}  // namespace styledisp
