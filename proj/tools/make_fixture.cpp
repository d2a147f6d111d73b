// Writes the bundled synthetic fixture: a two-language 2x2 corpus with
// generated text and two embedding files with planted per-cell spreads.

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "styledisp/corpus.hpp"
#include "styledisp/embedding.hpp"
#include "styledisp/rng.hpp"

namespace {

using styledisp::CellId;
using styledisp::Document;
namespace cells = styledisp::cells;

struct Lexicon {
    std::vector<std::string> function;
    std::vector<std::string> nouns;
    std::vector<std::string> verbs;
    std::vector<std::string> adjectives;
    std::vector<std::string> names;
    std::vector<std::string> bus_words;
};

const Lexicon kEnglish{
    {"the", "a", "of", "in", "on", "with", "and", "but", "he", "she", "it", "his", "her", "to", "by", "was", "at"},
    {"farmer", "river", "widow", "train", "knife", "mayor", "roof", "horse", "letter", "well", "fire", "baker",
     "soldier", "cart", "garden", "bridge"},
    {"fell", "struck", "drowned", "stole", "found", "killed", "burned", "fled", "shot", "lost", "jumped", "sold"},
    {"old", "young", "drunk", "angry", "poor", "jealous", "wet", "heavy", "late", "quiet"},
    {"Dupont", "Martin", "Lefebvre", "Bernard", "Moreau", "Rouen", "Nancy", "Lyon"},
    {"bus", "hat", "cord", "neck", "button", "coat", "platform", "passenger"}};

const Lexicon kFrench{
    {"le", "la", "les", "un", "une", "de", "du", "dans", "sur", "avec", "et", "mais", "il", "elle", "son", "sa",
     "à", "par"},
    {"fermier", "rivière", "veuve", "train", "couteau", "maire", "toit", "cheval", "lettre", "puits", "feu",
     "boulanger", "soldat", "charrette", "jardin", "pont"},
    {"tomba", "frappa", "noya", "vola", "trouva", "tua", "brûla", "s'enfuit", "tira", "perdit", "sauta", "vendit"},
    {"vieux", "jeune", "ivre", "furieux", "pauvre", "jaloux", "mouillé", "lourd", "tardif", "calme"},
    {"Dupont", "Martin", "Lefebvre", "Bernard", "Moreau", "Rouen", "Nancy", "Lyon"},
    {"autobus", "chapeau", "cordon", "cou", "bouton", "pardessus", "plate-forme", "voyageur"}};

const std::string& pick(styledisp::Rng& rng, const std::vector<std::string>& pool) {
    return pool[static_cast<std::size_t>(rng.below(pool.size()))];
}

// Style knobs: sentence count, words per sentence, digit and name rates.
struct Style {
    std::size_t sentences;
    std::size_t words;
    double digits;
    double names;
};

std::string make_text(styledisp::Rng& rng, const Lexicon& lex, const Style& style, bool bus_topic,
                      std::size_t topic) {
    std::string text;
    for (std::size_t s = 0; s < style.sentences; ++s) {
        std::vector<std::string> words;
        if (rng.uniform() < style.names) words.push_back(pick(rng, lex.names));
        const std::size_t n = style.words + static_cast<std::size_t>(rng.below(3));
        while (words.size() < n) {
            const double u = rng.uniform();
            if (u < 0.35) {
                words.push_back(pick(rng, lex.function));
            } else if (u < 0.55) {
                words.push_back(bus_topic ? pick(rng, lex.bus_words) : lex.nouns[(topic + words.size()) % lex.nouns.size()]);
            } else if (u < 0.75) {
                words.push_back(pick(rng, lex.verbs));
            } else if (u < 0.9) {
                words.push_back(pick(rng, lex.adjectives));
            } else if (rng.uniform() < style.digits) {
                words.push_back(std::to_string(10 + rng.below(90)));
            } else {
                words.push_back(pick(rng, lex.nouns));
            }
        }
        std::string sentence;
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::string word = words[w];
            if (w == 0 && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 'a' + 'A');
            if (w > 0) sentence += (rng.uniform() < 0.12 ? ", " : " ");
            sentence += word;
        }
        sentence += rng.uniform() < 0.15 ? "!" : ".";
        if (!text.empty()) text += ' ';
        text += sentence;
    }
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixture <output-dir>\n";
        return 2;
    }
    const std::filesystem::path out(argv[1]);
    std::filesystem::create_directories(out);
    constexpr std::size_t kPerCell = 20;
    constexpr std::size_t kDim = 32;

    styledisp::Rng rng(20240611);
    std::vector<Document> docs;
    for (const std::string lang : {"en", "fr"}) {
        const Lexicon& lex = lang == "en" ? kEnglish : kFrench;
        const Style feneon{1, 9, 0.4, 0.8};
        for (std::size_t i = 0; i < kPerCell; ++i) {
            const std::string n = (i < 9 ? "0" : "") + std::to_string(i + 1);
            const Style varied{1 + i % 4, 5 + (i * 3) % 9, 0.05 * static_cast<double>(i % 5), 0.1 * static_cast<double>(i % 6)};
            docs.push_back({lang + "-qref-" + n, lang, make_text(rng, lex, varied, true, 0), cells::kQueneauRef, "bus",
                            "exercise-" + n, styledisp::Origin::Reference});
            docs.push_back({lang + "-fref-" + n, lang, make_text(rng, lex, feneon, false, i), cells::kFeneonRef,
                            "story-" + n, "feneon", styledisp::Origin::Reference});
            docs.push_back({lang + "-qgen-" + n, lang, make_text(rng, lex, feneon, true, 0), cells::kQueneauGen, "bus",
                            "feneon", styledisp::Origin::Generated});
            docs.push_back({lang + "-fgen-" + n, lang, make_text(rng, lex, varied, false, i), cells::kFeneonGen,
                            "story-" + n, "exercise-" + n, styledisp::Origin::Generated});
        }
    }
    const styledisp::Corpus corpus(docs);
    styledisp::export_manifest(corpus, out / "corpus.jsonl");

    // Cell centers on separate axes; spreads FENEON_GEN > FENEON_REF > QUENEAU_REF > QUENEAU_GEN.
    struct Planted {
        CellId cell;
        std::size_t axis;
        double sigma;
    };
    const std::array<Planted, 4> planted{{{cells::kQueneauRef, 0, 0.4},
                                          {cells::kFeneonRef, 1, 0.6},
                                          {cells::kQueneauGen, 2, 0.2},
                                          {cells::kFeneonGen, 3, 0.8}}};
    struct Model {
        std::string name;
        double separation;
        std::uint64_t seed;
    };
    for (const Model& model : {Model{"synth-a", 6.0, 101}, Model{"synth-b", 4.0, 202}}) {
        styledisp::Rng noise(model.seed);
        styledisp::Matrix m(static_cast<Eigen::Index>(corpus.size()), static_cast<Eigen::Index>(kDim));
        std::vector<std::string> ids;
        for (std::size_t r = 0; r < corpus.size(); ++r) {
            const Document& d = corpus.documents()[r];
            ids.push_back(d.doc_id);
            const Planted* p = nullptr;
            for (const Planted& q : planted) {
                if (q.cell == d.cell) p = &q;
            }
            for (std::size_t c = 0; c < kDim; ++c) {
                const double center = c == p->axis ? model.separation : 0.0;
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = center + noise.normal(0.0, p->sigma);
            }
        }
        styledisp::export_embeddings(styledisp::EmbeddingSet(model.name, ids, m), out / ("embeddings_" + model.name + ".jsonl"));
    }
    std::cout << "wrote " << corpus.size() << " documents to " << out.string() << '\n';
    return 0;
}
