#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "styledisp/corpus.hpp"
#include "styledisp/error.hpp"
#include "support.hpp"

using namespace styledisp;
using testing_support::make_doc;

namespace {

Corpus eight_docs() {
    std::vector<Document> docs;
    for (int i = 0; i < 2; ++i) {
        const std::string n = std::to_string(i);
        docs.push_back(make_doc("qr" + n, cells::kQueneauRef, "Bus story in style " + n + ".", "bus", "s" + n));
        docs.push_back(make_doc("fr" + n, cells::kFeneonRef, "Fait divers " + n + ".", "story" + n, "feneon"));
        docs.push_back(make_doc("qg" + n, cells::kQueneauGen, "Bus story, terse " + n + ".", "bus", "feneon"));
        docs.push_back(make_doc("fg" + n, cells::kFeneonGen, "Fait divers restyled " + n + ".", "story" + n, "s" + n));
    }
    return Corpus(docs);
}

}  // namespace

TEST(Cells, NamesAndClassIndex) {
    EXPECT_EQ(cell_name(cells::kQueneauRef), "QUENEAU_REF");
    EXPECT_EQ(cell_name(cells::kFeneonRef), "FENEON_REF");
    EXPECT_EQ(cell_name(cells::kQueneauGen), "QUENEAU_GEN");
    EXPECT_EQ(cell_name(cells::kFeneonGen), "FENEON_GEN");
    EXPECT_EQ(cells::kQueneauRef.topic_mode, Mode::Fixed);
    EXPECT_EQ(cells::kQueneauRef.style_mode, Mode::Varied);
    for (CellId c : cells::kAll) EXPECT_EQ(parse_cell(cell_name(c)), c);
    EXPECT_FALSE(parse_cell("QUENEAU"));
    std::set<int> idx;
    for (CellId c : cells::kAll) idx.insert(class_index(c));
    EXPECT_EQ(idx, (std::set<int>{0, 1, 2, 3}));
    EXPECT_EQ(class_index(cells::kFeneonGen), 0);
    EXPECT_EQ(class_index(cells::kQueneauRef), 3);
}

TEST(Manifest, RoundTrip) {
    Corpus c = eight_docs();
    std::stringstream ss;
    write_manifest(c, ss);
    Corpus back = parse_manifest(ss);
    EXPECT_EQ(back, c);
    EXPECT_EQ(back.documents()[3].doc_id, "fg0");
}

TEST(Manifest, ErrorsCarryLineNumbers) {
    std::stringstream empty("");
    EXPECT_THROW(parse_manifest(empty), DataError);

    const std::string good =
        R"({"doc_id":"a","language":"en","text":"x","cell":"QUENEAU_REF","topic_key":"t","style_key":"s","origin":"Reference"})";
    std::stringstream bad_json(good + "\n{not json\n");
    try {
        parse_manifest(bad_json, "m.jsonl");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("m.jsonl:2"), std::string::npos) << e.what();
    }
    std::stringstream dup(good + "\n" + good + "\n");
    EXPECT_THROW(parse_manifest(dup), DataError);
    std::string unknown_cell = good;
    unknown_cell.replace(unknown_cell.find("QUENEAU_REF"), 11, "SOMETHING");
    std::stringstream uc(unknown_cell);
    EXPECT_THROW(parse_manifest(uc), DataError);
    std::string blank = good;
    blank.replace(blank.find("\"x\""), 3, "\"  \"");
    std::stringstream bl(blank);
    EXPECT_THROW(parse_manifest(bl), DataError);
}

TEST(Manifest, ExtraFieldsIgnoredAndNfcApplied) {
    std::stringstream ss(
        "{\"doc_id\":\"a\",\"language\":\"fr\",\"text\":\"Caf\\u0065\\u0301\",\"cell\":\"FENEON_REF\","
        "\"topic_key\":\"t\",\"style_key\":\"s\",\"origin\":\"Reference\",\"extra\":42}\n");
    Corpus c = parse_manifest(ss);
    EXPECT_EQ(c.documents()[0].text, "Caf\xc3\xa9");
}

TEST(Design, BalancedEightDocFixture) {
    Corpus c = eight_docs();
    auto r = validate_design(c, "en");
    EXPECT_TRUE(r.balanced);
    for (CellId cell : cells::kAll) EXPECT_EQ(r.per_cell_counts.at(cell), 2u);
    EXPECT_TRUE(r.issues.empty()) << r.issues.front();
}

TEST(Design, UnbalancedAndBrokenKeysReported) {
    auto docs = eight_docs().documents();
    docs.push_back(make_doc("qr9", cells::kQueneauRef, "Another bus story.", "tram", "s9"));
    auto r = validate_design(Corpus(docs), "en");
    EXPECT_FALSE(r.balanced);
    EXPECT_FALSE(r.issues.empty());
    EXPECT_THROW(validate_design(Corpus(docs), "de"), InvalidArgument);
}

TEST(SelectCell, PartitionsLanguage) {
    auto docs = eight_docs().documents();
    docs.push_back(make_doc("x", cells::kQueneauRef, "Autre.", "bus", "z", "fr"));
    Corpus c(docs);
    std::set<std::string> seen;
    std::size_t total = 0;
    for (CellId cell : cells::kAll) {
        for (const auto& d : select_cell(c, cell, "en")) {
            EXPECT_EQ(d.cell, cell);
            EXPECT_TRUE(seen.insert(d.doc_id).second);
            ++total;
        }
    }
    EXPECT_EQ(total, language_rows(c, "en").size());
    EXPECT_EQ(total, 8u);
}

TEST(Corpus, RejectsDuplicatesAndBlankText) {
    std::vector<Document> docs{make_doc("a", cells::kQueneauRef, "t", "b", "s"),
                               make_doc("a", cells::kFeneonRef, "u", "b", "s")};
    EXPECT_THROW(Corpus{docs}, DataError);
    std::vector<Document> blank{make_doc("a", cells::kQueneauRef, " \n", "b", "s")};
    EXPECT_THROW(Corpus{blank}, DataError);
}
