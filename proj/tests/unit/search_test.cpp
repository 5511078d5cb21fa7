#include <algorithm>
#include <gtest/gtest.h>

#include <set>

#include "dreams/error.hpp"
#include "dreams/search.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace {

using namespace dreams;
using namespace dreams::search;
namespace dt = dreams::testing;

std::vector<std::string> texts(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.text);
    return out;
}

TEST(Tokenize, SplitsOnNonAlphanumericAndFolds) {
    EXPECT_EQ(texts(tokenize("Protocol-study, 2019!")), (std::vector<std::string>{"protocol", "study", "2019"}));
    EXPECT_EQ(texts(tokenize("ÜBER Qualität")), (std::vector<std::string>{"über", "qualität"}));
    EXPECT_EQ(texts(tokenize("ΣΥΣΤΗΜΑ Система")), (std::vector<std::string>{"συστημα", "система"}));
    EXPECT_EQ(texts(tokenize("Ａｂｃ")), (std::vector<std::string>{"ａｂｃ"}));
    EXPECT_EQ(texts(tokenize("risk🚀trust")), (std::vector<std::string>{"risk", "trust"}));
    EXPECT_TRUE(tokenize("  ,;  ").empty());
}

TEST(Tokenize, OffsetsPointIntoOriginal) {
    const std::string text = "Café Über";
    const auto tokens = tokenize(text);
    ASSERT_EQ(tokens.size(), 2u);
    EXPECT_EQ(text.substr(tokens[0].begin, tokens[0].end - tokens[0].begin), "Café");
    EXPECT_EQ(text.substr(tokens[1].begin, tokens[1].end - tokens[1].begin), "Über");
}

TEST(Tokenize, MalformedUtf8DoesNotCrash) {
    const std::string bad = std::string("ab\xff") + "cd\xe2\x82";
    EXPECT_NO_THROW(tokenize(bad));
}

TEST(CaseFold, GreekAndCyrillic) {
    EXPECT_EQ(case_fold("ΣΟΦΙΑ"), "σοφια");
    EXPECT_EQ(case_fold("МОСКВА"), "москва");
    EXPECT_EQ(case_fold("ÉCOLE"), "école");
}

class SearchTest : public ::testing::Test {
protected:
    void SetUp() override {
        doc = create_model(ModelKind::reference_model, "RM", ids);
        a = add_node(doc, NodeKind::key_factor, "Protocol quality", std::nullopt, {"study"}, ids);
        b = add_node(doc, NodeKind::success_factor, "Outcome", "protocol notes", {}, ids);
        link = add_link(doc, a, b, Polarity::negative, ids);
        ev = attach_evidence(doc, link, EvidenceKind::assumption, "protocol study", "p.12", ids);
        ref = attach_evidence(doc, link, EvidenceKind::reference, "Smith 2019", std::nullopt, ids);
    }

    std::vector<SearchHit> run(SearchQuery q) { return query(build_index(doc), doc, q); }

    IdGenerator ids = dt::fixture_ids();
    ModelDocument doc;
    std::string a, b, link, ev, ref;
};

TEST(SearchIndexTest, EmptyModelEmptyIndex) {
    auto ids = dt::fixture_ids();
    const auto doc = create_model(ModelKind::reference_model, "RM", ids);
    EXPECT_EQ(build_index(doc).size(), 0u);
}

TEST_F(SearchTest, EvidenceTokensMapToEvidence) {
    const auto index = build_index(doc);
    std::set<std::string> owners;
    for (auto i : index.items_with_prefix("protocol")) owners.insert(index.items()[i].id);
    EXPECT_EQ(owners, (std::set<std::string>{a, b, ev}));
    std::set<std::string> study;
    for (auto i : index.items_with_prefix("study")) study.insert(index.items()[i].id);
    EXPECT_EQ(study, (std::set<std::string>{a, ev}));
}

TEST_F(SearchTest, PrefixMatching) {
    SearchQuery q;
    q.text = "proto";
    const auto hits = run(q);
    ASSERT_EQ(hits.size(), 3u);
    // label 3.0 beats evidence_text 2.0 beats notes 1.0
    EXPECT_EQ(hits[0].target, a);
    EXPECT_EQ(hits[0].matched_field, Field::label);
    EXPECT_EQ(hits[0].score, 3.0);
    EXPECT_EQ(hits[1].target, ev);
    EXPECT_EQ(hits[1].score, 2.0);
    EXPECT_EQ(hits[1].owner_path, (std::vector<std::string>{doc.id, link, ev}));
    EXPECT_EQ(hits[2].target, b);
    EXPECT_EQ(hits[2].matched_field, Field::notes);
}

TEST_F(SearchTest, EveryTokenMustMatch) {
    SearchQuery q;
    q.text = "protocol study";
    const auto hits = run(q);
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0].target, a);
    EXPECT_EQ(hits[0].score, 3.0 + 1.5);
    EXPECT_EQ(hits[1].target, ev);
    EXPECT_EQ(hits[1].score, 4.0);
    q.text = "protocol nothing";
    EXPECT_TRUE(run(q).empty());
}

TEST_F(SearchTest, SnippetSpansCoverMatches) {
    SearchQuery q;
    q.text = "stud";
    const auto hits = run(q);
    ASSERT_FALSE(hits.empty());
    for (const auto& h : hits) {
        ASSERT_FALSE(h.snippet.spans.empty());
        for (auto [begin, end] : h.snippet.spans) {
            EXPECT_TRUE(case_fold(h.snippet.text.substr(begin, end - begin)).starts_with("stud"));
        }
    }
}

TEST_F(SearchTest, FilterOnlyQuery) {
    SearchQuery q;
    q.evidence_filter = EvidenceKind::assumption;
    const auto hits = run(q);
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].target, ev);
    EXPECT_EQ(hits[0].score, 1.0);

    q = {};
    EXPECT_TRUE(run(q).empty());

    q.polarity_filter = Polarity::negative;
    EXPECT_EQ(run(q).size(), 3u);  // the link and both evidence items
    q.polarity_filter = Polarity::positive;
    EXPECT_TRUE(run(q).empty());

    q = {};
    q.kind_filter = NodeKind::success_factor;
    q.text = "protocol";
    ASSERT_EQ(run(q).size(), 1u);
    EXPECT_EQ(run(q)[0].target, b);
}

TEST_F(SearchTest, LimitAndTies) {
    for (int i = 0; i < 5; ++i) add_node(doc, NodeKind::key_factor, "alpha", std::nullopt, {}, ids);
    SearchQuery q;
    q.text = "alpha";
    auto hits = run(q);
    ASSERT_EQ(hits.size(), 5u);
    EXPECT_TRUE(std::ranges::is_sorted(hits, {}, &SearchHit::target));
    q.limit = 2;
    hits = run(q);
    ASSERT_EQ(hits.size(), 2u);
    q.limit = 0;
    EXPECT_THROW(run(q), Error);
}

TEST_F(SearchTest, StaleIndexRejected) {
    const auto index = build_index(doc);
    add_node(doc, NodeKind::key_factor, "new", std::nullopt, {}, ids);
    SearchQuery q;
    q.text = "protocol";
    try {
        query(index, doc, q);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::stale_index);
    }
}

TEST(SearchProperty, IndexSizeMatchesDistinctTokenOwnerPairs) {
    dt::Rng rng(91);
    auto ids = dt::fixture_ids(2);
    for (int i = 0; i < 100; ++i) {
        const auto doc = dt::random_model(rng, ids);
        std::set<std::pair<std::string, std::string>> pairs;
        auto add = [&](const std::string& owner, const std::string& text) {
            for (const auto& t : tokenize(text)) pairs.insert({t.text, owner});
        };
        for (const auto& n : doc.nodes) {
            add(n.id, n.label);
            if (n.notes) add(n.id, *n.notes);
            for (const auto& t : n.tags) add(n.id, t);
        }
        for (const auto& l : doc.links) {
            if (l.notes) add(l.id, *l.notes);
            for (const auto& e : l.evidence) {
                add(e.id, e.text);
                if (e.locator) add(e.id, *e.locator);
            }
        }
        ASSERT_EQ(build_index(doc).size(), pairs.size());
    }
}

TEST(SearchProperty, MatchesNaiveScan) {
    dt::Rng rng(92);
    auto ids = dt::fixture_ids(3);
    for (int i = 0; i < 200; ++i) {
        const auto doc = dt::random_model(rng, ids);
        SearchQuery q;
        q.limit = 100000;
        q.text = dt::random_word(rng).substr(0, 1 + rng() % 3);
        if (rng() % 3 == 0) q.text += " " + dt::random_word(rng);
        if (rng() % 5 == 0) q.evidence_filter = static_cast<EvidenceKind>(rng() % 3);
        if (rng() % 5 == 0) q.polarity_filter = rng() % 2 ? Polarity::positive : Polarity::negative;
        if (rng() % 5 == 0) q.kind_filter = static_cast<NodeKind>(rng() % 4);
        std::map<std::string, double> got;
        for (const auto& h : query(build_index(doc), doc, q)) got[h.target] = h.score;
        ASSERT_EQ(got, dt::naive_search(doc, q)) << q.text;
    }
}

TEST(SearchProperty, Deterministic) {
    dt::Rng rng(93);
    auto ids = dt::fixture_ids(4);
    const auto doc = dt::random_model(rng, ids, {.max_nodes = 20, .max_links = 30, .max_evidence_per_link = 3});
    SearchQuery q;
    q.text = "c";
    const auto first = query(build_index(doc), doc, q);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(query(build_index(doc), doc, q), first);
}

}  // namespace
