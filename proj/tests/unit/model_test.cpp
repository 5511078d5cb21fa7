#include <gtest/gtest.h>

#include <map>
#include <set>

#include "dreams/error.hpp"
#include "dreams/model.hpp"
#include "generators.hpp"

namespace {

using namespace dreams;

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected dreams::Error";
    return ErrorCode::io_error;
}

class ModelTest : public ::testing::Test {
protected:
    IdGenerator ids = dreams::testing::fixture_ids();
    ModelDocument doc = create_model(ModelKind::reference_model, "Sketching study RM", ids);
};

TEST_F(ModelTest, CreateIsEmptyAtRevisionZero) {
    EXPECT_EQ(doc.kind, ModelKind::reference_model);
    EXPECT_TRUE(doc.nodes.empty());
    EXPECT_TRUE(doc.links.empty());
    EXPECT_EQ(doc.revision, 0u);
    EXPECT_EQ(create_model(ModelKind::impact_model, "IM v1", ids).kind, ModelKind::impact_model);
}

TEST_F(ModelTest, CreateRejectsEmptyTitle) {
    EXPECT_EQ(code_of([&] { create_model(ModelKind::impact_model, "", ids); }), ErrorCode::validation_error);
    EXPECT_EQ(code_of([&] { create_model(ModelKind::impact_model, "  \t", ids); }), ErrorCode::validation_error);
}

TEST_F(ModelTest, AddNodeBumpsRevision) {
    add_node(doc, NodeKind::influencing_factor, "time pressure", std::nullopt, {}, ids);
    EXPECT_EQ(doc.nodes.size(), 1u);
    EXPECT_EQ(doc.revision, 1u);
}

TEST_F(ModelTest, RepeatedLabelsGetDistinctIds) {
    auto a = add_node(doc, NodeKind::key_factor, "quality of sketches", std::nullopt, {}, ids);
    auto b = add_node(doc, NodeKind::key_factor, "quality of sketches", std::nullopt, {}, ids);
    EXPECT_NE(a, b);
    EXPECT_TRUE(validate(doc).empty());
}

TEST_F(ModelTest, WhitespaceLabelRejected) {
    EXPECT_EQ(code_of([&] { add_node(doc, NodeKind::key_factor, "   ", std::nullopt, {}, ids); }),
              ErrorCode::validation_error);
    EXPECT_EQ(doc.revision, 0u);
}

TEST_F(ModelTest, LabelStoredTrimmed) {
    auto id = add_node(doc, NodeKind::key_factor, "  trust \n", std::nullopt, {}, ids);
    EXPECT_EQ(find_node(doc, id)->label, "trust");
}

TEST_F(ModelTest, LinkRules) {
    auto a = add_node(doc, NodeKind::influencing_factor, "a", std::nullopt, {}, ids);
    auto b = add_node(doc, NodeKind::success_factor, "b", std::nullopt, {}, ids);
    auto ab = add_link(doc, a, b, Polarity::positive, ids);
    EXPECT_EQ(doc.links.size(), 1u);
    EXPECT_TRUE(find_link(doc, ab)->evidence.empty());

    EXPECT_EQ(code_of([&] { add_link(doc, a, a, Polarity::negative, ids); }), ErrorCode::validation_error);
    EXPECT_EQ(code_of([&] { add_link(doc, a, b, Polarity::negative, ids); }), ErrorCode::conflict);
    EXPECT_EQ(code_of([&] { add_link(doc, a, "nope", Polarity::negative, ids); }), ErrorCode::not_found);
    EXPECT_EQ(code_of([&] { add_link(doc, "nope", b, Polarity::negative, ids); }), ErrorCode::not_found);

    add_link(doc, b, a, Polarity::negative, ids);
    EXPECT_EQ(doc.links.size(), 2u);
    EXPECT_TRUE(validate(doc).empty());
    EXPECT_EQ(doc.revision, 4u);
}

TEST_F(ModelTest, EvidenceAttachAndDetach) {
    auto a = add_node(doc, NodeKind::influencing_factor, "a", std::nullopt, {}, ids);
    auto b = add_node(doc, NodeKind::success_factor, "b", std::nullopt, {}, ids);
    auto l = add_link(doc, a, b, Polarity::positive, ids);
    auto r = attach_evidence(doc, l, EvidenceKind::reference, "Smith 2019 protocol study", "doi:10/x", ids);
    EXPECT_EQ(find_link(doc, l)->evidence.size(), 1u);
    auto s = attach_evidence(doc, l, EvidenceKind::assumption, "participants are experienced designers",
                             std::nullopt, ids);
    EXPECT_EQ(find_link(doc, l)->evidence.back().kind, EvidenceKind::assumption);
    EXPECT_EQ(find_evidence_owner(doc, r)->id, l);

    EXPECT_EQ(code_of([&] { attach_evidence(doc, "nope", EvidenceKind::reference, "x", std::nullopt, ids); }),
              ErrorCode::not_found);
    EXPECT_EQ(code_of([&] { attach_evidence(doc, l, EvidenceKind::reference, " ", std::nullopt, ids); }),
              ErrorCode::validation_error);

    detach_evidence(doc, l, r);
    detach_evidence(doc, l, s);
    ASSERT_NE(find_link(doc, l), nullptr);
    EXPECT_TRUE(find_link(doc, l)->evidence.empty());
    EXPECT_EQ(code_of([&] { detach_evidence(doc, l, s); }), ErrorCode::not_found);
}

TEST_F(ModelTest, RemoveNodeCascades) {
    auto hub = add_node(doc, NodeKind::key_factor, "hub", std::nullopt, {}, ids);
    std::vector<std::string> spokes;
    for (int i = 0; i < 3; ++i) spokes.push_back(add_node(doc, NodeKind::influencing_factor, "s", std::nullopt, {}, ids));
    auto lonely = add_node(doc, NodeKind::influencing_factor, "lonely", std::nullopt, {}, ids);
    std::vector<std::string> links = {
        add_link(doc, spokes[0], hub, Polarity::positive, ids),
        add_link(doc, hub, spokes[1], Polarity::negative, ids),
        add_link(doc, spokes[2], hub, Polarity::positive, ids),
    };
    add_link(doc, spokes[0], spokes[1], Polarity::positive, ids);
    attach_evidence(doc, links[0], EvidenceKind::experience, "seen it", std::nullopt, ids);

    EXPECT_EQ(remove_node(doc, hub), links);
    EXPECT_TRUE(validate(doc).empty());
    EXPECT_EQ(doc.links.size(), 1u);
    EXPECT_EQ(evidence_count(doc), 0u);
    EXPECT_TRUE(remove_node(doc, lonely).empty());
    EXPECT_EQ(code_of([&] { remove_node(doc, lonely); }), ErrorCode::not_found);
}

TEST_F(ModelTest, UpdatesChangeOnlyTheirField) {
    auto a = add_node(doc, NodeKind::influencing_factor, "a", "note", {"t"}, ids);
    auto b = add_node(doc, NodeKind::success_factor, "b", std::nullopt, {}, ids);
    auto l = add_link(doc, a, b, Polarity::positive, ids);
    attach_evidence(doc, l, EvidenceKind::reference, "ref", std::nullopt, ids);

    auto before = doc;
    update_link_polarity(doc, l, Polarity::negative);
    auto expected = before;
    expected.links[0].polarity = Polarity::negative;
    expected.revision += 1;
    EXPECT_EQ(doc, expected);

    update_node(doc, a, NodeUpdate{.kind = std::nullopt, .label = std::nullopt,
                                   .notes = std::optional<std::string>{}, .tags = std::nullopt});
    EXPECT_FALSE(find_node(doc, a)->notes.has_value());
    EXPECT_EQ(find_node(doc, a)->tags, std::vector<std::string>{"t"});

    update_node(doc, a, NodeUpdate{.kind = NodeKind::key_factor, .label = "A", .notes = std::nullopt, .tags = std::nullopt});
    EXPECT_EQ(find_node(doc, a)->kind, NodeKind::key_factor);
    EXPECT_EQ(find_node(doc, a)->label, "A");
    EXPECT_EQ(code_of([&] {
                  update_node(doc, a, NodeUpdate{.kind = std::nullopt, .label = " ", .notes = std::nullopt, .tags = std::nullopt});
              }),
              ErrorCode::validation_error);
    EXPECT_EQ(code_of([&] { update_link_polarity(doc, "nope", Polarity::positive); }), ErrorCode::not_found);
    EXPECT_EQ(code_of([&] { update_node(doc, "nope", NodeUpdate{}); }), ErrorCode::not_found);

    remove_link(doc, l);
    EXPECT_TRUE(doc.links.empty());
    EXPECT_EQ(code_of([&] { remove_link(doc, l); }), ErrorCode::not_found);
}

TEST_F(ModelTest, ValidateReportsDanglingEndpoint) {
    auto a = add_node(doc, NodeKind::influencing_factor, "a", std::nullopt, {}, ids);
    auto b = add_node(doc, NodeKind::success_factor, "b", std::nullopt, {}, ids);
    auto l = add_link(doc, a, b, Polarity::positive, ids);
    EXPECT_TRUE(validate(doc).empty());
    doc.links[0].target = "ghost";
    const auto v = validate(doc);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].id, l);
    EXPECT_EQ(v[0].rule, "referential_integrity");
}

TEST_F(ModelTest, ValidateReportsDuplicateIdOnce) {
    add_node(doc, NodeKind::influencing_factor, "a", std::nullopt, {}, ids);
    add_node(doc, NodeKind::success_factor, "b", std::nullopt, {}, ids);
    doc.nodes[1].id = doc.nodes[0].id;
    const auto v = validate(doc);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].rule, "unique_id");
    EXPECT_EQ(v[0].id, doc.nodes[0].id);
}

TEST_F(ModelTest, ValidateOtherRules) {
    auto a = add_node(doc, NodeKind::influencing_factor, "a", std::nullopt, {}, ids);
    auto b = add_node(doc, NodeKind::success_factor, "b", std::nullopt, {}, ids);
    auto l = add_link(doc, a, b, Polarity::positive, ids);
    attach_evidence(doc, l, EvidenceKind::reference, "ref", std::nullopt, ids);

    auto broken = doc;
    broken.links.push_back(broken.links[0]);
    broken.links.back().id = "other";
    broken.links.back().evidence.clear();
    broken.links[0].evidence[0].text = "  ";
    broken.nodes[1].label = "";
    broken.title = " ";
    broken.links.push_back({"loop", a, a, Polarity::negative, {}, std::nullopt});

    std::multiset<std::string> rules;
    for (const auto& v : validate(broken)) rules.insert(v.rule);
    EXPECT_EQ(rules, (std::multiset<std::string>{"duplicate_link", "empty_evidence_text", "empty_label",
                                                 "empty_title", "self_loop"}));
}

TEST(ModelEnums, RoundTripNames) {
    for (auto k : {NodeKind::influencing_factor, NodeKind::success_factor, NodeKind::key_factor, NodeKind::assumption_node}) {
        EXPECT_EQ(parse_node_kind(to_string(k)), k);
    }
    for (auto k : {EvidenceKind::assumption, EvidenceKind::reference, EvidenceKind::experience}) {
        EXPECT_EQ(parse_evidence_kind(to_string(k)), k);
    }
    EXPECT_EQ(parse_polarity("negative"), Polarity::negative);
    EXPECT_EQ(parse_model_kind("impact_model"), ModelKind::impact_model);
    EXPECT_FALSE(parse_node_kind("measurable_success_factor"));
    EXPECT_FALSE(parse_polarity("Positive"));
}

// Random operation sequences keep the document valid and count revisions.
TEST(ModelProperty, RandomOperationSequencesStayValid) {
    dreams::testing::Rng rng(2024);
    auto ids = dreams::testing::fixture_ids(7);
    for (int round = 0; round < 200; ++round) {
        auto doc = create_model(ModelKind::impact_model, "prop", ids);
        std::uint64_t successes = 0;
        for (int step = 0; step < 60; ++step) {
            auto pick_node = [&]() -> std::string {
                if (doc.nodes.empty() || rng() % 10 == 0) return "missing";
                return doc.nodes[rng() % doc.nodes.size()].id;
            };
            auto pick_link = [&]() -> std::string {
                if (doc.links.empty() || rng() % 10 == 0) return "missing";
                return doc.links[rng() % doc.links.size()].id;
            };
            try {
                switch (rng() % 9) {
                    case 0:
                    case 1: add_node(doc, NodeKind::key_factor, rng() % 8 ? "n" : " ", std::nullopt, {}, ids); break;
                    case 2:
                    case 3: add_link(doc, pick_node(), pick_node(), Polarity::positive, ids); break;
                    case 4: attach_evidence(doc, pick_link(), EvidenceKind::reference, "e", std::nullopt, ids); break;
                    case 5: update_link_polarity(doc, pick_link(), Polarity::negative); break;
                    case 6: remove_node(doc, pick_node()); break;
                    case 7: remove_link(doc, pick_link()); break;
                    default: {
                        const auto l = pick_link();
                        const auto* link = find_link(doc, l);
                        const std::string e = link && !link->evidence.empty() ? link->evidence[0].id : "missing";
                        detach_evidence(doc, l, e);
                    }
                }
                ++successes;
            } catch (const Error&) {
            }
            ASSERT_TRUE(validate(doc).empty());
            ASSERT_EQ(doc.revision, successes);
        }
        std::map<std::string, int> owners;
        for (const auto& link : doc.links) {
            for (const auto& e : link.evidence) ++owners[e.id];
        }
        for (const auto& [id, count] : owners) EXPECT_EQ(count, 1) << id;
    }
}

}  // namespace
