#include <gtest/gtest.h>

#include "json.hpp"

#include "dreams/error.hpp"
#include "dreams/layout.hpp"
#include "dreams/store.hpp"
#include "generators.hpp"

namespace {

using namespace dreams;
namespace dt = dreams::testing;
using nlohmann::json;

Error error_of(std::string_view text) {
    try {
        store::deserialize(text);
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "expected an error";
    return Error(ErrorCode::io_error, "none");
}

ModelDocument sample(IdGenerator& ids) {
    auto doc = create_model(ModelKind::reference_model, "Sketching study RM", ids);
    auto a = add_node(doc, NodeKind::influencing_factor, "time pressure", "from interviews", {"time"}, ids);
    auto b = add_node(doc, NodeKind::key_factor, "quality of sketches", std::nullopt, {}, ids);
    auto l = add_link(doc, a, b, Polarity::negative, ids);
    attach_evidence(doc, l, EvidenceKind::reference, "Smith 2019 protocol study", "doi:10/x", ids);
    return doc;
}

TEST(DocumentJson, EmptyModelHasEmptyArrays) {
    auto ids = dt::fixture_ids();
    const auto text = store::serialize(create_model(ModelKind::reference_model, "RM", ids));
    const auto j = json::parse(text);
    EXPECT_EQ(j["schema_version"], "dreams/1");
    EXPECT_EQ(j["nodes"], json::array());
    EXPECT_EQ(j["links"], json::array());
    EXPECT_EQ(j["model"]["revision"], 0);
    EXPECT_EQ(text.back(), '\n');
}

TEST(DocumentJson, FieldConventions) {
    auto ids = dt::fixture_ids();
    const auto doc = sample(ids);
    const auto j = json::parse(store::serialize(doc));
    EXPECT_EQ(j["links"][0]["polarity"], "-");
    EXPECT_EQ(j["links"][0]["evidence"][0]["created_at"], "2024-01-01T00:00:00Z");
    EXPECT_EQ(j["links"][0]["evidence"][0]["locator"], "doi:10/x");
    EXPECT_FALSE(j["nodes"][1].contains("notes"));
    EXPECT_EQ(j["model"]["kind"], "reference_model");
}

TEST(DocumentJson, SerializeIsDeterministicAndRoundTrips) {
    auto ids = dt::fixture_ids();
    const auto doc = sample(ids);
    const auto text = store::serialize(doc);
    EXPECT_EQ(store::serialize(doc), text);
    EXPECT_EQ(store::deserialize(text), doc);
}

TEST(DocumentJson, CanonicalisesKeyOrderAndWhitespace) {
    auto ids = dt::fixture_ids();
    const auto text = store::serialize(sample(ids));
    const auto compact = json::parse(text).dump();
    EXPECT_NE(compact, text);
    EXPECT_EQ(store::serialize(store::deserialize(compact)), text);
}

TEST(DocumentJson, RandomModelsRoundTrip) {
    dt::Rng rng(71);
    auto ids = dt::fixture_ids(2);
    for (int i = 0; i < 300; ++i) {
        const auto doc = dt::random_model(rng, ids);
        const auto text = store::serialize(doc);
        const auto back = store::deserialize(text);
        ASSERT_EQ(back, doc);
        ASSERT_EQ(store::serialize(back), text);
    }
}

TEST(DocumentJson, DistinctDocumentsSerializeDifferently) {
    auto ids = dt::fixture_ids();
    const auto doc = sample(ids);
    auto variants = std::vector<ModelDocument>(6, doc);
    variants[0].title += " ";
    variants[1].nodes[0].tags.push_back("x");
    variants[2].links[0].polarity = Polarity::positive;
    variants[3].links[0].evidence[0].locator.reset();
    variants[4].nodes[1].notes = "";
    variants[5].revision += 1;
    const auto base = store::serialize(doc);
    for (const auto& v : variants) EXPECT_NE(store::serialize(v), base);
}

TEST(DocumentJson, TruncatedFileIsParseError) {
    auto ids = dt::fixture_ids();
    const auto text = store::serialize(sample(ids));
    const auto e = error_of(text.substr(0, text.size() / 2));
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
}

TEST(DocumentJson, DanglingLinkIsValidationErrorNamingLink) {
    auto ids = dt::fixture_ids();
    const auto doc = sample(ids);
    auto j = json::parse(store::serialize(doc));
    j["links"][0]["target"] = "ghost";
    const auto e = error_of(j.dump());
    EXPECT_EQ(e.code(), ErrorCode::validation_error);
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].id, doc.links[0].id);
}

TEST(DocumentJson, VersionAndStrictness) {
    auto ids = dt::fixture_ids();
    const auto base = json::parse(store::serialize(sample(ids)));

    auto j = base;
    j["schema_version"] = "dreams/2";
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::unsupported_version);

    j = base;
    j["extra"] = 1;
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::parse_error);

    j = base;
    j["links"][0]["evidence"][0]["weight"] = 0.5;
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::parse_error);

    j = base;
    j["nodes"][0].erase("label");
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::parse_error);

    j = base;
    j["nodes"][0]["kind"] = "measurable_success_factor";
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::parse_error);

    j = base;
    j["links"][0]["polarity"] = "negative";
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::parse_error);

    j = base;
    j["links"][0]["evidence"][0]["created_at"] = "2024-01-01 00:00:00";
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::parse_error);

    j = base;
    j["model"]["revision"] = -1;
    EXPECT_EQ(error_of(j.dump()).code(), ErrorCode::parse_error);

    EXPECT_EQ(error_of("[]").code(), ErrorCode::parse_error);
}

TEST(DocumentJson, NullOptionalsReadAsAbsent) {
    auto ids = dt::fixture_ids();
    auto j = json::parse(store::serialize(sample(ids)));
    j["nodes"][0]["notes"] = nullptr;
    EXPECT_FALSE(store::deserialize(j.dump()).nodes[0].notes.has_value());
}

TEST(DocumentJson, SerializeRejectsInvalidDocument) {
    auto ids = dt::fixture_ids();
    auto doc = sample(ids);
    doc.nodes[0].label = " ";
    try {
        store::serialize(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::validation_error);
        EXPECT_EQ(e.violations().size(), 1u);
    }
}

TEST(Timestamps, FormatAndParse) {
    using namespace std::chrono;
    const Timestamp t = sys_days(2019y / 3 / 7) + hours(13) + minutes(5) + seconds(9);
    EXPECT_EQ(store::format_timestamp(t), "2019-03-07T13:05:09Z");
    EXPECT_EQ(store::parse_timestamp("2019-03-07T13:05:09Z"), t);
    EXPECT_FALSE(store::parse_timestamp("2019-02-30T00:00:00Z"));
    EXPECT_FALSE(store::parse_timestamp("2019-03-07T13:05:09"));
    EXPECT_FALSE(store::parse_timestamp("2019-03-07T25:05:09Z"));
}

TEST(LayoutJson, RoundTrips) {
    dt::Rng rng(72);
    auto ids = dt::fixture_ids(3);
    for (int i = 0; i < 50; ++i) {
        const auto doc = dt::random_model(rng, ids);
        const auto l = layout::layout(doc);
        ASSERT_EQ(store::deserialize_layout(store::serialize_layout(l)), l);
    }
    EXPECT_THROW(store::deserialize_layout("{}"), Error);
}

}  // namespace
