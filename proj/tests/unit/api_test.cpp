#include <gtest/gtest.h>

#include "json.hpp"

#include "dreams/api.hpp"
#include "dreams/store.hpp"
#include "generators.hpp"

namespace {

using namespace dreams;
using nlohmann::json;

TEST(Api, StatusMappingIsFixed) {
    EXPECT_EQ(api::http_status(ErrorCode::validation_error), 422);
    EXPECT_EQ(api::http_status(ErrorCode::not_found), 404);
    EXPECT_EQ(api::http_status(ErrorCode::conflict), 409);
    EXPECT_EQ(api::http_status(ErrorCode::stale_revision), 409);
    EXPECT_EQ(api::http_status(ErrorCode::unsupported_version), 400);
    EXPECT_EQ(api::http_status(ErrorCode::parse_error), 400);
    EXPECT_EQ(api::http_status(ErrorCode::io_error), 503);
}

TEST(Api, ErrorBody) {
    const auto plain = json::parse(api::error_body(Error(ErrorCode::not_found, "unknown model")));
    EXPECT_EQ(plain, (json{{"status", 404}, {"code", "not_found"}, {"detail", "unknown model"}}));

    const auto with_id = json::parse(api::error_body(Error(ErrorCode::conflict, "dup", "L1")));
    EXPECT_EQ(with_id["offending_id"], "L1");

    const auto with_violations = json::parse(api::error_body(
        Error(ErrorCode::validation_error, "bad", std::vector<Violation>{{"n1", "empty_label", "node label is empty"}})));
    EXPECT_EQ(with_violations["violations"][0]["rule"], "empty_label");
    EXPECT_EQ(with_violations["status"], 422);
}

TEST(Api, MutationResponseEmbedsCanonicalDocument) {
    auto ids = dreams::testing::fixture_ids();
    auto doc = create_model(ModelKind::impact_model, "IM", ids);
    const auto id = add_node(doc, NodeKind::key_factor, "k", std::nullopt, {}, ids);
    const auto body = json::parse(api::mutation_response(doc, id));
    EXPECT_EQ(body["id"], id);
    EXPECT_EQ(body["revision"], 1);
    EXPECT_EQ(body["document"], json::parse(store::serialize(doc)));
    EXPECT_FALSE(body.contains("removed_links"));

    std::vector<std::string> removed = {"a", "b"};
    EXPECT_EQ(json::parse(api::mutation_response(doc, id, &removed))["removed_links"], json(removed));
}

TEST(Api, ValidationReport) {
    EXPECT_EQ(json::parse(api::validation_report({})), (json{{"valid", true}, {"violations", json::array()}}));
    const auto r = json::parse(api::validation_report({{"x", "self_loop", "m"}}));
    EXPECT_FALSE(r["valid"]);
    EXPECT_EQ(r["violations"][0], (json{{"id", "x"}, {"rule", "self_loop"}, {"message", "m"}}));
}

}  // namespace
