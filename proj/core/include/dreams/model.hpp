#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dreams/error.hpp"
#include "dreams/ids.hpp"

namespace dreams {

inline constexpr std::string_view kSchemaVersion = "dreams/1";

enum class NodeKind { influencing_factor, success_factor, key_factor, assumption_node };
enum class Polarity { positive, negative };
enum class EvidenceKind { assumption, reference, experience };
enum class ModelKind { reference_model, impact_model };

std::string_view to_string(NodeKind kind);
std::string_view to_string(Polarity polarity);
std::string_view to_string(EvidenceKind kind);
std::string_view to_string(ModelKind kind);

// Parsers accept exactly the names produced by to_string.
std::optional<NodeKind> parse_node_kind(std::string_view text);
std::optional<Polarity> parse_polarity(std::string_view text);
std::optional<EvidenceKind> parse_evidence_kind(std::string_view text);
std::optional<ModelKind> parse_model_kind(std::string_view text);

struct FactorNode {
    std::string id;
    NodeKind kind = NodeKind::influencing_factor;
    std::string label;
    std::optional<std::string> notes;
    std::vector<std::string> tags;

    friend bool operator==(const FactorNode&, const FactorNode&) = default;
};

struct EvidenceItem {
    std::string id;
    EvidenceKind kind = EvidenceKind::assumption;
    std::string text;
    std::optional<std::string> locator;  // citation key, DOI, page, interview id
    Timestamp created_at{};

    friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

struct CausalLink {
    std::string id;
    std::string source;
    std::string target;
    Polarity polarity = Polarity::positive;
    std::vector<EvidenceItem> evidence;
    std::optional<std::string> notes;

    friend bool operator==(const CausalLink&, const CausalLink&) = default;
};

/// A Reference Model or Impact Model. This is a plain value: it may be
/// hand-assembled in an invalid state, which `validate` then reports. The
/// editing functions below only ever move a valid document to another valid
/// document and bump `revision` by exactly one on success.
struct ModelDocument {
    std::string id;
    ModelKind kind = ModelKind::reference_model;
    std::string title;
    std::vector<FactorNode> nodes;
    std::vector<CausalLink> links;
    std::uint64_t revision = 0;

    friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

struct NodeUpdate {
    std::optional<NodeKind> kind;
    std::optional<std::string> label;
    std::optional<std::optional<std::string>> notes;  // engaged-but-empty clears
    std::optional<std::vector<std::string>> tags;
};

struct LinkUpdate {
    std::optional<Polarity> polarity;
    std::optional<std::optional<std::string>> notes;
};

ModelDocument create_model(ModelKind kind, std::string_view title,
                           IdGenerator& ids = default_id_generator());

std::string add_node(ModelDocument& model, NodeKind kind, std::string_view label,
                     std::optional<std::string> notes = std::nullopt,
                     std::vector<std::string> tags = {},
                     IdGenerator& ids = default_id_generator());

std::string add_link(ModelDocument& model, std::string_view source_id, std::string_view target_id,
                     Polarity polarity, IdGenerator& ids = default_id_generator());

std::string attach_evidence(ModelDocument& model, std::string_view link_id, EvidenceKind kind,
                            std::string_view text,
                            std::optional<std::string> locator = std::nullopt,
                            IdGenerator& ids = default_id_generator());

/// Removes the node and every incident link (with its evidence).
/// Returns the removed link ids in document order.
std::vector<std::string> remove_node(ModelDocument& model, std::string_view node_id);

void update_node(ModelDocument& model, std::string_view node_id, const NodeUpdate& update);
void update_link(ModelDocument& model, std::string_view link_id, const LinkUpdate& update);
void update_link_polarity(ModelDocument& model, std::string_view link_id, Polarity polarity);
void detach_evidence(ModelDocument& model, std::string_view link_id, std::string_view evidence_id);
void remove_link(ModelDocument& model, std::string_view link_id);

std::vector<Violation> validate(const ModelDocument& model);

const FactorNode* find_node(const ModelDocument& model, std::string_view id);
const CausalLink* find_link(const ModelDocument& model, std::string_view id);

/// Returns the owning link of an evidence item, or nullptr.
const CausalLink* find_evidence_owner(const ModelDocument& model, std::string_view evidence_id);

std::size_t evidence_count(const ModelDocument& model);

// Whitespace trimming used for labels and titles (ASCII whitespace only).
std::string_view trim(std::string_view text);

}  // namespace dreams
