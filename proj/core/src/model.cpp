#include "dreams/model.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <utility>

namespace dreams {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view text, const std::array<Enum, N>& values) {
    for (Enum value : values) {
        if (to_string(value) == text) return value;
    }
    return std::nullopt;
}

FactorNode* find_node_mut(ModelDocument& model, std::string_view id) {
    auto it = std::ranges::find(model.nodes, id, &FactorNode::id);
    return it == model.nodes.end() ? nullptr : &*it;
}

CausalLink* find_link_mut(ModelDocument& model, std::string_view id) {
    auto it = std::ranges::find(model.links, id, &CausalLink::id);
    return it == model.links.end() ? nullptr : &*it;
}

bool id_in_use(const ModelDocument& model, std::string_view id) {
    if (model.id == id) return true;
    for (const auto& node : model.nodes) {
        if (node.id == id) return true;
    }
    for (const auto& link : model.links) {
        if (link.id == id) return true;
        for (const auto& item : link.evidence) {
            if (item.id == id) return true;
        }
    }
    return false;
}

std::string fresh_id(const ModelDocument& model, IdGenerator& ids) {
    std::string id = ids.next();
    while (id_in_use(model, id)) id = ids.next();
    return id;
}

std::string require_label(std::string_view label) {
    auto trimmed = trim(label);
    if (trimmed.empty()) throw Error(ErrorCode::validation_error, "node label must not be empty");
    return std::string(trimmed);
}

}  // namespace

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::influencing_factor: return "influencing_factor";
        case NodeKind::success_factor: return "success_factor";
        case NodeKind::key_factor: return "key_factor";
        case NodeKind::assumption_node: return "assumption_node";
    }
    return "";
}

std::string_view to_string(Polarity polarity) {
    return polarity == Polarity::positive ? "positive" : "negative";
}

std::string_view to_string(EvidenceKind kind) {
    switch (kind) {
        case EvidenceKind::assumption: return "assumption";
        case EvidenceKind::reference: return "reference";
        case EvidenceKind::experience: return "experience";
    }
    return "";
}

std::string_view to_string(ModelKind kind) {
    return kind == ModelKind::reference_model ? "reference_model" : "impact_model";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
    return parse_enum(text, std::array{NodeKind::influencing_factor, NodeKind::success_factor,
                                       NodeKind::key_factor, NodeKind::assumption_node});
}

std::optional<Polarity> parse_polarity(std::string_view text) {
    return parse_enum(text, std::array{Polarity::positive, Polarity::negative});
}

std::optional<EvidenceKind> parse_evidence_kind(std::string_view text) {
    return parse_enum(text, std::array{EvidenceKind::assumption, EvidenceKind::reference,
                                       EvidenceKind::experience});
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
    return parse_enum(text, std::array{ModelKind::reference_model, ModelKind::impact_model});
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\n\r\f\v";
    auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

ModelDocument create_model(ModelKind kind, std::string_view title, IdGenerator& ids) {
    if (trim(title).empty()) throw Error(ErrorCode::validation_error, "model title must not be empty");
    ModelDocument model;
    model.id = ids.next();
    model.kind = kind;
    model.title = std::string(title);
    return model;
}

std::string add_node(ModelDocument& model, NodeKind kind, std::string_view label,
                     std::optional<std::string> notes, std::vector<std::string> tags,
                     IdGenerator& ids) {
    FactorNode node;
    node.label = require_label(label);
    node.id = fresh_id(model, ids);
    node.kind = kind;
    node.notes = std::move(notes);
    node.tags = std::move(tags);
    model.nodes.push_back(std::move(node));
    ++model.revision;
    return model.nodes.back().id;
}

std::string add_link(ModelDocument& model, std::string_view source_id, std::string_view target_id,
                     Polarity polarity, IdGenerator& ids) {
    if (!find_node(model, source_id)) {
        throw Error(ErrorCode::not_found, "unknown source node", std::string(source_id));
    }
    if (!find_node(model, target_id)) {
        throw Error(ErrorCode::not_found, "unknown target node", std::string(target_id));
    }
    if (source_id == target_id) {
        throw Error(ErrorCode::validation_error, "self-loops are not allowed", std::string(source_id));
    }
    for (const auto& link : model.links) {
        if (link.source == source_id && link.target == target_id) {
            throw Error(ErrorCode::conflict, "a link with this source and target already exists", link.id);
        }
    }
    CausalLink link;
    link.id = fresh_id(model, ids);
    link.source = std::string(source_id);
    link.target = std::string(target_id);
    link.polarity = polarity;
    model.links.push_back(std::move(link));
    ++model.revision;
    return model.links.back().id;
}

std::string attach_evidence(ModelDocument& model, std::string_view link_id, EvidenceKind kind,
                            std::string_view text, std::optional<std::string> locator,
                            IdGenerator& ids) {
    CausalLink* link = find_link_mut(model, link_id);
    if (!link) throw Error(ErrorCode::not_found, "unknown link", std::string(link_id));
    if (trim(text).empty()) throw Error(ErrorCode::validation_error, "evidence text must not be empty");
    EvidenceItem item;
    item.id = fresh_id(model, ids);
    item.kind = kind;
    item.text = std::string(text);
    item.locator = std::move(locator);
    item.created_at = ids.now();
    link->evidence.push_back(std::move(item));
    ++model.revision;
    return link->evidence.back().id;
}

std::vector<std::string> remove_node(ModelDocument& model, std::string_view node_id) {
    auto it = std::ranges::find(model.nodes, node_id, &FactorNode::id);
    if (it == model.nodes.end()) throw Error(ErrorCode::not_found, "unknown node", std::string(node_id));
    std::vector<std::string> removed;
    for (const auto& link : model.links) {
        if (link.source == node_id || link.target == node_id) removed.push_back(link.id);
    }
    std::erase_if(model.links, [&](const CausalLink& link) {
        return link.source == node_id || link.target == node_id;
    });
    model.nodes.erase(it);
    ++model.revision;
    return removed;
}

void update_node(ModelDocument& model, std::string_view node_id, const NodeUpdate& update) {
    FactorNode* node = find_node_mut(model, node_id);
    if (!node) throw Error(ErrorCode::not_found, "unknown node", std::string(node_id));
    std::optional<std::string> label;
    if (update.label) label = require_label(*update.label);

    if (update.kind) node->kind = *update.kind;
    if (label) node->label = std::move(*label);
    if (update.notes) node->notes = *update.notes;
    if (update.tags) node->tags = *update.tags;
    ++model.revision;
}

void update_link(ModelDocument& model, std::string_view link_id, const LinkUpdate& update) {
    CausalLink* link = find_link_mut(model, link_id);
    if (!link) throw Error(ErrorCode::not_found, "unknown link", std::string(link_id));
    if (update.polarity) link->polarity = *update.polarity;
    if (update.notes) link->notes = *update.notes;
    ++model.revision;
}

void update_link_polarity(ModelDocument& model, std::string_view link_id, Polarity polarity) {
    update_link(model, link_id, LinkUpdate{.polarity = polarity, .notes = std::nullopt});
}

void detach_evidence(ModelDocument& model, std::string_view link_id, std::string_view evidence_id) {
    CausalLink* link = find_link_mut(model, link_id);
    if (!link) throw Error(ErrorCode::not_found, "unknown link", std::string(link_id));
    auto it = std::ranges::find(link->evidence, evidence_id, &EvidenceItem::id);
    if (it == link->evidence.end()) {
        throw Error(ErrorCode::not_found, "unknown evidence item on this link", std::string(evidence_id));
    }
    link->evidence.erase(it);
    ++model.revision;
}

void remove_link(ModelDocument& model, std::string_view link_id) {
    auto it = std::ranges::find(model.links, link_id, &CausalLink::id);
    if (it == model.links.end()) throw Error(ErrorCode::not_found, "unknown link", std::string(link_id));
    model.links.erase(it);
    ++model.revision;
}

std::vector<Violation> validate(const ModelDocument& model) {
    std::vector<Violation> out;
    auto report = [&](std::string id, std::string rule, std::string message) {
        out.push_back({std::move(id), std::move(rule), std::move(message)});
    };

    if (model.id.empty()) report("", "empty_id", "model id is empty");
    if (trim(model.title).empty()) report(model.id, "empty_title", "model title is empty");

    // Count every id once per occurrence; report each duplicated id once.
    std::map<std::string_view, int> seen;
    std::vector<std::string_view> order;
    auto note_id = [&](std::string_view id, std::string_view what) {
        if (id.empty()) {
            report("", "empty_id", std::string(what) + " id is empty");
            return;
        }
        if (seen[id]++ == 0) order.push_back(id);
    };
    note_id(model.id, "model");
    for (const auto& node : model.nodes) note_id(node.id, "node");
    for (const auto& link : model.links) {
        note_id(link.id, "link");
        for (const auto& item : link.evidence) note_id(item.id, "evidence");
    }
    for (auto id : order) {
        if (seen[id] > 1) report(std::string(id), "unique_id", "id is used by more than one element");
    }

    std::set<std::string_view> node_ids;
    for (const auto& node : model.nodes) {
        node_ids.insert(node.id);
        if (trim(node.label).empty()) report(node.id, "empty_label", "node label is empty");
    }

    std::set<std::pair<std::string_view, std::string_view>> pairs;
    for (const auto& link : model.links) {
        if (!node_ids.contains(link.source)) {
            report(link.id, "referential_integrity", "link source '" + link.source + "' does not exist");
        }
        if (!node_ids.contains(link.target)) {
            report(link.id, "referential_integrity", "link target '" + link.target + "' does not exist");
        }
        if (link.source == link.target) report(link.id, "self_loop", "link source equals its target");
        if (!pairs.emplace(link.source, link.target).second) {
            report(link.id, "duplicate_link", "another link already joins " + link.source + " -> " + link.target);
        }
        for (const auto& item : link.evidence) {
            if (trim(item.text).empty()) report(item.id, "empty_evidence_text", "evidence text is empty");
        }
    }
    return out;
}

const FactorNode* find_node(const ModelDocument& model, std::string_view id) {
    auto it = std::ranges::find(model.nodes, id, &FactorNode::id);
    return it == model.nodes.end() ? nullptr : &*it;
}

const CausalLink* find_link(const ModelDocument& model, std::string_view id) {
    auto it = std::ranges::find(model.links, id, &CausalLink::id);
    return it == model.links.end() ? nullptr : &*it;
}

const CausalLink* find_evidence_owner(const ModelDocument& model, std::string_view evidence_id) {
    for (const auto& link : model.links) {
        if (std::ranges::find(link.evidence, evidence_id, &EvidenceItem::id) != link.evidence.end()) {
            return &link;
        }
    }
    return nullptr;
}

std::size_t evidence_count(const ModelDocument& model) {
    std::size_t total = 0;
    for (const auto& link : model.links) total += link.evidence.size();
    return total;
}

}  // namespace dreams
