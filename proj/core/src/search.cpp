#include "dreams/search.hpp"

#include <algorithm>
#include <set>

#include "json_codec.hpp"
#include "text.hpp"

namespace dreams::search {
namespace {

bool passes_filters(const IndexedItem& item, const SearchQuery& q) {
    if (q.kind_filter && item.node_kind != q.kind_filter) return false;
    if (q.polarity_filter && item.polarity != q.polarity_filter) return false;
    if (q.evidence_filter && item.evidence_kind != q.evidence_filter) return false;
    return true;
}

bool has_filter(const SearchQuery& q) {
    return q.kind_filter || q.polarity_filter || q.evidence_filter;
}

IndexedText indexed(Field field, const std::string& text) {
    return {field, text, tokenize(text)};
}

}  // namespace

std::string case_fold(std::string_view input) {
    std::string out;
    out.reserve(input.size());
    std::size_t pos = 0;
    while (pos < input.size()) text::encode(text::fold(text::decode(input, pos)), out);
    return out;
}

std::vector<Token> tokenize(std::string_view input) {
    std::vector<Token> tokens;
    std::size_t pos = 0;
    Token current;
    bool open = false;
    while (pos < input.size()) {
        const std::size_t start = pos;
        const char32_t cp = text::decode(input, pos);
        if (text::is_word(cp)) {
            if (!open) {
                current = Token{{}, start, start};
                open = true;
            }
            text::encode(text::fold(cp), current.text);
            current.end = pos;
        } else if (open) {
            tokens.push_back(std::move(current));
            open = false;
        }
    }
    if (open) tokens.push_back(std::move(current));
    return tokens;
}

std::string_view to_string(Field field) {
    switch (field) {
        case Field::label: return "label";
        case Field::notes: return "notes";
        case Field::link_notes: return "link_notes";
        case Field::evidence_text: return "evidence_text";
        case Field::locator: return "locator";
        case Field::tag: return "tag";
    }
    return "";
}

std::string_view to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::node: return "node";
        case TargetKind::link: return "link";
        case TargetKind::evidence: return "evidence";
    }
    return "";
}

double field_weight(Field field) {
    switch (field) {
        case Field::label: return 3.0;
        case Field::evidence_text: return 2.0;
        case Field::tag: return 1.5;
        default: return 1.0;
    }
}

SearchIndex build_index(const ModelDocument& model) {
    SearchIndex index;
    index.model_id_ = model.id;
    index.revision_ = model.revision;

    for (const auto& node : model.nodes) {
        IndexedItem item;
        item.kind = TargetKind::node;
        item.id = node.id;
        item.owner_path = {model.id, node.id};
        item.node_kind = node.kind;
        item.texts.push_back(indexed(Field::label, node.label));
        if (node.notes) item.texts.push_back(indexed(Field::notes, *node.notes));
        for (const auto& tag : node.tags) item.texts.push_back(indexed(Field::tag, tag));
        index.items_.push_back(std::move(item));
    }
    for (const auto& link : model.links) {
        IndexedItem item;
        item.kind = TargetKind::link;
        item.id = link.id;
        item.owner_path = {model.id, link.id};
        item.polarity = link.polarity;
        if (link.notes) item.texts.push_back(indexed(Field::link_notes, *link.notes));
        index.items_.push_back(std::move(item));

        for (const auto& evidence : link.evidence) {
            IndexedItem ev;
            ev.kind = TargetKind::evidence;
            ev.id = evidence.id;
            ev.owner_path = {model.id, link.id, evidence.id};
            ev.polarity = link.polarity;
            ev.evidence_kind = evidence.kind;
            ev.texts.push_back(indexed(Field::evidence_text, evidence.text));
            if (evidence.locator) ev.texts.push_back(indexed(Field::locator, *evidence.locator));
            index.items_.push_back(std::move(ev));
        }
    }

    for (std::size_t i = 0; i < index.items_.size(); ++i) {
        for (const auto& text : index.items_[i].texts) {
            for (const auto& token : text.tokens) {
                auto& owners = index.postings_[token.text];
                if (owners.empty() || owners.back() != i) owners.push_back(i);
            }
        }
    }
    return index;
}

std::size_t SearchIndex::size() const {
    std::size_t total = 0;
    for (const auto& [token, owners] : postings_) total += owners.size();
    return total;
}

std::vector<std::size_t> SearchIndex::items_with_prefix(std::string_view prefix) const {
    std::set<std::size_t> found;
    for (auto it = postings_.lower_bound(prefix); it != postings_.end() && it->first.starts_with(prefix); ++it) {
        found.insert(it->second.begin(), it->second.end());
    }
    return {found.begin(), found.end()};
}

std::optional<SearchHit> match_item(const IndexedItem& item, const std::vector<Token>& query_tokens,
                                    const SearchQuery& q) {
    if (!passes_filters(item, q)) return std::nullopt;

    SearchHit hit;
    hit.target_kind = item.kind;
    hit.target = item.id;
    hit.owner_path = item.owner_path;

    if (query_tokens.empty()) {
        if (!has_filter(q)) return std::nullopt;
        hit.score = 1.0;
        if (!item.texts.empty()) {
            hit.matched_field = item.texts.front().field;
            hit.snippet.text = item.texts.front().text;
        } else {
            hit.matched_field = item.kind == TargetKind::link ? Field::link_notes : Field::label;
        }
        return hit;
    }

    const IndexedText* best_text = nullptr;
    double best_weight = 0.0;
    for (const auto& qt : query_tokens) {
        const IndexedText* token_best = nullptr;
        for (const auto& text : item.texts) {
            const bool matches = std::ranges::any_of(
                text.tokens, [&](const Token& t) { return t.text.starts_with(qt.text); });
            if (matches && (!token_best || field_weight(text.field) > field_weight(token_best->field))) {
                token_best = &text;
            }
        }
        if (!token_best) return std::nullopt;
        const double w = field_weight(token_best->field);
        hit.score += w;
        if (!best_text || w > best_weight) {
            best_text = token_best;
            best_weight = w;
        }
    }

    hit.matched_field = best_text->field;
    hit.snippet.text = best_text->text;
    for (const auto& t : best_text->tokens) {
        const bool matched = std::ranges::any_of(
            query_tokens, [&](const Token& qt) { return t.text.starts_with(qt.text); });
        if (matched) hit.snippet.spans.emplace_back(t.begin, t.end);
    }
    return hit;
}

std::vector<SearchHit> query(const SearchIndex& index, const ModelDocument& model, const SearchQuery& q) {
    if (index.model_id() != model.id || index.revision() != model.revision) {
        throw Error(ErrorCode::stale_index, "search index was built from a different model revision", model.id);
    }
    if (q.limit < 1) throw Error(ErrorCode::validation_error, "search limit must be at least 1");

    const auto tokens = tokenize(q.text);
    std::vector<SearchHit> hits;
    if (tokens.empty()) {
        for (const auto& item : index.items()) {
            if (auto hit = match_item(item, tokens, q)) hits.push_back(std::move(*hit));
        }
    } else {
        for (auto i : index.items_with_prefix(tokens.front().text)) {
            if (auto hit = match_item(index.items()[i], tokens, q)) hits.push_back(std::move(*hit));
        }
    }

    std::ranges::sort(hits, [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.target < b.target;
    });
    if (hits.size() > q.limit) hits.resize(q.limit);
    return hits;
}

std::string hits_to_json(const std::vector<SearchHit>& hits) {
    codec::Json out = codec::Json::array();
    for (const auto& hit : hits) {
        codec::Json spans = codec::Json::array();
        for (const auto& [b, e] : hit.snippet.spans) spans.push_back({b, e});
        out.push_back({{"target", hit.target},
                       {"target_kind", to_string(hit.target_kind)},
                       {"owner_path", hit.owner_path},
                       {"matched_field", to_string(hit.matched_field)},
                       {"score", hit.score},
                       {"snippet", {{"text", hit.snippet.text}, {"spans", std::move(spans)}}}});
    }
    return codec::dump(out);
}

}  // namespace dreams::search
