#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dreams/model.hpp"

namespace dreams::search {

struct Token {
    std::string text;        // case-folded
    std::size_t begin = 0;   // byte span in the source text
    std::size_t end = 0;
};

/// Splits on non-word characters and case-folds each token.
std::vector<Token> tokenize(std::string_view text);
std::string case_fold(std::string_view text);

enum class Field { label, notes, link_notes, evidence_text, locator, tag };
enum class TargetKind { node, link, evidence };

std::string_view to_string(Field field);
std::string_view to_string(TargetKind kind);

/// Ranking weight contributed by one query token matching in `field`.
double field_weight(Field field);

struct SearchQuery {
    std::string text;
    std::optional<NodeKind> kind_filter;         // only nodes of this kind
    std::optional<Polarity> polarity_filter;     // only links of this polarity and their evidence
    std::optional<EvidenceKind> evidence_filter; // only evidence of this kind
    std::size_t limit = 20;
};

struct Snippet {
    std::string text;
    std::vector<std::pair<std::size_t, std::size_t>> spans;  // byte offsets into text

    friend bool operator==(const Snippet&, const Snippet&) = default;
};

struct SearchHit {
    TargetKind target_kind = TargetKind::node;
    std::string target;
    std::vector<std::string> owner_path;  // model id, [link id,] target id
    Field matched_field = Field::label;
    double score = 0.0;
    Snippet snippet;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// One searchable field of one item.
struct IndexedText {
    Field field;
    std::string text;
    std::vector<Token> tokens;
};

/// A searchable model element with the attributes the filters look at.
struct IndexedItem {
    TargetKind kind = TargetKind::node;
    std::string id;
    std::vector<std::string> owner_path;
    std::optional<NodeKind> node_kind;
    std::optional<Polarity> polarity;
    std::optional<EvidenceKind> evidence_kind;
    std::vector<IndexedText> texts;
};

/// Immutable token index over one model revision.
class SearchIndex {
public:
    SearchIndex() = default;

    const std::string& model_id() const { return model_id_; }
    std::uint64_t revision() const { return revision_; }

    /// Number of distinct (token, owner) pairs.
    std::size_t size() const;

    const std::vector<IndexedItem>& items() const { return items_; }

    /// Items owning at least one token that starts with `prefix`.
    std::vector<std::size_t> items_with_prefix(std::string_view prefix) const;

    friend SearchIndex build_index(const ModelDocument& model);

private:
    std::string model_id_;
    std::uint64_t revision_ = 0;
    std::vector<IndexedItem> items_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> postings_;
};

SearchIndex build_index(const ModelDocument& model);

/// An item is a hit iff every query token is a prefix of some token in the
/// item and every set filter passes. Score sums, per query token, the best
/// field weight it matched; ties rank by target id. An empty query with no
/// filters returns nothing; an empty query with filters returns every item
/// passing them with score 1.
/// Throws Error(stale_index) if `index` was built from another revision and
/// Error(validation_error) if limit is 0.
std::vector<SearchHit> query(const SearchIndex& index, const ModelDocument& model, const SearchQuery& q);

/// The match predicate applied to a single item (shared with brute-force checks).
std::optional<SearchHit> match_item(const IndexedItem& item, const std::vector<Token>& query_tokens,
                                    const SearchQuery& q);

/// JSON array of hits, as served over HTTP and printed by the CLI.
std::string hits_to_json(const std::vector<SearchHit>& hits);

}  // namespace dreams::search
