#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dreams/layout.hpp"
#include "dreams/model.hpp"

namespace dreams::metrics {

enum class ActionKind {
    add_node,
    add_link,
    attach_evidence,
    update,
    remove,
    manual_move,
    auto_layout,
    search,
    open_evidence,
    phase_begin,
    phase_end,
};

enum class Phase { creation, revision, retrieval };

std::string_view to_string(ActionKind kind);
std::string_view to_string(Phase phase);

struct SessionAction {
    double at_seconds = 0.0;
    ActionKind kind = ActionKind::update;
    std::string subject;                  // node id, link id or query text
    std::optional<layout::Point> from;    // manual_move only
    std::optional<layout::Point> to;
    std::optional<Phase> phase;           // phase markers only
};

struct SessionLog {
    std::vector<SessionAction> actions;
};

/// JSON: {"actions": [{"t": 1.5, "action": "manual_move", "subject": "...",
/// "from": [x, y], "to": [x, y]}, {"t": 0, "action": "phase_begin",
/// "phase": "creation"}, ...]}. Throws Error(parse_error) on bad shape.
SessionLog parse_session_log(std::string_view json_text);
std::string session_log_to_json(const SessionLog& log);

/// One repositioning action is one committed manual node drag.
std::size_t count_repositioning(const SessionLog& log);

struct Effort {
    std::size_t repositioning_actions = 0;
    double creation_seconds = 0.0;
    double revision_seconds = 0.0;
    double retrieval_seconds = 0.0;
};

/// Phase durations sum the spans between matching phase_begin / phase_end
/// markers. Throws Error(incomplete_log) unless every phase is opened and
/// closed, and Error(validation_error) if timestamps ever decrease.
Effort effort_from_log(const SessionLog& log);

struct MetricsReport {
    std::size_t node_count = 0;
    std::size_t positive_links = 0;
    std::size_t negative_links = 0;
    std::size_t assumption_evidence = 0;
    std::size_t reference_evidence = 0;
    std::size_t experience_evidence = 0;
    std::size_t crossing_count = 0;
    std::size_t repositioning_actions = 0;
    double creation_seconds = 0.0;
    double revision_seconds = 0.0;
    double retrieval_seconds = 0.0;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Structure fields only; throws Error(validation_error) on layout mismatch.
MetricsReport model_stats(const ModelDocument& model, const layout::LayeredLayout& layout);

void apply_effort(MetricsReport& report, const Effort& effort);

/// 100 * (baseline - treatment) / baseline, rounded half-up to one decimal.
/// Throws Error(domain_error) if baseline <= 0.
double reduction_percent(double baseline_mean, double treatment_mean);

/// Fraction of nodes present in both layouts whose layer changed or whose
/// rank among the shared nodes of its layer changed. Throws
/// Error(domain_error) when the layouts share no node.
double layout_stability(const layout::LayeredLayout& previous, const layout::LayeredLayout& next);

std::string report_to_json(const MetricsReport& report);
std::string report_table(const MetricsReport& report);

struct ComparisonRow {
    std::string measure;
    double baseline_mean = 0.0;
    double treatment_mean = 0.0;
    double reduction = 0.0;
};

/// Means over each condition's reports for the five comparison measures:
/// creation time (min), revision time (min), edge crossings, repositioning
/// actions, evidence retrieval time (min).
std::vector<ComparisonRow> compare(std::span<const MetricsReport> baseline,
                                   std::span<const MetricsReport> treatment);

/// Measure | baseline mean | treatment mean | reduction %.
std::string comparison_table(std::span<const ComparisonRow> rows,
                             std::string_view baseline_name = "Manual",
                             std::string_view treatment_name = "DREAMS");

}  // namespace dreams::metrics
