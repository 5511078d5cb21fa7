#include "dreams/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>

#include "json_codec.hpp"

namespace dreams::metrics {
namespace {

constexpr std::array kActionKinds{ActionKind::add_node,      ActionKind::add_link,    ActionKind::attach_evidence,
                                  ActionKind::update,        ActionKind::remove,      ActionKind::manual_move,
                                  ActionKind::auto_layout,   ActionKind::search,      ActionKind::open_evidence,
                                  ActionKind::phase_begin,   ActionKind::phase_end};
constexpr std::array kPhases{Phase::creation, Phase::revision, Phase::retrieval};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view text, const std::array<Enum, N>& values) {
    for (auto v : values) {
        if (to_string(v) == text) return v;
    }
    return std::nullopt;
}

// rank of each node among `shared` nodes of the same layer
std::map<std::string, int> shared_ranks(const layout::LayeredLayout& layout, const std::vector<std::string>& shared) {
    std::map<int, std::vector<std::pair<int, std::string>>> by_layer;
    for (const auto& id : shared) by_layer[layout.layer_of.at(id)].emplace_back(layout.order_of.at(id), id);
    std::map<std::string, int> rank;
    for (auto& [layer, members] : by_layer) {
        std::ranges::sort(members);
        for (std::size_t i = 0; i < members.size(); ++i) rank[members[i].second] = static_cast<int>(i);
    }
    return rank;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::add_node: return "add_node";
        case ActionKind::add_link: return "add_link";
        case ActionKind::attach_evidence: return "attach_evidence";
        case ActionKind::update: return "update";
        case ActionKind::remove: return "remove";
        case ActionKind::manual_move: return "manual_move";
        case ActionKind::auto_layout: return "auto_layout";
        case ActionKind::search: return "search";
        case ActionKind::open_evidence: return "open_evidence";
        case ActionKind::phase_begin: return "phase_begin";
        case ActionKind::phase_end: return "phase_end";
    }
    return "";
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::creation: return "creation";
        case Phase::revision: return "revision";
        case Phase::retrieval: return "retrieval";
    }
    return "";
}

SessionLog parse_session_log(std::string_view json_text) {
    const auto json = codec::parse(json_text);
    auto bad = [](const std::string& what) { return Error(ErrorCode::parse_error, "session log: " + what); };
    if (!json.is_object() || !json.contains("actions") || !json.at("actions").is_array()) {
        throw bad("expected an object with an 'actions' array");
    }
    auto point = [&](const codec::Json& j) -> layout::Point {
        if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) throw bad("points are [x, y]");
        return {j[0].get<double>(), j[1].get<double>()};
    };

    SessionLog log;
    for (const auto& raw : json.at("actions")) {
        if (!raw.is_object() || !raw.contains("t") || !raw.at("t").is_number() || !raw.contains("action") ||
            !raw.at("action").is_string()) {
            throw bad("every action needs a numeric 't' and an 'action' name");
        }
        SessionAction action;
        action.at_seconds = raw.at("t").get<double>();
        const auto name = raw.at("action").get<std::string>();
        auto kind = lookup(name, kActionKinds);
        if (!kind) throw bad("unknown action '" + name + "'");
        action.kind = *kind;
        if (auto it = raw.find("subject"); it != raw.end()) {
            if (!it->is_string()) throw bad("'subject' must be a string");
            action.subject = it->get<std::string>();
        }
        if (auto it = raw.find("from"); it != raw.end()) action.from = point(*it);
        if (auto it = raw.find("to"); it != raw.end()) action.to = point(*it);
        if (auto it = raw.find("phase"); it != raw.end()) {
            auto phase = it->is_string() ? lookup(it->get<std::string>(), kPhases) : std::nullopt;
            if (!phase) throw bad("unknown phase");
            action.phase = phase;
        }
        if ((action.kind == ActionKind::phase_begin || action.kind == ActionKind::phase_end) && !action.phase) {
            throw bad("phase markers need a 'phase'");
        }
        log.actions.push_back(std::move(action));
    }
    return log;
}

std::string session_log_to_json(const SessionLog& log) {
    codec::Json actions = codec::Json::array();
    for (const auto& a : log.actions) {
        codec::Json j = {{"t", a.at_seconds}, {"action", to_string(a.kind)}};
        if (!a.subject.empty()) j["subject"] = a.subject;
        if (a.from) j["from"] = {a.from->x, a.from->y};
        if (a.to) j["to"] = {a.to->x, a.to->y};
        if (a.phase) j["phase"] = to_string(*a.phase);
        actions.push_back(std::move(j));
    }
    return codec::dump({{"actions", std::move(actions)}});
}

std::size_t count_repositioning(const SessionLog& log) {
    return static_cast<std::size_t>(
        std::ranges::count(log.actions, ActionKind::manual_move, &SessionAction::kind));
}

Effort effort_from_log(const SessionLog& log) {
    for (std::size_t i = 1; i < log.actions.size(); ++i) {
        if (log.actions[i].at_seconds < log.actions[i - 1].at_seconds) {
            throw Error(ErrorCode::validation_error, "session log timestamps decrease at action " + std::to_string(i));
        }
    }

    std::array<std::optional<double>, 3> open{};
    std::array<double, 3> total{};
    std::array<bool, 3> closed{};
    for (const auto& a : log.actions) {
        if (a.kind != ActionKind::phase_begin && a.kind != ActionKind::phase_end) continue;
        const auto p = static_cast<std::size_t>(*a.phase);
        if (a.kind == ActionKind::phase_begin) {
            if (open[p]) {
                throw Error(ErrorCode::incomplete_log, "phase '" + std::string(to_string(*a.phase)) + "' opened twice");
            }
            open[p] = a.at_seconds;
        } else {
            if (!open[p]) {
                throw Error(ErrorCode::incomplete_log,
                            "phase '" + std::string(to_string(*a.phase)) + "' closed without being opened");
            }
            total[p] += a.at_seconds - *open[p];
            open[p].reset();
            closed[p] = true;
        }
    }
    for (auto phase : kPhases) {
        const auto p = static_cast<std::size_t>(phase);
        if (open[p] || !closed[p]) {
            throw Error(ErrorCode::incomplete_log, "missing markers for phase '" + std::string(to_string(phase)) + "'");
        }
    }

    Effort effort;
    effort.repositioning_actions = count_repositioning(log);
    effort.creation_seconds = total[static_cast<std::size_t>(Phase::creation)];
    effort.revision_seconds = total[static_cast<std::size_t>(Phase::revision)];
    effort.retrieval_seconds = total[static_cast<std::size_t>(Phase::retrieval)];
    return effort;
}

MetricsReport model_stats(const ModelDocument& model, const layout::LayeredLayout& layout) {
    layout::check_matches(model, layout);
    MetricsReport report;
    report.node_count = model.nodes.size();
    for (const auto& link : model.links) {
        (link.polarity == Polarity::positive ? report.positive_links : report.negative_links)++;
        for (const auto& item : link.evidence) {
            switch (item.kind) {
                case EvidenceKind::assumption: ++report.assumption_evidence; break;
                case EvidenceKind::reference: ++report.reference_evidence; break;
                case EvidenceKind::experience: ++report.experience_evidence; break;
            }
        }
    }
    report.crossing_count = layout.crossing_count;
    return report;
}

void apply_effort(MetricsReport& report, const Effort& effort) {
    report.repositioning_actions = effort.repositioning_actions;
    report.creation_seconds = effort.creation_seconds;
    report.revision_seconds = effort.revision_seconds;
    report.retrieval_seconds = effort.retrieval_seconds;
}

double reduction_percent(double baseline_mean, double treatment_mean) {
    if (!(baseline_mean > 0.0)) throw Error(ErrorCode::domain_error, "baseline mean must be positive");
    const double percent = 100.0 * (baseline_mean - treatment_mean) / baseline_mean;
    // the epsilon absorbs binary representation error at exact .x5 boundaries
    return std::floor(percent * 10.0 + 0.5 + 1e-9) / 10.0;
}

double layout_stability(const layout::LayeredLayout& previous, const layout::LayeredLayout& next) {
    std::vector<std::string> shared;
    for (const auto& [id, layer] : previous.layer_of) {
        if (next.layer_of.contains(id)) shared.push_back(id);
    }
    if (shared.empty()) throw Error(ErrorCode::domain_error, "layouts share no node");

    const auto before = shared_ranks(previous, shared);
    const auto after = shared_ranks(next, shared);
    std::size_t changed = 0;
    for (const auto& id : shared) {
        if (previous.layer_of.at(id) != next.layer_of.at(id) || before.at(id) != after.at(id)) ++changed;
    }
    return static_cast<double>(changed) / static_cast<double>(shared.size());
}

std::string report_to_json(const MetricsReport& r) {
    return codec::dump({{"node_count", r.node_count},
                        {"link_count", {{"positive", r.positive_links}, {"negative", r.negative_links}}},
                        {"evidence_count",
                         {{"assumption", r.assumption_evidence},
                          {"reference", r.reference_evidence},
                          {"experience", r.experience_evidence}}},
                        {"crossing_count", r.crossing_count},
                        {"repositioning_actions", r.repositioning_actions},
                        {"creation_seconds", r.creation_seconds},
                        {"revision_seconds", r.revision_seconds},
                        {"retrieval_seconds", r.retrieval_seconds}});
}

std::string report_table(const MetricsReport& r) {
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"Nodes", std::to_string(r.node_count)},
        {"Links (+)", std::to_string(r.positive_links)},
        {"Links (-)", std::to_string(r.negative_links)},
        {"Evidence: assumptions", std::to_string(r.assumption_evidence)},
        {"Evidence: references", std::to_string(r.reference_evidence)},
        {"Evidence: experience", std::to_string(r.experience_evidence)},
        {"Edge crossings", std::to_string(r.crossing_count)},
        {"Repositioning actions", std::to_string(r.repositioning_actions)},
        {"Model creation time (min)", fixed(r.creation_seconds / 60.0, 1)},
        {"Revision time (min)", fixed(r.revision_seconds / 60.0, 1)},
        {"Evidence retrieval time (min)", fixed(r.retrieval_seconds / 60.0, 1)},
    };
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-32s %s\n", "Measure", "Value");
    out += line;
    for (const auto& [name, value] : rows) {
        std::snprintf(line, sizeof line, "%-32s %s\n", name.c_str(), value.c_str());
        out += line;
    }
    return out;
}

std::vector<ComparisonRow> compare(std::span<const MetricsReport> baseline, std::span<const MetricsReport> treatment) {
    if (baseline.empty() || treatment.empty()) {
        throw Error(ErrorCode::domain_error, "both conditions need at least one report");
    }
    auto mean = [](std::span<const MetricsReport> reports, auto field) {
        double sum = 0.0;
        for (const auto& r : reports) sum += field(r);
        return sum / static_cast<double>(reports.size());
    };
    using Getter = double (*)(const MetricsReport&);
    const std::vector<std::pair<std::string, Getter>> measures = {
        {"Model creation time (min)", [](const MetricsReport& r) { return r.creation_seconds / 60.0; }},
        {"Revision time (min)", [](const MetricsReport& r) { return r.revision_seconds / 60.0; }},
        {"Edge crossings", [](const MetricsReport& r) { return static_cast<double>(r.crossing_count); }},
        {"Repositioning actions", [](const MetricsReport& r) { return static_cast<double>(r.repositioning_actions); }},
        {"Evidence retrieval time (min)", [](const MetricsReport& r) { return r.retrieval_seconds / 60.0; }},
    };
    std::vector<ComparisonRow> rows;
    for (const auto& [name, get] : measures) {
        ComparisonRow row;
        row.measure = name;
        row.baseline_mean = mean(baseline, get);
        row.treatment_mean = mean(treatment, get);
        row.reduction = reduction_percent(row.baseline_mean, row.treatment_mean);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string comparison_table(std::span<const ComparisonRow> rows, std::string_view baseline_name,
                             std::string_view treatment_name) {
    std::string out;
    char line[200];
    const std::string b = std::string(baseline_name) + " (mean)";
    const std::string t = std::string(treatment_name) + " (mean)";
    std::snprintf(line, sizeof line, "%-32s %14s %14s %10s\n", "Measure", b.c_str(), t.c_str(), "Reduction");
    out += line;
    for (const auto& row : rows) {
        const std::string reduction = fixed(row.reduction, 1) + "%";
        std::snprintf(line, sizeof line, "%-32s %14s %14s %10s\n", row.measure.c_str(),
                      fixed(row.baseline_mean, 2).c_str(), fixed(row.treatment_mean, 2).c_str(), reduction.c_str());
        out += line;
    }
    return out;
}

}  // namespace dreams::metrics
