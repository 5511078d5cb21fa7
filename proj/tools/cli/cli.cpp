#include "cli.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "dreams/api.hpp"
#include "dreams/atomic_file.hpp"
#include "dreams/error.hpp"
#include "dreams/layout.hpp"
#include "dreams/metrics.hpp"
#include "dreams/search.hpp"
#include "dreams/service.hpp"
#include "dreams/store.hpp"

namespace dreams::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string file;
    bool json = false;

    std::string kind;
    std::string title;
    std::string label;
    std::string notes;
    std::vector<std::string> tags;
    std::string from;
    std::string to;
    std::string polarity;
    std::string link;
    std::string text;
    std::string locator;

    std::string out;
    std::string previous;
    std::string layout_file;
    std::string session;
    std::string direction = "top_down";
    double layer_gap = layout::LayoutConfig{}.layer_gap;
    double node_gap = layout::LayoutConfig{}.node_gap;
    int max_sweeps = layout::LayoutConfig{}.max_sweeps;
    double scale = store::SvgOptions{}.scale;

    std::string query;
    std::string evidence;
    std::size_t limit = search::SearchQuery{}.limit;

    std::string data_dir;
    std::string bind;
    std::string cors_origin;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::io_error: return exit_io;
        case ErrorCode::bad_request: return exit_usage;
        default: return exit_validation;
    }
}

bool use_color(std::ostream& err) {
    if (const char* no = std::getenv("NO_COLOR"); no && *no) return false;
    return &err == &std::cerr && ::isatty(STDERR_FILENO);
}

void report_error(std::ostream& err, std::string_view message) {
    if (use_color(err)) {
        err << "\x1b[31merror:\x1b[0m " << message << '\n';
    } else {
        err << "error: " << message << '\n';
    }
}

template <typename T>
T parse_enum(std::optional<T> value, std::string_view what, const std::string& text) {
    if (!value) throw UsageError("unknown " + std::string(what) + " '" + text + "'");
    return *value;
}

ModelKind model_kind_arg(const std::string& text) {
    if (text == "rm") return ModelKind::reference_model;
    if (text == "im") return ModelKind::impact_model;
    return parse_enum(parse_model_kind(text), "model kind", text);
}

Polarity polarity_arg(const std::string& text) {
    if (text == "+") return Polarity::positive;
    if (text == "-" || text == "−") return Polarity::negative;
    return parse_enum(parse_polarity(text), "polarity", text);
}

std::optional<std::string> non_empty(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return text;
}

ModelDocument load(const std::string& file) {
    return store::deserialize(io::read_file(file));
}

void save(const std::string& file, const ModelDocument& doc) {
    io::write_file_atomic(file, store::serialize(doc));
}

layout::LayoutConfig layout_config(const Options& o) {
    layout::LayoutConfig config;
    if (o.direction == "top_down") config.direction = layout::Direction::top_down;
    else if (o.direction == "left_right") config.direction = layout::Direction::left_right;
    else throw UsageError("--direction must be top_down or left_right");
    config.layer_gap = o.layer_gap;
    config.node_gap = o.node_gap;
    config.max_sweeps = o.max_sweeps;
    layout::check_config(config);
    return config;
}

layout::LayeredLayout layout_for(const ModelDocument& doc, const Options& o) {
    if (!o.layout_file.empty()) {
        auto stored = store::deserialize_layout(io::read_file(o.layout_file));
        layout::check_matches(doc, stored);
        return stored;
    }
    return layout::layout(doc, layout_config(o));
}

std::string one_line(std::string text) {
    for (char& c : text) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", score);
    return buf;
}

void mutated(std::ostream& out, const Options& o, const ModelDocument& doc, const std::string& id,
             const std::vector<std::string>* removed = nullptr) {
    save(o.file, doc);
    if (o.json) {
        out << api::mutation_response(doc, id, removed);
    } else {
        out << id << '\n';
    }
}

int cmd_new(const Options& o, std::ostream& out) {
    if (std::filesystem::exists(o.file)) throw Error(ErrorCode::io_error, "'" + o.file + "' already exists");
    auto doc = create_model(model_kind_arg(o.kind), o.title);
    save(o.file, doc);
    if (o.json) {
        out << store::serialize(doc);
    } else {
        out << doc.id << '\n';
    }
    return exit_ok;
}

int cmd_add_node(const Options& o, std::ostream& out) {
    auto doc = load(o.file);
    const auto kind = parse_enum(parse_node_kind(o.kind), "node kind", o.kind);
    const auto id = add_node(doc, kind, o.label, non_empty(o.notes), o.tags);
    mutated(out, o, doc, id);
    return exit_ok;
}

int cmd_add_link(const Options& o, std::ostream& out) {
    auto doc = load(o.file);
    const auto id = add_link(doc, o.from, o.to, polarity_arg(o.polarity));
    if (!o.notes.empty()) {
        update_link(doc, id, LinkUpdate{.polarity = std::nullopt, .notes = o.notes});
        --doc.revision;
    }
    mutated(out, o, doc, id);
    return exit_ok;
}

int cmd_attach(const Options& o, std::ostream& out) {
    auto doc = load(o.file);
    const auto kind = parse_enum(parse_evidence_kind(o.kind), "evidence kind", o.kind);
    const auto id = attach_evidence(doc, o.link, kind, o.text, non_empty(o.locator));
    mutated(out, o, doc, id);
    return exit_ok;
}

int cmd_validate(const Options& o, std::ostream& out) {
    std::vector<Violation> violations;
    try {
        violations = validate(load(o.file));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::validation_error || e.violations().empty()) throw;
        violations = e.violations();
    }
    if (o.json) {
        out << api::validation_report(violations);
    } else {
        for (const auto& v : violations) out << v.id << '\t' << v.rule << '\t' << v.message << '\n';
        if (violations.empty()) out << "valid\n";
    }
    return violations.empty() ? exit_ok : exit_validation;
}

int cmd_layout(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    std::optional<layout::LayeredLayout> previous;
    if (!o.previous.empty()) previous = store::deserialize_layout(io::read_file(o.previous));
    const auto result = layout::layout(doc, layout_config(o), previous ? &*previous : nullptr);
    const auto text = store::serialize_layout(result);
    if (!o.out.empty()) io::write_file_atomic(o.out, text);
    if (o.json) {
        out << text;
    } else {
        int layers = 0;
        for (const auto& [id, layer] : result.layer_of) layers = std::max(layers, layer + 1);
        out << "nodes\t" << result.layer_of.size() << '\n'
            << "layers\t" << layers << '\n'
            << "reversed_links\t" << result.reversed_links.size() << '\n'
            << "crossings\t" << result.crossing_count << '\n';
    }
    return exit_ok;
}

int cmd_render(const Options& o) {
    const auto doc = load(o.file);
    const auto placed = layout_for(doc, o);
    store::SvgOptions svg;
    svg.scale = o.scale;
    io::write_file_atomic(o.out, store::render_svg(doc, placed, svg));
    return exit_ok;
}

int cmd_export_dot(const Options& o, std::ostream& out) {
    const auto dot = store::export_dot(load(o.file));
    if (o.out.empty()) {
        out << dot;
    } else {
        io::write_file_atomic(o.out, dot);
    }
    return exit_ok;
}

int cmd_search(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    search::SearchQuery q;
    q.text = o.query;
    if (!o.kind.empty()) q.kind_filter = parse_enum(parse_node_kind(o.kind), "node kind", o.kind);
    if (!o.polarity.empty()) q.polarity_filter = polarity_arg(o.polarity);
    if (!o.evidence.empty()) q.evidence_filter = parse_enum(parse_evidence_kind(o.evidence), "evidence kind", o.evidence);
    q.limit = o.limit;
    const auto hits = search::query(search::build_index(doc), doc, q);
    if (o.json) {
        out << search::hits_to_json(hits);
    } else {
        for (const auto& h : hits) {
            out << format_score(h.score) << '\t' << h.target << '\t' << search::to_string(h.matched_field) << '\t'
                << one_line(h.snippet.text) << '\n';
        }
    }
    return exit_ok;
}

int cmd_stats(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    auto report = metrics::model_stats(doc, layout_for(doc, o));
    if (!o.session.empty()) {
        const auto log = metrics::parse_session_log(io::read_file(o.session));
        metrics::apply_effort(report, metrics::effort_from_log(log));
    }
    out << (o.json ? metrics::report_to_json(report) : metrics::report_table(report));
    return exit_ok;
}

int cmd_serve(const Options& o, std::ostream& out) {
    auto config = service::ServiceConfig::from_env();
    if (!o.data_dir.empty()) config.data_dir = o.data_dir;
    if (!o.bind.empty()) std::tie(config.host, config.port) = service::parse_bind(o.bind);
    if (!o.cors_origin.empty()) config.cors_origin = o.cors_origin;
    service::HttpService server(config);
    for (const auto& problem : server.repository().load_errors()) std::cerr << "skipped " << problem << '\n';
    const int port = server.bind();
    out << "listening on " << config.host << ':' << port << std::endl;
    server.serve();
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"DREAMS DRM modelling environment", "dreams"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "dreams 0.1.0");
    Options o;

    auto file_opt = [&](CLI::App* cmd) { cmd->add_option("--file", o.file, "model file (.dreams.json)")->required(); };
    auto json_flag = [&](CLI::App* cmd) { cmd->add_flag("--json", o.json, "machine-readable output"); };
    auto layout_opts = [&](CLI::App* cmd) {
        cmd->add_option("--direction", o.direction, "top_down or left_right")->capture_default_str();
        cmd->add_option("--layer-gap", o.layer_gap)->capture_default_str();
        cmd->add_option("--node-gap", o.node_gap)->capture_default_str();
        cmd->add_option("--max-sweeps", o.max_sweeps)->capture_default_str();
    };

    auto* c_new = app.add_subcommand("new", "create an empty model file");
    file_opt(c_new);
    json_flag(c_new);
    c_new->add_option("--kind", o.kind, "rm | im | reference_model | impact_model")->required();
    c_new->add_option("--title", o.title)->required();

    auto* c_node = app.add_subcommand("add-node", "add a factor node");
    file_opt(c_node);
    json_flag(c_node);
    c_node->add_option("--kind", o.kind, "influencing_factor | success_factor | key_factor | assumption_node")
        ->required();
    c_node->add_option("--label", o.label)->required();
    c_node->add_option("--notes", o.notes);
    c_node->add_option("--tag", o.tags, "repeatable")->take_all();

    auto* c_link = app.add_subcommand("add-link", "add a causal link");
    file_opt(c_link);
    json_flag(c_link);
    c_link->add_option("--from", o.from, "source node id")->required();
    c_link->add_option("--to", o.to, "target node id")->required();
    c_link->add_option("--polarity", o.polarity, "+ | - | − | positive | negative")->required();
    c_link->add_option("--notes", o.notes);

    auto* c_attach = app.add_subcommand("attach", "attach evidence to a link");
    file_opt(c_attach);
    json_flag(c_attach);
    c_attach->add_option("--link", o.link)->required();
    c_attach->add_option("--kind", o.kind, "assumption | reference | experience")->required();
    c_attach->add_option("--text", o.text)->required();
    c_attach->add_option("--locator", o.locator);

    auto* c_validate = app.add_subcommand("validate", "check model invariants");
    file_opt(c_validate);
    json_flag(c_validate);

    auto* c_layout = app.add_subcommand("layout", "compute a layered layout");
    file_opt(c_layout);
    json_flag(c_layout);
    layout_opts(c_layout);
    c_layout->add_option("--previous", o.previous, "previous layout for an incremental run");
    c_layout->add_option("--out", o.out, "write the layout JSON here");

    auto* c_render = app.add_subcommand("render", "render the model as SVG");
    file_opt(c_render);
    layout_opts(c_render);
    c_render->add_option("--layout", o.layout_file, "use a stored layout");
    c_render->add_option("--scale", o.scale)->capture_default_str();
    c_render->add_option("--out", o.out, "SVG output path")->required();

    auto* c_dot = app.add_subcommand("export-dot", "export Graphviz DOT");
    file_opt(c_dot);
    c_dot->add_option("--out", o.out, "output path (default stdout)");

    auto* c_search = app.add_subcommand("search", "full-text search over a model");
    file_opt(c_search);
    json_flag(c_search);
    c_search->add_option("--query,-q", o.query);
    c_search->add_option("--kind", o.kind, "node kind filter");
    c_search->add_option("--polarity", o.polarity, "link polarity filter");
    c_search->add_option("--evidence", o.evidence, "evidence kind filter");
    c_search->add_option("--limit", o.limit)->capture_default_str()->check(CLI::PositiveNumber);

    auto* c_stats = app.add_subcommand("stats", "print the metrics report");
    file_opt(c_stats);
    json_flag(c_stats);
    layout_opts(c_stats);
    c_stats->add_option("--layout", o.layout_file, "use a stored layout");
    c_stats->add_option("--session", o.session, "session log with effort measures");

    auto* c_serve = app.add_subcommand("serve", "run the HTTP service");
    c_serve->add_option("--data-dir", o.data_dir, "model directory (DREAMS_DATA_DIR)");
    c_serve->add_option("--bind", o.bind, "host:port (DREAMS_BIND)");
    c_serve->add_option("--cors-origin", o.cors_origin, "allowed origin (DREAMS_CORS_ORIGIN)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        auto* cmd = app.get_subcommands().front();
        const auto& name = cmd->get_name();
        if (name == "new") return cmd_new(o, out);
        if (name == "add-node") return cmd_add_node(o, out);
        if (name == "add-link") return cmd_add_link(o, out);
        if (name == "attach") return cmd_attach(o, out);
        if (name == "validate") return cmd_validate(o, out);
        if (name == "layout") return cmd_layout(o, out);
        if (name == "render") return cmd_render(o);
        if (name == "export-dot") return cmd_export_dot(o, out);
        if (name == "search") return cmd_search(o, out);
        if (name == "stats") return cmd_stats(o, out);
        return cmd_serve(o, out);
    } catch (const UsageError& e) {
        report_error(err, e.what());
        return exit_usage;
    } catch (const Error& e) {
        std::string message = std::string(to_string(e.code())) + ": " + e.what();
        if (!e.offending_id().empty()) message += " (" + e.offending_id() + ")";
        report_error(err, message);
        for (const auto& v : e.violations()) err << "  " << v.id << '\t' << v.rule << '\t' << v.message << '\n';
        return exit_code_for(e.code());
    }
}

}  // namespace dreams::cli
