#include <charconv>
#include <cstdlib>
#include <thread>

#include "httplib.h"

#include "dreams/api.hpp"
#include "dreams/layout.hpp"
#include "dreams/metrics.hpp"
#include "dreams/search.hpp"
#include "dreams/service.hpp"
#include "dreams/store.hpp"
#include "json_codec.hpp"

namespace dreams::service {
namespace {

using codec::Json;

constexpr const char* kJson = "application/json";

[[noreturn]] void bad_request(const std::string& detail) {
    throw Error(ErrorCode::bad_request, detail);
}

Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) bad_request("request body is empty");
    Json body = codec::parse(req.body);
    if (!body.is_object()) bad_request("request body must be a JSON object");
    return body;
}

void only_fields(const Json& body, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : body.items()) {
        (void)value;
        if (std::ranges::find(allowed, key) == allowed.end()) bad_request("unknown field '" + key + "'");
    }
}

std::string required_string(const Json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) bad_request(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const Json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) bad_request(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> string_list(const Json& value, const char* key) {
    if (!value.is_array()) bad_request(std::string("field '") + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) bad_request(std::string("field '") + key + "' must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

template <typename T, typename Parser>
T enum_field(const std::string& text, const char* what, Parser parse) {
    auto value = parse(text);
    if (!value) throw Error(ErrorCode::validation_error, std::string("unknown ") + what + " '" + text + "'");
    return *value;
}

std::optional<ModelKind> model_kind_alias(std::string_view text) {
    if (text == "rm") return ModelKind::reference_model;
    if (text == "im") return ModelKind::impact_model;
    return parse_model_kind(text);
}

std::optional<Polarity> polarity_alias(std::string_view text) {
    if (text == "+") return Polarity::positive;
    if (text == "-" || text == "−") return Polarity::negative;
    return parse_polarity(text);
}

std::uint64_t if_match(const httplib::Request& req) {
    if (!req.has_header("If-Match")) bad_request("mutations require an If-Match: <revision> header");
    std::string value = req.get_header_value("If-Match");
    if (value.starts_with("W/")) value.erase(0, 2);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::uint64_t revision = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), revision);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_request("If-Match must carry a revision number");
    return revision;
}

std::string etag(std::uint64_t revision) {
    return "\"" + std::to_string(revision) + "\"";
}

double number_param(const httplib::Request& req, const char* key, double fallback) {
    if (!req.has_param(key)) return fallback;
    const auto text = req.get_param_value(key);
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) bad_request(std::string("query parameter '") + key + "' must be a number");
    return value;
}

}  // namespace

std::pair<std::string, int> parse_bind(std::string_view bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw Error(ErrorCode::validation_error, "bind address must look like host:port");
    }
    int port = 0;
    auto digits = bind.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
        throw Error(ErrorCode::validation_error, "bind port must be 0-65535");
    }
    return {std::string(bind.substr(0, colon)), port};
}

ServiceConfig ServiceConfig::from_env() {
    ServiceConfig config;
    if (const char* dir = std::getenv("DREAMS_DATA_DIR"); dir && *dir) config.data_dir = dir;
    if (const char* bind = std::getenv("DREAMS_BIND"); bind && *bind) {
        std::tie(config.host, config.port) = parse_bind(bind);
    }
    if (const char* origin = std::getenv("DREAMS_CORS_ORIGIN"); origin && *origin) config.cors_origin = origin;
    return config;
}

struct HttpService::Impl {
    ServiceConfig config;
    ModelRepository repository;
    httplib::Server server;
    std::thread thread;
    int bound_port = -1;

    struct CachedLayout {
        std::uint64_t revision = 0;
        layout::LayoutConfig config;
        bool incremental = false;
        std::shared_ptr<const layout::LayeredLayout> layout;
    };
    std::mutex cache_mutex;
    std::map<std::string, CachedLayout> layouts;
    std::map<std::string, std::shared_ptr<const search::SearchIndex>> indexes;

    Impl(ServiceConfig cfg, ModelRepository::Writer writer)
        : config(std::move(cfg)), repository(config.data_dir, std::move(writer)) {
        routes();
    }

    ModelRepository::Snapshot require(const std::string& id) {
        auto doc = repository.get(id);
        if (!doc) throw Error(ErrorCode::not_found, "unknown model", id);
        return doc;
    }

    void forget(const std::string& id) {
        std::lock_guard lock(cache_mutex);
        indexes.erase(id);
        // layouts are kept: the last one seeds the next incremental layout
    }

    std::shared_ptr<const layout::LayeredLayout> layout_for(const ModelDocument& doc, const layout::LayoutConfig& cfg,
                                                            bool incremental) {
        std::shared_ptr<const layout::LayeredLayout> previous;
        {
            std::lock_guard lock(cache_mutex);
            auto it = layouts.find(doc.id);
            if (it != layouts.end()) {
                if (it->second.revision == doc.revision && it->second.config == cfg &&
                    it->second.incremental == incremental) {
                    return it->second.layout;
                }
                if (incremental) previous = it->second.layout;
            }
        }
        auto computed = std::make_shared<const layout::LayeredLayout>(layout::layout(doc, cfg, previous.get()));
        std::lock_guard lock(cache_mutex);
        auto& slot = layouts[doc.id];
        if (!slot.layout || slot.revision <= doc.revision) slot = {doc.revision, cfg, incremental, computed};
        return computed;
    }

    std::shared_ptr<const search::SearchIndex> index_for(const ModelDocument& doc) {
        {
            std::lock_guard lock(cache_mutex);
            auto it = indexes.find(doc.id);
            if (it != indexes.end() && it->second->revision() == doc.revision) return it->second;
        }
        auto built = std::make_shared<const search::SearchIndex>(search::build_index(doc));
        std::lock_guard lock(cache_mutex);
        indexes[doc.id] = built;
        return built;
    }

    void send_json(httplib::Response& res, int status, const std::string& body) {
        res.status = status;
        res.set_content(body, kJson);
    }

    void send_document(httplib::Response& res, int status, const ModelDocument& doc) {
        res.set_header("ETag", etag(doc.revision));
        send_json(res, status, codec::dump(codec::document_to_json(doc)));
    }

    void send_mutation(httplib::Response& res, int status, const ModelDocument& doc, const std::string& id,
                       const std::vector<std::string>* removed = nullptr) {
        forget(doc.id);
        res.set_header("ETag", etag(doc.revision));
        send_json(res, status, api::mutation_response(doc, id, removed));
    }

    template <typename Handler>
    httplib::Server::Handler guarded(Handler handler) {
        return [this, handler](const httplib::Request& req, httplib::Response& res) {
            try {
                handler(req, res);
            } catch (const Error& e) {
                send_json(res, api::http_status(e.code()), api::error_body(e));
            } catch (const nlohmann::json::exception& e) {
                send_json(res, 400, api::error_body(Error(ErrorCode::bad_request, e.what())));
            }
        };
    }

    layout::LayoutConfig layout_config(const httplib::Request& req) {
        layout::LayoutConfig cfg;
        cfg.layer_gap = number_param(req, "layer_gap", cfg.layer_gap);
        cfg.node_gap = number_param(req, "node_gap", cfg.node_gap);
        cfg.max_sweeps = static_cast<int>(number_param(req, "max_sweeps", cfg.max_sweeps));
        if (req.has_param("direction")) {
            const auto d = req.get_param_value("direction");
            if (d == "top_down") cfg.direction = layout::Direction::top_down;
            else if (d == "left_right") cfg.direction = layout::Direction::left_right;
            else bad_request("direction must be top_down or left_right");
        }
        layout::check_config(cfg);
        return cfg;
    }

    void routes() {
        server.set_default_headers({{"Access-Control-Allow-Origin", config.cors_origin},
                                    {"Access-Control-Expose-Headers", "ETag"}});
        server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, DELETE, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type, If-Match");
            res.status = 204;
        });
        server.set_exception_handler([this](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string detail = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                detail = e.what();
            } catch (...) {
            }
            send_json(res, 500, codec::dump({{"status", 500}, {"code", "internal_error"}, {"detail", detail}}));
        });

        server.Post("/models", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            only_fields(body, {"kind", "title"});
            const auto kind = enum_field<ModelKind>(required_string(body, "kind"), "model kind", model_kind_alias);
            auto doc = repository.create(kind, required_string(body, "title"));
            send_document(res, 201, *doc);
        }));

        server.Get("/models", guarded([this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, codec::dump({{"models", repository.list()}}));
        }));

        server.Get("/models/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_document(res, 200, *require(req.path_params.at("id")));
        }));

        server.Delete("/models/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto& id = req.path_params.at("id");
            repository.remove(id, if_match(req));
            forget(id);
            std::lock_guard lock(cache_mutex);
            layouts.erase(id);
            res.status = 204;
        }));

        server.Post("/models/:id/nodes", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            only_fields(body, {"kind", "label", "notes", "tags"});
            const auto kind = enum_field<NodeKind>(required_string(body, "kind"), "node kind", parse_node_kind);
            const auto label = required_string(body, "label");
            auto notes = optional_string(body, "notes");
            std::vector<std::string> tags;
            if (body.contains("tags")) tags = string_list(body.at("tags"), "tags");
            std::string created;
            auto doc = repository.mutate(req.path_params.at("id"), if_match(req), [&](ModelDocument& m) {
                created = add_node(m, kind, label, notes, tags, repository.ids());
            });
            send_mutation(res, 201, *doc, created);
        }));

        server.Patch("/models/:id/nodes/:nid", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            only_fields(body, {"kind", "label", "notes", "tags"});
            NodeUpdate update;
            if (body.contains("kind")) {
                update.kind = enum_field<NodeKind>(required_string(body, "kind"), "node kind", parse_node_kind);
            }
            if (body.contains("label")) update.label = required_string(body, "label");
            if (body.contains("notes")) update.notes = optional_string(body, "notes");
            if (body.contains("tags")) update.tags = string_list(body.at("tags"), "tags");
            const auto& nid = req.path_params.at("nid");
            auto doc = repository.mutate(req.path_params.at("id"), if_match(req),
                                         [&](ModelDocument& m) { update_node(m, nid, update); });
            send_mutation(res, 200, *doc, nid);
        }));

        server.Delete("/models/:id/nodes/:nid", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto& nid = req.path_params.at("nid");
            std::vector<std::string> removed;
            auto doc = repository.mutate(req.path_params.at("id"), if_match(req),
                                         [&](ModelDocument& m) { removed = remove_node(m, nid); });
            send_mutation(res, 200, *doc, nid, &removed);
        }));

        server.Post("/models/:id/links", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            only_fields(body, {"source", "target", "polarity", "notes"});
            const auto source = required_string(body, "source");
            const auto target = required_string(body, "target");
            const auto polarity = enum_field<Polarity>(required_string(body, "polarity"), "polarity", polarity_alias);
            auto notes = optional_string(body, "notes");
            std::string created;
            auto doc = repository.mutate(req.path_params.at("id"), if_match(req), [&](ModelDocument& m) {
                created = add_link(m, source, target, polarity, repository.ids());
                if (notes) {
                    update_link(m, created, LinkUpdate{.polarity = std::nullopt, .notes = notes});
                    --m.revision;  // one request, one revision
                }
            });
            send_mutation(res, 201, *doc, created);
        }));

        server.Patch("/models/:id/links/:lid", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            only_fields(body, {"polarity", "notes"});
            LinkUpdate update;
            if (body.contains("polarity")) {
                update.polarity = enum_field<Polarity>(required_string(body, "polarity"), "polarity", polarity_alias);
            }
            if (body.contains("notes")) update.notes = optional_string(body, "notes");
            const auto& lid = req.path_params.at("lid");
            auto doc = repository.mutate(req.path_params.at("id"), if_match(req),
                                         [&](ModelDocument& m) { update_link(m, lid, update); });
            send_mutation(res, 200, *doc, lid);
        }));

        server.Delete("/models/:id/links/:lid", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto& lid = req.path_params.at("lid");
            auto doc = repository.mutate(req.path_params.at("id"), if_match(req),
                                         [&](ModelDocument& m) { remove_link(m, lid); });
            send_mutation(res, 200, *doc, lid);
        }));

        server.Post("/models/:id/links/:lid/evidence", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            only_fields(body, {"kind", "text", "locator"});
            const auto kind = enum_field<EvidenceKind>(required_string(body, "kind"), "evidence kind", parse_evidence_kind);
            const auto text = required_string(body, "text");
            auto locator = optional_string(body, "locator");
            const auto& lid = req.path_params.at("lid");
            std::string created;
            auto doc = repository.mutate(req.path_params.at("id"), if_match(req), [&](ModelDocument& m) {
                created = attach_evidence(m, lid, kind, text, locator, repository.ids());
            });
            send_mutation(res, 201, *doc, created);
        }));

        server.Delete("/models/:id/links/:lid/evidence/:eid",
                      guarded([this](const httplib::Request& req, httplib::Response& res) {
                          const auto& lid = req.path_params.at("lid");
                          const auto& eid = req.path_params.at("eid");
                          auto doc = repository.mutate(req.path_params.at("id"), if_match(req),
                                                       [&](ModelDocument& m) { detach_evidence(m, lid, eid); });
                          send_mutation(res, 200, *doc, eid);
                      }));

        server.Get("/models/:id/layout", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto doc = require(req.path_params.at("id"));
            bool incremental = false;
            if (req.has_param("incremental")) {
                const auto v = req.get_param_value("incremental");
                if (v == "true") incremental = true;
                else if (v != "false") bad_request("incremental must be true or false");
            }
            auto computed = layout_for(*doc, layout_config(req), incremental);
            res.set_header("ETag", etag(doc->revision));
            send_json(res, 200, store::serialize_layout(*computed));
        }));

        server.Get("/models/:id/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto doc = require(req.path_params.at("id"));
            search::SearchQuery q;
            q.text = req.get_param_value("q");
            if (req.has_param("kind")) {
                q.kind_filter = enum_field<NodeKind>(req.get_param_value("kind"), "node kind", parse_node_kind);
            }
            if (req.has_param("polarity")) {
                q.polarity_filter = enum_field<Polarity>(req.get_param_value("polarity"), "polarity", polarity_alias);
            }
            if (req.has_param("evidence")) {
                q.evidence_filter =
                    enum_field<EvidenceKind>(req.get_param_value("evidence"), "evidence kind", parse_evidence_kind);
            }
            if (req.has_param("limit")) {
                const double limit = number_param(req, "limit", 20);
                if (limit < 1 || limit != static_cast<double>(static_cast<std::size_t>(limit))) {
                    throw Error(ErrorCode::validation_error, "limit must be a positive integer");
                }
                q.limit = static_cast<std::size_t>(limit);
            }
            auto index = index_for(*doc);
            send_json(res, 200, search::hits_to_json(search::query(*index, *doc, q)));
        }));

        server.Get("/models/:id/stats", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto doc = require(req.path_params.at("id"));
            auto computed = layout_for(*doc, layout::LayoutConfig{}, false);
            send_json(res, 200, metrics::report_to_json(metrics::model_stats(*doc, *computed)));
        }));

        server.Post("/models/:id/stats", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto doc = require(req.path_params.at("id"));
            const auto log = metrics::parse_session_log(req.body);
            auto computed = layout_for(*doc, layout::LayoutConfig{}, false);
            auto report = metrics::model_stats(*doc, *computed);
            metrics::apply_effort(report, metrics::effort_from_log(log));
            send_json(res, 200, metrics::report_to_json(report));
        }));
    }
};

HttpService::HttpService(ServiceConfig config, ModelRepository::Writer writer)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(writer))) {}

HttpService::~HttpService() {
    stop();
}

int HttpService::bind() {
    if (impl_->bound_port >= 0) return impl_->bound_port;
    const auto& cfg = impl_->config;
    if (cfg.port == 0) {
        impl_->bound_port = impl_->server.bind_to_any_port(cfg.host);
    } else if (impl_->server.bind_to_port(cfg.host, cfg.port)) {
        impl_->bound_port = cfg.port;
    }
    if (impl_->bound_port < 0) {
        throw Error(ErrorCode::io_error, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
    }
    return impl_->bound_port;
}

void HttpService::serve() {
    bind();
    impl_->server.listen_after_bind();
}

void HttpService::start() {
    bind();
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpService::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpService::port() const {
    return impl_->bound_port;
}

ModelRepository& HttpService::repository() {
    return impl_->repository;
}

}  // namespace dreams::service
