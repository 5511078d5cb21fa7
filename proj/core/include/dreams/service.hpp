#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "dreams/ids.hpp"
#include "dreams/model.hpp"

namespace dreams::service {

/// One canonical file per model in a directory. Each model has its own
/// write lock; readers take immutable snapshots and never block writers.
class ModelRepository {
public:
    using Writer = std::function<void(const std::filesystem::path&, std::string_view)>;
    using Mutation = std::function<void(ModelDocument&)>;
    using Snapshot = std::shared_ptr<const ModelDocument>;

    /// Loads every *.dreams.json in `directory` (created if missing).
    /// Files that fail to load are skipped and listed in load_errors().
    explicit ModelRepository(std::filesystem::path directory, Writer writer = {},
                             IdGenerator* ids = nullptr);

    ModelRepository(const ModelRepository&) = delete;
    ModelRepository& operator=(const ModelRepository&) = delete;

    const std::filesystem::path& directory() const { return directory_; }
    std::filesystem::path path_for(std::string_view model_id) const;

    /// nullptr when no such model.
    Snapshot get(std::string_view model_id) const;
    std::vector<std::string> list() const;

    Snapshot create(ModelKind kind, std::string_view title);

    /// Applies `mutation` to a copy of the current document if its revision
    /// equals `expected_revision`, persists the result, then publishes it.
    /// Nothing changes when the mutation throws or the write fails.
    /// Errors: not_found, stale_revision, io_error, and whatever `mutation` throws.
    Snapshot mutate(std::string_view model_id, std::uint64_t expected_revision, const Mutation& mutation);

    void remove(std::string_view model_id, std::uint64_t expected_revision);

    IdGenerator& ids() { return *ids_; }
    const std::vector<std::string>& load_errors() const { return load_errors_; }

private:
    struct Entry {
        std::mutex write;
        mutable std::mutex publish;
        Snapshot current;
        bool deleted = false;

        Snapshot snapshot() const {
            std::lock_guard lock(publish);
            return current;
        }
    };

    std::shared_ptr<Entry> entry(std::string_view model_id) const;

    std::filesystem::path directory_;
    Writer writer_;
    IdGenerator* ids_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Entry>, std::less<>> entries_;
    std::vector<std::string> load_errors_;
};

struct ServiceConfig {
    std::filesystem::path data_dir = "dreams-data";
    std::string host = "127.0.0.1";
    int port = 7421;  // 0 picks a free port
    std::string cors_origin = "*";

    /// DREAMS_DATA_DIR, DREAMS_BIND ("host:port"), DREAMS_CORS_ORIGIN.
    static ServiceConfig from_env();
};

/// Parses "host:port"; throws Error(validation_error).
std::pair<std::string, int> parse_bind(std::string_view bind);

/// HTTP/1.1 JSON API over a ModelRepository.
class HttpService {
public:
    explicit HttpService(ServiceConfig config, ModelRepository::Writer writer = {});
    ~HttpService();

    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds the listening socket; returns the bound port. Throws
    /// Error(io_error) if the address is unavailable.
    int bind();

    /// Blocks serving requests until stop(). Calls bind() if needed.
    void serve();

    /// bind() + serve() on a background thread; returns once listening.
    void start();
    void stop();

    int port() const;
    ModelRepository& repository();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace dreams::service
