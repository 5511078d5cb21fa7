#include <algorithm>
#include <system_error>

#include "dreams/atomic_file.hpp"
#include "dreams/service.hpp"
#include "dreams/store.hpp"

namespace dreams::service {
namespace {

bool safe_file_stem(std::string_view id) {
    return !id.empty() && std::ranges::all_of(id, [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-' || c == '_';
    });
}

bool has_model_extension(const std::filesystem::path& path) {
    const auto name = path.filename().string();
    return name.size() > store::kFileExtension.size() && name.ends_with(store::kFileExtension);
}

}  // namespace

ModelRepository::ModelRepository(std::filesystem::path directory, Writer writer, IdGenerator* ids)
    : directory_(std::move(directory)),
      writer_(writer ? std::move(writer) : Writer(io::write_file_atomic)),
      ids_(ids ? ids : &default_id_generator()) {
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create data directory '" + directory_.string() + "': " + ec.message());

    std::vector<std::filesystem::path> files;
    for (const auto& dirent : std::filesystem::directory_iterator(directory_, ec)) {
        if (!dirent.is_regular_file()) continue;
        if (io::is_temporary(dirent.path())) {
            // leftover from an interrupted write; the real file is intact
            std::filesystem::remove(dirent.path(), ec);
            continue;
        }
        if (has_model_extension(dirent.path())) files.push_back(dirent.path());
    }
    if (ec) throw Error(ErrorCode::io_error, "cannot list data directory '" + directory_.string() + "': " + ec.message());
    std::ranges::sort(files);

    for (const auto& file : files) {
        try {
            auto doc = store::deserialize(io::read_file(file));
            if (file.filename().string() != doc.id + std::string(store::kFileExtension)) {
                load_errors_.push_back(file.string() + ": file name does not match model id '" + doc.id + "'");
                continue;
            }
            auto e = std::make_shared<Entry>();
            e->current = std::make_shared<const ModelDocument>(std::move(doc));
            entries_.emplace(e->current->id, std::move(e));
        } catch (const Error& err) {
            load_errors_.push_back(file.string() + ": " + err.what());
        }
    }
}

std::filesystem::path ModelRepository::path_for(std::string_view model_id) const {
    if (!safe_file_stem(model_id)) throw Error(ErrorCode::validation_error, "model id is not a safe file name", std::string(model_id));
    return directory_ / (std::string(model_id) + std::string(store::kFileExtension));
}

std::shared_ptr<ModelRepository::Entry> ModelRepository::entry(std::string_view model_id) const {
    std::shared_lock lock(map_mutex_);
    auto it = entries_.find(model_id);
    return it == entries_.end() ? nullptr : it->second;
}

ModelRepository::Snapshot ModelRepository::get(std::string_view model_id) const {
    auto e = entry(model_id);
    return e ? e->snapshot() : nullptr;
}

std::vector<std::string> ModelRepository::list() const {
    std::shared_lock lock(map_mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, e] : entries_) ids.push_back(id);
    return ids;
}

ModelRepository::Snapshot ModelRepository::create(ModelKind kind, std::string_view title) {
    auto doc = create_model(kind, title, *ids_);
    auto e = std::make_shared<Entry>();
    std::lock_guard write(e->write);
    writer_(path_for(doc.id), store::serialize(doc));
    e->current = std::make_shared<const ModelDocument>(std::move(doc));
    auto snapshot = e->current;
    std::unique_lock lock(map_mutex_);
    entries_.emplace(snapshot->id, std::move(e));
    return snapshot;
}

ModelRepository::Snapshot ModelRepository::mutate(std::string_view model_id, std::uint64_t expected_revision,
                                                  const Mutation& mutation) {
    auto e = entry(model_id);
    if (!e) throw Error(ErrorCode::not_found, "unknown model", std::string(model_id));
    std::lock_guard write(e->write);
    if (e->deleted) throw Error(ErrorCode::not_found, "unknown model", std::string(model_id));
    const auto current = e->snapshot();
    if (current->revision != expected_revision) {
        throw Error(ErrorCode::stale_revision,
                    "revision is " + std::to_string(current->revision) + ", request expected " +
                        std::to_string(expected_revision),
                    std::string(model_id));
    }

    ModelDocument next = *current;
    mutation(next);
    if (next.revision == current->revision) return current;  // mutation chose not to change anything
    const auto text = store::serialize(next);
    writer_(path_for(next.id), text);

    auto published = std::make_shared<const ModelDocument>(std::move(next));
    {
        std::lock_guard lock(e->publish);
        e->current = published;
    }
    return published;
}

void ModelRepository::remove(std::string_view model_id, std::uint64_t expected_revision) {
    auto e = entry(model_id);
    if (!e) throw Error(ErrorCode::not_found, "unknown model", std::string(model_id));
    std::lock_guard write(e->write);
    if (e->deleted) throw Error(ErrorCode::not_found, "unknown model", std::string(model_id));
    if (e->snapshot()->revision != expected_revision) {
        throw Error(ErrorCode::stale_revision, "model changed since it was read", std::string(model_id));
    }
    std::error_code ec;
    std::filesystem::remove(path_for(model_id), ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot delete model file: " + ec.message(), std::string(model_id));
    e->deleted = true;
    std::unique_lock lock(map_mutex_);
    entries_.erase(entries_.find(model_id));
}

}  // namespace dreams::service
