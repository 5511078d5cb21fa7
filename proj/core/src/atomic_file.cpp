#include "dreams/atomic_file.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dreams/error.hpp"

namespace dreams::io {
namespace {

constexpr std::string_view kTempMarker = ".tmp-";

[[noreturn]] void fail(const std::string& what, const std::filesystem::path& path, int err) {
    throw Error(ErrorCode::io_error, what + " '" + path.string() + "': " + std::strerror(err));
}

class Fd {
public:
    explicit Fd(int fd) : fd_(fd) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    ~Fd() {
        if (fd_ >= 0) ::close(fd_);
    }
    int get() const { return fd_; }
    int release() { return std::exchange(fd_, -1); }

private:
    int fd_;
};

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    static std::atomic<unsigned long> counter{0};
    auto temp = path;
    temp += std::string(kTempMarker) + std::to_string(::getpid()) + "-" + std::to_string(counter++);

    {
        Fd fd(::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
        if (fd.get() < 0) fail("cannot create", temp, errno);
        std::size_t written = 0;
        while (written < contents.size()) {
            auto n = ::write(fd.get(), contents.data() + written, contents.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                const int err = errno;
                ::unlink(temp.c_str());
                fail("cannot write", temp, err);
            }
            written += static_cast<std::size_t>(n);
        }
        if (::fsync(fd.get()) != 0 || ::close(fd.release()) != 0) {
            const int err = errno;
            ::unlink(temp.c_str());
            fail("cannot flush", temp, err);
        }
    }
    if (::rename(temp.c_str(), path.c_str()) != 0) {
        const int err = errno;
        ::unlink(temp.c_str());
        fail("cannot replace", path, err);
    }
    auto dir = path.parent_path();
    if (dir.empty()) dir = ".";
    Fd dir_fd(::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC));
    if (dir_fd.get() >= 0) ::fsync(dir_fd.get());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::io_error, "cannot read '" + path.string() + "'");
    return buffer.str();
}

bool is_temporary(const std::filesystem::path& path) {
    return path.filename().string().find(kTempMarker) != std::string::npos;
}

}  // namespace dreams::io
