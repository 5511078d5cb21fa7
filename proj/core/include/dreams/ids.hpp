#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <string>

namespace dreams {

using Timestamp = std::chrono::sys_seconds;

// Produces 26-character ULIDs (Crockford base32: 48-bit millisecond time,
// 80-bit random tail). Ids from one generator are strictly increasing;
// within a millisecond the random tail is incremented.
class IdGenerator {
public:
    using Clock = std::function<std::chrono::system_clock::time_point()>;

    IdGenerator();
    IdGenerator(Clock clock, std::uint64_t seed);

    std::string next();
    Timestamp now() const;

private:
    Clock clock_;
    std::mutex mutex_;
    std::mt19937_64 rng_;
    bool started_ = false;
    std::uint64_t last_ms_ = 0;
    std::uint16_t tail_hi_ = 0;  // top 16 of the 80 random bits
    std::uint64_t tail_lo_ = 0;
};

IdGenerator& default_id_generator();

/// A clock that starts at `start` and advances by `step` on every call.
/// Makes id sequences reproducible in fixtures and tests.
IdGenerator::Clock stepping_clock(std::chrono::system_clock::time_point start,
                                  std::chrono::milliseconds step);

}  // namespace dreams
