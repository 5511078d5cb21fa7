#include "dreams/ids.hpp"

#include <array>
#include <memory>

namespace dreams {
namespace {

constexpr std::string_view kCrockford = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

std::uint64_t millis(std::chrono::system_clock::time_point tp) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(tp.time_since_epoch()).count();
    return ms < 0 ? 0 : static_cast<std::uint64_t>(ms) & ((std::uint64_t{1} << 48) - 1);
}

}  // namespace

IdGenerator::IdGenerator()
    : IdGenerator([] { return std::chrono::system_clock::now(); }, std::random_device{}()) {}

IdGenerator::IdGenerator(Clock clock, std::uint64_t seed) : clock_(std::move(clock)), rng_(seed) {}

std::string IdGenerator::next() {
    std::lock_guard lock(mutex_);
    std::uint64_t ms = millis(clock_());
    if (!started_ || ms > last_ms_) {
        started_ = true;
        last_ms_ = ms;
        tail_lo_ = rng_();
        tail_hi_ = static_cast<std::uint16_t>(rng_());
        // keep headroom so the monotonic increment does not overflow in practice
        tail_hi_ &= 0x7fff;
    } else {
        ms = last_ms_;
        if (++tail_lo_ == 0) ++tail_hi_;
    }

    std::array<char, 26> out{};
    // 48-bit time -> 10 chars (top 2 bits always zero)
    for (int i = 9; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kCrockford[ms & 31];
        ms >>= 5;
    }
    // 80-bit tail -> 16 chars
    std::uint64_t lo = tail_lo_;
    std::uint64_t hi = tail_hi_;
    for (int i = 25; i >= 10; --i) {
        out[static_cast<std::size_t>(i)] = kCrockford[lo & 31];
        lo = (lo >> 5) | ((hi & 31) << 59);
        hi >>= 5;
    }
    return std::string(out.begin(), out.end());
}

Timestamp IdGenerator::now() const {
    return std::chrono::floor<std::chrono::seconds>(clock_());
}

IdGenerator& default_id_generator() {
    static IdGenerator generator;
    return generator;
}

IdGenerator::Clock stepping_clock(std::chrono::system_clock::time_point start,
                                  std::chrono::milliseconds step) {
    auto current = std::make_shared<std::chrono::system_clock::time_point>(start);
    auto guard = std::make_shared<std::mutex>();
    return [current, guard, step] {
        std::lock_guard lock(*guard);
        auto value = *current;
        *current += step;
        return value;
    };
}

}  // namespace dreams
