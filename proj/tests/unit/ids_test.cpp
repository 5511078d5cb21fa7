#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "dreams/ids.hpp"
#include "generators.hpp"

namespace {

constexpr std::string_view kCrockford = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

TEST(Ids, AreTwentySixCrockfordCharacters) {
    auto ids = dreams::testing::fixture_ids();
    for (int i = 0; i < 100; ++i) {
        const auto id = ids.next();
        ASSERT_EQ(id.size(), 26u);
        for (char c : id) EXPECT_NE(kCrockford.find(c), std::string_view::npos) << id;
    }
}

TEST(Ids, StrictlyIncreaseWithinOneMillisecond) {
    using namespace std::chrono;
    dreams::IdGenerator ids([] { return system_clock::time_point(sys_days(2024y / 5 / 1)); }, 9);
    std::string last;
    for (int i = 0; i < 1000; ++i) {
        auto id = ids.next();
        EXPECT_GT(id, last);
        last = std::move(id);
    }
}

TEST(Ids, TimePrefixEncodesMilliseconds) {
    using namespace std::chrono;
    dreams::IdGenerator ids([] { return system_clock::time_point(milliseconds(0)); }, 1);
    EXPECT_EQ(ids.next().substr(0, 10), "0000000000");
    dreams::IdGenerator later([] { return system_clock::time_point(milliseconds(32)); }, 1);
    EXPECT_EQ(later.next().substr(0, 10), "0000000010");
}

TEST(Ids, SameSeedAndClockReproduce) {
    auto a = dreams::testing::fixture_ids(42);
    auto b = dreams::testing::fixture_ids(42);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Ids, UniqueAcrossThreads) {
    auto& ids = dreams::default_id_generator();
    std::vector<std::vector<std::string>> per_thread(4);
    std::vector<std::thread> threads;
    for (auto& bucket : per_thread) {
        threads.emplace_back([&ids, &bucket] {
            for (int i = 0; i < 2000; ++i) bucket.push_back(ids.next());
        });
    }
    for (auto& t : threads) t.join();
    std::set<std::string> all;
    for (const auto& bucket : per_thread) all.insert(bucket.begin(), bucket.end());
    EXPECT_EQ(all.size(), 8000u);
}

TEST(Ids, NowTruncatesToSeconds) {
    using namespace std::chrono;
    const auto t = system_clock::time_point(sys_days(2024y / 1 / 1)) + milliseconds(1999);
    dreams::IdGenerator ids([t] { return t; }, 1);
    EXPECT_EQ(ids.now(), sys_seconds(sys_days(2024y / 1 / 1)) + seconds(1));
}

}  // namespace
