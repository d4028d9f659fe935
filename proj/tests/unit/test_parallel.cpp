#include <cstdlib>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "beurlab/parallel.hpp"
#include "beurlab/random.hpp"

using namespace beurlab;

namespace {

class ThreadEnv : public ::testing::TestWithParam<const char*> {
protected:
    void SetUp() override { setenv("BEURLAB_THREADS", GetParam(), 1); }
    void TearDown() override { unsetenv("BEURLAB_THREADS"); }
};

}  // namespace

TEST_P(ThreadEnv, ResultsKeepIndexOrder) {
    const auto v = parallel_map(1000, [](std::size_t i) { return static_cast<double>(i) * 0.5; });
    ASSERT_EQ(v.size(), 1000U);
    for (std::size_t i = 0; i < v.size(); ++i) ASSERT_EQ(v[i], 0.5 * static_cast<double>(i));
}

TEST_P(ThreadEnv, LowestFailingIndexWins) {
    try {
        parallel_map(200, [](std::size_t i) -> int {
            if (i == 17 || i == 150) throw std::runtime_error(std::to_string(i));
            return 0;
        });
        FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "17");
    }
}

INSTANTIATE_TEST_SUITE_P(Threads, ThreadEnv, ::testing::Values("1", "4"));

TEST(Parallel, ThreadCapReadsEnvironment) {
    setenv("BEURLAB_THREADS", "3", 1);
    EXPECT_EQ(thread_cap(), 3U);
    setenv("BEURLAB_THREADS", "0", 1);
    EXPECT_LE(thread_cap(), 1U);
    unsetenv("BEURLAB_THREADS");
    EXPECT_GE(thread_cap(), 1U);
}

TEST(Random, SeededStreamsRepeat) {
    Rng a(5);
    Rng b(5);
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        ASSERT_EQ(u, b.uniform());
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
    Rng c(9);
    for (int i = 0; i < 1000; ++i) {
        const auto k = c.integer(-3, 3);
        ASSERT_GE(k, -3);
        ASSERT_LE(k, 3);
    }
}
