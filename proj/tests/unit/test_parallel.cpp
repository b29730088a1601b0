#include <gtest/gtest.h>

#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "conelef/errors.hpp"
#include "conelef/parallel.hpp"

using namespace conelef;

namespace {

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) {
      setenv("CONE_LEFSCHETZ_THREADS", value, 1);
    } else {
      unsetenv("CONE_LEFSCHETZ_THREADS");
    }
  }
  ~EnvGuard() { unsetenv("CONE_LEFSCHETZ_THREADS"); }
};

}  // namespace

TEST(ParallelFor, DeterministicAcrossThreadCounts) {
  std::vector<double> ref(1000);
  parallel_for(ref.size(), [&](std::size_t i) { ref[i] = 1.0 / (1.0 + static_cast<double>(i)); }, 1);
  for (std::size_t threads : {2u, 3u, 8u}) {
    std::vector<double> out(ref.size());
    parallel_for(out.size(), [&](std::size_t i) { out[i] = 1.0 / (1.0 + static_cast<double>(i)); }, threads);
    EXPECT_EQ(out, ref);
  }
}

TEST(ParallelFor, RethrowsLowestIndex) {
  try {
    parallel_for(
        50,
        [](std::size_t i) {
          if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
        },
        4);
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(ParallelFor, EmptyRange) {
  int calls = 0;
  parallel_for(0, [&](std::size_t) { ++calls; }, 4);
  EXPECT_EQ(calls, 0);
}

TEST(ConfiguredThreads, Environment) {
  {
    EnvGuard g("3");
    EXPECT_EQ(configured_threads(), 3u);
  }
  {
    EnvGuard g("0");
    EXPECT_GE(configured_threads(), 1u);
  }
  {
    EnvGuard g(nullptr);
    EXPECT_GE(configured_threads(), 1u);
  }
  {
    EnvGuard g("lots");
    EXPECT_THROW(configured_threads(), DomainError);
  }
  {
    EnvGuard g("-2");
    EXPECT_THROW(configured_threads(), DomainError);
  }
}
