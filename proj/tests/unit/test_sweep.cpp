#include <gtest/gtest.h>

#include "fpu/errors.hpp"
#include "fpu/sweep.hpp"

namespace fpu {
namespace {

TEST(Sweep, IsPrime) {
  std::vector<std::size_t> primes;
  for (std::size_t n = 0; n < 30; ++n)
    if (is_prime(n)) primes.push_back(n);
  EXPECT_EQ(primes, (std::vector<std::size_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
}

TEST(Sweep, RowForP15) {
  const auto row = analyse_p(15);
  EXPECT_TRUE(row.passed());
  EXPECT_FALSE(row.prime);
  EXPECT_TRUE(row.jan_ok);
  EXPECT_EQ(row.rho, (std::vector<std::size_t>{2, 4, 6, 7, 5, 3, 1}));
  ASSERT_EQ(row.invariants.size(), 2u);
  EXPECT_EQ(row.invariants[0].surviving.size(), 2u);
  EXPECT_EQ(row.invariants[1].surviving.size(), 4u);
  EXPECT_TRUE(row.containments.empty());
  EXPECT_TRUE(row.interaction());
}

TEST(Sweep, SmallRangeIsConcurrentAndOrdered) {
  const auto serial = sweep_primes(21, 0.01, kPresenceTolerance, 1);
  const auto parallel = sweep_primes(21, 0.01, kPresenceTolerance, 4);
  ASSERT_EQ(serial.rows.size(), 10u);
  for (std::size_t k = 0; k < serial.rows.size(); ++k) {
    EXPECT_EQ(serial.rows[k].p, 3 + 2 * k);
    EXPECT_EQ(serial.rows[k].rho, parallel.rows[k].rho);
    EXPECT_EQ(serial.rows[k].invariants.size(), parallel.rows[k].invariants.size());
  }
  EXPECT_TRUE(serial.passed());
  const auto text = format_sweep_report(serial);
  EXPECT_NE(text.find("overall: PASS"), std::string::npos);
}

TEST(Sweep, RangeChecked) {
  EXPECT_THROW(sweep_primes(1), InvalidArgument);
  EXPECT_THROW(sweep_primes(201), InvalidArgument);
}

}  // namespace
}  // namespace fpu
