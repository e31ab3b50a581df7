#include <gtest/gtest.h>

#include "golden_cases.hpp"

TEST(Golden, EmissionMatchesSnapshots) {
  const bool update = golden::update_requested();
  const golden::Result r = golden::run(update);
  EXPECT_EQ(r.compared, 80);
  if (update) GTEST_SKIP() << "rewrote " << r.compared << " snapshots in " << golden::data_dir();
  for (const auto& m : r.mismatches) ADD_FAILURE() << "differs from snapshot: " << m;
}

TEST(Golden, EveryComboIsDistinct) {
  const auto cs = golden::combos();
  ASSERT_EQ(cs.size(), 8u);
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) EXPECT_NE(cs[i].label, cs[j].label);
}
