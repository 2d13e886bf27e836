#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "exclusion/state_index.hpp"

using namespace exclusion;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(4, 2), 6u);
  EXPECT_EQ(binomial(10, 0), 1u);
  EXPECT_EQ(binomial(10, 10), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(62, 31), 465428353255261088u);
  EXPECT_EQ(falling_factorial(5, 5), 120u);
  EXPECT_EQ(falling_factorial(7, 0), 1u);
  EXPECT_EQ(falling_factorial(4, 2), 12u);
}

TEST(Binomial, OverflowIsCapacityError) {
  EXPECT_THROW(binomial(200, 100), CapacityError);
  EXPECT_THROW(falling_factorial(30, 25), CapacityError);
}

TEST(ProcessParams, Validation) {
  EXPECT_NO_THROW(ProcessParams::uep(4, 2, 1.0).validate());
  EXPECT_NO_THROW(ProcessParams::uep(3, 0, 1.0).validate());
  EXPECT_THROW(ProcessParams::uep(0, 0, 1.0).validate(), ParameterError);
  EXPECT_THROW(ProcessParams::uep(4, 5, 1.0).validate(), ParameterError);
  EXPECT_THROW(ProcessParams::uep(4, -1, 1.0).validate(), ParameterError);
  EXPECT_THROW(ProcessParams::uep(4, 2, 0.0).validate(), ParameterError);
  EXPECT_THROW(ProcessParams::lep(4, 2, -1.0).validate(), ParameterError);
  EXPECT_THROW(ProcessParams::uep(5, 3, 1.0).validate_uep_closed_form(), ParameterError);
  EXPECT_EQ(ProcessParams::uep(6, 3, 1.0).state_count(), 20u);
  EXPECT_EQ(ProcessParams::lep(4, 2, 1.0).state_count(), 12u);
  EXPECT_EQ(ProcessParams::uep(4, 2, 1.0).degree(), 4u);
  EXPECT_EQ(ProcessParams::lep(4, 2, 1.0).degree(), 5u);
}

TEST(EnumerateSubsets, Examples) {
  const auto s31 = enumerate_subsets(3, 1);
  ASSERT_EQ(s31.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s31[i].members, std::vector<Vertex>{i});

  const auto s42 = enumerate_subsets(4, 2);
  ASSERT_EQ(s42.size(), 6u);
  EXPECT_EQ(s42.front().members, (std::vector<Vertex>{0, 1}));
  EXPECT_EQ(s42.back().members, (std::vector<Vertex>{2, 3}));

  const auto s50 = enumerate_subsets(5, 0);
  ASSERT_EQ(s50.size(), 1u);
  EXPECT_TRUE(s50[0].members.empty());
}

TEST(RankSubset, Examples) {
  EXPECT_EQ(rank_subset({{0, 1}}, 4), 0u);
  EXPECT_EQ(unrank_subset(5, 4, 2).members, (std::vector<Vertex>{2, 3}));
}

TEST(RankSubset, InvalidInput) {
  EXPECT_THROW(rank_subset({{1, 0}}, 4), ParameterError);
  EXPECT_THROW(rank_subset({{0, 4}}, 4), ParameterError);
  EXPECT_THROW(rank_subset({{2, 2}}, 4), ParameterError);
  EXPECT_THROW(unrank_subset(6, 4, 2), ParameterError);
}

TEST(RankSubset, ExhaustiveRoundTripUpTo8) {
  for (int n = 1; n <= 8; ++n) {
    for (int ell = 0; ell <= n; ++ell) {
      const auto all = enumerate_subsets(n, ell);
      ASSERT_EQ(all.size(), binomial(n, ell));
      for (Rank r = 0; r < all.size(); ++r) {
        EXPECT_EQ(rank_subset(all[r], n), r);
        EXPECT_EQ(unrank_subset(r, n, ell), all[r]);
      }
    }
  }
}

TEST(RankTuple, Examples) {
  EXPECT_EQ(rank_tuple({{0, 1}}, 3), 0u);
  EXPECT_EQ(unrank_tuple(5, 3, 2).positions, (std::vector<Vertex>{2, 1}));
}

TEST(RankTuple, InvalidInput) {
  EXPECT_THROW(rank_tuple({{0, 0}}, 3), ParameterError);
  EXPECT_THROW(rank_tuple({{0, 3}}, 3), ParameterError);
  EXPECT_THROW(unrank_tuple(6, 3, 2), ParameterError);
}

TEST(RankTuple, ExhaustiveRoundTripUpTo7) {
  for (int n = 1; n <= 7; ++n) {
    for (int ell = 0; ell <= n; ++ell) {
      const auto all = enumerate_tuples(n, ell);
      ASSERT_EQ(all.size(), falling_factorial(n, ell));
      std::set<TupleState> distinct(all.begin(), all.end());
      EXPECT_EQ(distinct.size(), all.size());
      for (Rank r = 0; r < all.size(); ++r) {
        EXPECT_EQ(rank_tuple(all[r], n), r);
        EXPECT_EQ(unrank_tuple(r, n, ell), all[r]);
      }
    }
  }
}

TEST(UepNeighbors, Examples) {
  const auto a = uep_neighbors({{0}}, 3);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].members, std::vector<Vertex>{1});
  EXPECT_EQ(a[1].members, std::vector<Vertex>{2});

  const auto b = uep_neighbors({{0, 1}}, 4);
  const std::vector<SubsetState> want{{{0, 2}}, {{0, 3}}, {{1, 2}}, {{1, 3}}};
  EXPECT_EQ(b, want);

  EXPECT_TRUE(uep_neighbors({{0, 1, 2, 3}}, 4).empty());
}

TEST(LepNeighbors, Examples) {
  const auto a = lep_neighbors({{0}}, 3);
  const std::vector<TupleState> want_a{{{1}}, {{2}}};
  EXPECT_EQ(a, want_a);

  const auto b = lep_neighbors({{0, 1}}, 3);
  ASSERT_EQ(b.size(), 3u);
  const std::set<TupleState> got(b.begin(), b.end());
  const std::set<TupleState> want_b{{{2, 1}}, {{0, 2}}, {{1, 0}}};
  EXPECT_EQ(got, want_b);

  EXPECT_EQ(lep_neighbors({{0, 1, 2}}, 3).size(), 3u);
}

TEST(Neighbors, CountsAndSymmetryUpTo6) {
  for (int n = 1; n <= 6; ++n) {
    for (int ell = 0; ell <= n; ++ell) {
      for (const auto& s : enumerate_subsets(n, ell)) {
        const auto nb = uep_neighbors(s, n);
        EXPECT_EQ(nb.size(), static_cast<std::size_t>(ell * (n - ell)));
        for (const auto& y : nb) {
          const auto back = uep_neighbors(y, n);
          EXPECT_NE(std::find(back.begin(), back.end(), s), back.end());
        }
      }
      for (const auto& x : enumerate_tuples(n, ell)) {
        const auto nb = lep_neighbors(x, n);
        EXPECT_EQ(nb.size(), static_cast<std::size_t>(ell * (n - ell) + ell * (ell - 1) / 2));
        std::set<TupleState> distinct(nb.begin(), nb.end());
        EXPECT_EQ(distinct.size(), nb.size());
        for (const auto& y : nb) {
          const auto back = lep_neighbors(y, n);
          EXPECT_NE(std::find(back.begin(), back.end(), x), back.end());
        }
      }
    }
  }
}
