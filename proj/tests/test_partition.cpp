#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "sacb/error.hpp"
#include "sacb/partition.hpp"

using namespace sacb;

TEST(Partition, PerAxisCounts) {
  EXPECT_EQ(Partition(1, 2.0, 3).per_axis(), 8);
  Partition sq(2, 2.0, 1);
  EXPECT_EQ(sq.bin_count(), 4u);
  double vol = 0.0;
  for (std::size_t i = 0; i < sq.bin_count(); ++i) vol += sq.bounds(sq.bin_at(i)).volume();
  EXPECT_DOUBLE_EQ(vol, 1.0);
  EXPECT_EQ(Partition(1, 1.1, 29).per_axis(), 16);
  EXPECT_EQ(Partition(1, 1.1, 7).per_axis(), 2);
  EXPECT_EQ(Partition(3, 1.1, 0).per_axis(), 1);
}

TEST(Partition, InvalidBase) {
  EXPECT_THROW(Partition(1, 1.0, 3), Error);
  try {
    build_partition(1, 0.9, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_base);
  }
}

TEST(Partition, LocateExamples) {
  Partition p(1, 2.0, 3);
  EXPECT_EQ(p.locate(std::vector<double>{0.0}).coords, std::vector<int>{0});
  EXPECT_EQ(p.locate(std::vector<double>{1.0}).coords, std::vector<int>{7});
  EXPECT_EQ(p.locate(std::vector<double>{0.375}).coords, std::vector<int>{3});
}

TEST(Partition, LocateOutOfDomain) {
  Partition p(2, 2.0, 2);
  try {
    p.locate(std::vector<double>{0.5, 1.0000001});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::out_of_domain);
  }
  EXPECT_THROW(p.locate(std::vector<double>{-1e-12, 0.5}), Error);
}

TEST(Partition, RandomTiling) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 100; ++c) {
    const int d = 1 + c % 3;
    const double q = c % 2 ? 1.1 + u(gen) : 2.0;
    const int level = static_cast<int>(u(gen) * 8);
    Partition p(d, q, level);
    double vol = 0.0;
    for (std::size_t i = 0; i < p.bin_count(); ++i) {
      EXPECT_EQ(p.index_of(p.bin_at(i)), i);
      vol += p.bounds(p.bin_at(i)).volume();
    }
    EXPECT_NEAR(vol, 1.0, 1e-9);
    for (int k = 0; k < 100; ++k) {
      Point x(d);
      for (auto& v : x) v = k == 0 ? 1.0 : u(gen);
      const BinId b = p.locate(x);
      EXPECT_TRUE(p.bounds(b).contains(x));
      EXPECT_EQ(p.locate_index(x), p.index_of(b));
    }
  }
}

TEST(Levels, BenchmarkParameters) {
  const auto lv = sacb_levels(2e6, 1, 1.1, 0.4, 1.0, 0.325);
  EXPECT_NEAR(log_base(2e6, 1.1), 152.2257, 1e-4);
  EXPECT_NEAR(log_base(std::log(2e6), 1.1), 28.0636, 1e-4);
  EXPECT_EQ(lv.partition_level, 7);
  EXPECT_EQ(lv.max_round, 24);
  EXPECT_EQ(lv.coarse_level, 7);
  EXPECT_EQ(lv.fine_level - lv.coarse_level, 71);
  EXPECT_GE(lv.mesh_level, lv.fine_level);
}

TEST(Levels, Monotone) {
  int prev_l = 0, prev_gap = 0;
  for (double t = 1e3; t <= 1e9; t *= 3.0) {
    const auto lv = sacb_levels(t, 1, 1.1, 0.4, 1.0, 0.325);
    EXPECT_GE(lv.partition_level, prev_l);
    EXPECT_GE(lv.fine_level - lv.coarse_level, prev_gap);
    prev_l = lv.partition_level;
    prev_gap = lv.fine_level - lv.coarse_level;
    // The level formula is not monotone in d beyond d = 3 for these bounds.
    for (int d = 1; d < 3; ++d)
      EXPECT_LE(sacb_levels(t, d, 1.1, 0.4, 1.0, 0.325).partition_level,
                sacb_levels(t, d + 1, 1.1, 0.4, 1.0, 0.325).partition_level);
  }
}

TEST(Levels, NotMonotoneInHighDimension) {
  bool found = false;
  for (double t = 1e3; t <= 1e12 && !found; t *= 1.5)
    found = sacb_levels(t, 3, 1.1, 0.4, 1.0, 0.325).partition_level >
            sacb_levels(t, 4, 1.1, 0.4, 1.0, 0.325).partition_level;
  EXPECT_TRUE(found);
}

TEST(Levels, Errors) {
  EXPECT_THROW(sacb_levels(2e6, 1, 1.0, 0.4, 1.0, 0.325), Error);
  try {
    sacb_levels(2.0, 1, 1.1, 0.4, 1.0, 0.325);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::horizon_too_small);
  }
}

TEST(Mesh, Examples) {
  Partition p(1, 2.0, 1);
  EXPECT_EQ(mesh_resolution(2.0, 2), 4);
  EXPECT_EQ(mesh_points(BinId{{0}}, p, 2), (std::vector<Point>{{0.25}, {0.5}}));
  EXPECT_EQ(mesh_points(BinId{{1}}, p, 2), (std::vector<Point>{{0.5}, {0.75}, {1.0}}));
  Partition fine(1, 2.0, 2);
  EXPECT_EQ(mesh_points(BinId{{0}}, fine, 0), (std::vector<Point>{{0.125}}));
}

TEST(Mesh, InsideBinUniformAndBalanced) {
  for (double q : {1.1, 1.5, 2.0}) {
    for (int d = 1; d <= 2; ++d) {
      Partition p(d, q, 5);
      const int level = 12;
      const double spacing = 1.0 / static_cast<double>(mesh_resolution(q, level));
      std::set<std::size_t> per_axis_counts;
      for (std::size_t i = 0; i < p.bin_count(); ++i) {
        const BinId b = p.bin_at(i);
        const Box box = p.bounds(b);
        const auto pts = mesh_points(b, p, level);
        ASSERT_FALSE(pts.empty());
        std::set<double> axis0;
        for (const auto& x : pts) {
          EXPECT_TRUE(box.contains(x));
          axis0.insert(x[0]);
        }
        std::vector<double> xs(axis0.begin(), axis0.end());
        for (std::size_t k = 1; k < xs.size(); ++k) EXPECT_NEAR(xs[k] - xs[k - 1], spacing, 1e-12);
        per_axis_counts.insert(xs.size());
      }
      EXPECT_LE(*per_axis_counts.rbegin() - *per_axis_counts.begin(), 1u) << "q=" << q << " d=" << d;
    }
  }
}

TEST(Mesh, TooFineIsRejected) {
  Partition p(2, 1.1, 8);
  EXPECT_THROW(mesh_points(p.bin_at(0), p, 105), std::invalid_argument);
}
