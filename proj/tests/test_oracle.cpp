#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mgraph/genmodel.hpp"
#include "mgraph/oracle.hpp"
#include "test_support.hpp"

using namespace mgraph;
namespace ts = testing_support;

namespace {

void expect_exact_all_pairs(const Graph& g, const HubLabeling& labels) {
  Bfs b(g);
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    auto d = b.run(s);
    for (VertexId t = 0; t < g.num_vertices(); ++t) ASSERT_EQ(labels.query(s, t), d[t]) << s << "," << t;
  }
}

std::string bytes(std::initializer_list<int> v) {
  std::string s;
  for (int c : v) s.push_back(static_cast<char>(c));
  return s;
}

}  // namespace

TEST(Labels, StarGolden) {
  auto labels = build_labels(ts::star(5));
  EXPECT_EQ(labels.order().front(), 0u);
  EXPECT_EQ(labels.label(0), (std::vector<LabelEntry>{{0, 0}}));
  for (VertexId v = 1; v <= 5; ++v) EXPECT_EQ(labels.label(v), (std::vector<LabelEntry>{{0, 1}, {v, 0}}));
  auto st = label_stats(labels);
  EXPECT_EQ(st.total_entries, 11u);
  EXPECT_LE(st.total_entries, 12u);
  EXPECT_NEAR(st.avg_label_size, 11.0 / 6.0, 1e-12);
  EXPECT_EQ(st.max_label_size, 2u);
  EXPECT_EQ(st.estimated_bytes, 66u);
  EXPECT_EQ(query(labels, 1, 2), 2u);
}

TEST(Labels, PathAndK2Golden) {
  auto p4 = build_labels(ts::path(4));
  EXPECT_EQ(label_stats(p4).total_entries, 8u);
  expect_exact_all_pairs(ts::path(4), p4);
  auto k2 = build_labels(ts::path(2));
  EXPECT_EQ(label_stats(k2).total_entries, 3u);
}

TEST(Labels, SelfQueryAndUnreachable) {
  auto g = ts::from_pairs(5, {{0, 1}, {1, 2}, {3, 4}});
  auto labels = build_labels(g);
  for (VertexId v = 0; v < 5; ++v) EXPECT_EQ(labels.query(v, v), 0u);
  EXPECT_EQ(labels.query(0, 4), kUnreached);
  expect_exact_all_pairs(g, labels);
  EXPECT_THROW(labels.query(0, 5), Error);
}

TEST(Labels, ExactOnSuite) {
  auto graphs = ts::model_suite(20, 2000);
  for (const auto& sg : graphs) {
    const Graph& g = sg.graph;
    auto labels = build_labels(g);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      ASSERT_TRUE(std::is_sorted(labels.label(v).begin(), labels.label(v).end(),
                                 [](const LabelEntry& a, const LabelEntry& b) { return a.hub < b.hub; }));
    if (g.num_vertices() <= 500) {
      expect_exact_all_pairs(g, labels);
      continue;
    }
    SplitMix64 rng(sg.spec.seed);
    PointToPoint p2p(g);
    for (int i = 0; i < 500; ++i) {
      auto s = static_cast<VertexId>(rng.below(g.num_vertices()));
      auto t = static_cast<VertexId>(rng.below(g.num_vertices()));
      ASSERT_EQ(labels.query(s, t), p2p.distance(s, t));
    }
  }
}

TEST(Labels, PruningIsLossless) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = ts::random_connected(200, 150, seed);
    auto pruned = build_labels(g);
    auto full = build_labels(g, std::nullopt, false);
    EXPECT_LT(label_stats(pruned).total_entries, label_stats(full).total_entries);
    for (VertexId s = 0; s < 200; ++s)
      for (VertexId t = 0; t < 200; ++t) ASSERT_EQ(pruned.query(s, t), full.query(s, t));
  }
}

TEST(Labels, SnapshotsOnlyImprove) {
  Graph g = ts::random_connected(150, 80, 3);
  Bfs b(g);
  std::vector<std::vector<Distance>> truth;
  for (VertexId s = 0; s < 150; ++s) {
    auto d = b.run(s);
    truth.emplace_back(d.begin(), d.end());
  }
  LabelBuilder builder(g);
  std::vector<std::vector<bool>> correct(150, std::vector<bool>(150, false));
  while (builder.step()) {
    if (builder.processed() % 10 != 0 && !builder.done()) continue;
    auto snap = builder.snapshot();
    EXPECT_EQ(snap.order().size(), builder.processed());
    for (VertexId s = 0; s < 150; ++s)
      for (VertexId t = 0; t < 150; ++t) {
        Distance q = snap.query(s, t);
        ASSERT_GE(q, truth[s][t]);
        if (correct[s][t]) {
          ASSERT_EQ(q, truth[s][t]);
        }
        correct[s][t] = q == truth[s][t];
      }
  }
  for (auto& row : correct)
    for (bool c : row) EXPECT_TRUE(c);
}

TEST(Labels, CustomOrderAndValidation) {
  Graph g = ts::path(5);
  auto labels = build_labels(g, std::vector<VertexId>{4, 3, 2, 1, 0});
  expect_exact_all_pairs(g, labels);
  EXPECT_THROW(build_labels(g, std::vector<VertexId>{0, 1, 2}), Error);
  EXPECT_THROW(build_labels(g, std::vector<VertexId>{0, 1, 2, 3, 3}), Error);
}

TEST(LabelFile, K2BitExact) {
  auto labels = build_labels(ts::path(2));
  std::ostringstream os;
  labels.save(os);
  std::string expect = "PLL1" + bytes({2, 0, 0, 0}) + bytes({3, 0, 0, 0, 0, 0, 0, 0}) +
                       bytes({1, 0, 0, 0}) + bytes({0, 0, 0, 0, 0, 0}) +
                       bytes({2, 0, 0, 0}) + bytes({0, 0, 0, 0, 1, 0}) + bytes({1, 0, 0, 0, 0, 0});
  EXPECT_EQ(os.str(), expect);
}

TEST(LabelFile, RoundTripAndErrors) {
  Graph g = ts::random_connected(300, 200, 8);
  auto labels = build_labels(g);
  std::stringstream ss;
  labels.save(ss);
  auto back = HubLabeling::load(ss);
  EXPECT_EQ(back.num_vertices(), labels.num_vertices());
  for (VertexId v = 0; v < 300; ++v) EXPECT_EQ(back.label(v), labels.label(v));
  auto a = label_stats(back), b = label_stats(labels);
  EXPECT_EQ(a.total_entries, b.total_entries);
  EXPECT_EQ(a.max_label_size, b.max_label_size);
  EXPECT_EQ(a.avg_label_size, b.avg_label_size);

  std::istringstream bad("PLL2xxxxxxxxxxxx");
  EXPECT_THROW(HubLabeling::load(bad), Error);
  std::string full = ss.str();
  std::istringstream truncated(full.substr(0, full.size() - 3));
  EXPECT_THROW(HubLabeling::load(truncated), Error);
  EXPECT_THROW(HubLabeling::load(std::string("/nonexistent/labels.pll")), Error);
}

TEST(Labels, LargeGraphSpaceIsSublinear) {
  double prev_avg = 0.0;
  double prev_n = 0.0;
  for (std::size_t n : {10000, 30000, 100000}) {
    Graph g = generate({ModelKind::CM, n, 2.5, WeightMode::DeterministicQuantile, 1}).graph;
    auto labels = build_labels(g);
    auto st = label_stats(labels);
    const double gn = static_cast<double>(g.num_vertices());
    if (n == 100000) {
      EXPECT_LE(st.avg_label_size, std::sqrt(gn));
    }
    if (prev_avg > 0) {
      EXPECT_LT(st.avg_label_size / prev_avg, gn / prev_n) << n;
    }
    prev_avg = st.avg_label_size;
    prev_n = gn;
    SplitMix64 rng(n);
    PointToPoint p2p(g);
    for (int i = 0; i < 200; ++i) {
      auto s = static_cast<VertexId>(rng.below(g.num_vertices()));
      auto t = static_cast<VertexId>(rng.below(g.num_vertices()));
      ASSERT_EQ(labels.query(s, t), p2p.distance(s, t));
    }
  }
}
