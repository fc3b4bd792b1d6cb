#include <random>

#include <gtest/gtest.h>

#include "ven/errors.hpp"
#include "ven/network.hpp"

namespace ven {
namespace {

RoadNetwork fig2_network() {
  return RoadNetwork::build({1, 2, 3, 4, 5}, {{1, 1, 2, 0.5, 1500, 40},
                                              {2, 1, 3, 1.0, 1400, 80},
                                              {3, 2, 3, 0.6, 1800, 50},
                                              {4, 3, 4, 0.8, 1700, 65},
                                              {5, 2, 5, 0.7, 900, 55},
                                              {6, 5, 4, 0.9, 1000, 70}});
}

TEST(RoadNetworkTest, MinimalNetwork) {
  const RoadNetwork net = RoadNetwork::build({1, 2}, {{7, 1, 2, 3.0, 10.0, 0.0}});
  ASSERT_EQ(net.outgoing(1).size(), 1u);
  EXPECT_EQ(net.arcs()[net.outgoing(1)[0]].id, 7);
  EXPECT_TRUE(net.outgoing(2).empty());
  EXPECT_EQ(net.arc(7).delay, 3.0);
}

TEST(RoadNetworkTest, Fig2TopologyIsValid) {
  const RoadNetwork net = fig2_network();
  EXPECT_EQ(net.junctions().size(), 5u);
  EXPECT_EQ(net.arcs().size(), 6u);
  EXPECT_EQ(net.outgoing(1).size(), 2u);
  EXPECT_EQ(net.outgoing(2).size(), 2u);
  EXPECT_TRUE(net.outgoing(4).empty());
}

TEST(RoadNetworkTest, RejectsInvalidInput) {
  EXPECT_THROW(RoadNetwork::build({1, 2}, {{1, 1, 1, 1.0, 1.0, 0.0}}), ValidationError);
  EXPECT_THROW(RoadNetwork::build({1, 1}, {{1, 1, 2, 1.0, 1.0, 0.0}}), ValidationError);
  EXPECT_THROW(RoadNetwork::build({1, 2}, {{1, 1, 3, 1.0, 1.0, 0.0}}), ValidationError);
  EXPECT_THROW(RoadNetwork::build({1, 2}, {{1, 1, 2, -1.0, 1.0, 0.0}}), ValidationError);
  EXPECT_THROW(RoadNetwork::build({1, 2}, {{1, 1, 2, 1.0, -1.0, 0.0}}), ValidationError);
  EXPECT_THROW(RoadNetwork::build({1, 2}, {{1, 1, 2, 1.0, 1.0, 0.0}, {1, 2, 1, 1.0, 1.0, 0.0}}),
               ValidationError);
  EXPECT_THROW(RoadNetwork::build({}, {}), ValidationError);
  EXPECT_THROW(RoadNetwork::build({1, 2}, {}), ValidationError);
}

TEST(RouteTest, ValidationCatchesDisconnectedAndLoopingRoutes) {
  const RoadNetwork net = fig2_network();
  EXPECT_NO_THROW(validate_route(net, {1, {1, 5, 6}, 10}));
  EXPECT_THROW(validate_route(net, {1, {1, 6}, 10}), ValidationError);
  EXPECT_THROW(validate_route(net, {1, {}, 10}), ValidationError);
  EXPECT_THROW(validate_route(net, {1, {99}, 10}), ValidationError);
  EXPECT_THROW(validate_route(net, {1, {1}, -2}), ValidationError);
}

TEST(RouteTest, InjectedRepeatedJunctionIsRejected) {
  // Ring 1 -> 2 -> ... -> 12 -> 1; every route that wraps back onto a
  // junction it already visited must fail.
  std::vector<JunctionId> ids;
  std::vector<Arc> arcs;
  const int n = 12;
  for (int i = 1; i <= n; ++i) {
    ids.push_back(i);
    arcs.push_back({i, i, i % n + 1, 1.0, 5.0, 0.0});
  }
  const RoadNetwork net = RoadNetwork::build(ids, arcs);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int start = std::uniform_int_distribution<int>(1, n)(rng);
    const int len = std::uniform_int_distribution<int>(n, 2 * n)(rng);
    VehicularRoute route{1, {}, 1.0};
    for (int k = 0; k < len; ++k) route.arcs.push_back((start - 1 + k) % n + 1);
    EXPECT_THROW(validate_route(net, route), ValidationError) << "length " << len;
    route.arcs.resize(n - 1);
    EXPECT_NO_THROW(validate_route(net, route));
  }
}

TEST(SubRouteTest, ExtractsContiguousArcs) {
  const RoadNetwork net = fig2_network();
  const VehicularRoute r3{3, {1, 5, 6}, 800};

  const SubRoute whole = sub_route(net, r3, 1, 3);
  EXPECT_EQ(whole.entry, 1);
  EXPECT_EQ(whole.exit, 4);
  EXPECT_EQ(whole.arc_count(), r3.arcs.size());
  EXPECT_EQ(whole.flow, r3.flow);
  EXPECT_EQ(whole.delay, route_delay(net, r3));

  const SubRoute middle = sub_route(net, r3, 2, 2);
  EXPECT_EQ(middle.entry, 2);
  EXPECT_EQ(middle.exit, 5);
  EXPECT_EQ(middle.delay, 0.7);

  // r2's sub-route 2 -> 3 -> 4 is the second segment of p2(1,4).
  const SubRoute r2seg = sub_route(net, {2, {3, 4}, 1500}, 1, 2);
  EXPECT_EQ(r2seg.entry, 2);
  EXPECT_EQ(r2seg.exit, 4);
  EXPECT_DOUBLE_EQ(r2seg.delay, 1.4);
}

TEST(SubRouteTest, RejectsBadIndices) {
  const RoadNetwork net = fig2_network();
  const VehicularRoute r3{3, {1, 5, 6}, 800};
  EXPECT_THROW(sub_route(net, r3, 0, 1), std::out_of_range);
  EXPECT_THROW(sub_route(net, r3, 3, 2), std::out_of_range);
  EXPECT_THROW(sub_route(net, r3, 1, 4), std::out_of_range);
}

TEST(RouteDelayTest, SumsArcDelays) {
  const RoadNetwork one = RoadNetwork::build({1, 2}, {{1, 1, 2, 5.0, 1.0, 0.0}});
  EXPECT_EQ(route_delay(one, {1, {1}, 1.0}), 5.0);

  const RoadNetwork three = RoadNetwork::build(
      {1, 2, 3, 4}, {{1, 1, 2, 2.0, 1.0, 0.0}, {2, 2, 3, 3.0, 1.0, 0.0}, {3, 3, 4, 4.0, 1.0, 0.0}});
  EXPECT_EQ(route_delay(three, {1, {1, 2, 3}, 1.0}), 9.0);
}

TEST(RouteDelayTest, SubRouteDelayMatchesDirectSummation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> delay(0.01, 3.0);
  std::vector<JunctionId> ids;
  std::vector<Arc> arcs;
  for (int i = 1; i <= 11; ++i) ids.push_back(i);
  for (int i = 1; i <= 10; ++i) arcs.push_back({i, i, i + 1, delay(rng), 1.0, 0.0});
  const RoadNetwork net = RoadNetwork::build(ids, arcs);
  VehicularRoute route{1, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 3.0};

  double direct = 0.0;
  for (const Arc& a : arcs) direct += a.delay;
  EXPECT_EQ(route_delay(net, route), direct);

  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::size_t m = n; m <= 10; ++m) {
      double expected = 0.0;
      for (std::size_t k = n; k <= m; ++k) expected += arcs[k - 1].delay;
      EXPECT_EQ(sub_route(net, route, n, m).delay, expected);
    }
  }
}

TEST(RouteSetTest, IndexesDeparturesAndRejectsDuplicates) {
  const RoadNetwork net = fig2_network();
  const RouteSet routes(net, {{1, {2}, 1200}, {2, {3, 4}, 1500}, {3, {1, 5, 6}, 800}});
  EXPECT_EQ(routes.departures(1).size(), 2u);
  EXPECT_EQ(routes.departures(2).size(), 2u);
  EXPECT_TRUE(routes.departures(4).empty());
  EXPECT_EQ(routes.junctions(2).size(), 4u);
  EXPECT_THROW(RouteSet(net, {{1, {2}, 1}, {1, {3}, 1}}), ValidationError);
  EXPECT_THROW(RouteSet(net, {{1, {1, 6}, 1}}), ValidationError);
}

}  // namespace
}  // namespace ven
