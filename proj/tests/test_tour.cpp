#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scanplan/errors.hpp"
#include "scanplan/tour.hpp"
#include "scanplan/visibility.hpp"

using namespace scanplan;

namespace {

std::vector<TourNode> nodes_from_cells(const OccupancyGrid& g,
                                       const std::vector<CellIndex>& cells) {
    std::vector<TourNode> nodes;
    for (const CellIndex& c : cells) nodes.push_back({c, g.cell_center(c), false});
    return nodes;
}

std::vector<char> all_in_tour(int n) { return std::vector<char>(n, 1); }

}  // namespace

TEST_CASE("visibility graph edges follow the pairwise predicate") {
    OccupancyGrid g = fixtures::all_free(60, 40);  // 6 m x 4 m open space
    SUBCASE("two viewpoints a meter apart are linked") {
        auto nodes = nodes_from_cells(g, {{10, 10}, {10, 20}});
        VisibilityGraph gv = build_visibility_graph(g, nodes, 2.0);
        REQUIRE(gv.edges.size() == 1);
        CHECK(gv.edges[0].w == doctest::Approx(1.0));
    }
    SUBCASE("the range gate removes distant pairs") {
        auto nodes = nodes_from_cells(g, {{10, 10}, {10, 40}});  // 3 m apart
        VisibilityGraph gv = build_visibility_graph(g, nodes, 2.0);
        CHECK(gv.edges.empty());
    }
}

TEST_CASE("detour scenario: graph topology matches the brute-force predicate") {
    fixtures::DetourScenario s = fixtures::detour_scenario();
    auto nodes = nodes_from_cells(s.grid, s.nodes);
    VisibilityGraph gv = build_visibility_graph(s.grid, nodes, s.r);

    // Exactly the oracle's pairwise predicate.
    for (int i = 0; i < gv.size(); ++i)
        for (int j = i + 1; j < gv.size(); ++j) {
            CAPTURE(i);
            CAPTURE(j);
            CHECK(gv.has_edge(i, j) == oracles::visible(s.grid, s.nodes[i], s.nodes[j], s.r));
        }
    // The wall spur separates nodes 0 and 1; the chain along the arm exists.
    CHECK_FALSE(gv.has_edge(0, 1));
    CHECK(gv.has_edge(0, 6));
    CHECK(gv.has_edge(6, 5));
    CHECK(gv.has_edge(5, 4));
    CHECK(gv.has_edge(4, 3));
    CHECK(gv.has_edge(3, 2));
    CHECK(gv.has_edge(2, 1));
}

TEST_CASE("roadmap: triangle of mutually visible viewpoints") {
    OccupancyGrid g = fixtures::all_free(40, 40);
    auto nodes = nodes_from_cells(g, {{10, 10}, {10, 25}, {25, 10}});
    VisibilityGraph gv = build_visibility_graph(g, nodes, 3.0);
    Roadmap gr = build_roadmap(g, gv, 4.5);
    CHECK(gr.edges.size() == 3);
    CHECK(gv.edges.size() == 3);
}

TEST_CASE("roadmap adds relaxed-range shortcuts and honors edge cutting") {
    fixtures::DetourScenario s = fixtures::detour_scenario();
    auto nodes = nodes_from_cells(s.grid, s.nodes);
    VisibilityGraph gv = build_visibility_graph(s.grid, nodes, s.r);
    Roadmap gr = build_roadmap(s.grid, gv, s.r_relaxed);

    // G_v is a subgraph of G_r.
    for (const GraphEdge& e : gv.edges) CHECK(gr.has_edge(e.a, e.b));

    // The shortcut between nodes 1 and 5 (x2, x6) is collision-free and only
    // fits the relaxed range, so it exists in the roadmap alone.
    CHECK_FALSE(gv.has_edge(1, 5));
    CHECK(gr.has_edge(1, 5));

    // Every roadmap edge is collision-free and within the relaxed range.
    for (const GraphEdge& e : gr.edges) {
        CHECK(segment_collision_free(s.grid, gr.cells[e.a], gr.cells[e.b]));
        CHECK(e.w <= s.r_relaxed + 1e-9);
    }

    // A Delaunay edge crossing the wall spur is cut: nodes 0 and 2 (x1, x3).
    CHECK_FALSE(gr.has_edge(0, 2));
}

TEST_CASE("roadmap of collinear viewpoints degenerates to the chain") {
    OccupancyGrid g = fixtures::all_free(60, 10);
    auto nodes = nodes_from_cells(g, {{5, 5}, {5, 20}, {5, 35}, {5, 50}});
    VisibilityGraph gv = build_visibility_graph(g, nodes, 2.0);
    Roadmap gr = build_roadmap(g, gv, 3.0);
    CHECK(gr.has_edge(0, 1));
    CHECK(gr.has_edge(1, 2));
    CHECK(gr.has_edge(2, 3));
    CHECK_FALSE(gr.has_edge(0, 3));  // 4.5 m exceeds the relaxed range
}

TEST_CASE("initial_tsp_tour basics") {
    OccupancyGrid g = fixtures::all_free(80, 10);
    SUBCASE("three collinear viewpoints keep their order") {
        auto nodes = nodes_from_cells(g, {{5, 5}, {5, 25}, {5, 45}});
        Tour tour = initial_tsp_tour(nodes, 0);
        CHECK(tour.sequence == std::vector<int>{0, 1, 2});
        CHECK(tour.total_length == doctest::Approx(4.0));
    }
    SUBCASE("single viewpoint tour has zero length") {
        auto nodes = nodes_from_cells(g, {{5, 5}});
        Tour tour = initial_tsp_tour(nodes, 0);
        CHECK(tour.sequence == std::vector<int>{0});
        CHECK(tour.total_length == doctest::Approx(0.0));
    }
}

TEST_CASE("initial_tsp_tour equals the permutation optimum on small instances") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);  // 2..8 viewpoints
        OccupancyGrid g = fixtures::all_free(100, 100);
        std::set<CellIndex> chosen;
        while (static_cast<int>(chosen.size()) < n)
            chosen.insert({static_cast<int>(rng() % 100), static_cast<int>(rng() % 100)});
        std::vector<CellIndex> cells(chosen.begin(), chosen.end());
        auto nodes = nodes_from_cells(g, cells);

        Tour tour = initial_tsp_tour(nodes, 0);
        std::vector<std::pair<double, double>> pts;
        for (const TourNode& nd : nodes) pts.push_back({nd.xy.x, nd.xy.y});
        const double oracle = oracles::brute_open_tour_length(pts, 0);
        CHECK(tour.total_length == doctest::Approx(oracle).epsilon(1e-12));

        // Also never worse than plain nearest neighbor.
        std::vector<char> used(n, 0);
        used[0] = 1;
        int cur = 0;
        double nn_len = 0.0;
        for (int step = 1; step < n; ++step) {
            int best = -1;
            double best_d = 1e18;
            for (int i = 0; i < n; ++i) {
                if (used[i]) continue;
                const double d = distance(nodes[cur].xy, nodes[i].xy);
                if (d < best_d) { best_d = d; best = i; }
            }
            nn_len += best_d;
            used[best] = 1;
            cur = best;
        }
        CHECK(tour.total_length <= nn_len + 1e-9);
    }
}

TEST_CASE("insert_steiner splits over-range edges") {
    OccupancyGrid g = fixtures::all_free(110, 20, 0.1);
    SUBCASE("3.0 m edge at r = 2.0 gets one midpoint node") {
        auto chain = insert_steiner(g, {10, 10}, {10, 40}, 2.0);
        REQUIRE(chain.has_value());
        REQUIRE(chain->size() == 1);
        CHECK((*chain)[0] == CellIndex{10, 25});
    }
    SUBCASE("edge of exactly r needs no split") {
        auto chain = insert_steiner(g, {10, 10}, {10, 30}, 2.0);
        REQUIRE(chain.has_value());
        CHECK(chain->empty());
    }
    SUBCASE("5.0 m edge at r = 2.0 gets nodes at the third points") {
        auto chain = insert_steiner(g, {10, 10}, {10, 60}, 2.0);
        REQUIRE(chain.has_value());
        REQUIRE(chain->size() == 2);
        CHECK((*chain)[0].row == 10);
        CHECK((*chain)[1].row == 10);
        Vec2 a = g.cell_center({10, 10});
        for (std::size_t i = 0; i < chain->size(); ++i) {
            Vec2 p = g.cell_center((*chain)[i]);
            CHECK(distance(a, p) <= 2.0 + 1e-9);
            a = p;
        }
        CHECK(distance(a, g.cell_center({10, 60})) <= 2.0 + 1e-9);
    }
    SUBCASE("fails when the chain loses visibility") {
        OccupancyGrid blocked = fixtures::all_free(110, 20, 0.1);
        fixtures::fill_rect(blocked, 0, 25, 19, 25);  // wall across the segment
        auto chain = insert_steiner(blocked, {10, 10}, {10, 40}, 2.0);
        CHECK_FALSE(chain.has_value());
    }
}

TEST_CASE("detour matches brute-force shortest paths on random graphs") {
    std::mt19937 rng(77);
    OccupancyGrid g = fixtures::all_free(200, 200, 0.5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 9);  // 4..12 nodes
        Graph graph;
        std::set<CellIndex> chosen;
        while (static_cast<int>(chosen.size()) < n)
            chosen.insert({static_cast<int>(rng() % 200), static_cast<int>(rng() % 200)});
        for (const CellIndex& c : chosen) graph.add_node(c, g.cell_center(c));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 100 < 45)
                    graph.add_edge(i, j, distance(graph.pos[i], graph.pos[j]));

        std::optional<DetourPath> path =
            detour(graph, g, 0, 1, 1e9, all_in_tour(n), false);
        std::optional<double> oracle = oracles::brute_shortest_path(graph.adjacency(), 0, 1);
        CHECK(path.has_value() == oracle.has_value());
        if (path && oracle) {
            CHECK(path->length == doctest::Approx(*oracle).epsilon(1e-12));
            for (std::size_t k = 0; k + 1 < path->waypoints.size(); ++k)
                CHECK(graph.has_edge(path->waypoints[k].node, path->waypoints[k + 1].node));
        }
    }
}

TEST_CASE("detour returns none for separated components") {
    OccupancyGrid g = fixtures::all_free(40, 40);
    Graph graph;
    graph.add_node({5, 5}, g.cell_center({5, 5}));
    graph.add_node({30, 30}, g.cell_center({30, 30}));
    CHECK_FALSE(detour(graph, g, 0, 1, 2.0, all_in_tour(2), false).has_value());
}

TEST_CASE("detour_cost weighs length against new viewpoints") {
    DetourPath path;
    path.length = 10.0;
    path.new_viewpoint_count = 1;
    CHECK(detour_cost(path, 0.0) == doctest::Approx(10.0));
    CHECK(detour_cost(path, 0.5) == doctest::Approx(5.5));
    DetourPath zero;
    CHECK(detour_cost(zero, 0.7) == doctest::Approx(0.0));
    CHECK_THROWS_AS(detour_cost(path, 1.0), std::invalid_argument);

    // Monotone in both node count and length.
    double prev = 0.0;
    for (int n = 0; n < 5; ++n) {
        DetourPath p;
        p.length = 10.0;
        p.new_viewpoint_count = n;
        const double cost = detour_cost(p, 0.6);
        CHECK(cost >= prev);
        prev = cost;
    }
    prev = 0.0;
    for (double len = 1.0; len < 6.0; len += 1.0) {
        DetourPath p;
        p.length = len;
        p.new_viewpoint_count = 2;
        const double cost = detour_cost(p, 0.6);
        CHECK(cost >= prev);
        prev = cost;
    }
}

TEST_CASE("finalize_tour leaves feasible tours unchanged") {
    OccupancyGrid g = fixtures::all_free(60, 10);
    auto nodes = nodes_from_cells(g, {{5, 5}, {5, 20}, {5, 35}});
    VisibilityGraph gv = build_visibility_graph(g, nodes, 2.0);
    Roadmap gr = build_roadmap(g, gv, 3.0);
    Tour initial = initial_tsp_tour(nodes, 0);
    std::vector<RepairRecord> audit;
    Tour final_tour = finalize_tour(g, initial, gv, gr, 2.0, 0.96, &audit);
    CHECK(final_tour.sequence == initial.sequence);
    CHECK(audit.empty());
    CHECK(final_tour.added_viewpoints == 0);
}

TEST_CASE("detour scenario: roadmap repair wins under the default eta") {
    fixtures::DetourScenario s = fixtures::detour_scenario();
    auto nodes = nodes_from_cells(s.grid, s.nodes);
    VisibilityGraph gv = build_visibility_graph(s.grid, nodes, s.r);
    Roadmap gr = build_roadmap(s.grid, gv, s.r_relaxed);

    Tour initial = initial_tsp_tour(nodes, 0);
    REQUIRE(initial.sequence[0] == 0);
    REQUIRE(initial.sequence[1] == 1);  // the infeasible hop comes first

    // Both detours exist and have the expected shapes.
    std::vector<char> in_tour = all_in_tour(gv.size());
    std::optional<DetourPath> dv = detour(gv, s.grid, 0, 1, s.r, in_tour, false);
    REQUIRE(dv.has_value());
    std::vector<int> v_nodes;
    for (const auto& wp : dv->waypoints) v_nodes.push_back(wp.node);
    CHECK(v_nodes == std::vector<int>{0, 6, 5, 4, 3, 2, 1});  // the long arm
    CHECK(dv->new_viewpoint_count == 0);

    std::optional<DetourPath> dr = detour(gr, s.grid, 0, 1, s.r, in_tour, true);
    REQUIRE(dr.has_value());
    REQUIRE(dr->waypoints.size() == 5);  // x1, x7, x6, steiner, x2
    CHECK(dr->waypoints[1].node == 6);
    CHECK(dr->waypoints[2].node == 5);
    CHECK(dr->waypoints[3].steiner);
    CHECK(dr->new_viewpoint_count == 1);

    // Lengths agree with hand-computed sums over the node positions.
    auto center = [&](int i) { return s.grid.cell_center(s.nodes[i]); };
    double expect_v = distance(center(0), center(6)) + distance(center(6), center(5)) +
                      distance(center(5), center(4)) + distance(center(4), center(3)) +
                      distance(center(3), center(2)) + distance(center(2), center(1));
    CHECK(dv->length == doctest::Approx(expect_v).epsilon(1e-6));
    const Vec2 steiner_xy = dr->waypoints[3].xy;
    double expect_r = distance(center(0), center(6)) + distance(center(6), center(5)) +
                      distance(center(5), steiner_xy) + distance(steiner_xy, center(1));
    CHECK(dr->length == doctest::Approx(expect_r).epsilon(1e-6));

    // psi favors the roadmap at the default eta; the final tour starts
    // x1, x7, x6, steiner, x2.
    std::vector<RepairRecord> audit;
    Tour final_tour = finalize_tour(s.grid, initial, gv, gr, s.r, 0.96, &audit);
    REQUIRE(audit.size() == 1);
    CHECK(audit[0].chose_roadmap);
    CHECK(detour_cost(*dr, 0.96) < detour_cost(*dv, 0.96));
    REQUIRE(final_tour.sequence.size() >= 5);
    CHECK(final_tour.sequence[0] == 0);
    CHECK(final_tour.sequence[1] == 6);
    CHECK(final_tour.sequence[2] == 5);
    CHECK(final_tour.nodes[final_tour.sequence[3]].steiner);
    CHECK(final_tour.sequence[4] == 1);
    CHECK(final_tour.added_viewpoints == 1);

    // The precedence constraint holds between all consecutive stops, checked
    // with the independent predicate.
    for (std::size_t k = 0; k + 1 < final_tour.sequence.size(); ++k) {
        const TourNode& a = final_tour.nodes[final_tour.sequence[k]];
        const TourNode& b = final_tour.nodes[final_tour.sequence[k + 1]];
        CHECK(oracles::visible(s.grid, a.cell, b.cell, s.r));
    }
}

TEST_CASE("detour scenario: a high eta flips the choice to the visibility graph") {
    fixtures::DetourScenario s = fixtures::detour_scenario();
    auto nodes = nodes_from_cells(s.grid, s.nodes);
    VisibilityGraph gv = build_visibility_graph(s.grid, nodes, s.r);
    Roadmap gr = build_roadmap(s.grid, gv, s.r_relaxed);
    Tour initial = initial_tsp_tour(nodes, 0);

    std::vector<RepairRecord> audit;
    Tour final_tour = finalize_tour(s.grid, initial, gv, gr, s.r, 0.999, &audit);
    REQUIRE(audit.size() == 1);
    CHECK_FALSE(audit[0].chose_roadmap);
    // Tour runs down the whole arm instead.
    std::vector<int> prefix(final_tour.sequence.begin(), final_tour.sequence.begin() + 7);
    CHECK(prefix == std::vector<int>{0, 6, 5, 4, 3, 2, 1});
    CHECK(final_tour.added_viewpoints == 0);
}

TEST_CASE("finalize_tour raises a stranded error when no detour exists") {
    // Two viewpoints in separate rooms with no graph connection.
    OccupancyGrid g = fixtures::grid_from_ascii({
        "#########",
        "#...#...#",
        "#...#...#",
        "#########",
    });
    auto nodes = nodes_from_cells(g, {{1, 2}, {1, 6}});
    VisibilityGraph gv = build_visibility_graph(g, nodes, 2.0);
    Roadmap gr = build_roadmap(g, gv, 3.0);
    Tour initial;
    initial.nodes = nodes;
    initial.sequence = {0, 1};
    CHECK_THROWS_AS(finalize_tour(g, initial, gv, gr, 2.0, 0.96, nullptr),
                    StrandedTourError);
}

TEST_CASE("tours are deterministic") {
    fixtures::DetourScenario s = fixtures::detour_scenario();
    auto nodes = nodes_from_cells(s.grid, s.nodes);
    VisibilityGraph gv = build_visibility_graph(s.grid, nodes, s.r);
    Roadmap gr1 = build_roadmap(s.grid, gv, s.r_relaxed);
    Tour a = finalize_tour(s.grid, initial_tsp_tour(nodes, 0), gv, gr1, s.r, 0.96);
    Roadmap gr2 = build_roadmap(s.grid, gv, s.r_relaxed);
    Tour b = finalize_tour(s.grid, initial_tsp_tour(nodes, 0), gv, gr2, s.r, 0.96);
    CHECK(a.sequence == b.sequence);
    CHECK(a.total_length == b.total_length);
}
