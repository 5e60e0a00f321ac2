#include "scanplan/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include <boost/polygon/voronoi.hpp>

#include "scanplan/errors.hpp"
#include "scanplan/visibility.hpp"

namespace scanplan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Graph::has_edge(int a, int b) const {
    for (const GraphEdge& e : edges)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return true;
    return false;
}

void Graph::add_edge(int a, int b, double w) {
    if (a == b || has_edge(a, b)) return;
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, w});
}

int Graph::add_node(CellIndex cell, Vec2 xy) {
    cells.push_back(cell);
    pos.push_back(xy);
    return size() - 1;
}

std::vector<std::vector<std::pair<int, double>>> Graph::adjacency() const {
    std::vector<std::vector<std::pair<int, double>>> adj(size());
    for (const GraphEdge& e : edges) {
        adj[e.a].push_back({e.b, e.w});
        adj[e.b].push_back({e.a, e.w});
    }
    for (auto& lst : adj) std::sort(lst.begin(), lst.end());
    return adj;
}

std::vector<TourNode> make_tour_nodes(const OccupancyGrid& grid, const ViewpointSet& vps) {
    std::vector<TourNode> nodes;
    nodes.reserve(vps.viewpoints.size());
    for (const SelectedViewpoint& v : vps.viewpoints)
        nodes.push_back({v.cell, grid.cell_center(v.cell), false});
    return nodes;
}

VisibilityGraph build_visibility_graph(const OccupancyGrid& grid,
                                       const std::vector<TourNode>& nodes, double r) {
    if (nodes.empty())
        throw std::invalid_argument("build_visibility_graph: need at least one viewpoint");
    VisibilityGraph g;
    for (const TourNode& n : nodes) g.add_node(n.cell, n.xy);
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j)
            if (is_visible(grid, g.cells[i], g.cells[j], r))
                g.add_edge(i, j, distance(g.pos[i], g.pos[j]));
    return g;
}

Roadmap build_roadmap(const OccupancyGrid& grid, const VisibilityGraph& gv,
                      double r_relaxed) {
    Roadmap g;
    g.cells = gv.cells;
    g.pos = gv.pos;

    if (g.size() >= 2) {
        std::vector<boost::polygon::point_data<int>> pts;
        pts.reserve(g.size());
        for (const CellIndex& c : g.cells) pts.emplace_back(c.col, c.row);
        boost::polygon::voronoi_diagram<double> vd;
        boost::polygon::construct_voronoi(pts.begin(), pts.end(), &vd);

        std::set<std::pair<int, int>> delaunay;
        for (const auto& edge : vd.edges()) {
            if (!edge.is_primary()) continue;
            int i = static_cast<int>(edge.cell()->source_index());
            int j = static_cast<int>(edge.twin()->cell()->source_index());
            if (i > j) std::swap(i, j);
            if (i != j) delaunay.insert({i, j});
        }
        for (const auto& [i, j] : delaunay) {
            const double w = distance(g.pos[i], g.pos[j]);
            if (w > r_relaxed) continue;  // edge cutting: range
            if (!segment_collision_free(grid, g.cells[i], g.cells[j])) continue;
            g.add_edge(i, j, w);
        }
    }
    for (const GraphEdge& e : gv.edges) g.add_edge(e.a, e.b, e.w);  // G_v subset
    return g;
}

namespace {

double path_length(const std::vector<int>& seq, const std::vector<TourNode>& nodes) {
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
        len += distance(nodes[seq[k]].xy, nodes[seq[k + 1]].xy);
    return len;
}

// Exact open-path optimum with fixed start (Held-Karp), for small n.
std::vector<int> exact_open_path(const std::vector<TourNode>& nodes, int start) {
    const int n = static_cast<int>(nodes.size());
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
        if (i != start) others.push_back(i);
    const int m = static_cast<int>(others.size());
    if (m == 0) return {start};

    auto d = [&](int a, int b) { return distance(nodes[a].xy, nodes[b].xy); };
    const std::size_t full = std::size_t{1} << m;
    std::vector<std::vector<double>> dp(full, std::vector<double>(m, kInf));
    std::vector<std::vector<int>> parent(full, std::vector<int>(m, -1));
    for (int k = 0; k < m; ++k) dp[std::size_t{1} << k][k] = d(start, others[k]);
    for (std::size_t mask = 1; mask < full; ++mask) {
        for (int last = 0; last < m; ++last) {
            if (!(mask & (std::size_t{1} << last)) || dp[mask][last] == kInf) continue;
            for (int nxt = 0; nxt < m; ++nxt) {
                if (mask & (std::size_t{1} << nxt)) continue;
                const std::size_t nm = mask | (std::size_t{1} << nxt);
                const double cand = dp[mask][last] + d(others[last], others[nxt]);
                if (cand < dp[nm][nxt]) {
                    dp[nm][nxt] = cand;
                    parent[nm][nxt] = last;
                }
            }
        }
    }
    int best_last = 0;
    for (int k = 1; k < m; ++k)
        if (dp[full - 1][k] < dp[full - 1][best_last]) best_last = k;
    std::vector<int> seq(m + 1);
    std::size_t mask = full - 1;
    int cur = best_last;
    for (int pos = m; pos >= 1; --pos) {
        seq[pos] = others[cur];
        const int prev = parent[mask][cur];
        mask &= ~(std::size_t{1} << cur);
        cur = prev;
    }
    seq[0] = start;
    return seq;
}

}  // namespace

Tour initial_tsp_tour(const std::vector<TourNode>& nodes, int start) {
    if (nodes.empty()) throw std::invalid_argument("initial_tsp_tour: no viewpoints");
    if (start < 0 || start >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("initial_tsp_tour: start out of range");

    const int n = static_cast<int>(nodes.size());
    auto d = [&](int a, int b) { return distance(nodes[a].xy, nodes[b].xy); };

    // Nearest neighbor (ties: smaller node index).
    std::vector<int> seq;
    seq.reserve(n);
    std::vector<char> used(n, 0);
    seq.push_back(start);
    used[start] = 1;
    while (static_cast<int>(seq.size()) < n) {
        const int cur = seq.back();
        int best = -1;
        double best_d = kInf;
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double di = d(cur, i);
            if (di < best_d) { best_d = di; best = i; }
        }
        seq.push_back(best);
        used[best] = 1;
    }

    // 2-opt, first improvement, lexicographic (i, j) scan, restart until no
    // improving reversal remains. The start stays pinned.
    const double eps = 1e-12;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i + 2 < n && !improved; ++i) {
            for (int j = i + 1; j < n && !improved; ++j) {
                double delta;
                if (j == n - 1)
                    delta = d(seq[i], seq[j]) - d(seq[i], seq[i + 1]);
                else
                    delta = d(seq[i], seq[j]) + d(seq[i + 1], seq[j + 1]) -
                            d(seq[i], seq[i + 1]) - d(seq[j], seq[j + 1]);
                if (delta < -eps) {
                    std::reverse(seq.begin() + i + 1, seq.begin() + j + 1);
                    improved = true;
                }
            }
        }
    }

    if (n <= 12) {
        std::vector<int> exact = exact_open_path(nodes, start);
        if (path_length(exact, nodes) < path_length(seq, nodes) - eps) seq = exact;
    }

    Tour tour;
    tour.nodes = nodes;
    tour.sequence = std::move(seq);
    tour.total_length = path_length(tour.sequence, nodes);
    for (std::size_t k = 0; k + 1 < tour.sequence.size(); ++k) {
        tour.legs.push_back({tour.sequence[k], tour.sequence[k + 1],
                             d(tour.sequence[k], tour.sequence[k + 1]), false});
    }
    return tour;
}

namespace {

// Nearest Free cell to a world point; ties resolved to the smallest row-major
// cell. Searches Chebyshev rings outward until no closer ring can win.
std::optional<CellIndex> nearest_free_cell(const OccupancyGrid& grid, Vec2 p, double max_m) {
    const CellIndex seed = grid.cell_at_world(p);
    const int max_ring = static_cast<int>(std::ceil(max_m / grid.resolution())) + 1;
    std::optional<CellIndex> best;
    double best_d2 = kInf;
    for (int ring = 0; ring <= max_ring; ++ring) {
        // Once a candidate is known, stop when the closest possible cell of
        // this ring is already farther.
        if (best) {
            const double ring_min = (ring - 1) * grid.resolution();
            if (ring_min * ring_min > best_d2) break;
        }
        for (int dr = -ring; dr <= ring; ++dr) {
            for (int dc = -ring; dc <= ring; ++dc) {
                if (std::max(std::abs(dr), std::abs(dc)) != ring) continue;
                const int r = seed.row + dr, c = seed.col + dc;
                if (!grid.is_free(r, c)) continue;
                const Vec2 ctr = grid.cell_center({r, c});
                const double d2 = (ctr.x - p.x) * (ctr.x - p.x) + (ctr.y - p.y) * (ctr.y - p.y);
                if (d2 < best_d2 ||
                    (d2 == best_d2 && best && CellIndex{r, c} < *best)) {
                    best_d2 = d2;
                    best = CellIndex{r, c};
                }
            }
        }
    }
    return best;
}

}  // namespace

std::optional<std::vector<CellIndex>> insert_steiner(const OccupancyGrid& grid,
                                                     CellIndex a, CellIndex b, double r) {
    const Vec2 pa = grid.cell_center(a), pb = grid.cell_center(b);
    const double len = distance(pa, pb);
    const int k = std::max(1, static_cast<int>(std::ceil(len / r - 1e-12)));
    std::vector<CellIndex> steiner;
    for (int i = 1; i < k; ++i) {
        const Vec2 p = pa + (pb - pa) * (static_cast<double>(i) / k);
        std::optional<CellIndex> cell = nearest_free_cell(grid, p, r);
        if (!cell) return std::nullopt;
        steiner.push_back(*cell);
    }
    // Full chain visibility, including range, between consecutive stops.
    CellIndex prev = a;
    for (std::size_t i = 0; i <= steiner.size(); ++i) {
        const CellIndex next = i < steiner.size() ? steiner[i] : b;
        if (next == prev) return std::nullopt;  // degenerate snap
        if (!is_visible(grid, prev, next, r)) return std::nullopt;
        prev = next;
    }
    return steiner;
}

namespace {

struct DijkstraResult {
    std::vector<int> path;  // node ids tail..head, empty when unreachable
    double length = kInf;
};

DijkstraResult dijkstra_path(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int tail, int head) {
    const int n = static_cast<int>(adj.size());
    std::vector<double> dist(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[tail] = 0.0;
    pq.push({0.0, tail});
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u == head) break;
        for (const auto& [v, w] : adj[u]) {
            if (done[v]) continue;
            const double nd = du + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                parent[v] = u;
                pq.push({nd, v});
            }
        }
    }
    DijkstraResult res;
    if (dist[head] == kInf) return res;
    res.length = dist[head];
    for (int cur = head; cur != -1; cur = parent[cur]) res.path.push_back(cur);
    std::reverse(res.path.begin(), res.path.end());
    return res;
}

}  // namespace

std::optional<DetourPath> detour(const Graph& graph, const OccupancyGrid& grid, int tail,
                                 int head, double r, const std::vector<char>& in_tour,
                                 bool steinerize) {
    auto node_in_tour = [&](int id) {
        return id < static_cast<int>(in_tour.size()) && in_tour[id];
    };

    std::vector<GraphEdge> edges = graph.edges;
    while (true) {
        std::vector<std::vector<std::pair<int, double>>> adj(graph.size());
        for (const GraphEdge& e : edges) {
            adj[e.a].push_back({e.b, e.w});
            adj[e.b].push_back({e.a, e.w});
        }
        for (auto& lst : adj) std::sort(lst.begin(), lst.end());

        DijkstraResult res = dijkstra_path(adj, tail, head);
        if (res.path.empty()) return std::nullopt;

        DetourPath out;
        bool retry = false;
        out.waypoints.push_back({res.path[0], graph.cells[res.path[0]],
                                 graph.pos[res.path[0]], false});
        for (std::size_t k = 0; k + 1 < res.path.size() && !retry; ++k) {
            const int u = res.path[k], v = res.path[k + 1];
            const double w = distance(graph.pos[u], graph.pos[v]);
            if (steinerize && w > r) {
                std::optional<std::vector<CellIndex>> chain =
                    insert_steiner(grid, graph.cells[u], graph.cells[v], r);
                if (!chain) {
                    // Edge unusable: drop it and search again.
                    edges.erase(std::remove_if(edges.begin(), edges.end(),
                                               [&](const GraphEdge& e) {
                                                   return (e.a == u && e.b == v) ||
                                                          (e.a == v && e.b == u);
                                               }),
                                edges.end());
                    retry = true;
                    break;
                }
                for (const CellIndex& c : *chain)
                    out.waypoints.push_back({-1, c, grid.cell_center(c), true});
            }
            out.waypoints.push_back({v, graph.cells[v], graph.pos[v], false});
        }
        if (retry) continue;

        out.length = 0.0;
        for (std::size_t k = 0; k + 1 < out.waypoints.size(); ++k)
            out.length += distance(out.waypoints[k].xy, out.waypoints[k + 1].xy);
        out.new_viewpoint_count = 0;
        for (std::size_t k = 1; k + 1 < out.waypoints.size(); ++k) {
            const auto& wp = out.waypoints[k];
            if (wp.steiner || !node_in_tour(wp.node)) ++out.new_viewpoint_count;
        }
        return out;
    }
}

double detour_cost(const DetourPath& path, double eta) {
    if (!(eta >= 0.0 && eta < 1.0))
        throw std::invalid_argument("detour_cost: eta must be in [0, 1)");
    return (1.0 - eta) * path.length + eta * path.new_viewpoint_count;
}

void annotate_legs(const OccupancyGrid& grid, Tour& tour, double r) {
    tour.legs.clear();
    tour.total_length = 0.0;
    for (std::size_t k = 0; k + 1 < tour.sequence.size(); ++k) {
        const int a = tour.sequence[k], b = tour.sequence[k + 1];
        TourLeg leg;
        leg.from = a;
        leg.to = b;
        leg.length = distance(tour.nodes[a].xy, tour.nodes[b].xy);
        leg.feasible = is_visible(grid, tour.nodes[a].cell, tour.nodes[b].cell, r);
        tour.total_length += leg.length;
        tour.legs.push_back(leg);
    }
    tour.added_viewpoints = 0;
    std::set<int> seen;
    for (int id : tour.sequence)
        if (tour.nodes[id].steiner && seen.insert(id).second) ++tour.added_viewpoints;
}

Tour finalize_tour(const OccupancyGrid& grid, const Tour& initial, const VisibilityGraph& gv,
                   Roadmap& gr, double r, double eta, std::vector<RepairRecord>* audit) {
    Tour out;
    out.nodes = initial.nodes;
    if (initial.sequence.empty()) throw std::invalid_argument("finalize_tour: empty tour");

    std::vector<char> in_tour(out.nodes.size(), 0);
    for (int id : initial.sequence) in_tour[id] = 1;

    out.sequence.push_back(initial.sequence[0]);
    for (std::size_t k = 0; k + 1 < initial.sequence.size(); ++k) {
        const int a = initial.sequence[k], b = initial.sequence[k + 1];
        if (is_visible(grid, out.nodes[a].cell, out.nodes[b].cell, r)) {
            out.sequence.push_back(b);
            continue;
        }

        std::optional<DetourPath> dv = detour(gv, grid, a, b, r, in_tour, false);
        std::optional<DetourPath> dr = detour(gr, grid, a, b, r, in_tour, true);
        if (!dv && !dr) throw StrandedTourError(a, b);
        const double psi_v = dv ? detour_cost(*dv, eta) : kInf;
        const double psi_r = dr ? detour_cost(*dr, eta) : kInf;
        const bool use_roadmap = psi_r < psi_v;  // ties go to the visibility graph
        const DetourPath& path = use_roadmap ? *dr : *dv;

        // Splice the detour interior; chosen Steiner nodes join the node table
        // and the roadmap (with the split edges) as they appear.
        int prev_rm_id = -1;  // roadmap id of the previous waypoint when steiner
        for (std::size_t w = 1; w + 1 < path.waypoints.size(); ++w) {
            const DetourPath::Waypoint& wp = path.waypoints[w];
            int id;
            if (wp.steiner) {
                id = static_cast<int>(out.nodes.size());
                out.nodes.push_back({wp.cell, wp.xy, true});
                in_tour.push_back(0);
                const int rm_id = gr.add_node(wp.cell, wp.xy);
                const DetourPath::Waypoint& prev = path.waypoints[w - 1];
                const int prev_id = prev.steiner ? prev_rm_id : prev.node;
                gr.add_edge(prev_id, rm_id, distance(prev.xy, wp.xy));
                const DetourPath::Waypoint& next = path.waypoints[w + 1];
                if (!next.steiner)
                    gr.add_edge(rm_id, next.node, distance(wp.xy, next.xy));
                prev_rm_id = rm_id;
            } else {
                id = wp.node;
                prev_rm_id = -1;
            }
            out.sequence.push_back(id);
            in_tour[id] = 1;
        }
        out.sequence.push_back(b);

        if (audit) {
            RepairRecord rec;
            rec.tail = a;
            rec.head = b;
            rec.chose_roadmap = use_roadmap;
            rec.psi_visibility = psi_v;
            rec.psi_roadmap = psi_r;
            rec.new_nodes = path.new_viewpoint_count;
            audit->push_back(rec);
        }
    }

    annotate_legs(grid, out, r);
    for (const TourLeg& leg : out.legs) {
        if (!leg.feasible)
            throw PlanningError("tour repair",
                                "detour produced an infeasible leg " +
                                    std::to_string(leg.from) + "->" + std::to_string(leg.to));
    }
    return out;
}

}  // namespace scanplan
