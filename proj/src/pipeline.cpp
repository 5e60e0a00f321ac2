#include "scanplan/pipeline.hpp"

#include <chrono>
#include <limits>
#include <set>

#include <json.hpp>

#include "scanplan/errors.hpp"
#include "scanplan/map_io.hpp"
#include "scanplan/visibility.hpp"

namespace scanplan {

namespace {

class StageClock {
public:
    explicit StageClock(std::map<std::string, double>& sink) : sink_(sink) {}
    template <class Fn>
    auto run(const std::string& stage, Fn&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(stage, t0);
        } else {
            auto result = fn();
            record(stage, t0);
            return result;
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point t0) {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        sink_[stage] = dt.count();
        sink_["total"] += dt.count();
    }
    std::map<std::string, double>& sink_;
};

int unique_sequence_nodes(const Tour& tour) {
    return static_cast<int>(std::set<int>(tour.sequence.begin(), tour.sequence.end()).size());
}

}  // namespace

PlanOutcome run_plan_pipeline(const OccupancyGrid& raw, const PlanConfig& cfg) {
    cfg.validate();
    PlanOutcome out;
    StageClock clock(out.metrics.planning_time_s);

    out.inflated = clock.run("preprocess", [&] { return inflate(raw, cfg.inflation_radius); });
    if (out.inflated.free_count() == 0)
        throw PlanningError("preprocess", "no free space left after inflation");

    const FreeComponents comps = free_components(out.inflated);
    if (comps.count > 1) {
        out.disconnected = true;
        std::int64_t stranded = 0;
        for (int i = 0; i < comps.count; ++i)
            if (i != comps.largest()) stranded += comps.sizes[i];
        out.warnings.push_back("free space splits into " + std::to_string(comps.count) +
                               " components; " + std::to_string(stranded) +
                               " free cells are unreachable from the largest component");
    }

    CoverageOptions cov_opts;
    cov_opts.exact_universe_limit = cfg.exact_universe_limit;
    cov_opts.candidate_stride = cfg.candidate_stride;

    GreedyTimings greedy_times;
    out.viewpoints = greedy_cover(out.inflated, cfg.sensor_range_r, cfg.coverage_target,
                                  cov_opts, &greedy_times);
    out.metrics.planning_time_s["universe"] = greedy_times.universe_s;
    out.metrics.planning_time_s["greedy"] = greedy_times.loop_s;
    out.metrics.planning_time_s["total"] += greedy_times.universe_s + greedy_times.loop_s;
    out.coverage_ok = out.viewpoints.coverage_over_reachable() >= cfg.coverage_target - 1e-12;
    if (out.viewpoints.fallback_used)
        out.warnings.push_back("greedy cover used the fallback candidate rule");

    const std::vector<TourNode> nodes = make_tour_nodes(out.inflated, out.viewpoints);
    out.gv = clock.run("graphs", [&] {
        return build_visibility_graph(out.inflated, nodes, cfg.sensor_range_r);
    });
    {
        const auto t0 = std::chrono::steady_clock::now();
        out.gr = build_roadmap(out.inflated, out.gv, cfg.r_relaxed());
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        out.metrics.planning_time_s["graphs"] += dt.count();
        out.metrics.planning_time_s["total"] += dt.count();
    }

    Tour initial = clock.run("tsp", [&] { return initial_tsp_tour(nodes, 0); });
    if (cfg.close_loop && initial.sequence.size() > 1) {
        initial.sequence.push_back(initial.sequence.front());
        annotate_legs(out.inflated, initial, cfg.sensor_range_r);
    }

    out.tour = clock.run("repair", [&] {
        return finalize_tour(out.inflated, initial, out.gv, out.gr, cfg.sensor_range_r,
                             cfg.eta, &out.repairs);
    });

    out.metrics.path_length_m = clock.run("pathplan", [&] {
        return tour_path_length(out.inflated, out.tour, &out.leg_paths);
    });

    out.metrics.coverage_percent = out.viewpoints.coverage_over_reachable() * 100.0;
    out.metrics.viewpoint_count = unique_sequence_nodes(out.tour);
    out.metrics.infeasible_edges_repaired = static_cast<int>(out.repairs.size());
    for (const RepairRecord& rec : out.repairs)
        (rec.chose_roadmap ? out.metrics.detour_roadmap : out.metrics.detour_visibility)++;
    return out;
}

BcdOutcome run_bcd_pipeline(const OccupancyGrid& inflated, const PlanConfig& cfg) {
    cfg.validate();
    BcdOutcome out;
    StageClock clock(out.metrics.planning_time_s);

    // Lanes at r/2 so sampled viewpoints cover the floor even between lanes
    // (worst sample distance sqrt((r/2)^2 + (r/2)^2) < r), mirroring a dense
    // lawnmower sweep segmented into <= r stops.
    out.sweep = clock.run("sweep", [&] {
        return bcd_plan(inflated, cfg.sensor_range_r, cfg.sensor_range_r / 2.0);
    });

    // Coverage of the sweep viewpoints under the same sensor model.
    const FreeIndexer indexer(inflated);
    out.covered = Bitset(indexer.free_count());
    clock.run("coverage", [&] {
        for (const CellIndex& vp : out.sweep.viewpoints) {
            VisibleSet vs = visible_set(inflated, indexer, vp, cfg.sensor_range_r);
            out.covered |= vs.cells;
        }
    });

    const FreeComponents comps = free_components(inflated);
    std::int64_t reachable = indexer.free_count();
    if (comps.count > 1 && !out.sweep.viewpoints.empty()) {
        const std::int32_t home =
            comps.label[inflated.idx(out.sweep.viewpoints[0].row, out.sweep.viewpoints[0].col)];
        reachable = comps.sizes[home];
    }
    out.metrics.coverage_percent =
        reachable > 0 ? 100.0 * static_cast<double>(out.covered.count()) / reachable : 0.0;
    out.metrics.viewpoint_count = static_cast<int>(out.sweep.viewpoints.size());

    clock.run("pathplan", [&] {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < out.sweep.viewpoints.size(); ++i) {
            std::optional<GridPath> leg =
                astar(inflated, out.sweep.viewpoints[i], out.sweep.viewpoints[i + 1]);
            if (!leg)
                throw PlanningError("baseline sweep",
                                    "sweep leg " + std::to_string(i) + " is disconnected");
            total += leg->length;
            out.leg_paths.push_back(std::move(*leg));
        }
        out.metrics.path_length_m = total;
    });
    return out;
}

namespace {

nlohmann::json cell_json(const CellIndex& c) { return nlohmann::json{c.row, c.col}; }

nlohmann::json xy_json(const Vec2& p) { return nlohmann::json{p.x, p.y}; }

nlohmann::json metrics_json_object(const MetricsReport& m) {
    nlohmann::json j;
    j["coverage_percent"] = m.coverage_percent;
    j["viewpoint_count"] = m.viewpoint_count;
    j["path_length_m"] = m.path_length_m;
    j["planning_time_s"] = m.planning_time_s;
    j["infeasible_edges_repaired"] = m.infeasible_edges_repaired;
    j["detour_choices"] = {{"visibility", m.detour_visibility},
                           {"roadmap", m.detour_roadmap}};
    return j;
}

}  // namespace

std::string viewpoints_to_json(const OccupancyGrid& grid, const ViewpointSet& vps) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["r"] = vps.r;
    j["coverage"] = coverage_fraction(vps.mask);
    j["coverage_over_reachable"] = vps.coverage_over_reachable();
    j["reachable_free_count"] = vps.reachable_free_count;
    j["fallback_used"] = vps.fallback_used;
    j["unreachable_free"] = vps.unreachable_free;
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < vps.viewpoints.size(); ++i) {
        const SelectedViewpoint& v = vps.viewpoints[i];
        arr.push_back({{"index", i},
                       {"cell", cell_json(v.cell)},
                       {"world_xy", xy_json(grid.cell_center(v.cell))},
                       {"score", v.score_at_selection},
                       {"newly_covered", v.newly_covered},
                       {"fallback", v.from_fallback}});
    }
    j["viewpoints"] = arr;
    return j.dump(2) + "\n";
}

std::string tour_to_json(const OccupancyGrid& grid, const PlanOutcome& outcome,
                         const PlanConfig& cfg) {
    const Tour& tour = outcome.tour;
    nlohmann::json j;
    j["schema_version"] = 1;
    j["r"] = cfg.sensor_range_r;
    j["eta"] = cfg.eta;
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t id = 0; id < tour.nodes.size(); ++id) {
        const TourNode& n = tour.nodes[id];
        nodes.push_back({{"id", id},
                         {"kind", n.steiner ? "steiner" : "viewpoint"},
                         {"cell", cell_json(n.cell)},
                         {"world_xy", xy_json(n.xy)}});
    }
    j["nodes"] = nodes;
    j["sequence"] = tour.sequence;
    nlohmann::json legs = nlohmann::json::array();
    for (const TourLeg& leg : tour.legs)
        legs.push_back({{"from", leg.from},
                        {"to", leg.to},
                        {"length", leg.length},
                        {"feasible", leg.feasible}});
    j["legs"] = legs;
    j["total_length"] = tour.total_length;
    j["added_viewpoints"] = tour.added_viewpoints;
    nlohmann::json repairs = nlohmann::json::array();
    for (const RepairRecord& rec : outcome.repairs) {
        nlohmann::json r;
        r["tail"] = rec.tail;
        r["head"] = rec.head;
        r["chosen"] = rec.chose_roadmap ? "roadmap" : "visibility";
        r["psi_visibility"] = rec.psi_visibility == std::numeric_limits<double>::infinity()
                                  ? nlohmann::json(nullptr)
                                  : nlohmann::json(rec.psi_visibility);
        r["psi_roadmap"] = rec.psi_roadmap == std::numeric_limits<double>::infinity()
                               ? nlohmann::json(nullptr)
                               : nlohmann::json(rec.psi_roadmap);
        r["new_nodes"] = rec.new_nodes;
        repairs.push_back(r);
    }
    j["repairs"] = repairs;
    return j.dump(2) + "\n";
}

std::string metrics_to_json(const MetricsReport& metrics, const OccupancyGrid& grid,
                            const PlanConfig& cfg, const std::vector<std::string>& warnings,
                            const std::vector<GridPath>* leg_paths) {
    nlohmann::json j = metrics_json_object(metrics);
    j["schema_version"] = 1;
    if (leg_paths) {
        nlohmann::json legs = nlohmann::json::array();
        for (const GridPath& leg : *leg_paths) legs.push_back(leg.length);
        j["leg_lengths_m"] = legs;
    }
    j["map"] = {{"width", grid.width()},
                {"height", grid.height()},
                {"resolution", grid.resolution()},
                {"free_cells", grid.free_count()}};
    j["config"] = {{"r", cfg.sensor_range_r},
                   {"r_relaxed_factor", cfg.r_relaxed_factor},
                   {"eta", cfg.eta},
                   {"inflate", cfg.inflation_radius},
                   {"target", cfg.coverage_target},
                   {"stride", cfg.candidate_stride},
                   {"seed", cfg.seed},
                   {"close_loop", cfg.close_loop}};
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

std::string compare_to_json(const MetricsReport& ours, const MetricsReport& bcd) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["ours"] = metrics_json_object(ours);
    j["bcd"] = metrics_json_object(bcd);
    j["ratios"] = {
        {"viewpoint_count", bcd.viewpoint_count > 0
                                ? static_cast<double>(ours.viewpoint_count) / bcd.viewpoint_count
                                : 0.0},
        {"path_length_m",
         bcd.path_length_m > 0.0 ? ours.path_length_m / bcd.path_length_m : 0.0}};
    return j.dump(2) + "\n";
}

RenderModel make_render_model(const OccupancyGrid& grid, const PlanOutcome& outcome) {
    RenderModel model;
    model.grid = &grid;
    for (const TourNode& n : outcome.tour.nodes)
        (n.steiner ? model.steiner_cells : model.viewpoint_cells).push_back(n.cell);
    model.covered = outcome.viewpoints.mask.covered;
    for (const GridPath& leg : outcome.leg_paths) model.polylines.push_back(leg.cells);
    return model;
}

RenderModel render_model_from_artifacts(const OccupancyGrid& grid,
                                        const std::string& viewpoints_json,
                                        const std::string& tour_json) {
    RenderModel model;
    model.grid = &grid;
    nlohmann::json vj, tj;
    try {
        vj = nlohmann::json::parse(viewpoints_json);
        tj = nlohmann::json::parse(tour_json);
    } catch (const std::exception& e) {
        throw MapIoError(std::string("bad artifact JSON: ") + e.what());
    }
    try {
        const double r = vj.at("r").get<double>();

        std::vector<CellIndex> node_cells;
        for (const auto& n : tj.at("nodes")) {
            CellIndex c{n.at("cell").at(0).get<int>(), n.at("cell").at(1).get<int>()};
            node_cells.push_back(c);
            if (n.at("kind").get<std::string>() == "steiner")
                model.steiner_cells.push_back(c);
            else
                model.viewpoint_cells.push_back(c);
        }

        // Coverage union and A* legs are recomputed deterministically.
        const FreeIndexer indexer(grid);
        Bitset covered(indexer.free_count());
        for (const auto& v : vj.at("viewpoints")) {
            CellIndex c{v.at("cell").at(0).get<int>(), v.at("cell").at(1).get<int>()};
            covered |= visible_set(grid, indexer, c, r).cells;
        }
        model.covered = std::move(covered);

        std::vector<int> sequence = tj.at("sequence").get<std::vector<int>>();
        for (std::size_t k = 0; k + 1 < sequence.size(); ++k) {
            std::optional<GridPath> leg =
                astar(grid, node_cells.at(sequence[k]), node_cells.at(sequence[k + 1]));
            if (!leg) throw MapIoError("artifacts describe a disconnected tour leg");
            model.polylines.push_back(leg->cells);
        }
    } catch (const MapIoError&) {
        throw;
    } catch (const std::exception& e) {
        throw MapIoError(std::string("bad artifact JSON: ") + e.what());
    }
    return model;
}

}  // namespace scanplan
