#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "scanplan/config.hpp"
#include "scanplan/errors.hpp"
#include "scanplan/map_io.hpp"
#include "scanplan/pipeline.hpp"
#include "scanplan/visibility.hpp"

using namespace scanplan;
namespace fs = std::filesystem;

namespace {

#ifndef SCANPLAN_BIN
#define SCANPLAN_BIN "scanplan"
#endif

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SCANPLAN_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

// metrics.json with the wall-clock stage timings removed.
std::string strip_timings(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    j.erase("planning_time_s");
    return j.dump(2);
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("config file parsing and validation") {
    const fs::path cfg_path = fs::temp_directory_path() / "scanplan_test.cfg";
    write_text_file(cfg_path.string(),
                    "# planner settings\nr = 1.5\neta = 0.9\ninflate = 0.2\nseed = 42\n");
    PlanConfig cfg = load_config_file(cfg_path.string());
    CHECK(cfg.sensor_range_r == doctest::Approx(1.5));
    CHECK(cfg.eta == doctest::Approx(0.9));
    CHECK(cfg.inflation_radius == doctest::Approx(0.2));
    CHECK(cfg.seed == 42);

    write_text_file(cfg_path.string(), "bogus_key = 1\n");
    CHECK_THROWS_AS(load_config_file(cfg_path.string()), ConfigError);
    write_text_file(cfg_path.string(), "eta = 1.5\n");
    CHECK_THROWS_AS(load_config_file(cfg_path.string()), ConfigError);
    write_text_file(cfg_path.string(), "r 2.0\n");
    CHECK_THROWS_AS(load_config_file(cfg_path.string()), ConfigError);
}

TEST_CASE("pipeline metrics cross-check against recomputation") {
    PlanConfig cfg;
    OccupancyGrid raw = fixtures::recipe_world("rooms", 80, 80, 3);
    PlanOutcome outcome = run_plan_pipeline(raw, cfg);

    // viewpoint_count equals the unique node count of the tour.
    std::set<int> unique(outcome.tour.sequence.begin(), outcome.tour.sequence.end());
    CHECK(outcome.metrics.viewpoint_count == static_cast<int>(unique.size()));

    // Every planned viewpoint appears in the tour at least once.
    for (int id = 0; id < static_cast<int>(outcome.viewpoints.viewpoints.size()); ++id)
        CHECK(unique.count(id) == 1);

    // Coverage recomputed from scratch matches the report to 1e-9.
    FreeIndexer indexer(outcome.inflated);
    Bitset covered(indexer.free_count());
    for (const SelectedViewpoint& v : outcome.viewpoints.viewpoints)
        covered |= visible_set(outcome.inflated, indexer, v.cell, cfg.sensor_range_r).cells;
    CHECK(covered == outcome.viewpoints.mask.covered);
    const double recomputed =
        100.0 * static_cast<double>(covered.count()) /
        static_cast<double>(outcome.viewpoints.reachable_free_count);
    CHECK(outcome.metrics.coverage_percent == doctest::Approx(recomputed).epsilon(1e-9));

    // Stage timings exist for every pipeline stage.
    for (const char* stage :
         {"preprocess", "universe", "greedy", "graphs", "tsp", "repair", "pathplan", "total"})
        CHECK(outcome.metrics.planning_time_s.count(stage) == 1);
}

TEST_CASE("cli plan: 1-viewpoint empty room, artifacts and exit code") {
    const fs::path out = fresh_dir("scanplan_cli_plan");
    const int rc = run_cli("plan --recipe empty --width 28 --height 28 --res 0.1 --out " +
                           out.string());
    CHECK(rc == 0);
    for (const char* f : {"grid.json", "viewpoints.json", "tour.json", "metrics.json",
                          "plan.svg"})
        CHECK(fs::exists(out / f));

    nlohmann::json metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
    CHECK(metrics["coverage_percent"].get<double>() == doctest::Approx(100.0));
    CHECK(metrics["viewpoint_count"].get<int>() == 1);
    CHECK(metrics["schema_version"].get<int>() == 1);

    // One viewpoint, one red dot.
    const std::string svg = slurp(out / "plan.svg");
    CHECK(count_occurrences(svg, "class=\"viewpoint\"") == 1);
}

TEST_CASE("cli plan is deterministic run-to-run (timings excluded)") {
    const fs::path a = fresh_dir("scanplan_cli_det_a");
    const fs::path b = fresh_dir("scanplan_cli_det_b");
    const std::string args = "plan --recipe rooms --width 70 --height 70 --res 0.1 --seed 9";
    CHECK(run_cli(args + " --out " + a.string()) == 0);
    CHECK(run_cli(args + " --out " + b.string()) == 0);
    for (const char* f : {"grid.json", "viewpoints.json", "tour.json", "plan.svg"})
        CHECK(slurp(a / f) == slurp(b / f));
    CHECK(strip_timings(slurp(a / "metrics.json")) == strip_timings(slurp(b / "metrics.json")));
}

TEST_CASE("cli render: reproduces the svg from artifacts, byte for byte") {
    const fs::path out = fresh_dir("scanplan_cli_render");
    REQUIRE(run_cli("plan --recipe rooms --width 60 --height 60 --res 0.1 --seed 4 --out " +
                    out.string()) == 0);
    const std::string render_args = "render --grid " + (out / "grid.json").string() +
                                    " --viewpoints " + (out / "viewpoints.json").string() +
                                    " --tour " + (out / "tour.json").string();
    CHECK(run_cli(render_args + " --out " + (out / "again.svg").string()) == 0);
    CHECK(run_cli(render_args + " --out " + (out / "again2.svg").string()) == 0);
    CHECK(slurp(out / "again.svg") == slurp(out / "again2.svg"));
    // The re-render matches the plan-time drawing.
    CHECK(slurp(out / "again.svg") == slurp(out / "plan.svg"));
}

TEST_CASE("svg viewpoint positions match viewpoints.json under the grid transform") {
    const fs::path out = fresh_dir("scanplan_cli_svgxy");
    REQUIRE(run_cli("plan --recipe rooms --width 60 --height 60 --res 0.1 --seed 6 --out " +
                    out.string()) == 0);
    nlohmann::json vj = nlohmann::json::parse(slurp(out / "viewpoints.json"));
    const std::string svg = slurp(out / "plan.svg");
    for (const auto& v : vj["viewpoints"]) {
        const int row = v["cell"][0].get<int>();
        const int col = v["cell"][1].get<int>();
        char expect[128];
        std::snprintf(expect, sizeof expect, "cx=\"%.2f\" cy=\"%.2f\"", (col + 0.5) * 4.0,
                      (row + 0.5) * 4.0);
        CAPTURE(expect);
        CHECK(svg.find(expect) != std::string::npos);
    }
}

TEST_CASE("cli compare: fewer viewpoints than the sweep baseline at high coverage") {
    const fs::path out = fresh_dir("scanplan_cli_compare");
    const int rc = run_cli("compare --recipe rooms --width 90 --height 90 --res 0.1 --seed 2 --out " +
                           out.string());
    CHECK(rc == 0);
    nlohmann::json cj = nlohmann::json::parse(slurp(out / "compare.json"));
    const int ours = cj["ours"]["viewpoint_count"].get<int>();
    const int bcd = cj["bcd"]["viewpoint_count"].get<int>();
    CHECK(ours < bcd);
    CHECK(cj["ours"]["coverage_percent"].get<double>() >= 99.0);
    CHECK(cj["bcd"]["coverage_percent"].get<double>() >= 99.0);
    CHECK(cj["ratios"]["viewpoint_count"].get<double>() ==
          doctest::Approx(static_cast<double>(ours) / bcd));
    CHECK(fs::exists(out / "ours.svg"));
    CHECK(fs::exists(out / "bcd.svg"));
}

TEST_CASE("cli compare: single viewpoint beats the sweep in a tiny room") {
    const fs::path out = fresh_dir("scanplan_cli_tiny");
    REQUIRE(run_cli("compare --recipe empty --width 28 --height 28 --res 0.1 --out " +
                    out.string()) == 0);
    nlohmann::json cj = nlohmann::json::parse(slurp(out / "compare.json"));
    CHECK(cj["ours"]["viewpoint_count"].get<int>() == 1);
    CHECK(cj["bcd"]["viewpoint_count"].get<int>() > 1);
}

TEST_CASE("cli plan: disconnected free space exits 2 and names the stranded cells") {
    // Two sealed rooms.
    OccupancyGrid g = fixtures::grid_from_ascii({
        "##########",
        "#...##...#",
        "#...##...#",
        "#...##...#",
        "##########",
    });
    const fs::path dir = fresh_dir("scanplan_cli_split");
    save_map_files((dir / "split").string(), g);
    const std::string cmd = std::string(SCANPLAN_BIN) + " plan --map " +
                            (dir / "split.yaml").string() + " --inflate 0 --out " +
                            dir.string() + " 2> " + (dir / "err.txt").string() + " >/dev/null";
    const int rc = WEXITSTATUS(std::system(cmd.c_str()));
    CHECK(rc == 2);
    const std::string err = slurp(dir / "err.txt");
    CHECK(err.find("components") != std::string::npos);
    CHECK(err.find("unreachable") != std::string::npos);
}

TEST_CASE("cli exit codes for config and io failures") {
    CHECK(run_cli("plan --recipe not-a-recipe --out /tmp/scanplan_x") == 5);
    CHECK(run_cli("plan --map /nonexistent/map.yaml --out /tmp/scanplan_x") == 4);
    CHECK(run_cli("plan --out /tmp/scanplan_x") == 5);        // neither map nor recipe
    CHECK(run_cli("nonsense-subcommand") == 5);
    CHECK(run_cli("plan --recipe empty --width 20 --height 20 --eta 1.5 --out /tmp/scanplan_x") == 5);
}

TEST_CASE("cli flags override the config file") {
    const fs::path dir = fresh_dir("scanplan_cli_cfg");
    write_text_file((dir / "p.cfg").string(), "r = 1.0\nseed = 3\n");
    REQUIRE(run_cli("plan --recipe rooms --width 60 --height 60 --res 0.1 --config " +
                    (dir / "p.cfg").string() + " --r 2.0 --out " + dir.string()) == 0);
    nlohmann::json metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
    CHECK(metrics["config"]["r"].get<double>() == doctest::Approx(2.0));  // flag wins
    CHECK(metrics["config"]["seed"].get<int>() == 3);                     // file survives

    // Per-leg path lengths add up to the reported total.
    double sum = 0.0;
    for (const auto& leg : metrics["leg_lengths_m"]) sum += leg.get<double>();
    CHECK(sum == doctest::Approx(metrics["path_length_m"].get<double>()).epsilon(1e-9));
}

TEST_CASE("gen-world writes a loadable map triple") {
    const fs::path dir = fresh_dir("scanplan_cli_gen");
    REQUIRE(run_cli("gen-world --recipe loop --width 50 --height 50 --res 0.1 --seed 5 --out " +
                    (dir / "w").string()) == 0);
    OccupancyGrid from_pgm = load_map_files((dir / "w.yaml").string());
    OccupancyGrid from_json = grid_from_json(slurp(dir / "w.json"));
    CHECK(from_pgm.cells() == from_json.cells());
    CHECK(from_pgm.width() == 52);
}

TEST_CASE("close_loop returns the tour to its start") {
    PlanConfig cfg;
    cfg.close_loop = true;
    OccupancyGrid raw = fixtures::recipe_world("rooms", 60, 60, 7);
    PlanOutcome outcome = run_plan_pipeline(raw, cfg);
    REQUIRE(outcome.tour.sequence.size() >= 2);
    CHECK(outcome.tour.sequence.front() == outcome.tour.sequence.back());
    for (const TourLeg& leg : outcome.tour.legs) CHECK(leg.feasible);
}

TEST_CASE("svg layer toggles control the drawn elements") {
    const fs::path out = fresh_dir("scanplan_cli_layers");
    REQUIRE(run_cli("plan --recipe empty --width 30 --height 30 --res 0.1 "
                    "--svg-layers grid --out " +
                    out.string()) == 0);
    const std::string svg = slurp(out / "plan.svg");
    CHECK(count_occurrences(svg, "class=\"viewpoint\"") == 0);
    CHECK(count_occurrences(svg, "<polyline") == 0);
    CHECK(count_occurrences(svg, "class=\"occupied\"") > 0);
    CHECK(run_cli("plan --recipe empty --width 30 --height 30 --svg-layers bogus --out " +
                  out.string()) == 5);
}

TEST_CASE("render with missing artifacts exits 4") {
    CHECK(run_cli("render --grid /nonexistent/grid.json --viewpoints x.json "
                  "--tour y.json --out /tmp/out.svg") == 4);
}
