// scanplan: view planning for panoramic scanning on 2D occupancy grids.
//
// Subcommands:
//   gen-world  write a synthetic PGM/YAML/JSON map from a recipe
//   plan       run the planner, emit viewpoints/tour/metrics JSON + SVG
//   compare    run planner and lawnmower baseline on the same inflated map
//   render     redraw the SVG from previously written artifacts

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "scanplan/config.hpp"
#include "scanplan/errors.hpp"
#include "scanplan/map_io.hpp"
#include "scanplan/pipeline.hpp"
#include "scanplan/worldgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCoverage = 2;
constexpr int kExitStranded = 3;
constexpr int kExitIo = 4;
constexpr int kExitConfig = 5;

struct CommonArgs {
    std::string map_yaml;
    std::string recipe;
    int width = 120;
    int height = 120;
    double resolution = 0.1;
    std::string config_file;
    std::string out_dir = ".";
    std::string svg_layers = "all";

    // Flag overrides (applied over the config file).
    std::optional<double> r, eta, inflate, target;
    std::optional<std::uint32_t> seed;
};

void add_common_options(CLI::App* cmd, CommonArgs& args, bool needs_map) {
    if (needs_map) {
        cmd->add_option("--map", args.map_yaml, "map YAML (with PGM sidecar image)");
        cmd->add_option("--recipe", args.recipe,
                        "synthetic world: empty|corridor|rooms|loop|random-obstacles");
    }
    cmd->add_option("--width", args.width, "recipe width in cells");
    cmd->add_option("--height", args.height, "recipe height in cells");
    cmd->add_option("--res", args.resolution, "recipe resolution in m/cell");
    cmd->add_option("--config", args.config_file, "flat key = value config file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "world/planner seed");
    cmd->add_option("--r", args.r, "sensor range in meters");
    cmd->add_option("--eta", args.eta, "detour cost balance, in [0,1)");
    cmd->add_option("--inflate", args.inflate, "obstacle inflation radius in meters");
    cmd->add_option("--target", args.target, "coverage target in (0,1]");
    cmd->add_option("--svg-layers", args.svg_layers,
                    "comma list of: grid,covered,viewpoints,steiner,path (or 'all')");
}

scanplan::PlanConfig resolve_config(const CommonArgs& args) {
    scanplan::PlanConfig cfg;
    if (!args.config_file.empty()) cfg = scanplan::load_config_file(args.config_file);
    if (args.r) cfg.sensor_range_r = *args.r;
    if (args.eta) cfg.eta = *args.eta;
    if (args.inflate) cfg.inflation_radius = *args.inflate;
    if (args.target) cfg.coverage_target = *args.target;
    if (args.seed) cfg.seed = *args.seed;
    cfg.validate();
    return cfg;
}

scanplan::OccupancyGrid load_input_grid(const CommonArgs& args,
                                        const scanplan::PlanConfig& cfg) {
    if (!args.map_yaml.empty() && !args.recipe.empty())
        throw scanplan::ConfigError("give either --map or --recipe, not both");
    if (!args.map_yaml.empty()) return scanplan::load_map_files(args.map_yaml);
    if (args.recipe.empty())
        throw scanplan::ConfigError("one of --map or --recipe is required");
    scanplan::WorldRecipe recipe;
    recipe.name = args.recipe;
    recipe.width = args.width;
    recipe.height = args.height;
    recipe.resolution = args.resolution;
    recipe.seed = cfg.seed;
    return scanplan::generate_world(recipe);
}

std::filesystem::path ensure_out_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw scanplan::MapIoError("cannot create output directory " + dir);
    return p;
}

int cmd_plan(const CommonArgs& args) {
    const scanplan::PlanConfig cfg = resolve_config(args);
    const scanplan::OccupancyGrid raw = load_input_grid(args, cfg);
    const std::filesystem::path out = ensure_out_dir(args.out_dir);

    scanplan::PlanOutcome outcome = scanplan::run_plan_pipeline(raw, cfg);

    scanplan::write_text_file((out / "grid.json").string(),
                              scanplan::grid_to_json(outcome.inflated));
    scanplan::write_text_file((out / "viewpoints.json").string(),
                              scanplan::viewpoints_to_json(outcome.inflated, outcome.viewpoints));
    scanplan::write_text_file((out / "tour.json").string(),
                              scanplan::tour_to_json(outcome.inflated, outcome, cfg));
    scanplan::write_text_file(
        (out / "metrics.json").string(),
        scanplan::metrics_to_json(outcome.metrics, outcome.inflated, cfg, outcome.warnings,
                                  &outcome.leg_paths));
    scanplan::RenderModel model = scanplan::make_render_model(outcome.inflated, outcome);
    scanplan::write_text_file((out / "plan.svg").string(),
                              scanplan::render_svg(model, scanplan::parse_svg_layers(args.svg_layers)));

    for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    if (outcome.disconnected) {
        std::cerr << "error: " << outcome.warnings.front() << "\n";
        return kExitCoverage;
    }
    if (!outcome.coverage_ok) {
        std::cerr << "error: coverage "
                  << outcome.viewpoints.coverage_over_reachable() * 100.0
                  << "% fell short of target " << cfg.coverage_target * 100.0 << "%\n";
        return kExitCoverage;
    }
    std::cout << "plan: " << outcome.metrics.viewpoint_count << " viewpoints, coverage "
              << outcome.metrics.coverage_percent << "%, path "
              << outcome.metrics.path_length_m << " m\n";
    return kExitOk;
}

int cmd_compare(const CommonArgs& args) {
    const scanplan::PlanConfig cfg = resolve_config(args);
    const scanplan::OccupancyGrid raw = load_input_grid(args, cfg);
    const std::filesystem::path out = ensure_out_dir(args.out_dir);

    scanplan::PlanOutcome ours = scanplan::run_plan_pipeline(raw, cfg);
    // The baseline sees the identical inflated grid.
    scanplan::BcdOutcome bcd = scanplan::run_bcd_pipeline(ours.inflated, cfg);

    scanplan::write_text_file((out / "compare.json").string(),
                              scanplan::compare_to_json(ours.metrics, bcd.metrics));

    const scanplan::SvgLayers layers = scanplan::parse_svg_layers(args.svg_layers);
    scanplan::RenderModel ours_model = scanplan::make_render_model(ours.inflated, ours);
    scanplan::write_text_file((out / "ours.svg").string(),
                              scanplan::render_svg(ours_model, layers));
    scanplan::RenderModel bcd_model;
    bcd_model.grid = &ours.inflated;
    bcd_model.viewpoint_cells = bcd.sweep.viewpoints;
    bcd_model.covered = bcd.covered;
    for (const scanplan::GridPath& leg : bcd.leg_paths)
        bcd_model.polylines.push_back(leg.cells);
    scanplan::write_text_file((out / "bcd.svg").string(),
                              scanplan::render_svg(bcd_model, layers));

    std::cout << "compare: ours " << ours.metrics.viewpoint_count << " viewpoints vs bcd "
              << bcd.metrics.viewpoint_count << "\n";
    if (ours.disconnected || !ours.coverage_ok) return kExitCoverage;
    return kExitOk;
}

struct RenderArgs {
    std::string grid_json;
    std::string viewpoints_json;
    std::string tour_json;
    std::string out_svg = "plan.svg";
    std::string svg_layers = "all";
};

int cmd_render(const RenderArgs& args) {
    const scanplan::OccupancyGrid grid =
        scanplan::grid_from_json(scanplan::read_text_file(args.grid_json));
    scanplan::RenderModel model = scanplan::render_model_from_artifacts(
        grid, scanplan::read_text_file(args.viewpoints_json),
        scanplan::read_text_file(args.tour_json));
    scanplan::write_text_file(args.out_svg,
                              scanplan::render_svg(model, scanplan::parse_svg_layers(args.svg_layers)));
    return kExitOk;
}

struct GenWorldArgs {
    std::string recipe = "rooms";
    int width = 120;
    int height = 120;
    double resolution = 0.1;
    std::uint32_t seed = 0;
    std::string out_base = "world";
};

int cmd_gen_world(const GenWorldArgs& args) {
    scanplan::WorldRecipe recipe;
    recipe.name = args.recipe;
    recipe.width = args.width;
    recipe.height = args.height;
    recipe.resolution = args.resolution;
    recipe.seed = args.seed;
    const scanplan::OccupancyGrid grid = scanplan::generate_world(recipe);
    scanplan::save_map_files(args.out_base, grid);
    scanplan::write_text_file(args.out_base + ".json", scanplan::grid_to_json(grid));
    std::cout << "gen-world: wrote " << args.out_base << ".pgm/.yaml/.json\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"View planning for panoramic scanning on 2D occupancy grids"};
    app.require_subcommand(1);

    CommonArgs plan_args, compare_args;
    RenderArgs render_args;
    GenWorldArgs gen_args;

    CLI::App* plan = app.add_subcommand("plan", "plan viewpoints and a scan tour");
    add_common_options(plan, plan_args, true);

    CLI::App* compare = app.add_subcommand("compare", "planner vs lawnmower baseline");
    add_common_options(compare, compare_args, true);

    CLI::App* render = app.add_subcommand("render", "draw SVG from artifacts");
    render->add_option("--grid", render_args.grid_json, "grid.json")->required();
    render->add_option("--viewpoints", render_args.viewpoints_json, "viewpoints.json")
        ->required();
    render->add_option("--tour", render_args.tour_json, "tour.json")->required();
    render->add_option("--out", render_args.out_svg, "output SVG path");
    render->add_option("--svg-layers", render_args.svg_layers, "layer list");

    CLI::App* gen = app.add_subcommand("gen-world", "write a synthetic map");
    gen->add_option("--recipe", gen_args.recipe, "recipe name")->required();
    gen->add_option("--width", gen_args.width, "cells");
    gen->add_option("--height", gen_args.height, "cells");
    gen->add_option("--res", gen_args.resolution, "m/cell");
    gen->add_option("--seed", gen_args.seed, "seed");
    gen->add_option("--out", gen_args.out_base, "output basename");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (plan->parsed()) return cmd_plan(plan_args);
        if (compare->parsed()) return cmd_compare(compare_args);
        if (render->parsed()) return cmd_render(render_args);
        if (gen->parsed()) return cmd_gen_world(gen_args);
    } catch (const scanplan::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const scanplan::MapIoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const scanplan::StrandedTourError& e) {
        std::cerr << "planning error: " << e.what() << "\n";
        return kExitStranded;
    } catch (const scanplan::PlanningError& e) {
        std::cerr << "planning error: " << e.what() << "\n";
        return kExitStranded;
    }
    return kExitConfig;
}
