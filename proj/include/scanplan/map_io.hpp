#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scanplan/grid.hpp"

namespace scanplan {

// Sidecar metadata in the de-facto robot map-server layout.
struct MapMeta {
    std::string image;  // PGM filename, relative to the YAML

    double resolution = OccupancyGrid::kDefaultResolution;
    Vec2 origin{0.0, 0.0};
    double origin_theta = 0.0;
    bool negate = false;
    double occupied_thresh = 0.65;
    double free_thresh = 0.196;
};

// Grayscale raster (P5 or P2 PGM), 8-bit.
struct PgmImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major
};

PgmImage decode_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_pgm(const PgmImage& img, bool binary = true);

PgmImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const PgmImage& img, bool binary = true);

MapMeta read_map_yaml(const std::string& path);
void write_map_yaml(const std::string& path, const MapMeta& meta);

// Classify pixels into the three cell classes:
//   occ = negate ? p/255 : (255-p)/255
//   occ >= occupied_thresh -> Occupied, occ <= free_thresh -> Free, else Unknown
OccupancyGrid load_map(const PgmImage& img, const MapMeta& meta);

// Loads the YAML sidecar and its referenced image.
OccupancyGrid load_map_files(const std::string& yaml_path);

// Writes <basename>.pgm and <basename>.yaml; Free -> 254, Occupied -> 0,
// Unknown -> 205 (lossless under the default thresholds).
void save_map_files(const std::string& basename, const OccupancyGrid& grid);

// Portable three-class JSON dump used by test fixtures and `render`.
std::string grid_to_json(const OccupancyGrid& grid);
OccupancyGrid grid_from_json(const std::string& json_text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace scanplan
