#include "scanplan/map_io.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scanplan/errors.hpp"

namespace scanplan {

namespace {

// Skips whitespace and '#' comment lines in a PGM header.
void skip_pgm_separators(const std::vector<std::uint8_t>& b, std::size_t& i) {
    while (i < b.size()) {
        if (std::isspace(b[i])) { ++i; continue; }
        if (b[i] == '#') {
            while (i < b.size() && b[i] != '\n') ++i;
            continue;
        }
        break;
    }
}

int parse_pgm_int(const std::vector<std::uint8_t>& b, std::size_t& i) {
    skip_pgm_separators(b, i);
    if (i >= b.size() || !std::isdigit(b[i])) throw MapIoError("malformed PGM header");
    long v = 0;
    while (i < b.size() && std::isdigit(b[i])) {
        v = v * 10 + (b[i] - '0');
        if (v > 1 << 30) throw MapIoError("PGM header value out of range");
        ++i;
    }
    return static_cast<int>(v);
}

}  // namespace

PgmImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
        throw MapIoError("not a P5/P2 PGM image");
    const bool binary = bytes[1] == '5';
    std::size_t i = 2;
    PgmImage img;
    img.width = parse_pgm_int(bytes, i);
    img.height = parse_pgm_int(bytes, i);
    const int maxval = parse_pgm_int(bytes, i);
    if (img.width <= 0 || img.height <= 0) throw MapIoError("PGM dimensions must be positive");
    if (maxval <= 0 || maxval > 255) throw MapIoError("only 8-bit PGM is supported");

    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    img.pixels.reserve(count);
    if (binary) {
        if (i >= bytes.size() || !std::isspace(bytes[i]))
            throw MapIoError("malformed PGM header");
        ++i;  // single whitespace between maxval and raster
        if (bytes.size() - i < count) throw MapIoError("PGM pixel data truncated");
        img.pixels.assign(bytes.begin() + i, bytes.begin() + i + count);
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            const int v = parse_pgm_int(bytes, i);
            if (v > maxval) throw MapIoError("PGM pixel exceeds maxval");
            img.pixels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_pgm(const PgmImage& img, bool binary) {
    std::ostringstream head;
    head << (binary ? "P5" : "P2") << "\n"
         << img.width << " " << img.height << "\n255\n";
    std::string h = head.str();
    std::vector<std::uint8_t> out(h.begin(), h.end());
    if (binary) {
        out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    } else {
        std::ostringstream body;
        for (int r = 0; r < img.height; ++r) {
            for (int c = 0; c < img.width; ++c) {
                body << static_cast<int>(img.pixels[static_cast<std::size_t>(r) * img.width + c]);
                body << (c + 1 == img.width ? '\n' : ' ');
            }
        }
        std::string b = body.str();
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

PgmImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MapIoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_pgm(bytes);
}

void write_pgm(const std::string& path, const PgmImage& img, bool binary) {
    std::vector<std::uint8_t> bytes = encode_pgm(img, binary);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MapIoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

MapMeta read_map_yaml(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MapIoError("cannot open " + path);
    MapMeta meta;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));
        try {
            if (key == "image") {
                meta.image = value;
            } else if (key == "resolution") {
                meta.resolution = std::stod(value);
            } else if (key == "negate") {
                meta.negate = std::stoi(value) != 0;
            } else if (key == "occupied_thresh") {
                meta.occupied_thresh = std::stod(value);
            } else if (key == "free_thresh") {
                meta.free_thresh = std::stod(value);
            } else if (key == "origin") {
                std::string v = value;
                for (char& ch : v)
                    if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
                std::istringstream os(v);
                if (!(os >> meta.origin.x >> meta.origin.y >> meta.origin_theta))
                    throw MapIoError("bad origin in " + path);
            }
        } catch (const MapIoError&) {
            throw;
        } catch (const std::exception&) {
            throw MapIoError("bad value for key '" + key + "' in " + path);
        }
    }
    if (meta.image.empty()) throw MapIoError("map YAML missing 'image' key: " + path);
    return meta;
}

void write_map_yaml(const std::string& path, const MapMeta& meta) {
    std::ostringstream out;
    out.precision(17);
    out << "image: " << meta.image << "\n"
        << "resolution: " << meta.resolution << "\n"
        << "origin: [" << meta.origin.x << ", " << meta.origin.y << ", " << meta.origin_theta
        << "]\n"
        << "negate: " << (meta.negate ? 1 : 0) << "\n"
        << "occupied_thresh: " << meta.occupied_thresh << "\n"
        << "free_thresh: " << meta.free_thresh << "\n";
    write_text_file(path, out.str());
}

OccupancyGrid load_map(const PgmImage& img, const MapMeta& meta) {
    if (!(meta.resolution > 0.0)) throw MapIoError("resolution must be positive");
    if (meta.free_thresh > meta.occupied_thresh)
        throw MapIoError("free_thresh must not exceed occupied_thresh");
    OccupancyGrid grid(img.width, img.height, meta.resolution, meta.origin,
                       meta.origin_theta);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const double p = img.pixels[static_cast<std::size_t>(r) * img.width + c];
            const double occ = meta.negate ? p / 255.0 : (255.0 - p) / 255.0;
            Cell cell = Cell::Unknown;
            if (occ >= meta.occupied_thresh)
                cell = Cell::Occupied;
            else if (occ <= meta.free_thresh)
                cell = Cell::Free;
            grid.set(r, c, cell);
        }
    }
    return grid;
}

OccupancyGrid load_map_files(const std::string& yaml_path) {
    MapMeta meta = read_map_yaml(yaml_path);
    std::filesystem::path img_path(meta.image);
    if (img_path.is_relative())
        img_path = std::filesystem::path(yaml_path).parent_path() / img_path;
    return load_map(read_pgm(img_path.string()), meta);
}

void save_map_files(const std::string& basename, const OccupancyGrid& grid) {
    PgmImage img;
    img.width = grid.width();
    img.height = grid.height();
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            std::uint8_t p = 205;  // Unknown
            if (grid.at(r, c) == Cell::Free) p = 254;
            else if (grid.at(r, c) == Cell::Occupied) p = 0;
            img.pixels[static_cast<std::size_t>(r) * img.width + c] = p;
        }
    }
    write_pgm(basename + ".pgm", img);

    MapMeta meta;
    meta.image = std::filesystem::path(basename + ".pgm").filename().string();
    meta.resolution = grid.resolution();
    meta.origin = grid.origin();
    meta.origin_theta = grid.origin_theta();
    write_map_yaml(basename + ".yaml", meta);
}

std::string grid_to_json(const OccupancyGrid& grid) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["width"] = grid.width();
    j["height"] = grid.height();
    j["resolution"] = grid.resolution();
    j["origin"] = {grid.origin().x, grid.origin().y, grid.origin_theta()};
    std::vector<std::string> rows;
    rows.reserve(grid.height());
    for (int r = 0; r < grid.height(); ++r) {
        std::string row(grid.width(), 'F');
        for (int c = 0; c < grid.width(); ++c) {
            if (grid.at(r, c) == Cell::Occupied) row[c] = 'O';
            else if (grid.at(r, c) == Cell::Unknown) row[c] = 'U';
        }
        rows.push_back(std::move(row));
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

OccupancyGrid grid_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw MapIoError(std::string("bad grid JSON: ") + e.what());
    }
    try {
        const int w = j.at("width").get<int>();
        const int h = j.at("height").get<int>();
        const double res = j.at("resolution").get<double>();
        const auto& org = j.at("origin");
        OccupancyGrid grid(w, h, res, {org.at(0).get<double>(), org.at(1).get<double>()},
                           org.at(2).get<double>());
        const auto& rows = j.at("rows");
        if (static_cast<int>(rows.size()) != h) throw MapIoError("grid JSON row count mismatch");
        for (int r = 0; r < h; ++r) {
            const std::string row = rows.at(r).get<std::string>();
            if (static_cast<int>(row.size()) != w)
                throw MapIoError("grid JSON row width mismatch");
            for (int c = 0; c < w; ++c) {
                Cell cell = Cell::Free;
                if (row[c] == 'O') cell = Cell::Occupied;
                else if (row[c] == 'U') cell = Cell::Unknown;
                else if (row[c] != 'F') throw MapIoError("grid JSON bad cell class");
                grid.set(r, c, cell);
            }
        }
        return grid;
    } catch (const MapIoError&) {
        throw;
    } catch (const std::exception& e) {
        throw MapIoError(std::string("bad grid JSON: ") + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MapIoError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw MapIoError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MapIoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace scanplan
