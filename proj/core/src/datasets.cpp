#include "nrcdt/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nrcdt/error.hpp"
#include "nrcdt/io.hpp"
#include "nrcdt/parallel.hpp"

namespace nrcdt {

using json = nlohmann::json;

std::string_view to_string(TemplateKind kind) noexcept {
    switch (kind) {
        case TemplateKind::cross: return "cross";
        case TemplateKind::shield: return "shield";
        case TemplateKind::disk_ring: return "disk_ring";
    }
    return "unknown";
}

namespace {

bool cross_contains(double x, double y) {
    constexpr double arm = 0.30;
    constexpr double half_width = 0.08;
    return (std::abs(x) <= half_width && std::abs(y) <= arm) || (std::abs(y) <= half_width && std::abs(x) <= arm);
}

// Heater shield with an off-center hole and a slanted tip: no symmetry axis.
bool shield_contains(double x, double y) {
    constexpr double half_width = 0.27;
    constexpr double top = 0.30;
    constexpr double tip_depth = 0.34;
    constexpr double tip_x = 0.08;
    bool inside = false;
    if (y >= 0.0 && y <= top) {
        inside = std::abs(x) <= half_width;
    } else if (y < 0.0 && y >= -tip_depth) {
        const double s = -y / tip_depth;  // 0 at the shoulder, 1 at the tip
        const double center = tip_x * s;
        const double half = half_width * std::sqrt(std::max(0.0, 1.0 - s * s));
        inside = std::abs(x - center) <= half;
    }
    const double hx = x + 0.11;
    const double hy = y - 0.12;
    if (hx * hx + hy * hy <= 0.075 * 0.075) inside = false;
    return inside;
}

bool disk_ring_contains(double x, double y) {
    const double r = std::hypot(x, y);
    return r <= 0.10 || (r >= 0.22 && r <= 0.32);
}

double draw(std::mt19937_64& rng, Interval iv) {
    if (iv.lo == iv.hi) return iv.lo;
    return std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng);
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

void check_interval(Interval iv, const char* name) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
        throw Error(ErrorKind::InvalidConfig, std::string(name) + " must be a finite interval with lo <= hi");
    }
}

std::string provenance_json(std::size_t template_index, std::size_t stream, const SampledAffine& s) {
    const AffineMap& m = s.map;
    json j;
    j["template"] = template_index;
    j["stream"] = stream;
    j["A"] = {m.a11(), m.a12(), m.a21(), m.a22()};
    j["y"] = {m.y1(), m.y2()};
    j["rotation"] = s.rotation;
    j["scale"] = {s.scale_x, s.scale_y};
    j["shear"] = s.shear;
    j["reflected"] = s.reflected;
    if (s.reflected) j["reflection_angle"] = s.reflection_angle;
    return j.dump();
}

}  // namespace

Raster make_template_raster(TemplateKind kind, std::size_t resolution) {
    if (resolution < 16) throw Error(ErrorKind::InvalidConfig, "template resolution must be at least 16");
    Raster image(resolution, resolution);
    for (std::size_t r = 0; r < resolution; ++r) {
        for (std::size_t c = 0; c < resolution; ++c) {
            const Point2 p = pixel_center(r, c, resolution, resolution);
            bool on = false;
            switch (kind) {
                case TemplateKind::cross: on = cross_contains(p.x, p.y); break;
                case TemplateKind::shield: on = shield_contains(p.x, p.y); break;
                case TemplateKind::disk_ring: on = disk_ring_contains(p.x, p.y); break;
            }
            image.at(r, c) = on ? 1.0 : 0.0;
        }
    }
    return image;
}

DiscreteMeasure2D make_template(TemplateKind kind, std::size_t resolution) {
    return measure_from_raster(make_template_raster(kind, resolution));
}

void AffineSamplerConfig::validate() const {
    check_interval(rotation, "rotation_range");
    check_interval(scale_x, "scale_range.x");
    check_interval(scale_y, "scale_range.y");
    check_interval(shear, "shear_range");
    check_interval(translation_x, "translation_range.x");
    check_interval(translation_y, "translation_range.y");
    if (!(scale_x.lo > 0.0) || !(scale_y.lo > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "scale_range lower bounds must be positive");
    }
    if (mode == SamplerMode::grid_preserving && grid_angles == 0) {
        throw Error(ErrorKind::InvalidConfig, "grid-preserving sampling needs grid_angles >= 1");
    }
}

SampledAffine sample_affine_at(const AffineSamplerConfig& cfg, std::uint64_t index) {
    cfg.validate();
    auto rng = stream_rng(cfg.seed, index);
    SampledAffine s;
    if (cfg.mode == SamplerMode::grid_preserving) {
        const auto L = static_cast<std::uint64_t>(cfg.grid_angles);
        const std::uint64_t steps = std::uniform_int_distribution<std::uint64_t>(0, 2 * L - 1)(rng);
        s.rotation = static_cast<double>(steps) * std::numbers::pi / static_cast<double>(L);
        s.scale_x = s.scale_y = draw(rng, cfg.scale_x);
        const double tx = draw(rng, cfg.translation_x);
        const double ty = draw(rng, cfg.translation_y);
        AffineMap linear = AffineMap::rotation(s.rotation);
        if (cfg.allow_reflection && std::bernoulli_distribution(0.5)(rng)) {
            const std::uint64_t j = std::uniform_int_distribution<std::uint64_t>(0, L - 1)(rng);
            // Reflection across the grid line at angle j*pi/L.
            s.reflected = true;
            s.reflection_angle = static_cast<double>(j) * std::numbers::pi / static_cast<double>(L);
            linear = linear.compose(AffineMap::reflection(2.0 * s.reflection_angle));
        }
        linear = linear.compose(AffineMap::scaling(s.scale_x, s.scale_x));
        s.map = AffineMap::translation(tx, ty).compose(linear);
        return s;
    }
    s.rotation = draw(rng, cfg.rotation);
    s.scale_x = draw(rng, cfg.scale_x);
    s.scale_y = draw(rng, cfg.scale_y);
    s.shear = draw(rng, cfg.shear);
    const double tx = draw(rng, cfg.translation_x);
    const double ty = draw(rng, cfg.translation_y);
    AffineMap linear =
        AffineMap::rotation(s.rotation).compose(AffineMap::shear(s.shear)).compose(AffineMap::scaling(s.scale_x, s.scale_y));
    if (cfg.allow_reflection && std::bernoulli_distribution(0.5)(rng)) {
        s.reflected = true;
        linear = linear.compose(AffineMap::scaling(1.0, -1.0));
    }
    s.map = AffineMap::translation(tx, ty).compose(linear);
    return s;
}

std::vector<AffineMap> sample_affine(const AffineSamplerConfig& cfg, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidConfig, "sample count must be at least 1");
    std::vector<AffineMap> maps;
    maps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) maps.push_back(sample_affine_at(cfg, i).map);
    return maps;
}

void LabeledDataset::validate() const {
    if (class_count <= 0) throw Error(ErrorKind::InvalidConfig, "class_count must be positive");
    std::vector<std::size_t> sizes(static_cast<std::size_t>(class_count), 0);
    for (std::size_t i = 0; i < items.size(); ++i) {
        const int label = items[i].label;
        if (label < 0 || label >= class_count) {
            throw Error(ErrorKind::InvalidConfig, "label " + std::to_string(label) + " out of range", i);
        }
        ++sizes[static_cast<std::size_t>(label)];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) throw Error(ErrorKind::InvalidConfig, "class " + std::to_string(c) + " has no items");
    }
}

std::vector<std::size_t> LabeledDataset::class_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(class_count, 0)), 0);
    for (const auto& item : items) {
        if (item.label >= 0 && item.label < class_count) ++sizes[static_cast<std::size_t>(item.label)];
    }
    return sizes;
}

LabeledDataset generate_academic(std::span<const DiscreteMeasure2D> templates, std::size_t per_class,
                                 const AffineSamplerConfig& cfg, std::size_t threads) {
    if (templates.empty()) throw Error(ErrorKind::InvalidConfig, "at least one template is required");
    if (per_class == 0) throw Error(ErrorKind::InvalidConfig, "per_class must be at least 1");
    cfg.validate();
    for (std::size_t t = 0; t < templates.size(); ++t) {
        if (!is_non_collinear(templates[t])) {
            throw Error(ErrorKind::CollinearSupport, "template " + std::to_string(t) + " is collinear", t);
        }
    }
    const std::size_t total = templates.size() * per_class;
    std::vector<std::optional<LabeledItem>> slots(total);
    parallel_for(total, threads, [&](std::size_t i) {
        const std::size_t t = i / per_class;
        const SampledAffine s = sample_affine_at(cfg, i);
        slots[i].emplace(LabeledItem{apply_affine(templates[t], s.map), static_cast<int>(t), provenance_json(t, i, s)});
    });
    LabeledDataset out;
    out.class_count = static_cast<int>(templates.size());
    out.items.reserve(total);
    for (auto& slot : slots) out.items.push_back(std::move(*slot));
    return out;
}

std::optional<AffineMap> provenance_map(std::string_view provenance) {
    const json j = json::parse(provenance, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("A") || !j.contains("y")) return std::nullopt;
    try {
        const auto& a = j.at("A");
        const auto& y = j.at("y");
        if (!a.is_array() || a.size() != 4 || !y.is_array() || y.size() != 2) return std::nullopt;
        return AffineMap(a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>(),
                         y[0].get<double>(), y[1].get<double>());
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

namespace {

DiscreteMeasure2D load_item(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") return measure_from_raster(io::read_pgm_file(path));
    if (ext == ".csv") return measure_from_raster(io::read_csv_grid_file(path));
    if (ext == ".nrcdt") return io::read_atoms_file(path);
    throw Error(ErrorKind::UnsupportedFormat, "unsupported image format '" + ext + "' for " + path.string());
}

}  // namespace

LabeledDataset load_images(const std::filesystem::path& manifest_path) {
    const std::string text = io::read_file(manifest_path);
    const std::string where = manifest_path.string();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, where + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("class_count") || !doc["class_count"].is_number_integer()) {
        throw Error(ErrorKind::ParseError, where + ": manifest needs an integer \"class_count\"");
    }
    if (!doc.contains("items") || !doc["items"].is_array()) {
        throw Error(ErrorKind::ParseError, where + ": manifest needs an \"items\" array");
    }
    LabeledDataset out;
    out.class_count = doc["class_count"].get<int>();
    if (out.class_count <= 0) throw Error(ErrorKind::ParseError, where + ": class_count must be positive");
    const std::filesystem::path base = manifest_path.parent_path();
    const auto& items = doc["items"];
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& entry = items[i];
        const std::string loc = where + ": items[" + std::to_string(i) + "]";
        if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string() || !entry.contains("label") ||
            !entry["label"].is_number_integer()) {
            throw Error(ErrorKind::ParseError, loc + " needs string \"path\" and integer \"label\"", i);
        }
        const int label = entry["label"].get<int>();
        if (label < 0 || label >= out.class_count) {
            throw Error(ErrorKind::ParseError, loc + ": label " + std::to_string(label) + " out of range", i);
        }
        const std::filesystem::path path = base / entry["path"].get<std::string>();
        if (!std::filesystem::exists(path)) throw Error(ErrorKind::MissingFile, path.string(), i);
        std::string provenance = path.filename().string();
        if (entry.contains("provenance") && entry["provenance"].is_string()) {
            provenance = entry["provenance"].get<std::string>();
        }
        try {
            out.items.push_back(LabeledItem{load_item(path), label, std::move(provenance)});
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::ZeroMass) {
                throw Error(ErrorKind::ZeroMass, "item " + std::to_string(i) + " (" + path.string() + ") has no mass", i);
            }
            throw;
        }
    }
    const auto sizes = out.class_sizes();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) throw Error(ErrorKind::ParseError, where + ": class " + std::to_string(c) + " has no items");
    }
    return out;
}

std::filesystem::path save_dataset(const LabeledDataset& dataset, const std::filesystem::path& dir,
                                   const SaveOptions& opts) {
    dataset.validate();
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["class_count"] = dataset.class_count;
    manifest["items"] = json::array();
    for (std::size_t i = 0; i < dataset.items.size(); ++i) {
        const auto& item = dataset.items[i];
        char stem[64];
        std::snprintf(stem, sizeof stem, "%s%05zu", opts.item_prefix.c_str(), i);
        const std::string atom_name = std::string(stem) + ".nrcdt";
        std::ostringstream bytes;
        io::write_atoms(bytes, item.measure);
        io::write_file_atomic(dir / atom_name, bytes.str());
        json entry{{"path", atom_name}, {"label", item.label}};
        if (!item.provenance.empty()) entry["provenance"] = item.provenance;
        if (opts.export_pgm) {
            std::ostringstream pgm;
            io::write_pgm(pgm, rasterize(item.measure, opts.raster_size, opts.raster_size));
            const std::string pgm_name = std::string(stem) + ".pgm";
            io::write_file_atomic(dir / pgm_name, pgm.str());
            entry["raster"] = pgm_name;
        }
        manifest["items"].push_back(std::move(entry));
    }
    const std::filesystem::path manifest_path = dir / opts.manifest_name;
    io::write_file_atomic(manifest_path, manifest.dump(2) + "\n");
    return manifest_path;
}

}  // namespace nrcdt
