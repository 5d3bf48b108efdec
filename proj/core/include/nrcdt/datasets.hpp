#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nrcdt/measures.hpp"
#include "nrcdt/radon.hpp"
#include "nrcdt/raster.hpp"

namespace nrcdt {

enum class TemplateKind { cross, shield, disk_ring };

inline constexpr TemplateKind kAllTemplates[] = {TemplateKind::cross, TemplateKind::shield, TemplateKind::disk_ring};

[[nodiscard]] std::string_view to_string(TemplateKind kind) noexcept;

/// Binary template symbol on a resolution x resolution raster (resolution >= 16).
[[nodiscard]] Raster make_template_raster(TemplateKind kind, std::size_t resolution);
[[nodiscard]] DiscreteMeasure2D make_template(TemplateKind kind, std::size_t resolution);

struct Interval {
    double lo;
    double hi;
};

enum class SamplerMode {
    /// translation ∘ rotation ∘ shear ∘ anisotropic scaling (∘ reflection).
    general,
    /// Exact symmetry subgroup of an L-angle grid: translation, isotropic
    /// scaling, rotation by multiples of pi/L, reflection across grid angles.
    grid_preserving,
};

struct AffineSamplerConfig {
    Interval rotation{0.0, 2.0 * std::numbers::pi};
    Interval scale_x{0.75, 1.25};
    Interval scale_y{0.75, 1.25};
    Interval shear{-0.25, 0.25};
    Interval translation_x{-0.2, 0.2};
    Interval translation_y{-0.2, 0.2};
    bool allow_reflection = false;
    std::uint64_t seed = 0;
    SamplerMode mode = SamplerMode::general;
    /// Grid size L for SamplerMode::grid_preserving.
    std::size_t grid_angles = 8;

    /// Throws InvalidConfig.
    void validate() const;
};

/// Parameters of one sampled transform, kept for provenance.
struct SampledAffine {
    AffineMap map = AffineMap::identity();
    double rotation = 0.0;
    double scale_x = 1.0;
    double scale_y = 1.0;
    double shear = 0.0;
    bool reflected = false;
    double reflection_angle = 0.0;
};

/// Draws the transform for stream `index`. Each index seeds its own
/// generator from (cfg.seed, index), so results are order-independent.
[[nodiscard]] SampledAffine sample_affine_at(const AffineSamplerConfig& cfg, std::uint64_t index);

/// The first n transforms of the stream; throws InvalidConfig for n == 0.
[[nodiscard]] std::vector<AffineMap> sample_affine(const AffineSamplerConfig& cfg, std::size_t n);

struct LabeledItem {
    DiscreteMeasure2D measure;
    int label;
    std::string provenance;
};

struct LabeledDataset {
    std::vector<LabeledItem> items;
    int class_count = 0;

    /// Throws InvalidConfig unless every label is in [0, class_count) and every class is present.
    void validate() const;
    [[nodiscard]] std::vector<std::size_t> class_sizes() const;
};

/// per_class pushforwards of each template, labelled by template index.
/// Item t * per_class + i uses sampler stream t * per_class + i.
/// Throws CollinearSupport or InvalidConfig.
[[nodiscard]] LabeledDataset generate_academic(std::span<const DiscreteMeasure2D> templates, std::size_t per_class,
                                               const AffineSamplerConfig& cfg, std::size_t threads = 1);

/// Recovers the affine map stored in a generated item's provenance.
[[nodiscard]] std::optional<AffineMap> provenance_map(std::string_view provenance);

/// Reads a JSON manifest {"class_count": n, "items": [{"path": p, "label": l}]}.
/// Paths are relative to the manifest directory; .pgm, .csv and .nrcdt files
/// are accepted. Errors: ParseError, MissingFile, ZeroMass, UnsupportedFormat.
[[nodiscard]] LabeledDataset load_images(const std::filesystem::path& manifest_path);

struct SaveOptions {
    /// Also export an 8-bit PGM rendering of each item.
    bool export_pgm = false;
    std::size_t raster_size = 64;
    std::string manifest_name = "manifest.json";
    std::string item_prefix = "item_";
};

/// Writes one atom file per item plus the manifest; returns the manifest path.
std::filesystem::path save_dataset(const LabeledDataset& dataset, const std::filesystem::path& dir,
                                   const SaveOptions& opts = {});

}  // namespace nrcdt
