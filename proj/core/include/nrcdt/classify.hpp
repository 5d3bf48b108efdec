#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "nrcdt/cdt.hpp"
#include "nrcdt/datasets.hpp"
#include "nrcdt/raster.hpp"

namespace nrcdt {

enum class Representation { euclidean_pixels, rcdt_stack, mnrcdt };

[[nodiscard]] std::string_view to_string(Representation rep) noexcept;
/// Accepts "euclidean"/"euclidean_pixels", "rcdt"/"rcdt_stack", "mnrcdt".
[[nodiscard]] std::optional<Representation> parse_representation(std::string_view name) noexcept;

struct FeatureVector {
    std::vector<double> values;
    Representation representation = Representation::mnrcdt;
};

struct FeatureConfig {
    Representation representation = Representation::mnrcdt;
    std::size_t angles = 16;
    std::size_t quantiles = 64;
    /// Side length of the raster used by euclidean_pixels for measure inputs.
    std::size_t raster_size = 32;
    TransformOptions transform{};
};

/// euclidean_pixels rasterizes the measure (peak intensity scaled to 1),
/// rcdt_stack concatenates the R-CDT curves, mnrcdt returns the M-vector.
[[nodiscard]] FeatureVector featurize(const DiscreteMeasure2D& item, const FeatureConfig& cfg);
/// Raster input: euclidean_pixels flattens the image as given (peak scaled to 1);
/// the transport representations go through the pixel-center measure.
[[nodiscard]] FeatureVector featurize(const Raster& item, const FeatureConfig& cfg);

/// Features for every dataset item, computed on up to `threads` workers.
/// A failing item is reported with its index.
[[nodiscard]] std::vector<FeatureVector> featurize_all(const LabeledDataset& data, const FeatureConfig& cfg,
                                                       std::size_t threads = 1);

struct LabeledFeature {
    const FeatureVector* feature;
    int label;
};

[[nodiscard]] std::vector<LabeledFeature> pair_labels(const std::vector<FeatureVector>& features,
                                                      const LabeledDataset& data);

/// Label of the nearest reference; the lowest index wins ties.
/// Throws EmptyReferences or DimensionMismatch.
[[nodiscard]] int nn_classify(std::span<const LabeledFeature> references, const FeatureVector& query, CurveNorm norm);

struct SvmConfig {
    double reg = 1e-2;
    std::size_t max_iters = 10'000;
    double tol = 1e-8;
};

/// One binary machine: decision(x) = <weights, x> + bias, positive side = +1.
struct BinarySvm {
    std::vector<double> weights;
    double bias = 0.0;
    std::size_t iterations = 0;
    /// Best objective seen after each iteration (nonincreasing).
    std::vector<double> objective_trace;

    [[nodiscard]] double decision(std::span<const double> x) const;
};

/// Subgradient descent on (1/n) sum max(0, 1 - y (<w,x> + b)) + reg |w|^2 with
/// step 1/(reg (t+1)); returns the best iterate. Labels must be +1 or -1.
[[nodiscard]] BinarySvm svm_train_binary(std::span<const std::span<const double>> xs, std::span<const int> ys,
                                         const SvmConfig& cfg);

struct LinearModel {
    /// Sorted distinct training labels.
    std::vector<int> classes;
    /// One machine (classes[1] positive) for two classes, otherwise one-vs-rest.
    std::vector<BinarySvm> machines;

    [[nodiscard]] int predict(const FeatureVector& x) const;
};

/// Throws SingleClass or DimensionMismatch.
[[nodiscard]] LinearModel svm_train(std::span<const LabeledFeature> data, const SvmConfig& cfg);

struct NnConfig {
    CurveNorm norm = CurveNorm::chebyshev;
};

using Pipeline = std::variant<NnConfig, SvmConfig>;

using Predictor = std::function<int(const FeatureVector&)>;
using Trainer = std::function<Predictor(std::span<const LabeledFeature>)>;

[[nodiscard]] Trainer make_trainer(const Pipeline& pipeline);

struct CvReport {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    /// Population standard deviation of the fold accuracies.
    double std = 0.0;

    [[nodiscard]] static CvReport from_folds(std::vector<double> folds);
};

struct CvOptions {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    /// Train on one fold and test on the remaining k-1. False selects the
    /// conventional split (train on k-1, test on one).
    bool train_on_single_fold = true;
    std::size_t threads = 1;
};

/// Stratified fold index per item. Throws InvalidK or TooFewItems.
[[nodiscard]] std::vector<std::size_t> stratified_folds(std::span<const int> labels, int class_count,
                                                        std::size_t k, std::uint64_t seed);

[[nodiscard]] CvReport cross_validate(std::span<const LabeledFeature> data, int class_count, const CvOptions& opts,
                                      const Trainer& trainer);

[[nodiscard]] CvReport cross_validate(const LabeledDataset& data, const FeatureConfig& features,
                                      const CvOptions& opts, const Pipeline& pipeline);

/// Fraction of queries whose nearest reference carries the right label.
[[nodiscard]] double nn_accuracy(std::span<const LabeledFeature> references, std::span<const LabeledFeature> queries,
                                 CurveNorm norm);

/// Iteration r picks the r-th member of every class (modulo class size) as the
/// sole reference and classifies all remaining items; runs max class size
/// iterations and reports the accuracies like a CV report.
[[nodiscard]] CvReport nn_iterate_references(std::span<const LabeledFeature> data, int class_count, CurveNorm norm);

}  // namespace nrcdt
