#include "nrcdt/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <set>

#include "nrcdt/error.hpp"
#include "nrcdt/parallel.hpp"

namespace nrcdt {

std::string_view to_string(Representation rep) noexcept {
    switch (rep) {
        case Representation::euclidean_pixels: return "euclidean";
        case Representation::rcdt_stack: return "rcdt";
        case Representation::mnrcdt: return "mnrcdt";
    }
    return "unknown";
}

std::optional<Representation> parse_representation(std::string_view name) noexcept {
    if (name == "euclidean" || name == "euclidean_pixels") return Representation::euclidean_pixels;
    if (name == "rcdt" || name == "rcdt_stack") return Representation::rcdt_stack;
    if (name == "mnrcdt") return Representation::mnrcdt;
    return std::nullopt;
}

namespace {

std::vector<double> peak_normalized(const Raster& image) {
    std::vector<double> values = image.pixels;
    const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    if (peak > 0.0) {
        for (double& v : values) v /= peak;
    }
    return values;
}

}  // namespace

FeatureVector featurize(const DiscreteMeasure2D& item, const FeatureConfig& cfg) {
    FeatureVector out;
    out.representation = cfg.representation;
    switch (cfg.representation) {
        case Representation::euclidean_pixels:
            out.values = peak_normalized(rasterize(item, cfg.raster_size, cfg.raster_size));
            break;
        case Representation::rcdt_stack: {
            const RcdtField field =
                rcdt(item, AngleGrid(cfg.angles), QuantileGrid(cfg.quantiles), cfg.transform.include_antipodes);
            out.values.assign(field.values().begin(), field.values().end());
            break;
        }
        case Representation::mnrcdt:
            out.values = mnrcdt(item, AngleGrid(cfg.angles), QuantileGrid(cfg.quantiles), cfg.transform).values;
            break;
    }
    return out;
}

FeatureVector featurize(const Raster& item, const FeatureConfig& cfg) {
    if (cfg.representation == Representation::euclidean_pixels) {
        if (item.pixels.size() != item.height * item.width) {
            throw Error(ErrorKind::DimensionMismatch, "raster pixel count does not match its shape");
        }
        return {peak_normalized(item), Representation::euclidean_pixels};
    }
    return featurize(measure_from_raster(item), cfg);
}

std::vector<FeatureVector> featurize_all(const LabeledDataset& data, const FeatureConfig& cfg, std::size_t threads) {
    std::vector<FeatureVector> out(data.items.size());
    parallel_for(data.items.size(), threads, [&](std::size_t i) {
        try {
            out[i] = featurize(data.items[i].measure, cfg);
        } catch (const Error& e) {
            throw Error(e.kind(), "item " + std::to_string(i) + ": " + e.what(), i);
        }
    });
    return out;
}

std::vector<LabeledFeature> pair_labels(const std::vector<FeatureVector>& features, const LabeledDataset& data) {
    if (features.size() != data.items.size()) {
        throw Error(ErrorKind::DimensionMismatch, "feature count differs from item count");
    }
    std::vector<LabeledFeature> out;
    out.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) out.push_back({&features[i], data.items[i].label});
    return out;
}

int nn_classify(std::span<const LabeledFeature> references, const FeatureVector& query, CurveNorm norm) {
    if (references.empty()) throw Error(ErrorKind::EmptyReferences, "nearest-neighbour rule needs references");
    double best = std::numeric_limits<double>::infinity();
    int label = references.front().label;
    for (const auto& ref : references) {
        const double d = curve_distance(ref.feature->values, query.values, norm);
        if (d < best) {
            best = d;
            label = ref.label;
        }
    }
    return label;
}

double BinarySvm::decision(std::span<const double> x) const {
    if (x.size() != weights.size()) throw Error(ErrorKind::DimensionMismatch, "feature length differs from model");
    return std::inner_product(weights.begin(), weights.end(), x.begin(), bias);
}

namespace {

double svm_objective(std::span<const std::span<const double>> xs, std::span<const int> ys,
                     const std::vector<double>& w, double b, double reg, std::vector<double>& margins) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        margins[i] = ys[i] * std::inner_product(w.begin(), w.end(), xs[i].begin(), b);
        loss += std::max(0.0, 1.0 - margins[i]);
    }
    const double norm2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    return loss / static_cast<double>(xs.size()) + reg * norm2;
}

}  // namespace

BinarySvm svm_train_binary(std::span<const std::span<const double>> xs, std::span<const int> ys,
                           const SvmConfig& cfg) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw Error(ErrorKind::DimensionMismatch, "SVM needs one label per example");
    }
    if (!(cfg.reg > 0.0)) throw Error(ErrorKind::InvalidConfig, "SVM regularization must be positive");
    const std::size_t n = xs.size();
    const std::size_t d = xs.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        if (xs[i].size() != d) throw Error(ErrorKind::DimensionMismatch, "inconsistent feature lengths", i);
        if (ys[i] != 1 && ys[i] != -1) throw Error(ErrorKind::InvalidConfig, "binary labels must be +1 or -1", i);
    }

    std::vector<double> w(d, 0.0), grad(d);
    double b = 0.0;
    std::vector<double> margins(n);
    double current = svm_objective(xs, ys, w, b, cfg.reg, margins);

    BinarySvm best;
    best.weights = w;
    best.bias = b;
    double best_value = current;

    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < cfg.max_iters; ++t) {
        // margins holds the values for the current iterate.
        for (std::size_t j = 0; j < d; ++j) grad[j] = 2.0 * cfg.reg * w[j];
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (margins[i] < 1.0) {
                const double coef = -ys[i] * inv_n;
                for (std::size_t j = 0; j < d; ++j) grad[j] += coef * xs[i][j];
                grad_b += coef;
            }
        }
        const double step = 1.0 / (cfg.reg * static_cast<double>(t + 1));
        for (std::size_t j = 0; j < d; ++j) w[j] -= step * grad[j];
        b -= step * grad_b;

        const double next = svm_objective(xs, ys, w, b, cfg.reg, margins);
        if (next < best_value) {
            best_value = next;
            best.weights = w;
            best.bias = b;
        }
        best.objective_trace.push_back(best_value);
        best.iterations = t + 1;
        if (std::abs(next - current) < cfg.tol) break;
        current = next;
    }
    return best;
}

int LinearModel::predict(const FeatureVector& x) const {
    if (classes.size() == 2 && machines.size() == 1) {
        return machines.front().decision(x.values) > 0.0 ? classes[1] : classes[0];
    }
    double best = -std::numeric_limits<double>::infinity();
    int label = classes.front();
    for (std::size_t c = 0; c < machines.size(); ++c) {
        const double v = machines[c].decision(x.values);
        if (v > best) {
            best = v;
            label = classes[c];
        }
    }
    return label;
}

LinearModel svm_train(std::span<const LabeledFeature> data, const SvmConfig& cfg) {
    if (data.empty()) throw Error(ErrorKind::SingleClass, "no training examples");
    std::set<int> distinct;
    std::vector<std::span<const double>> xs;
    xs.reserve(data.size());
    const std::size_t d = data.front().feature->values.size();
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].feature->values.size() != d) {
            throw Error(ErrorKind::DimensionMismatch, "inconsistent feature lengths", i);
        }
        distinct.insert(data[i].label);
        xs.emplace_back(data[i].feature->values);
    }
    if (distinct.size() < 2) throw Error(ErrorKind::SingleClass, "training data contains a single class");

    LinearModel model;
    model.classes.assign(distinct.begin(), distinct.end());
    auto train_for = [&](int positive) {
        std::vector<int> ys(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) ys[i] = data[i].label == positive ? 1 : -1;
        return svm_train_binary(xs, ys, cfg);
    };
    if (model.classes.size() == 2) {
        model.machines.push_back(train_for(model.classes[1]));
    } else {
        for (int c : model.classes) model.machines.push_back(train_for(c));
    }
    return model;
}

Trainer make_trainer(const Pipeline& pipeline) {
    if (const auto* nn = std::get_if<NnConfig>(&pipeline)) {
        const CurveNorm norm = nn->norm;
        return [norm](std::span<const LabeledFeature> train) -> Predictor {
            std::vector<LabeledFeature> refs(train.begin(), train.end());
            return [refs = std::move(refs), norm](const FeatureVector& q) { return nn_classify(refs, q, norm); };
        };
    }
    const SvmConfig svm = std::get<SvmConfig>(pipeline);
    return [svm](std::span<const LabeledFeature> train) -> Predictor {
        auto model = std::make_shared<const LinearModel>(svm_train(train, svm));
        return [model](const FeatureVector& q) { return model->predict(q); };
    };
}

CvReport CvReport::from_folds(std::vector<double> folds) {
    CvReport r;
    r.fold_accuracies = std::move(folds);
    if (r.fold_accuracies.empty()) return r;
    const double n = static_cast<double>(r.fold_accuracies.size());
    r.mean = std::accumulate(r.fold_accuracies.begin(), r.fold_accuracies.end(), 0.0) / n;
    double var = 0.0;
    for (double a : r.fold_accuracies) var += (a - r.mean) * (a - r.mean);
    r.std = std::sqrt(var / n);
    return r;
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, int class_count, std::size_t k,
                                          std::uint64_t seed) {
    if (k < 2) throw Error(ErrorKind::InvalidK, "cross validation needs k >= 2");
    if (class_count <= 0) throw Error(ErrorKind::InvalidConfig, "class_count must be positive");
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(class_count));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= class_count) {
            throw Error(ErrorKind::InvalidConfig, "label out of range", i);
        }
        members[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> fold(labels.size(), 0);
    for (std::size_t c = 0; c < members.size(); ++c) {
        auto& idx = members[c];
        if (idx.size() < k) {
            throw Error(ErrorKind::TooFewItems, "class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                                                    " items, fewer than k = " + std::to_string(k));
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t p = 0; p < idx.size(); ++p) fold[idx[p]] = p % k;
    }
    return fold;
}

CvReport cross_validate(std::span<const LabeledFeature> data, int class_count, const CvOptions& opts,
                        const Trainer& trainer) {
    std::vector<int> labels(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) labels[i] = data[i].label;
    const std::vector<std::size_t> fold = stratified_folds(labels, class_count, opts.k, opts.seed);

    std::vector<double> accuracies(opts.k, 0.0);
    parallel_for(opts.k, opts.threads, [&](std::size_t f) {
        std::vector<LabeledFeature> train, test;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const bool in_fold = fold[i] == f;
            (in_fold == opts.train_on_single_fold ? train : test).push_back(data[i]);
        }
        const Predictor predict = trainer(train);
        std::size_t correct = 0;
        for (const auto& q : test) correct += predict(*q.feature) == q.label ? 1 : 0;
        accuracies[f] = static_cast<double>(correct) / static_cast<double>(test.size());
    });
    return CvReport::from_folds(std::move(accuracies));
}

CvReport cross_validate(const LabeledDataset& data, const FeatureConfig& features, const CvOptions& opts,
                        const Pipeline& pipeline) {
    const std::vector<FeatureVector> fv = featurize_all(data, features, opts.threads);
    const std::vector<LabeledFeature> labelled = pair_labels(fv, data);
    return cross_validate(labelled, data.class_count, opts, make_trainer(pipeline));
}

double nn_accuracy(std::span<const LabeledFeature> references, std::span<const LabeledFeature> queries,
                   CurveNorm norm) {
    if (queries.empty()) throw Error(ErrorKind::TooFewItems, "no queries to classify");
    std::size_t correct = 0;
    for (const auto& q : queries) correct += nn_classify(references, *q.feature, norm) == q.label ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(queries.size());
}

CvReport nn_iterate_references(std::span<const LabeledFeature> data, int class_count, CurveNorm norm) {
    if (class_count <= 0) throw Error(ErrorKind::InvalidConfig, "class_count must be positive");
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(class_count));
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].label < 0 || data[i].label >= class_count) {
            throw Error(ErrorKind::InvalidConfig, "label out of range", i);
        }
        members[static_cast<std::size_t>(data[i].label)].push_back(i);
    }
    std::size_t rounds = 0;
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (members[c].size() < 2) {
            throw Error(ErrorKind::TooFewItems, "class " + std::to_string(c) + " needs a reference and a query");
        }
        rounds = std::max(rounds, members[c].size());
    }
    std::vector<double> accuracies;
    accuracies.reserve(rounds);
    for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<LabeledFeature> refs, queries;
        std::vector<bool> is_ref(data.size(), false);
        for (const auto& idx : members) is_ref[idx[r % idx.size()]] = true;
        for (std::size_t i = 0; i < data.size(); ++i) (is_ref[i] ? refs : queries).push_back(data[i]);
        accuracies.push_back(nn_accuracy(refs, queries, norm));
    }
    return CvReport::from_folds(std::move(accuracies));
}

}  // namespace nrcdt
