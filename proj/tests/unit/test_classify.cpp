#include <doctest.h>

#include <cmath>
#include <numeric>

#include <nrcdt/classify.hpp>
#include <nrcdt/error.hpp>

#include "support.hpp"

using namespace nrcdt;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an nrcdt::Error");
    return ErrorKind::IoError;
}

FeatureVector fv(std::vector<double> v) { return {std::move(v), Representation::mnrcdt}; }

std::vector<LabeledFeature> label(const std::vector<FeatureVector>& xs, const std::vector<int>& ys) {
    std::vector<LabeledFeature> out;
    for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({&xs[i], ys[i]});
    return out;
}

}  // namespace

TEST_CASE("representation names") {
    CHECK(to_string(Representation::euclidean_pixels) == "euclidean");
    CHECK(parse_representation("rcdt_stack") == Representation::rcdt_stack);
    CHECK(parse_representation("rcdt") == Representation::rcdt_stack);
    CHECK(parse_representation("mnrcdt") == Representation::mnrcdt);
    CHECK_FALSE(parse_representation("pixels").has_value());
}

TEST_CASE("feature shapes") {
    const auto m = make_template(TemplateKind::shield, 32);
    FeatureConfig cfg;
    cfg.angles = 8;
    cfg.quantiles = 64;
    CHECK(featurize(m, cfg).values.size() == 64);
    cfg.representation = Representation::rcdt_stack;
    CHECK(featurize(m, cfg).values.size() == 1024);
    cfg.representation = Representation::euclidean_pixels;
    cfg.raster_size = 32;
    const auto pixels = featurize(m, cfg);
    CHECK(pixels.values.size() == 1024);
    CHECK(*std::max_element(pixels.values.begin(), pixels.values.end()) == 1.0);
    CHECK(featurize(make_template_raster(TemplateKind::cross, 32), cfg).values.size() == 1024);
}

TEST_CASE("mnrcdt features reject collinear items with the item index") {
    LabeledDataset ds;
    ds.class_count = 1;
    ds.items.push_back({make_template(TemplateKind::cross, 16), 0, ""});
    ds.items.push_back({make_measure_2d({{0, 0}, {1, 0}}, std::vector<double>{1, 1}), 0, ""});
    try {
        (void)featurize_all(ds, FeatureConfig{}, 2);
        FAIL("expected CollinearSupport");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CollinearSupport);
        CHECK(e.index() == std::optional<std::size_t>{1});
    }
}

TEST_CASE("nn_classify examples") {
    const std::vector<FeatureVector> refs{fv({0, 0}), fv({1, 0}), fv({5, 5}), fv({3, 0}), fv({9, 9}), fv({3, 0})};
    const auto labelled = label(refs, {0, 1, 2, 3, 4, 5});
    CHECK(nn_classify(labelled, fv({5, 5}), CurveNorm::euclidean) == 2);
    CHECK(nn_classify(labelled, fv({0.9, 0}), CurveNorm::chebyshev) == 1);
    // indices 3 and 5 are equidistant
    CHECK(nn_classify(labelled, fv({3, 0.1}), CurveNorm::chebyshev) == 3);

    const std::vector<FeatureVector> two{fv({1}), fv({3})};
    CHECK(nn_classify(label(two, {7, 8}), fv({0}), CurveNorm::euclidean) == 7);

    CHECK(kind_of([] { (void)nn_classify({}, fv({1}), CurveNorm::chebyshev); }) == ErrorKind::EmptyReferences);
    CHECK(kind_of([&] { (void)nn_classify(labelled, fv({1}), CurveNorm::chebyshev); }) ==
          ErrorKind::DimensionMismatch);
}

TEST_CASE("nn_classify is invariant under increasing transforms of the distances") {
    nrcdt::testing::Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<FeatureVector> refs;
        std::vector<int> labels;
        for (int i = 0; i < 12; ++i) {
            refs.push_back(fv({nrcdt::testing::uniform(rng, -1, 1), nrcdt::testing::uniform(rng, -1, 1)}));
            labels.push_back(i);
        }
        const auto query = fv({nrcdt::testing::uniform(rng, -1, 1), nrcdt::testing::uniform(rng, -1, 1)});
        const int base = nn_classify(label(refs, labels), query, CurveNorm::euclidean);
        // Scaling every coordinate by 3 multiplies all distances by 3.
        std::vector<FeatureVector> scaled;
        for (const auto& r : refs) scaled.push_back(fv({3 * r.values[0], 3 * r.values[1]}));
        const auto scaled_query = fv({3 * query.values[0], 3 * query.values[1]});
        CHECK(nn_classify(label(scaled, labels), scaled_query, CurveNorm::euclidean) == base);

        // Brute-force argmin of exp(d), a strictly increasing transform.
        double best = INFINITY;
        int want = -1;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            const double d = std::exp(curve_distance(refs[i].values, query.values, CurveNorm::euclidean));
            if (d < best) {
                best = d;
                want = labels[i];
            }
        }
        CHECK(base == want);
    }
}

TEST_CASE("svm separates a 1-D pair") {
    const std::vector<FeatureVector> xs{fv({-2}), fv({2})};
    const auto model = svm_train(label(xs, {-1, 1}), SvmConfig{});
    CHECK(model.predict(xs[0]) == -1);
    CHECK(model.predict(xs[1]) == 1);
    const auto& m = model.machines.front();
    const double boundary = -m.bias / m.weights[0];
    CHECK(boundary > -2.0);
    CHECK(boundary < 2.0);
}

TEST_CASE("svm on coincident classes terminates at chance") {
    const std::vector<FeatureVector> xs{fv({1, 1}), fv({1, 1})};
    const auto data = label(xs, {0, 1});
    const auto model = svm_train(data, SvmConfig{});
    CHECK(model.machines.front().iterations <= SvmConfig{}.max_iters);
    int correct = 0;
    for (const auto& d : data) correct += model.predict(*d.feature) == d.label ? 1 : 0;
    CHECK(correct == 1);
}

TEST_CASE("svm best objective is nonincreasing") {
    nrcdt::testing::Rng rng(12);
    std::vector<FeatureVector> xs;
    std::vector<int> ys;
    for (int i = 0; i < 40; ++i) {
        const int y = i % 2 ? 1 : -1;
        xs.push_back(fv({y + nrcdt::testing::uniform(rng, -1.5, 1.5), nrcdt::testing::uniform(rng, -1, 1)}));
        ys.push_back(y);
    }
    std::vector<std::span<const double>> spans;
    for (const auto& x : xs) spans.emplace_back(x.values);
    const auto svm = svm_train_binary(spans, ys, SvmConfig{});
    REQUIRE_FALSE(svm.objective_trace.empty());
    for (std::size_t t = 1; t < svm.objective_trace.size(); ++t) {
        CHECK(svm.objective_trace[t] <= svm.objective_trace[t - 1]);
    }
}

TEST_CASE("svm multiclass and errors") {
    const std::vector<FeatureVector> xs{fv({0, 0}), fv({4, 0}), fv({0, 4}), fv({0.2, 0}), fv({4, 0.3}), fv({0, 3.8})};
    const auto data = label(xs, {0, 1, 2, 0, 1, 2});
    const auto model = svm_train(data, SvmConfig{});
    CHECK(model.machines.size() == 3);
    for (const auto& d : data) CHECK(model.predict(*d.feature) == d.label);

    const std::vector<FeatureVector> one{fv({1}), fv({2})};
    CHECK(kind_of([&] { (void)svm_train(label(one, {4, 4}), SvmConfig{}); }) == ErrorKind::SingleClass);
    const std::vector<FeatureVector> ragged{fv({1}), fv({2, 3})};
    CHECK(kind_of([&] { (void)svm_train(label(ragged, {0, 1}), SvmConfig{}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("stratified folds") {
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c) labels.insert(labels.end(), 10, c);
    const auto folds = stratified_folds(labels, 3, 10, 4);
    for (std::size_t f = 0; f < 10; ++f) {
        std::vector<int> per_class(3, 0);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (folds[i] == f) ++per_class[static_cast<std::size_t>(labels[i])];
        }
        CHECK(per_class == std::vector<int>{1, 1, 1});
    }
    CHECK(stratified_folds(labels, 3, 10, 4) == folds);
    CHECK(stratified_folds(labels, 3, 10, 5) != folds);
    CHECK(kind_of([&] { (void)stratified_folds(labels, 3, 1, 0); }) == ErrorKind::InvalidK);
    CHECK(kind_of([&] { (void)stratified_folds(labels, 3, 11, 0); }) == ErrorKind::TooFewItems);
}

TEST_CASE("cross_validate with a constant classifier") {
    std::vector<FeatureVector> xs(30, fv({0}));
    std::vector<int> ys;
    for (int c = 0; c < 3; ++c) ys.insert(ys.end(), 10, c);
    const auto data = label(xs, ys);
    std::size_t train_sizes = 0;
    const Trainer constant = [&](std::span<const LabeledFeature> train) -> Predictor {
        train_sizes += train.size();
        return [](const FeatureVector&) { return 0; };
    };
    const CvReport r = cross_validate(data, 3, CvOptions{}, constant);
    CHECK(r.fold_accuracies.size() == 10);
    CHECK(train_sizes == 30);
    CHECK(std::abs(r.mean - 1.0 / 3.0) <= 1e-12);
    CHECK(r.std <= 1e-12);
}

TEST_CASE("CvReport recomputes from folds") {
    const CvReport r = CvReport::from_folds({1.0, 0.5, 0.75, 0.75});
    CHECK(r.mean == 0.75);
    CHECK(std::abs(r.std - std::sqrt(0.03125)) <= 1e-12);
}

TEST_CASE("cross_validate end to end is deterministic and separates grid-preserving classes") {
    std::vector<DiscreteMeasure2D> templates{make_template(TemplateKind::cross, 32),
                                             make_template(TemplateKind::shield, 32)};
    AffineSamplerConfig sampler;
    sampler.seed = 2;
    sampler.mode = SamplerMode::grid_preserving;
    sampler.grid_angles = 8;
    const auto ds = generate_academic(templates, 10, sampler);
    FeatureConfig features;
    features.angles = 8;
    CvOptions opts;
    opts.seed = 9;
    const CvReport a = cross_validate(ds, features, opts, SvmConfig{});
    const CvReport b = cross_validate(ds, features, opts, SvmConfig{});
    CHECK(a.fold_accuracies == b.fold_accuracies);
    CHECK(a.mean == 1.0);
    const CvReport nn = cross_validate(ds, features, opts, NnConfig{});
    CHECK(nn.mean == 1.0);

    // svm training accuracy on the features is perfect
    const auto fvs = featurize_all(ds, features);
    const auto labelled = pair_labels(fvs, ds);
    const auto model = svm_train(labelled, SvmConfig{});
    for (const auto& d : labelled) CHECK(model.predict(*d.feature) == d.label);
}

TEST_CASE("nn_iterate_references") {
    const std::vector<FeatureVector> xs{fv({0}), fv({0.1}), fv({0.2}), fv({5}), fv({5.1})};
    const auto data = label(xs, {0, 0, 0, 1, 1});
    const CvReport r = nn_iterate_references(data, 2, CurveNorm::chebyshev);
    CHECK(r.fold_accuracies.size() == 3);
    CHECK(r.mean == 1.0);
    const std::vector<FeatureVector> lone{fv({0}), fv({1}), fv({2})};
    CHECK(kind_of([&] { (void)nn_iterate_references(label(lone, {0, 0, 1}), 2, CurveNorm::chebyshev); }) ==
          ErrorKind::TooFewItems);
}
