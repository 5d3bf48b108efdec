#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <CLI11.hpp>
#include <json.hpp>

#include <nrcdt/nrcdt.hpp>

namespace nrcdt::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags left unset fall back to the config file, then to RunConfig defaults.
struct Flags {
    std::optional<std::size_t> angles;
    std::optional<std::size_t> quantiles;
    std::optional<std::string> norm;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> folds;
    std::optional<std::string> representation;
    std::optional<double> eps_std;
    std::optional<std::string> out;
    std::string config_path;
    std::string dataset;

    // gen-academic
    std::optional<std::size_t> classes;
    std::optional<std::size_t> per_class;
    std::optional<std::size_t> resolution;
    bool grid_preserving = false;
    bool allow_reflection = false;
    bool export_pgm = false;

    // classification
    std::optional<std::string> references;
    std::string templates;
    std::optional<std::size_t> raster_size;
    std::optional<std::string> classifier;
    std::optional<double> reg;
    std::optional<std::size_t> max_iters;
    bool conventional_split = false;

    // distances
    std::optional<std::string> metric;
};

const std::vector<std::string> kConfigKeys{
    "angles",     "quantiles",  "norm",       "seed",      "folds",           "representation",
    "eps_std",    "output_path", "classes",   "per_class", "resolution",      "grid_preserving",
    "allow_reflection", "export_pgm", "sampler", "references", "raster_size", "classifier",
    "reg",        "max_iters",  "conventional_split", "metric"};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    json doc;
    try {
        doc = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config " + path + " must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
            throw UsageError("config " + path + ": unknown key '" + key + "'");
        }
    }
    return doc;
}

template <typename T>
T pick(const std::optional<T>& flag, const json& cfg, const char* key, T fallback) {
    if (flag) return *flag;
    if (!cfg.contains(key)) return fallback;
    const json& v = cfg.at(key);
    const bool ok = [&] {
        if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
        else if constexpr (std::is_unsigned_v<T>) return v.is_number_unsigned();
        else if constexpr (std::is_arithmetic_v<T>) return v.is_number();
        else return v.is_string();
    }();
    if (!ok) throw UsageError(std::string("config key '") + key + "' has the wrong type");
    return v.get<T>();
}

bool pick_switch(bool flag, const json& cfg, const char* key) {
    return flag || pick<bool>(std::nullopt, cfg, key, false);
}

CurveNorm parse_norm(const std::string& s) {
    if (s == "inf" || s == "chebyshev") return CurveNorm::chebyshev;
    if (s == "l2" || s == "euclidean") return CurveNorm::euclidean;
    throw UsageError("norm must be 'inf' or 'l2', got '" + s + "'");
}

std::string norm_name(CurveNorm n) { return n == CurveNorm::chebyshev ? "inf" : "l2"; }

RunConfig resolve(const Flags& f, const json& cfg) {
    RunConfig rc;
    rc.angles = pick(f.angles, cfg, "angles", rc.angles);
    rc.quantiles = pick(f.quantiles, cfg, "quantiles", rc.quantiles);
    rc.norm = parse_norm(pick(f.norm, cfg, "norm", std::string("inf")));
    rc.seed = pick(f.seed, cfg, "seed", rc.seed);
    rc.folds = pick(f.folds, cfg, "folds", rc.folds);
    const std::string rep = pick(f.representation, cfg, "representation", std::string("mnrcdt"));
    const auto parsed = parse_representation(rep);
    if (!parsed) throw UsageError("representation must be euclidean, rcdt or mnrcdt, got '" + rep + "'");
    rc.representation = *parsed;
    rc.eps_std = pick(f.eps_std, cfg, "eps_std", rc.eps_std);
    rc.output_path = pick(f.out, cfg, "output_path", std::string());

    if (rc.angles < 1) throw UsageError("angles must be at least 1");
    if (rc.quantiles < 2) throw UsageError("quantiles must be at least 2");
    if (rc.folds < 2) throw UsageError("folds must be at least 2");
    if (!(rc.eps_std > 0.0)) throw UsageError("eps_std must be positive");
    return rc;
}

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void emit(const fs::path& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        io::write_file_atomic(path, text);
    }
}

fs::path manifest_of(const std::string& dataset) {
    const fs::path p(dataset);
    return fs::is_directory(p) ? p / "manifest.json" : p;
}

Interval interval_from(const json& sampler, const char* key, Interval fallback) {
    if (!sampler.contains(key)) return fallback;
    const json& v = sampler.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw UsageError(std::string("sampler.") + key + " must be a [lo, hi] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

AffineSamplerConfig sampler_from(const json& cfg) {
    AffineSamplerConfig s;
    if (!cfg.contains("sampler")) return s;
    const json& j = cfg.at("sampler");
    if (!j.is_object()) throw UsageError("sampler must be a JSON object");
    s.rotation = interval_from(j, "rotation", s.rotation);
    s.scale_x = interval_from(j, "scale_x", s.scale_x);
    s.scale_y = interval_from(j, "scale_y", s.scale_y);
    s.shear = interval_from(j, "shear", s.shear);
    s.translation_x = interval_from(j, "translation_x", s.translation_x);
    s.translation_y = interval_from(j, "translation_y", s.translation_y);
    return s;
}

FeatureConfig features_for(const RunConfig& rc, const Flags& f, const json& cfg) {
    FeatureConfig fc;
    fc.representation = rc.representation;
    fc.angles = rc.angles;
    fc.quantiles = rc.quantiles;
    fc.raster_size = pick(f.raster_size, cfg, "raster_size", std::size_t{64});
    fc.transform.eps_std = rc.eps_std;
    if (fc.raster_size < 1) throw UsageError("raster_size must be positive");
    return fc;
}

json fold_json(const CvReport& r) {
    json folds = json::array();
    for (double a : r.fold_accuracies) folds.push_back(a);
    return folds;
}

std::size_t smallest_class(const LabeledDataset& ds) {
    const auto sizes = ds.class_sizes();
    return sizes.empty() ? 0 : *std::min_element(sizes.begin(), sizes.end());
}

int cmd_gen_academic(const Flags& f, const json& cfg, std::ostream& out) {
    RunConfig rc = resolve(f, cfg);
    const std::size_t classes = pick(f.classes, cfg, "classes", std::size_t{3});
    const std::size_t per_class = pick(f.per_class, cfg, "per_class", std::size_t{10});
    const std::size_t resolution = pick(f.resolution, cfg, "resolution", std::size_t{64});
    if (classes < 1 || classes > std::size(kAllTemplates)) throw UsageError("classes must be between 1 and 3");
    if (per_class < 1) throw UsageError("per-class must be at least 1");
    if (resolution < 16) throw UsageError("resolution must be at least 16");
    if (rc.output_path.empty()) throw UsageError("gen-academic needs --out");

    AffineSamplerConfig sampler = sampler_from(cfg);
    sampler.seed = rc.seed;
    sampler.allow_reflection = pick_switch(f.allow_reflection, cfg, "allow_reflection");
    if (pick_switch(f.grid_preserving, cfg, "grid_preserving")) {
        sampler.mode = SamplerMode::grid_preserving;
        sampler.grid_angles = rc.angles;
    }

    LabeledDataset templates;
    templates.class_count = static_cast<int>(classes);
    std::vector<DiscreteMeasure2D> measures;
    for (std::size_t t = 0; t < classes; ++t) {
        measures.push_back(make_template(kAllTemplates[t], resolution));
        templates.items.push_back({measures.back(), static_cast<int>(t), std::string(to_string(kAllTemplates[t]))});
    }
    const LabeledDataset ds = generate_academic(measures, per_class, sampler, threads_from_env());

    SaveOptions opts;
    opts.export_pgm = pick_switch(f.export_pgm, cfg, "export_pgm");
    opts.raster_size = resolution;
    save_dataset(ds, rc.output_path, opts);
    opts.manifest_name = "templates.json";
    opts.item_prefix = "template_";
    save_dataset(templates, rc.output_path, opts);

    out << "generated " << ds.items.size() << " items (seed " << rc.seed << ", "
        << (sampler.mode == SamplerMode::grid_preserving ? "grid-preserving" : "general") << " sampler) in "
        << rc.output_path.string() << '\n';
    const auto sizes = ds.class_sizes();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        out << "  class " << c << " (" << to_string(kAllTemplates[c]) << "): " << sizes[c] << '\n';
    }
    return kSuccess;
}

int cmd_transform(const Flags& f, const json& cfg, std::ostream& out) {
    RunConfig rc = resolve(f, cfg);
    const LabeledDataset ds = load_images(manifest_of(f.dataset));
    FeatureConfig fc = features_for(rc, f, cfg);
    fc.representation = Representation::mnrcdt;
    const auto curves = featurize_all(ds, fc, threads_from_env());
    const QuantileGrid g(rc.quantiles);
    std::string csv = "item_id,label,level,value\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (std::size_t k = 0; k < g.count(); ++k) {
            csv += std::to_string(i) + ',' + std::to_string(ds.items[i].label) + ',' + num(g.levels()[k]) + ',' +
                   num(curves[i].values[k]) + '\n';
        }
    }
    emit(rc.output_path, csv, out);
    return kSuccess;
}

int cmd_classify_nn(const Flags& f, const json& cfg, std::ostream& out) {
    RunConfig rc = resolve(f, cfg);
    const std::string mode = pick(f.references, cfg, "references", std::string("templates"));
    if (mode != "templates" && mode != "iterate") throw UsageError("references must be 'templates' or 'iterate'");
    const fs::path manifest = manifest_of(f.dataset);
    const LabeledDataset ds = load_images(manifest);
    const FeatureConfig fc = features_for(rc, f, cfg);
    const std::size_t threads = threads_from_env();
    const auto features = featurize_all(ds, fc, threads);
    const auto queries = pair_labels(features, ds);

    json report{{"command", "classify-nn"},
                {"references", mode},
                {"representation", std::string(to_string(rc.representation))},
                {"angles", rc.angles},
                {"quantiles", rc.quantiles},
                {"norm", norm_name(rc.norm)},
                {"items", ds.items.size()},
                {"class_count", ds.class_count}};

    std::ostringstream text;
    text.setf(std::ios::fixed);
    text.precision(4);
    if (mode == "templates") {
        const fs::path tpath = f.templates.empty() ? manifest.parent_path() / "templates.json" : fs::path(f.templates);
        if (!fs::exists(tpath)) {
            throw UsageError("no templates manifest at " + tpath.string() + "; pass --templates or --references iterate");
        }
        const LabeledDataset templates = load_images(tpath);
        if (templates.class_count != ds.class_count) {
            throw Error(ErrorKind::DimensionMismatch, "templates and dataset disagree on class_count");
        }
        const auto ref_features = featurize_all(templates, fc, threads);
        const auto refs = pair_labels(ref_features, templates);
        const double acc = nn_accuracy(refs, queries, rc.norm);
        report["accuracy"] = acc;
        text << "accuracy " << acc << " (template references, " << norm_name(rc.norm) << "-norm, L=" << rc.angles
             << ", M=" << rc.quantiles << ", " << ds.items.size() << " queries)\n";
    } else {
        const CvReport r = nn_iterate_references(queries, ds.class_count, rc.norm);
        report["mean"] = r.mean;
        report["std"] = r.std;
        report["rounds"] = fold_json(r);
        text << "accuracy " << r.mean << " +- " << r.std << " (" << r.fold_accuracies.size()
             << " reference rounds, " << norm_name(rc.norm) << "-norm, L=" << rc.angles << ", M=" << rc.quantiles
             << ")\n";
    }
    out << text.str();
    if (!rc.output_path.empty()) io::write_file_atomic(rc.output_path, report.dump(2) + "\n");
    return kSuccess;
}

int cmd_cross_validate(const Flags& f, const json& cfg, std::ostream& out) {
    RunConfig rc = resolve(f, cfg);
    const LabeledDataset ds = load_images(manifest_of(f.dataset));
    const FeatureConfig fc = features_for(rc, f, cfg);
    const std::string classifier = pick(f.classifier, cfg, "classifier", std::string("svm"));
    Pipeline pipeline;
    if (classifier == "svm") {
        SvmConfig svm;
        svm.reg = pick(f.reg, cfg, "reg", svm.reg);
        svm.max_iters = pick(f.max_iters, cfg, "max_iters", svm.max_iters);
        if (!(svm.reg > 0.0)) throw UsageError("reg must be positive");
        pipeline = svm;
    } else if (classifier == "nn") {
        pipeline = NnConfig{rc.norm};
    } else {
        throw UsageError("classifier must be 'svm' or 'nn'");
    }
    CvOptions opts;
    opts.k = rc.folds;
    opts.seed = rc.seed;
    opts.train_on_single_fold = !pick_switch(f.conventional_split, cfg, "conventional_split");
    opts.threads = threads_from_env();
    const CvReport r = cross_validate(ds, fc, opts, pipeline);

    json report{{"representation", std::string(to_string(rc.representation))},
                {"angles", rc.angles},
                {"quantiles", rc.quantiles},
                {"class_size", smallest_class(ds)},
                {"class_sizes", ds.class_sizes()},
                {"classifier", classifier},
                {"k", rc.folds},
                {"protocol", opts.train_on_single_fold ? "train-1-test-rest" : "train-rest-test-1"},
                {"seed", rc.seed},
                {"mean", r.mean},
                {"std", r.std},
                {"folds", fold_json(r)}};
    if (rc.representation == Representation::euclidean_pixels) report["raster_size"] = fc.raster_size;
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!rc.output_path.empty()) io::write_file_atomic(rc.output_path, text);
    return kSuccess;
}

int cmd_distances(const Flags& f, const json& cfg, std::ostream& out) {
    RunConfig rc = resolve(f, cfg);
    const std::string metric = pick(f.metric, cfg, "metric", std::string("mnrcdt"));
    if (metric != "mnrcdt" && metric != "sliced-w2") throw UsageError("metric must be 'mnrcdt' or 'sliced-w2'");
    const LabeledDataset ds = load_images(manifest_of(f.dataset));
    const std::size_t n = ds.items.size();
    std::vector<double> d(n * n, 0.0);
    const std::size_t threads = threads_from_env();
    if (metric == "mnrcdt") {
        FeatureConfig fc = features_for(rc, f, cfg);
        fc.representation = Representation::mnrcdt;
        const auto curves = featurize_all(ds, fc, threads);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = curve_distance(curves[i].values, curves[j].values, rc.norm);
        }
    } else {
        const AngleGrid ag(rc.angles);
        const QuantileGrid g(rc.quantiles);
        std::vector<std::optional<RcdtField>> fields(n);
        parallel_for(n, threads, [&](std::size_t i) { fields[i].emplace(rcdt(ds.items[i].measure, ag, g)); });
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = sliced_wasserstein2(*fields[i], *fields[j]);
        }
    }
    std::string csv = "item_id,label";
    for (std::size_t j = 0; j < n; ++j) csv += ',' + std::to_string(j);
    csv += '\n';
    for (std::size_t i = 0; i < n; ++i) {
        csv += std::to_string(i) + ',' + std::to_string(ds.items[i].label);
        for (std::size_t j = 0; j < n; ++j) csv += ',' + num(d[i * n + j]);
        csv += '\n';
    }
    emit(rc.output_path, csv, out);
    return kSuccess;
}

void add_shared(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON config; flags override its values")->check(CLI::ExistingFile);
    cmd->add_option("-L,--angles", f.angles, "Number of grid angles in [0, pi) (default 16)");
    cmd->add_option("-M,--quantiles", f.quantiles, "Number of quantile levels (default 64)");
    cmd->add_option("--seed", f.seed, "Random seed (default 0)");
    cmd->add_option("--eps-std", f.eps_std, "Smallest admissible projection std (default 1e-8)");
    cmd->add_option("-o,--out", f.out, "Output path");
}

void add_dataset(CLI::App* cmd, Flags& f) {
    cmd->add_option("-d,--dataset", f.dataset, "Manifest file or a directory holding manifest.json")
        ->required()
        ->check(CLI::ExistingPath);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Max-normalized Radon cumulative distribution transform toolkit", "nrcdt"};
    app.require_subcommand(1);
    Flags f;

    auto* gen = app.add_subcommand("gen-academic", "Generate the synthetic affine-class dataset");
    add_shared(gen, f);
    gen->add_option("--classes", f.classes, "Number of template classes, 1 to 3 (default 3)");
    gen->add_option("--per-class", f.per_class, "Items per class (default 10)")->check(CLI::PositiveNumber);
    gen->add_option("--resolution", f.resolution, "Template raster size (default 64)");
    gen->add_flag("--grid-preserving", f.grid_preserving,
                  "Sample only grid symmetries: rotations by multiples of pi/L, isotropic scaling, translation");
    gen->add_flag("--allow-reflection", f.allow_reflection, "Also sample reflections");
    gen->add_flag("--export-pgm", f.export_pgm, "Write a PGM rendering next to each atom file");

    auto* transform = app.add_subcommand("transform", "Export mNR-CDT curves as CSV");
    add_shared(transform, f);
    add_dataset(transform, f);

    auto* nn = app.add_subcommand("classify-nn", "Nearest-neighbour classification of mNR-CDT curves");
    add_shared(nn, f);
    add_dataset(nn, f);
    nn->add_option("--norm", f.norm, "inf or l2 (default inf)");
    nn->add_option("--references", f.references, "templates or iterate (default templates)");
    nn->add_option("--templates", f.templates, "Template manifest (default: templates.json beside the dataset)");
    nn->add_option("-r,--representation", f.representation, "euclidean, rcdt or mnrcdt (default mnrcdt)");
    nn->add_option("--raster-size", f.raster_size, "Raster side for the euclidean representation (default 64)");

    auto* cv = app.add_subcommand("cross-validate", "k-fold cross validation (train on one fold by default)");
    add_shared(cv, f);
    add_dataset(cv, f);
    cv->add_option("-r,--representation", f.representation, "euclidean, rcdt or mnrcdt (default mnrcdt)");
    cv->add_option("-k,--folds", f.folds, "Number of folds (default 10)");
    cv->add_option("--classifier", f.classifier, "svm or nn (default svm)");
    cv->add_option("--norm", f.norm, "Norm for the nn classifier, inf or l2 (default inf)");
    cv->add_option("--reg", f.reg, "SVM regularization (default 1e-2)");
    cv->add_option("--max-iters", f.max_iters, "SVM iteration cap (default 10000)");
    cv->add_option("--raster-size", f.raster_size, "Raster side for the euclidean representation (default 64)");
    cv->add_flag("--conventional-split", f.conventional_split, "Train on k-1 folds and test on one");

    auto* dist = app.add_subcommand("distances", "Pairwise distance matrix as CSV");
    add_shared(dist, f);
    add_dataset(dist, f);
    dist->add_option("--metric", f.metric, "mnrcdt or sliced-w2 (default mnrcdt)");
    dist->add_option("--norm", f.norm, "Norm for the mnrcdt metric, inf or l2 (default inf)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        const json cfg = load_config(f.config_path);
        if (*gen) return cmd_gen_academic(f, cfg, out);
        if (*transform) return cmd_transform(f, cfg, out);
        if (*nn) return cmd_classify_nn(f, cfg, out);
        if (*cv) return cmd_cross_validate(f, cfg, out);
        if (*dist) return cmd_distances(f, cfg, out);
    } catch (const UsageError& e) {
        err << "nrcdt: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "nrcdt: " << e.what() << '\n';
        const bool usage = e.kind() == ErrorKind::InvalidConfig || e.kind() == ErrorKind::InvalidK;
        return usage ? kUsageError : kRuntimeError;
    } catch (const std::exception& e) {
        err << "nrcdt: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsageError;
}

}  // namespace nrcdt::cli
