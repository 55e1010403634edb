#include <charconv>
#include <filesystem>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "radclust/cnn/weights_io.hpp"
#include "radclust/error.hpp"
#include "radclust/metrics/metrics.hpp"
#include "radclust/pipeline/cli.hpp"
#include "radclust/pipeline/extract.hpp"
#include "radclust/pipeline/features_io.hpp"
#include "radclust/pipeline/manifest.hpp"
#include "radclust/pipeline/sweep.hpp"
#include "radclust/pipeline/synth.hpp"

namespace radclust::pipeline {

namespace {

namespace fs = std::filesystem;

struct KRange {
    std::size_t lo;
    std::size_t hi;
};

KRange parse_k_range(const std::string& text) {
    auto number = [&](std::string_view s) {
        std::size_t v = 0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
            throw ConfigError("bad --k value '" + text + "'; expected N or A..B");
        }
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const std::size_t k = number(text);
        return {k, k};
    }
    const KRange r{number(std::string_view(text).substr(0, dots)), number(std::string_view(text).substr(dots + 2))};
    if (r.lo > r.hi) {
        throw ConfigError("empty --k range '" + text + "'");
    }
    return r;
}

/// Clustering knobs shared by cluster and sweep.
struct Knobs {
    std::uint64_t seed = 0;
    std::size_t max_iters = 300;
    double tol = 1e-4;
    std::size_t batch_size = 256;
    std::optional<double> sigma;
    std::optional<double> birch_threshold;
    std::string cov_mode = "full";
    std::string init = "first";
    std::size_t n_init = 10;

    void attach(CLI::App* app) {
        app->add_option("--seed", seed, "random seed")->capture_default_str();
        app->add_option("--max-iters", max_iters, "iteration cap")->capture_default_str();
        app->add_option("--tol", tol, "convergence tolerance")->capture_default_str();
        app->add_option("--batch-size", batch_size, "Mini-Batch K-Means batch size")->capture_default_str();
        app->add_option("--sigma", sigma, "spectral RBF bandwidth (default: median distance)");
        app->add_option("--birch-threshold", birch_threshold, "BIRCH leaf radius (default: from data)");
        app->add_option("--cov-mode", cov_mode, "GMM covariance for --algo gmm-*: tied|diag|full")
            ->check(CLI::IsMember({"tied", "diag", "full"}))
            ->capture_default_str();
        app->add_option("--init", init, "K-Means seeding: first|kmeans++")
            ->check(CLI::IsMember({"first", "kmeans++"}))
            ->capture_default_str();
        app->add_option("--n-init", n_init, "restarts with --init kmeans++")->capture_default_str();
    }

    clustering::ClusterConfig config() const {
        clustering::ClusterConfig c;
        c.seed = seed;
        c.max_iters = max_iters;
        c.tol = tol;
        c.batch_size = batch_size;
        c.rbf_sigma = sigma;
        c.birch_threshold = birch_threshold;
        c.covariance_mode = cov_mode == "tied"   ? clustering::CovarianceMode::Tied
                            : cov_mode == "diag" ? clustering::CovarianceMode::Diag
                                                 : clustering::CovarianceMode::Full;
        if (init == "kmeans++") {
            c.init = clustering::InitMethod::KMeansPlusPlus;
            c.n_init = n_init;
        }
        return c;
    }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Unsupervised clustering of grayscale radiograph features", "radclust"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic blobs (feature CSV) or images (PGM + manifest)");
    std::string synth_kind = "blobs";
    std::string synth_out;
    std::string synth_labels;
    std::uint64_t synth_seed = 0;
    std::size_t per_blob = 150, n_blobs = 2, dim = 16, count = 60, img_size = 128;
    double separation = 10.0, noise = 1.0;
    synth->add_option("--kind", synth_kind, "blobs|images")->check(CLI::IsMember({"blobs", "images"}))->capture_default_str();
    synth->add_option("--out", synth_out, "feature CSV (blobs) or output directory (images)")->required();
    synth->add_option("--labels", synth_labels, "ground-truth labels CSV (blobs)");
    synth->add_option("--seed", synth_seed, "random seed")->capture_default_str();
    synth->add_option("--per-blob", per_blob, "points per blob")->capture_default_str();
    synth->add_option("--blobs", n_blobs, "number of blobs")->capture_default_str();
    synth->add_option("--dim", dim, "feature dimension")->capture_default_str();
    synth->add_option("--separation", separation, "distance of blob centers from the origin")->capture_default_str();
    synth->add_option("--noise", noise, "per-coordinate noise sigma")->capture_default_str();
    synth->add_option("--count", count, "number of images")->capture_default_str();
    synth->add_option("--size", img_size, "image side in pixels")->capture_default_str();

    // preprocess
    auto* prep = app.add_subcommand("preprocess", "crop and resize the images listed in a manifest");
    std::string prep_manifest, prep_out_dir;
    std::size_t prep_size = 128;
    prep->add_option("--manifest", prep_manifest, "manifest CSV")->required();
    prep->add_option("--out-dir", prep_out_dir, "directory for processed PGMs and manifest.csv")->required();
    prep->add_option("--size", prep_size, "output side in pixels")->capture_default_str();

    // extract
    auto* extract = app.add_subcommand("extract", "CNN features for the images listed in a manifest");
    std::string ex_manifest, ex_out, ex_weights, ex_save_weights;
    std::uint64_t ex_seed = 0;
    std::size_t ex_threads = 0;
    extract->add_option("--manifest", ex_manifest, "manifest of network-sized images")->required();
    extract->add_option("--out", ex_out, "feature CSV ('-' for standard output)")->required();
    auto* weights_opt = extract->add_option("--weights", ex_weights, "weight file");
    extract->add_option("--seed", ex_seed, "He-normal initialization seed when --weights is absent")
        ->capture_default_str()
        ->excludes(weights_opt);
    extract->add_option("--save-weights", ex_save_weights, "write the weights used");
    extract->add_option("--threads", ex_threads, "worker threads (0 = all cores)")->capture_default_str();

    // cluster
    auto* cluster = app.add_subcommand("cluster", "cluster a feature CSV and write a labels CSV");
    std::string cl_features, cl_algo, cl_out, cl_k = "2";
    Knobs cl_knobs;
    cluster->add_option("--features", cl_features, "feature CSV")->required();
    cluster->add_option("--algo", cl_algo, "kmeans|minibatch|spectral|ward|average|birch|gmm-tied|gmm-diag|gmm-full")
        ->required();
    cluster->add_option("--k", cl_k, "cluster count")->capture_default_str();
    cluster->add_option("--out", cl_out, "labels CSV (default: standard output)");
    cl_knobs.attach(cluster);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "silhouette score of a labeling");
    std::string ev_features, ev_labels;
    evaluate->add_option("--features", ev_features, "feature CSV")->required();
    evaluate->add_option("--labels", ev_labels, "labels CSV")->required();

    // sweep
    auto* sw = app.add_subcommand("sweep", "silhouette for every algorithm and k");
    std::string sw_features, sw_out, sw_svg, sw_k = "2..6", sw_algos = "all";
    std::size_t sw_threads = 0;
    bool sw_timing = false;
    Knobs sw_knobs;
    sw->add_option("--features", sw_features, "feature CSV")->required();
    sw->add_option("--k", sw_k, "inclusive range A..B")->capture_default_str();
    sw->add_option("--algos", sw_algos, "comma list or 'all'")->capture_default_str();
    sw->add_option("--out", sw_out, "report CSV (default: standard output)");
    sw->add_option("--svg", sw_svg, "chart output");
    sw->add_option("--threads", sw_threads, "worker threads (0 = all cores)")->capture_default_str();
    sw->add_flag("--timing", sw_timing, "fill the runtime_ms column (makes reports run-dependent)");
    sw_knobs.attach(sw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (synth->parsed()) {
        if (synth_kind == "blobs") {
            const auto data = synth_blobs(per_blob, n_blobs, dim, separation, noise, synth_seed);
            emit(synth_out, write_features_csv(data.features), out);
            if (!synth_labels.empty()) {
                write_text_file(synth_labels, write_labels_csv(data.features.ids(), data.truth));
            }
        } else {
            const auto set = synth_images(count, img_size, synth_seed);
            fs::create_directories(synth_out);
            for (const auto& img : set.images) {
                imaging::write_pgm_file(fs::path(synth_out) / img.name, img.image);
            }
            write_text_file(fs::path(synth_out) / "manifest.csv", write_manifest(set.manifest));
        }
    } else if (prep->parsed()) {
        const auto entries = read_manifest(read_text_file(prep_manifest));
        const fs::path base = fs::path(prep_manifest).parent_path();
        fs::create_directories(prep_out_dir);
        std::vector<ManifestEntry> processed;
        for (const auto& e : entries) {
            const fs::path src = base / e.path;
            const auto img = preprocess_image(imaging::read_pgm_file(src), e.crop, prep_size);
            const std::string name = image_id(src) + ".pgm";
            imaging::write_pgm_file(fs::path(prep_out_dir) / name, img);
            processed.push_back(ManifestEntry{name, std::nullopt, e.age, e.sex});
        }
        write_text_file(fs::path(prep_out_dir) / "manifest.csv", write_manifest(processed));
    } else if (extract->parsed()) {
        const cnn::WeightSet ws = ex_weights.empty() ? cnn::init_weights(cnn::CnnSpec::standard(), ex_seed)
                                                     : cnn::read_weights_file(ex_weights);
        if (!ex_save_weights.empty()) {
            cnn::write_weights_file(ex_save_weights, ws);
        }
        const auto entries = read_manifest(read_text_file(ex_manifest));
        const auto images = load_manifest_images(entries, fs::path(ex_manifest).parent_path());
        emit(ex_out, write_features_csv(extract_features(images, ws, ex_threads)), out);
    } else if (cluster->parsed()) {
        const Algorithm algo = parse_algorithm(cl_algo);
        const KRange k = parse_k_range(cl_k);
        if (k.lo != k.hi) {
            throw ConfigError("cluster takes a single --k value");
        }
        const auto fm = read_features_csv(read_text_file(cl_features));
        auto cfg = cl_knobs.config();
        cfg.k = k.lo;
        const auto result = run_algorithm(algo, fm, cfg);
        emit(cl_out, write_labels_csv(fm.ids(), result.labels), out);
        if (!result.converged) {
            err << "warning: " << cli_name(algo) << " stopped at max_iters without converging\n";
        }
    } else if (evaluate->parsed()) {
        const auto fm = read_features_csv(read_text_file(ev_features));
        const auto rows = read_labels_csv(read_text_file(ev_labels));
        if (rows.size() != fm.n()) {
            throw ShapeError("labels CSV has " + std::to_string(rows.size()) + " rows, features have " +
                             std::to_string(fm.n()));
        }
        std::vector<int> labels(fm.n());
        for (std::size_t i = 0; i < fm.n(); ++i) {
            if (rows[i].id != fm.ids()[i]) {
                throw ParseError("labels row " + std::to_string(i + 2) + " has id '" + rows[i].id + "', expected '" +
                                     fm.ids()[i] + "'",
                                 ParseError::npos, i + 2);
            }
            labels[i] = rows[i].cluster;
        }
        const auto rep = metrics::silhouette(fm, labels);
        std::vector<std::size_t> sizes(rep.per_cluster_mean.size(), 0);
        for (int l : labels) {
            ++sizes[static_cast<std::size_t>(l)];
        }
        out << "cluster,n,silhouette\n";
        char buf[64];
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (sizes[c] > 0) {
                std::snprintf(buf, sizeof buf, "%zu,%zu,%.4f\n", c, sizes[c], rep.per_cluster_mean[c]);
                out << buf;
            }
        }
        std::snprintf(buf, sizeof buf, "all,%zu,%.4f\n", fm.n(), rep.mean);
        out << buf;
    } else if (sw->parsed()) {
        SweepConfig cfg;
        cfg.algorithms = parse_algorithm_list(sw_algos);
        const KRange k = parse_k_range(sw_k);
        cfg.k_min = k.lo;
        cfg.k_max = k.hi;
        cfg.base = sw_knobs.config();
        cfg.seed = sw_knobs.seed;
        cfg.threads = sw_threads;
        cfg.timing = sw_timing;
        const auto fm = read_features_csv(read_text_file(sw_features));
        const auto report = sweep(fm, cfg);
        for (const auto& r : report.rows) {
            if (!r.error.empty()) {
                err << "warning: " << cli_name(r.algorithm) << " k=" << r.k << " failed: " << r.error << '\n';
            }
        }
        emit(sw_out, render_report_csv(report), out);
        if (!sw_svg.empty()) {
            write_text_file(sw_svg, render_chart_svg(report));
        }
    }
    return kExitOk;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return run(argc, argv, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const BoundsError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

} // namespace radclust::pipeline
