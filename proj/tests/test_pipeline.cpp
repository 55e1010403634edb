#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "radclust/cnn/model.hpp"
#include "radclust/cnn/weights_io.hpp"
#include "radclust/error.hpp"
#include "radclust/imaging/image.hpp"
#include "radclust/pipeline/algorithms.hpp"
#include "radclust/pipeline/cli.hpp"
#include "radclust/pipeline/extract.hpp"
#include "radclust/pipeline/features_io.hpp"
#include "radclust/pipeline/manifest.hpp"
#include "radclust/pipeline/sweep.hpp"
#include "radclust/pipeline/synth.hpp"

using namespace radclust;
using namespace radclust::pipeline;
using clustering::FeatureMatrix;
using numerics::Matrix;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "radclust");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

/// Minimal well-formedness check: balanced start/end tags, quoted
/// attributes, and only the five predefined entities.
bool well_formed_xml(const std::string& s) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    bool seen_root = false;
    while (i < s.size()) {
        if (s[i] == '&') {
            static const char* entities[] = {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"};
            bool ok = false;
            for (const char* e : entities) {
                ok = ok || s.compare(i, std::strlen(e), e) == 0;
            }
            if (!ok) {
                return false;
            }
            ++i;
            continue;
        }
        if (s[i] != '<') {
            ++i;
            continue;
        }
        if (s.compare(i, 4, "<!--") == 0) {
            const auto end = s.find("-->", i);
            if (end == std::string::npos) {
                return false;
            }
            i = end + 3;
            continue;
        }
        if (s.compare(i, 2, "<?") == 0) {
            const auto end = s.find("?>", i);
            if (end == std::string::npos || seen_root) {
                return false;
            }
            i = end + 2;
            continue;
        }
        // find the closing '>' outside attribute quotes
        std::size_t j = i + 1;
        char quote = 0;
        while (j < s.size() && (quote || s[j] != '>')) {
            if (quote && s[j] == quote) {
                quote = 0;
            } else if (!quote && (s[j] == '"' || s[j] == '\'')) {
                quote = s[j];
            } else if (!quote && s[j] == '<') {
                return false;
            }
            ++j;
        }
        if (j >= s.size()) {
            return false;
        }
        std::string tag = s.substr(i + 1, j - i - 1);
        i = j + 1;
        if (!tag.empty() && tag[0] == '/') {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) {
                return false;
            }
            stack.pop_back();
            continue;
        }
        const bool self_closing = !tag.empty() && tag.back() == '/';
        const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
        if (name.empty()) {
            return false;
        }
        if (stack.empty()) {
            if (seen_root) {
                return false;
            }
            seen_root = true;
        }
        if (!self_closing) {
            stack.push_back(name);
        }
    }
    return seen_root && stack.empty();
}

SweepReport fixture_report() {
    SweepReport r;
    r.rows.push_back({Algorithm::KMeans, 2, 0.8097, std::nullopt, true, ""});
    r.rows.push_back({Algorithm::Birch, 2, 0.9234, std::nullopt, true, ""});
    return r;
}

} // namespace

// ---- manifest ----

TEST_CASE("manifest rows") {
    const std::string text = std::string(kManifestHeader) + "\nimg1.pgm,0,0,100,100,65,F\nimg2.pgm,,,,,,\n";
    const auto m = read_manifest(text);
    REQUIRE(m.size() == 2);
    CHECK(m[0].path == "img1.pgm");
    REQUIRE(m[0].crop.has_value());
    CHECK(m[0].crop->w == 100);
    CHECK(m[0].age == std::optional<int>(65));
    CHECK(m[0].sex == Sex::Female);
    CHECK_FALSE(m[1].crop.has_value());
    CHECK_FALSE(m[1].age.has_value());
    CHECK(m[1].sex == Sex::Unknown);
    CHECK(read_manifest(write_manifest(m)) == m);
}

TEST_CASE("manifest errors name line and field") {
    const std::string text =
        std::string(kManifestHeader) + "\nimg1.pgm,0,0,100,100,65,F\nimg3.pgm,0,0,100,100,abc,M\n";
    try {
        read_manifest(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("age") != std::string::npos);
    }
    CHECK_THROWS_AS(read_manifest("img1.pgm,0,0,1,1,,\n"), ParseError);
    CHECK_THROWS_AS(read_manifest(std::string(kManifestHeader) + "\na.pgm,,,,,,X\n"), ParseError);
    CHECK_THROWS_AS(read_manifest(std::string(kManifestHeader) + "\na.pgm,,,,,131,\n"), ParseError);
    CHECK_THROWS_AS(read_manifest(std::string(kManifestHeader) + "\n,,,,,,\n"), ParseError);
    CHECK_THROWS_AS(read_manifest(std::string(kManifestHeader) + "\na.pgm,1,,,,,\n"), ParseError);
}

// ---- feature and label CSV ----

TEST_CASE("feature CSV round trip") {
    auto rng = numerics::make_rng(3);
    Matrix m = testing::random_matrix(5, 16, rng);
    m(0, 0) = 1e-300;
    m(1, 1) = -123456789.125;
    m(2, 2) = 1.0 / 3.0;
    const FeatureMatrix fm(m, {"a", "b.c", "D-1", "e_2", "f"});
    const auto back = read_features_csv(write_features_csv(fm));
    CHECK(back.ids() == fm.ids());
    CHECK(back.d() == 16);
    for (std::size_t i = 0; i < m.data().size(); ++i) {
        const double a = m.data()[i], b = back.values().data()[i];
        CHECK(std::abs(a - b) <= 1e-15 * std::abs(a));
    }
    CHECK(write_features_csv(back) == write_features_csv(fm));
    CHECK(write_features_csv(fm).substr(0, 12) == "id,f0,f1,f2,");
}

TEST_CASE("feature CSV errors carry line numbers") {
    try {
        read_features_csv("id,f0,f1\na,1,2\nb,3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        read_features_csv("id,f0\nx,1\ny,2\nx,3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("x") != std::string::npos);
    }
    CHECK_THROWS_AS(read_features_csv("id,f0\na,inf\n"), ParseError);
    CHECK_THROWS_AS(read_features_csv("id,f0\na,nan\n"), ParseError);
    CHECK_THROWS_AS(read_features_csv("id,f0\na,1x\n"), ParseError);
    CHECK_THROWS_AS(read_features_csv("id,f0\na b,1\n"), ParseError);
    CHECK_THROWS_AS(read_features_csv("name,f0\na,1\n"), ParseError);
}

TEST_CASE("labels CSV round trip") {
    const std::vector<std::string> ids{"a", "b", "c"};
    const std::vector<int> labels{1, 0, 1};
    const auto text = write_labels_csv(ids, labels);
    CHECK(text == "id,cluster\na,1\nb,0\nc,1\n");
    const auto rows = read_labels_csv(text);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].id == "c");
    CHECK(rows[2].cluster == 1);
    CHECK_THROWS_AS(read_labels_csv("id,cluster\na,-1\n"), ParseError);
}

// ---- synthetic data ----

TEST_CASE("synth_blobs") {
    const auto b = synth_blobs(100, 2, 2, 10.0, 0.1, 5);
    REQUIRE(b.features.n() == 200);
    double c0x = 0, c0y = 0, c1x = 0, c1y = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        c0x += b.features.row(i)[0];
        c0y += b.features.row(i)[1];
        c1x += b.features.row(100 + i)[0];
        c1y += b.features.row(100 + i)[1];
    }
    CHECK(std::abs(c0x / 100 - 10.0) < 0.05);
    CHECK(std::abs(c0y / 100) < 0.05);
    CHECK(std::abs(c1x / 100) < 0.05);
    CHECK(std::abs(c1y / 100 - 10.0) < 0.05);

    const auto again = synth_blobs(100, 2, 2, 10.0, 0.1, 5);
    CHECK(again.features.values() == b.features.values());

    clustering::ClusterConfig cfg;
    cfg.k = 2;
    const auto r = clustering::kmeans(b.features, cfg);
    CHECK(oracle::same_partition(r.labels, b.truth));

    const auto neg = synth_blobs(1, 3, 2, 4.0, 1e-9, 1);
    CHECK(std::abs(neg.features.row(2)[0] + 4.0) < 1e-6);

    CHECK_THROWS_AS(synth_blobs(1, 5, 2, 1.0, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(synth_blobs(0, 1, 2, 1.0, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(synth_blobs(1, 1, 2, 0.0, 1.0, 0), ConfigError);
}

TEST_CASE("synth_images is deterministic and carries a manifest") {
    const auto a = synth_images(6, 32, 9);
    const auto b = synth_images(6, 32, 9);
    REQUIRE(a.images.size() == 6);
    REQUIRE(a.manifest.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(a.images[i].image == b.images[i].image);
        CHECK(a.images[i].population == static_cast<int>(i % 2));
        CHECK(a.manifest[i].path == a.images[i].name);
        CHECK(a.images[i].image.width() == 32);
    }
}

// ---- extraction ----

TEST_CASE("preprocess and image ids") {
    const imaging::ImageGray img(8, 8, std::uint8_t{40});
    const auto p = preprocess_image(img, imaging::CropRect{2, 2, 4, 4}, 16);
    CHECK(p.width() == 16);
    CHECK(p.at(5, 5) == 40);
    CHECK(image_id("dir/img007.pgm") == "img007");
    CHECK_THROWS_AS(image_id("dir/bad name.pgm"), ConfigError);
}

TEST_CASE("extracted features sweep the same as their CSV export") {
    const auto set = synth_images(6, 128, 3);
    std::vector<NamedImage> images;
    for (const auto& s : set.images) {
        images.push_back({image_id(s.name), s.image});
    }
    const auto ws = cnn::init_weights(cnn::CnnSpec::standard(), 11);
    const auto fm = extract_features(images, ws, 2);
    CHECK(fm.n() == 6);
    CHECK(fm.d() == 16);
    CHECK(fm.ids()[0] == "img000");
    CHECK(extract_features(images, ws, 1).values() == fm.values());

    SweepConfig cfg;
    cfg.k_max = 3;
    cfg.seed = 4;
    const auto direct = render_report_csv(sweep(fm, cfg));
    const auto via_csv = render_report_csv(sweep(read_features_csv(write_features_csv(fm)), cfg));
    CHECK(direct == via_csv);

    images[1].image = imaging::ImageGray(64, 64, std::uint8_t{0});
    try {
        extract_features(images, ws);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        CHECK(std::string(e.what()).find("img001") != std::string::npos);
    }
}

// ---- algorithms table ----

TEST_CASE("algorithm names") {
    CHECK(parse_algorithm("gmm-tied") == Algorithm::GmmTied);
    CHECK(display_name(Algorithm::MiniBatch) == "Mini batch K-means");
    CHECK(parse_algorithm_list("all").size() == 9);
    CHECK(parse_algorithm_list("ward,kmeans,ward") == std::vector<Algorithm>{Algorithm::KMeans, Algorithm::Ward});
    try {
        parse_algorithm("kmeanz");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("gmm-full") != std::string::npos);
    }
}

// ---- sweep and reports ----

TEST_CASE("sweep row counts and order") {
    const auto b = synth_blobs(20, 2, 4, 10.0, 1.0, 1);
    SweepConfig cfg;
    cfg.seed = 7;
    const auto full = sweep(b.features, cfg);
    REQUIRE(full.rows.size() == 45);
    for (std::size_t i = 0; i < 45; ++i) {
        CHECK(full.rows[i].algorithm == kAllAlgorithms[i / 5]);
        CHECK(full.rows[i].k == 2 + i % 5);
        REQUIRE(full.rows[i].silhouette.has_value());
        CHECK(*full.rows[i].silhouette >= -1.0);
        CHECK(*full.rows[i].silhouette <= 1.0);
    }

    SweepConfig one = cfg;
    one.algorithms = {Algorithm::Spectral};
    one.k_min = one.k_max = 3;
    CHECK(sweep(b.features, one).rows.size() == 1);

    SweepConfig bad = cfg;
    bad.k_min = 1;
    CHECK_THROWS_AS(sweep(b.features, bad), ConfigError);
    bad = cfg;
    bad.algorithms.clear();
    CHECK_THROWS_AS(sweep(b.features, bad), ConfigError);
    bad = cfg;
    bad.k_max = 41;
    CHECK_THROWS_AS(sweep(b.features, bad), ConfigError);
}

TEST_CASE("sweep is deterministic and independent of thread count") {
    const auto b = synth_blobs(15, 3, 3, 6.0, 1.0, 2);
    SweepConfig cfg;
    cfg.seed = 99;
    cfg.threads = 1;
    const auto serial = render_report_csv(sweep(b.features, cfg));
    cfg.threads = 4;
    const auto parallel = render_report_csv(sweep(b.features, cfg));
    CHECK(serial == parallel);
    CHECK(render_report_csv(sweep(b.features, cfg)) == parallel);
    CHECK(render_chart_svg(sweep(b.features, cfg)) == render_chart_svg(sweep(b.features, cfg)));
}

TEST_CASE("failed cells leave blanks") {
    // Spectral refuses n above its cap; the rest of the sweep still runs.
    const auto b = synth_blobs(10, 2, 2, 10.0, 1.0, 3);
    SweepConfig cfg;
    cfg.algorithms = {Algorithm::KMeans, Algorithm::Spectral};
    cfg.k_max = 3;
    cfg.base.spectral_cap = 5;
    const auto r = sweep(b.features, cfg);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].silhouette.has_value());
    CHECK_FALSE(r.rows[2].silhouette.has_value());
    CHECK_FALSE(r.rows[2].converged);
    CHECK_FALSE(r.rows[2].error.empty());
    const auto csv = render_report_csv(r);
    CHECK(csv.find("Spectral clustering,2,,,false\n") != std::string::npos);
    CHECK(count_of(render_chart_svg(r), "<polyline") == 1);
}

TEST_CASE("report CSV lines") {
    const auto csv = render_report_csv(fixture_report());
    CHECK(csv.rfind("algorithm,k,silhouette,runtime_ms,converged\n", 0) == 0);
    CHECK(csv.find("\nK-Means,2,0.8097,") != std::string::npos);
    CHECK(csv.find("\nBirch clustering,2,0.9234,") != std::string::npos);
    CHECK(render_report_csv(SweepReport{}) == "algorithm,k,silhouette,runtime_ms,converged\n");

    SweepReport timed;
    timed.rows.push_back({Algorithm::Ward, 4, 0.12345, 12.34, false, ""});
    CHECK(render_report_csv(timed).find("Agglomerative Ward clustering,4,0.1235,12.3,false") != std::string::npos);
}

TEST_CASE("chart SVG structure") {
    const auto b = synth_blobs(20, 2, 4, 10.0, 1.0, 1);
    const auto svg = render_chart_svg(sweep(b.features, SweepConfig{}));
    CHECK(well_formed_xml(svg));
    CHECK(count_of(svg, "<polyline") == 9);
    CHECK(count_of(svg, "<g class=\"series\"") == 9);
    for (auto a : kAllAlgorithms) {
        CHECK(svg.find(std::string(display_name(a))) != std::string::npos);
    }
    CHECK(svg.find("href") == std::string::npos);

    SweepReport single;
    single.rows.push_back({Algorithm::KMeans, 2, 0.5, std::nullopt, true, ""});
    const auto one = render_chart_svg(single);
    CHECK(well_formed_xml(one));
    CHECK(count_of(one, "<polyline") == 0);
    CHECK(count_of(one, "<circle") == 1);

    CHECK(well_formed_xml(render_chart_svg(SweepReport{})));
    CHECK_FALSE(well_formed_xml("<svg><g></svg>"));
}

// ---- CLI ----

TEST_CASE("cli usage errors exit 1") {
    CHECK(run_cli({}).code == kExitUsage);
    CHECK(run_cli({"frobnicate"}).code == kExitUsage);
    const auto dir = testing::scratch_dir("cli_usage");
    write_text_file(dir / "f.csv", "id,f0\na,0\nb,1\nc,5\n");
    const auto r = run_cli({"cluster", "--features", (dir / "f.csv").string(), "--algo", "kmeanz", "--k", "2"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("kmeans") != std::string::npos);
    CHECK(r.err.find("gmm-full") != std::string::npos);
    CHECK(run_cli({"sweep", "--features", (dir / "f.csv").string(), "--k", "6..2"}).code == kExitUsage);
    CHECK(run_cli({"sweep", "--features", (dir / "f.csv").string(), "--bogus"}).code == kExitUsage);
}

TEST_CASE("cli data errors exit 2 with a position") {
    const auto dir = testing::scratch_dir("cli_data");

    const auto missing = (dir / "missing.bin").string();
    write_text_file(dir / "m.csv", std::string(kManifestHeader) + "\n");
    auto r = run_cli({"extract", "--manifest", (dir / "m.csv").string(), "--weights", missing, "--out", "-"});
    CHECK(r.code == kExitData);
    CHECK(r.err.find(missing) != std::string::npos);

    write_text_file(dir / "ragged.csv", "id,f0,f1\na,1,2\nb,3\n");
    r = run_cli({"sweep", "--features", (dir / "ragged.csv").string()});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("line 3") != std::string::npos);

    write_text_file(dir / "bad.bin", "NOPE-not-a-weight-file");
    write_text_file(dir / "one.csv", std::string(kManifestHeader) + "\n");
    r = run_cli({"extract", "--manifest", (dir / "one.csv").string(), "--weights", (dir / "bad.bin").string(),
                 "--out", "-"});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("offset 0") != std::string::npos);

    write_text_file(dir / "short.pgm", std::string("P5\n4 4\n255\n") + std::string(15, 'x'));
    write_text_file(dir / "trunc.csv", std::string(kManifestHeader) + "\nshort.pgm,,,,,,\n");
    r = run_cli({"preprocess", "--manifest", (dir / "trunc.csv").string(), "--out-dir", (dir / "out").string()});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("offset 26") != std::string::npos);
}

TEST_CASE("cli cluster, evaluate and sweep happy path") {
    const auto dir = testing::scratch_dir("cli_ok");
    const auto f = (dir / "f.csv").string();
    REQUIRE(run_cli({"synth", "--kind", "blobs", "--out", f, "--per-blob", "20", "--dim", "3", "--seed", "4"}).code ==
            kExitOk);
    const auto labels = (dir / "labels.csv").string();
    REQUIRE(run_cli({"cluster", "--features", f, "--algo", "ward", "--k", "2", "--out", labels}).code == kExitOk);
    CHECK(read_labels_csv(read_text_file(labels)).size() == 40);

    const auto ev = run_cli({"evaluate", "--features", f, "--labels", labels});
    CHECK(ev.code == kExitOk);
    CHECK(ev.out.rfind("cluster,n,silhouette\n", 0) == 0);
    CHECK(ev.out.find("\nall,40,") != std::string::npos);

    const auto report = (dir / "report.csv").string();
    const auto svg = (dir / "chart.svg").string();
    const auto sw = run_cli({"sweep", "--features", f, "--k", "2..6", "--algos", "all", "--seed", "7", "--out",
                             report, "--svg", svg});
    CHECK(sw.code == kExitOk);
    CHECK(count_of(read_text_file(report), "\n") == 46);
    CHECK(well_formed_xml(read_text_file(svg)));
}
