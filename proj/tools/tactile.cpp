// tactile: command-line front end for the heightfield stylization pipeline.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tactile/dataset.hpp"
#include "tactile/displacement.hpp"
#include "tactile/error.hpp"
#include "tactile/eval.hpp"
#include "tactile/extract.hpp"
#include "tactile/generator.hpp"
#include "tactile/heightfield.hpp"
#include "tactile/mesh.hpp"
#include "tactile/metrics.hpp"
#include "tactile/stats/csv.hpp"
#include "tactile/stats/tests.hpp"
#include "tactile/studio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tactile;

namespace {

struct Globals {
    std::uint64_t seed = 42;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
    const auto x = text.find_first_of("xX");
    std::size_t w = 0;
    std::size_t h = 0;
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        std::size_t used = 0;
        w = std::stoul(text.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(text);
        h = std::stoul(text.substr(x + 1), &used);
        if (used != text.size() - x - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw InvalidArgument("expected WxH, got '" + text + "'");
    }
    if (w == 0 || h == 0) throw InvalidArgument("resolution must be positive, got '" + text + "'");
    return {w, h};
}

void print(const json& doc) { std::cout << doc.dump(2) << "\n"; }

json stats_json(const DisplacementStats& s) {
    return {{"min_mm", s.min_mm}, {"max_mm", s.max_mm}, {"mean_mm", s.mean_mm}, {"rms_mm", s.rms_mm},
            {"count", s.count}};
}

json ttest_json(const stats::TTestResult& r) { return {{"t", r.t}, {"df", r.df}, {"p", r.p}}; }

json wilcoxon_json(const stats::WilcoxonResult& r) {
    return {{"w", r.w},         {"w_plus", r.w_plus}, {"w_minus", r.w_minus}, {"n_effective", r.n_effective},
            {"p", r.p},         {"exact", r.exact},   {"degenerate", r.degenerate}};
}

// ---- stats ---------------------------------------------------------------

struct StatsArgs {
    std::string input;
    std::string format = "wide";
    std::string descriptor;
    std::vector<std::string> columns;
    std::string p_column = "p";
    std::size_t family_size = 0;
};

std::vector<stats::Sample> select_columns(const std::vector<stats::Sample>& all, const std::vector<std::string>& names) {
    if (names.empty()) return all;
    std::vector<stats::Sample> out;
    for (const auto& n : names) {
        auto it = std::find_if(all.begin(), all.end(), [&](const stats::Sample& s) { return s.label == n; });
        if (it == all.end()) throw InvalidArgument("no column named '" + n + "'");
        out.push_back(*it);
    }
    return out;
}

std::vector<stats::Sample> wide_groups(const StatsArgs& a, std::size_t exactly = 0) {
    const auto table = stats::read_csv(a.input);
    auto groups = select_columns(stats::wide_samples(table, a.input), a.columns);
    if (exactly && groups.size() != exactly) {
        throw InvalidArgument("expected " + std::to_string(exactly) + " columns, found " +
                              std::to_string(groups.size()) + " (use --columns)");
    }
    return groups;
}

// Rows where both columns are present, for paired tests.
std::pair<std::vector<double>, std::vector<double>> paired_columns(const StatsArgs& a) {
    const auto table = stats::read_csv(a.input);
    std::vector<std::string> names = a.columns;
    if (names.empty()) {
        if (table.header.size() != 2) throw InvalidArgument("expected 2 columns (use --columns)");
        names = table.header;
    }
    if (names.size() != 2) throw InvalidArgument("paired tests need exactly 2 columns");
    const std::size_t ca = table.column(names[0], a.input);
    const std::size_t cb = table.column(names[1], a.input);
    stats::CsvTable pair;
    pair.header = {names[0], names[1]};
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row[ca].empty() || row[cb].empty()) continue;
        pair.rows.push_back({row[ca], row[cb]});
        pair.row_lines.push_back(table.row_lines[i]);
    }
    const auto samples = stats::wide_samples(pair, a.input);
    return {samples[0].values, samples[1].values};
}

std::vector<stats::RatingMatrix> long_matrices(const StatsArgs& a) {
    const auto records = stats::rating_records(stats::read_csv(a.input), a.input);
    std::vector<std::string> names = a.descriptor.empty() ? stats::descriptors(records)
                                                          : std::vector<std::string>{a.descriptor};
    std::vector<stats::RatingMatrix> out;
    for (const auto& d : names) {
        auto m = stats::pivot_ratings(records, d);
        if (!a.columns.empty()) {
            stats::RatingMatrix sub = m;
            sub.conditions = a.columns;
            sub.values.clear();
            std::vector<std::size_t> idx;
            for (const auto& c : a.columns) {
                auto it = std::find(m.conditions.begin(), m.conditions.end(), c);
                if (it == m.conditions.end()) throw InvalidArgument("no condition named '" + c + "'");
                idx.push_back(static_cast<std::size_t>(it - m.conditions.begin()));
            }
            for (const auto& row : m.values) {
                std::vector<double> r;
                for (std::size_t j : idx) r.push_back(row[j]);
                sub.values.push_back(std::move(r));
            }
            m = std::move(sub);
        }
        out.push_back(std::move(m));
    }
    return out;
}

json run_stats(const std::string& test, const StatsArgs& a) {
    if (test == "welch-t") {
        const auto g = wide_groups(a, 2);
        json out = ttest_json(stats::welch_t(g[0], g[1]));
        out["groups"] = {g[0].label, g[1].label};
        return out;
    }
    if (test == "welch-anova") {
        const auto g = wide_groups(a);
        const auto r = stats::welch_anova(g);
        return {{"f", r.f}, {"df1", r.df1}, {"df2", r.df2}, {"p", r.p}};
    }
    if (test == "games-howell") {
        json pairs = json::array();
        for (const auto& e : stats::games_howell(wide_groups(a))) {
            pairs.push_back({{"first", e.first}, {"second", e.second}, {"mean_difference", e.mean_difference},
                             {"t", e.t}, {"df", e.df}, {"p", e.p}});
        }
        return {{"pairs", pairs}};
    }
    if (test == "spearman") {
        const auto [x, y] = paired_columns(a);
        const auto r = stats::spearman(x, y);
        return {{"rho", r.rho}, {"p", r.p}, {"n", x.size()}};
    }
    if (test == "holm") {
        const auto table = stats::read_csv(a.input);
        const std::size_t col = table.column(a.p_column, a.input);
        std::vector<double> p;
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const std::string& cell = table.rows[i][col];
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size()) {
                throw ParseError(a.input, table.row_lines[i], "not a p-value: '" + cell + "'");
            }
            p.push_back(v);
        }
        const std::size_t m = a.family_size ? a.family_size : p.size();
        return {{"family_size", m}, {"p", p}, {"adjusted", stats::holm_correct(p, m)}};
    }
    if (test == "friedman") {
        json results = json::array();
        if (a.format == "long") {
            for (const auto& m : long_matrices(a)) {
                const auto r = stats::friedman(m.values);
                results.push_back({{"descriptor", m.descriptor}, {"conditions", m.conditions},
                                   {"blocks", m.values.size()}, {"dropped_blocks", m.dropped_blocks},
                                   {"chi2", r.chi2}, {"df", r.df}, {"p", r.p}});
            }
            return {{"results", results}};
        }
        const auto table = stats::read_csv(a.input);
        std::vector<std::vector<double>> rows;
        const auto samples = stats::wide_samples(table, a.input);
        for (const auto& s : samples) {
            if (s.values.size() != table.rows.size()) throw InvalidArgument("friedman needs complete rows");
        }
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            std::vector<double> row;
            for (const auto& s : samples) row.push_back(s.values[i]);
            rows.push_back(std::move(row));
        }
        const auto r = stats::friedman(rows);
        return {{"chi2", r.chi2}, {"df", r.df}, {"p", r.p}};
    }
    if (test == "wilcoxon") {
        if (a.format != "long") {
            const auto [x, y] = paired_columns(a);
            return wilcoxon_json(stats::wilcoxon_signed_rank(x, y));
        }
        json results = json::array();
        for (const auto& m : long_matrices(a)) {
            std::vector<json> pairs;
            std::vector<double> ps;
            for (std::size_t i = 0; i < m.conditions.size(); ++i) {
                for (std::size_t j = i + 1; j < m.conditions.size(); ++j) {
                    const auto r = stats::wilcoxon_signed_rank(m.condition_values(i), m.condition_values(j));
                    json e = wilcoxon_json(r);
                    e["first"] = m.conditions[i];
                    e["second"] = m.conditions[j];
                    pairs.push_back(std::move(e));
                    ps.push_back(r.p);
                }
            }
            const std::size_t family = a.family_size ? a.family_size : ps.size();
            const auto adjusted = stats::holm_correct(ps, family);
            for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i]["p_holm"] = adjusted[i];
            results.push_back({{"descriptor", m.descriptor}, {"family_size", family}, {"pairs", pairs}});
        }
        return {{"results", results}};
    }
    throw InvalidArgument("unknown test '" + test + "'");
}

// ---- serve ---------------------------------------------------------------

StudioServer* g_server = nullptr;

void handle_signal(int) {
    if (g_server) g_server->stop();
}

int fail(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heightfield texture stylization toolkit"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker thread cap")->check(CLI::PositiveNumber);

    // tile
    auto* tile = app.add_subcommand("tile", "Build a watertight box tile with a dense top face");
    std::vector<double> size_mm = {50.0, 50.0, 10.0};
    std::size_t target_faces = 25000;
    std::string out_path;
    tile->add_option("--size-mm", size_mm, "Tile size X Y Z in mm")->expected(3)->capture_default_str();
    tile->add_option("--target-faces", target_faces, "Minimum face count")->capture_default_str();
    tile->add_option("-o,--output", out_path, "Output OBJ")->required();

    // apply
    auto* apply = app.add_subcommand("apply", "Displace mesh vertices by a heightfield");
    std::string mesh_path;
    std::string hf_path;
    double magnification = kDefaultMagnification;
    double amplitude_mm = kDefaultAmplitudeMm;
    std::string active_group;
    bool planar_uvs = false;
    apply->add_option("--mesh", mesh_path, "Input OBJ")->required()->check(CLI::ExistingFile);
    apply->add_option("--heightfield", hf_path, "Heightfield PNG")->required()->check(CLI::ExistingFile);
    apply->add_option("--magnification", magnification, "Texture magnification factor")->capture_default_str();
    apply->add_option("--amplitude-mm", amplitude_mm, "Height of h=1 in mm")->capture_default_str();
    apply->add_option("--active-group", active_group, "Only displace this face group ('all' for every vertex)");
    apply->add_flag("--planar-uvs", planar_uvs, "Replace uvs with a planar projection");
    apply->add_option("-o,--output", out_path, "Output OBJ")->required();

    // extract
    auto* extract = app.add_subcommand("extract", "Recover a heightfield from a displaced mesh");
    std::string original_path;
    std::string modified_path;
    std::string resolution = "256x256";
    extract->add_option("--original", original_path, "Undisplaced OBJ")->required()->check(CLI::ExistingFile);
    extract->add_option("--modified", modified_path, "Displaced OBJ")->required()->check(CLI::ExistingFile);
    extract->add_option("--resolution", resolution, "Output size WxH")->capture_default_str();
    extract->add_option("--active-group", active_group, "Restrict to this face group ('all' for every vertex)");
    extract->add_option("-o,--output", out_path, "Output 16-bit PNG")->required();

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Compare two heightfields");
    std::string a_path;
    std::string b_path;
    metrics->add_option("--a", a_path, "Reference heightfield")->required()->check(CLI::ExistingFile);
    metrics->add_option("--b", b_path, "Candidate heightfield")->required()->check(CLI::ExistingFile);

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Statistical tests on CSV data");
    stats_cmd->require_subcommand(1);
    StatsArgs sa;
    const std::map<std::string, std::string> tests = {
        {"welch-t", "Welch's t-test on two wide columns"},
        {"welch-anova", "Welch's ANOVA over wide columns"},
        {"games-howell", "Games-Howell post-hoc over wide columns"},
        {"friedman", "Friedman test (wide rows or long ratings per descriptor)"},
        {"wilcoxon", "Wilcoxon signed-rank (two paired columns or all long condition pairs with Holm)"},
        {"spearman", "Spearman rank correlation of two paired columns"},
        {"holm", "Bonferroni-Holm adjustment of a p column"}};
    for (const auto& [name, desc] : tests) {
        auto* sub = stats_cmd->add_subcommand(name, desc);
        sub->add_option("--input", sa.input, "CSV file")->required()->check(CLI::ExistingFile);
        sub->add_option("--columns", sa.columns, "Columns (wide) or conditions (long) to use")->delimiter(',');
        if (name == "friedman" || name == "wilcoxon") {
            sub->add_option("--format", sa.format, "wide or long")
                ->check(CLI::IsMember({"wide", "long"}))
                ->capture_default_str();
            sub->add_option("--descriptor", sa.descriptor, "Only this descriptor (long format)");
        }
        if (name == "wilcoxon" || name == "holm") {
            sub->add_option("--family-size", sa.family_size, "Holm family size m (default: number of tests)");
        }
        if (name == "holm") sub->add_option("--column", sa.p_column, "p-value column")->capture_default_str();
    }

    // dataset
    auto* dataset = app.add_subcommand("dataset", "Corpus manifests");
    dataset->require_subcommand(1);
    std::string manifest_path;
    double test_fraction = 0.1;
    std::string output_dir;
    std::size_t count = 50;
    std::size_t synth_resolution = 256;
    auto* split = dataset->add_subcommand("split", "Stratified seeded train/test split");
    split->add_option("--manifest", manifest_path, "Manifest JSON")->required()->check(CLI::ExistingFile);
    split->add_option("--test-fraction", test_fraction, "Fraction held out per category")->capture_default_str();
    split->add_option("-o,--output", out_path, "Output manifest (default: overwrite)");
    auto* augment = dataset->add_subcommand("augment", "Add 90/180/270 degree rotations of train pairs");
    augment->add_option("--manifest", manifest_path, "Manifest JSON")->required()->check(CLI::ExistingFile);
    augment->add_option("--output-dir", output_dir, "Directory for rotated images")->required();
    augment->add_option("-o,--output", out_path, "Output manifest (default: overwrite)");
    auto* synth = dataset->add_subcommand("synth", "Generate a synthetic decorrelated corpus");
    synth->add_option("--count", count, "Number of pairs")->capture_default_str();
    synth->add_option("--resolution", synth_resolution, "Image side in pixels")->capture_default_str();
    synth->add_option("--output-dir", output_dir, "Output directory")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Run an evaluation experiment");
    eval->require_subcommand(1);
    std::vector<std::string> generators;
    std::size_t samples = 50;
    std::string eval_resolution;
    std::string split_name;
    auto add_eval_common = [&](CLI::App* sub) {
        sub->add_option("--manifest", manifest_path, "Corpus manifest")->required()->check(CLI::ExistingFile);
        sub->add_option("--split", split_name, "Restrict to train, test or unassigned entries");
        sub->add_option("-o,--output", out_path, "Report JSON")->required();
    };
    auto* formative = eval->add_subcommand("formative", "Mesh-path RMS comparison against ground truth");
    add_eval_common(formative);
    formative->add_option("--generator", generators, "baseline, groundtruth or remote=URL")->required()->expected(1);
    formative->add_option("--samples", samples, "Entries sampled from the corpus")->capture_default_str();
    formative->add_option("--resolution", eval_resolution, "Extraction size WxH (default: ground truth size)");
    formative->add_option("--size-mm", size_mm, "Tile size X Y Z in mm")->expected(3)->capture_default_str();
    formative->add_option("--target-faces", target_faces, "Tile face count")->capture_default_str();
    formative->add_option("--magnification", magnification, "Texture magnification factor")->capture_default_str();
    formative->add_option("--amplitude-mm", amplitude_mm, "Height of h=1 in mm")->capture_default_str();
    auto* technical = eval->add_subcommand("technical", "Direct heightfield comparison of candidates");
    add_eval_common(technical);
    technical->add_option("--generator", generators, "Candidate generator (repeatable)")->required();

    // plot
    auto* plot = app.add_subcommand("plot", "Render box plots from a report");
    std::string report_path;
    plot->add_option("--report", report_path, "Report JSON")->required()->check(CLI::ExistingFile);
    plot->add_option("--output-dir", output_dir, "Directory for SVG files")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Start the studio HTTP API");
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string generator = "baseline";
    std::size_t capacity = 32;
    serve->add_option("--port", port, "Port")->capture_default_str();
    serve->add_option("--host", host, "Bind address")->capture_default_str();
    serve->add_option("--generator", generator, "baseline or remote=URL")->capture_default_str();
    serve->add_option("--target-faces", target_faces, "Subdivision target for uploads")->capture_default_str();
    serve->add_option("--amplitude-mm", amplitude_mm, "Height of h=1 in mm")->capture_default_str();
    serve->add_option("--capacity", capacity, "Sessions kept in memory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", "usage_error"}, {"message", e.what()}}.dump() << std::endl;
        return 2;
    }

    try {
        auto optional_split = [&]() -> std::optional<Split> {
            if (split_name.empty()) return std::nullopt;
            return parse_split(split_name);
        };

        if (*tile) {
            const TriMesh mesh = make_tile({size_mm[0], size_mm[1], size_mm[2]}, target_faces);
            save_obj(mesh, out_path);
            print({{"output", out_path}, {"vertex_count", mesh.vertex_count()}, {"face_count", mesh.face_count()}});
        } else if (*apply) {
            Diagnostics diag;
            TriMesh mesh = load_obj(mesh_path, &diag);
            if (planar_uvs) mesh = with_planar_uvs(mesh);
            const Heightfield field = load_heightfield(hf_path);
            DisplacementParams params;
            params.magnification = magnification;
            params.amplitude_mm = amplitude_mm;
            if (active_group.empty()) {
                params.active_mask = default_active_vertices(mesh);
            } else if (active_group != "all") {
                auto verts = group_vertices(mesh, active_group);
                if (verts.empty()) throw InvalidArgument("mesh has no group '" + active_group + "'");
                params.active_mask = std::move(verts);
            }
            const TriMesh out = apply_heightfield(mesh, field, params);
            save_obj(out, out_path);
            print({{"output", out_path},
                   {"vertex_count", out.vertex_count()},
                   {"displacement", stats_json(raw_displacement_stats(mesh, out, params.active_mask))},
                   {"warnings", diag.warnings}});
        } else if (*extract) {
            const auto [w, h] = parse_size(resolution);
            const TriMesh original = load_obj(original_path);
            const TriMesh modified = load_obj(modified_path);
            std::optional<std::vector<std::uint32_t>> active;
            if (active_group.empty()) {
                active = default_active_vertices(original);
            } else if (active_group != "all") {
                active = group_vertices(original, active_group);
                if (active->empty()) throw InvalidArgument("mesh has no group '" + active_group + "'");
            }
            const auto ex = extract_heightfield(original, modified, w, h, active);
            save_heightfield(ex.field, out_path, 16);
            print({{"output", out_path},
                   {"width", w},
                   {"height", h},
                   {"range_min_mm", ex.range_min_mm},
                   {"range_max_mm", ex.range_max_mm},
                   {"displacement", stats_json(ex.vertex_stats)}});
        } else if (*metrics) {
            const auto r = compare(load_heightfield(a_path), load_heightfield(b_path));
            print({{"rms_a", r.rms_a}, {"rms_b", r.rms_b}, {"mse", r.mse}, {"ssim", r.ssim},
                   {"pearson", r.pearson}, {"width", r.width}, {"height", r.height}});
        } else if (*stats_cmd) {
            for (auto* sub : stats_cmd->get_subcommands()) {
                if (*sub) {
                    json out = run_stats(sub->get_name(), sa);
                    out["test"] = sub->get_name();
                    print(out);
                }
            }
        } else if (*split) {
            Diagnostics diag;
            const auto m = assign_split(load_manifest(manifest_path), test_fraction, g.seed, &diag);
            save_manifest(m, out_path.empty() ? manifest_path : out_path);
            for (const auto& w : diag.warnings) std::cerr << json{{"warning", w}}.dump() << std::endl;
            print({{"train", m.count(Split::train)}, {"test", m.count(Split::test)}, {"seed", g.seed}});
        } else if (*augment) {
            const auto m = augment_rotations(load_manifest(manifest_path), output_dir);
            save_manifest(m, out_path.empty() ? manifest_path : out_path);
            print({{"train", m.count(Split::train)}, {"test", m.count(Split::test)}});
        } else if (*synth) {
            const auto m = generate_synthetic_corpus(count, synth_resolution, g.seed, output_dir, g.threads);
            print({{"manifest", (fs::path(output_dir) / "manifest.json").string()}, {"entries", m.entries.size()},
                   {"seed", g.seed}});
        } else if (*formative) {
            FormativeOptions opt;
            opt.tile = {{size_mm[0], size_mm[1], size_mm[2]}, target_faces, amplitude_mm, magnification};
            if (!eval_resolution.empty()) opt.resolution = parse_size(eval_resolution);
            opt.sample_count = samples;
            opt.seed = g.seed;
            opt.split = optional_split();
            opt.threads = g.threads;
            const auto report = run_formative(load_manifest(manifest_path), parse_generator(generators.at(0)), opt);
            save_report(report, out_path);
            json summary = {{"report", out_path}, {"entries", report.entries}, {"failures", report.failures}};
            if (const auto* t = report.find("welch_t", "rms")) {
                if (const auto* r = std::get_if<stats::TTestResult>(&t->result)) summary["welch_t"] = ttest_json(*r);
            }
            print(summary);
        } else if (*technical) {
            std::vector<GeneratorKind> kinds;
            for (const auto& s : generators) kinds.push_back(parse_generator(s));
            TechnicalOptions opt;
            opt.split = optional_split();
            opt.threads = g.threads;
            const auto report = run_technical_eval(load_manifest(manifest_path), kinds, opt);
            save_report(report, out_path);
            print({{"report", out_path}, {"entries", report.entries}, {"failures", report.failures}});
        } else if (*plot) {
            const auto report = load_report(report_path);
            fs::create_directories(output_dir);
            std::vector<std::string> written;
            for (const auto& [metric, svg] : report_plots(report)) {
                const fs::path p = fs::path(output_dir) / (report.experiment + "_" + metric + ".svg");
                std::ofstream out(p, std::ios::binary);
                out << svg;
                if (!out) throw IoError("failed writing " + p.string());
                written.push_back(p.string());
            }
            print({{"plots", written}});
        } else if (*serve) {
            StudioOptions opt;
            opt.generator = parse_generator(generator);
            opt.target_faces = target_faces;
            opt.amplitude_mm = amplitude_mm;
            opt.capacity = capacity;
            StudioServer server(std::move(opt));
            const int bound = server.bind(host, port);
            g_server = &server;
            std::signal(SIGINT, handle_signal);
            std::signal(SIGTERM, handle_signal);
            std::cerr << json{{"listening", host + ":" + std::to_string(bound)}}.dump() << std::endl;
            server.listen();
            g_server = nullptr;
        }
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail("io_error", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
