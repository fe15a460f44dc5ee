#include "tactile/eval.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "tactile/displacement.hpp"
#include "tactile/error.hpp"
#include "tactile/extract.hpp"
#include "tactile/metrics.hpp"
#include "tactile/parallel.hpp"

namespace tactile {

namespace {

std::vector<std::size_t> eligible(const DatasetManifest& corpus, const std::optional<Split>& split) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        if (!split || corpus.entries[i].split == *split) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> sample_entries(std::vector<std::size_t> pool, std::size_t count, std::uint64_t seed) {
    if (pool.size() <= count) return pool;
    std::mt19937_64 rng(seed);
    for (std::size_t i = pool.size(); i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        std::swap(pool[i - 1], pool[x % bound]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<std::string> candidate_labels(const std::vector<GeneratorKind>& kinds) {
    std::vector<std::string> labels;
    std::map<std::string, int> seen;
    for (const auto& k : kinds) seen[kind_name(k)]++;
    for (const auto& k : kinds) labels.push_back(seen[kind_name(k)] > 1 ? describe(k) : kind_name(k));
    std::set<std::string> unique(labels.begin(), labels.end());
    if (unique.size() != labels.size()) throw InvalidArgument("duplicate candidate generators");
    return labels;
}

void sort_records(std::vector<EntryRecord>& records) {
    std::sort(records.begin(), records.end(), [](const EntryRecord& a, const EntryRecord& b) {
        return a.id != b.id ? a.id < b.id : a.candidate < b.candidate;
    });
}

stats::Sample sample_of(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                        const std::string& label) {
    for (const auto& [name, values] : groups) {
        if (name == label) return {values, name};
    }
    return {{}, label};
}

TestOutcome run_welch_t(const stats::Sample& a, const stats::Sample& b, const std::string& metric) {
    TestOutcome t{"welch_t", metric, {a.label, b.label}, std::monostate{}, {}};
    try {
        t.result = stats::welch_t(a, b);
    } catch (const Error& e) {
        t.unavailable = e.what();
    }
    return t;
}

nlohmann::json tile_json(const TileParams& tile) {
    return {{"size_mm", {tile.size_mm.x, tile.size_mm.y, tile.size_mm.z}},
            {"target_faces", tile.target_faces},
            {"amplitude_mm", tile.amplitude_mm},
            {"magnification", tile.magnification}};
}

}  // namespace

const TestOutcome* EvalReport::find(const std::string& test, const std::string& metric) const {
    for (const auto& t : tests) {
        if (t.test == test && t.metric == metric) return &t;
    }
    return nullptr;
}

std::vector<std::pair<std::string, std::vector<double>>> metric_groups(const EvalReport& report,
                                                                       const std::string& metric) {
    std::vector<std::pair<std::string, std::vector<double>>> groups;
    auto group = [&](const std::string& name) -> std::vector<double>& {
        for (auto& g : groups) {
            if (g.first == name) return g.second;
        }
        groups.emplace_back(name, std::vector<double>{});
        return groups.back().second;
    };
    const bool rms = metric == "rms" || metric == "rms_mm";
    if (!rms && metric != "mse" && metric != "ssim") throw InvalidArgument("unknown metric '" + metric + "'");
    if (rms) group("groundtruth");
    std::set<std::string> gt_seen;
    for (const auto& r : report.records) {
        if (!r.ok) continue;
        if (metric == "rms") {
            if (gt_seen.insert(r.id).second) group("groundtruth").push_back(r.rms_groundtruth);
            group(r.candidate).push_back(r.rms_candidate);
        } else if (metric == "rms_mm") {
            if (!r.rms_groundtruth_mm || !r.rms_candidate_mm) continue;
            if (gt_seen.insert(r.id).second) group("groundtruth").push_back(*r.rms_groundtruth_mm);
            group(r.candidate).push_back(*r.rms_candidate_mm);
        } else {
            group(r.candidate).push_back(metric == "mse" ? r.mse : r.ssim);
        }
    }
    return groups;
}

EvalReport run_formative(const DatasetManifest& corpus, const GeneratorKind& candidate,
                         const FormativeOptions& options) {
    const auto pool = eligible(corpus, options.split);
    if (pool.empty()) throw InvalidArgument("formative evaluation needs a non-empty corpus");
    if (options.sample_count == 0) throw InvalidArgument("sample_count must be positive");
    validate(corpus);
    const auto selected = sample_entries(pool, options.sample_count, options.seed);

    const TriMesh tile = make_tile(options.tile.size_mm, options.tile.target_faces);
    DisplacementParams params;
    params.magnification = options.tile.magnification;
    params.amplitude_mm = options.tile.amplitude_mm;
    params.active_mask = default_active_vertices(tile);
    validate(params, tile.vertex_count());
    const std::string label = kind_name(candidate);

    std::vector<EntryRecord> records(selected.size());
    parallel_for(selected.size(), options.threads, [&](std::size_t slot) {
        const DatasetEntry& e = corpus.entries[selected[slot]];
        EntryRecord& r = records[slot];
        r.id = e.id;
        r.category = e.category;
        r.candidate = label;
        try {
            const Heightfield gt = load_heightfield(corpus.resolve(e.heightfield));
            const TextureImage texture = load_texture(corpus.resolve(e.texture));
            const std::pair<std::size_t, std::size_t> size =
                options.resolution.value_or(std::make_pair(gt.width(), gt.height()));
            GenerateOptions gen;
            gen.size = std::make_pair(gt.width(), gt.height());
            const Heightfield cand = generate(candidate, texture, gt, gen);

            const TriMesh mesh_gt = apply_heightfield(tile, gt, params);
            const TriMesh mesh_cand = apply_heightfield(tile, cand, params);
            const auto ex_gt = extract_heightfield(tile, mesh_gt, size.first, size.second, params.active_mask);
            const auto ex_cand = extract_heightfield(tile, mesh_cand, size.first, size.second, params.active_mask);
            r.rms_groundtruth = rms_roughness(ex_gt.field);
            r.rms_candidate = rms_roughness(ex_cand.field);
            r.mse = mse(ex_gt.field, ex_cand.field);
            r.ssim = ssim(ex_gt.field, ex_cand.field);
            r.rms_groundtruth_mm = ex_gt.vertex_stats.rms_mm;
            r.rms_candidate_mm = ex_cand.vertex_stats.rms_mm;
        } catch (const std::exception& ex) {
            r.ok = false;
            r.error = ex.what();
        }
    });

    EvalReport report;
    report.experiment = "formative";
    report.path = "mesh";
    report.entries = selected.size();
    report.provenance.generators = {describe(candidate)};
    report.provenance.manifest_hash = manifest_hash(corpus);
    report.provenance.parameters = {{"tile", tile_json(options.tile)},
                                    {"tile_faces", tile.face_count()},
                                    {"sample_count", options.sample_count},
                                    {"seed", options.seed},
                                    {"split", options.split ? to_string(*options.split) : "all"}};
    if (options.resolution) {
        report.provenance.parameters["resolution"] = {options.resolution->first, options.resolution->second};
    } else {
        report.provenance.parameters["resolution"] = "groundtruth";
    }
    sort_records(records);
    report.records = std::move(records);
    report.failures = static_cast<std::size_t>(
        std::count_if(report.records.begin(), report.records.end(), [](const EntryRecord& r) { return !r.ok; }));

    for (const std::string metric : {"rms", "rms_mm"}) {
        const auto groups = metric_groups(report, metric);
        report.tests.push_back(run_welch_t(sample_of(groups, "groundtruth"), sample_of(groups, label), metric));
    }
    return report;
}

EvalReport run_technical_eval(const DatasetManifest& corpus, const std::vector<GeneratorKind>& candidates,
                              const TechnicalOptions& options) {
    if (candidates.empty()) throw InvalidArgument("technical evaluation needs at least one candidate");
    const auto labels = candidate_labels(candidates);
    const auto selected = eligible(corpus, options.split);
    if (selected.empty()) throw InvalidArgument("technical evaluation needs a non-empty corpus");
    validate(corpus);

    const std::size_t k = candidates.size();
    std::vector<EntryRecord> records(selected.size() * k);
    parallel_for(selected.size(), options.threads, [&](std::size_t slot) {
        const DatasetEntry& e = corpus.entries[selected[slot]];
        for (std::size_t c = 0; c < k; ++c) {
            EntryRecord& r = records[slot * k + c];
            r.id = e.id;
            r.category = e.category;
            r.candidate = labels[c];
        }
        std::optional<Heightfield> gt;
        std::optional<TextureImage> texture;
        try {
            gt = load_heightfield(corpus.resolve(e.heightfield));
            texture = load_texture(corpus.resolve(e.texture));
        } catch (const std::exception& ex) {
            for (std::size_t c = 0; c < k; ++c) {
                records[slot * k + c].ok = false;
                records[slot * k + c].error = ex.what();
            }
            return;
        }
        const double rms_gt = rms_roughness(*gt);
        GenerateOptions gen;
        gen.size = std::make_pair(gt->width(), gt->height());
        for (std::size_t c = 0; c < k; ++c) {
            EntryRecord& r = records[slot * k + c];
            try {
                const Heightfield cand = generate(candidates[c], *texture, gt, gen);
                r.rms_groundtruth = rms_gt;
                r.rms_candidate = rms_roughness(cand);
                r.mse = mse(*gt, cand);
                r.ssim = ssim(*gt, cand);
            } catch (const std::exception& ex) {
                r.ok = false;
                r.error = ex.what();
            }
        }
    });

    EvalReport report;
    report.experiment = "technical";
    report.path = "direct";
    report.entries = selected.size();
    for (const auto& c : candidates) report.provenance.generators.push_back(describe(c));
    report.provenance.manifest_hash = manifest_hash(corpus);
    report.provenance.parameters = {{"split", options.split ? to_string(*options.split) : "all"},
                                    {"ssim_window", 11},
                                    {"ssim_sigma", 1.5}};
    sort_records(records);
    report.records = std::move(records);
    report.failures = static_cast<std::size_t>(
        std::count_if(report.records.begin(), report.records.end(), [](const EntryRecord& r) { return !r.ok; }));

    const auto rms_groups = metric_groups(report, "rms");
    std::vector<stats::Sample> samples;
    std::vector<std::string> names;
    for (const auto& [name, values] : rms_groups) {
        samples.push_back({values, name});
        names.push_back(name);
    }
    TestOutcome anova{"welch_anova", "rms", names, std::monostate{}, {}};
    TestOutcome post_hoc{"games_howell", "rms", names, std::monostate{}, {}};
    try {
        anova.result = stats::welch_anova(samples);
        post_hoc.result = stats::games_howell(samples);
    } catch (const Error& e) {
        anova.unavailable = e.what();
        post_hoc.unavailable = e.what();
    }
    report.tests.push_back(std::move(anova));
    report.tests.push_back(std::move(post_hoc));

    const auto mse_groups = metric_groups(report, "mse");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            report.tests.push_back(
                run_welch_t(sample_of(mse_groups, labels[i]), sample_of(mse_groups, labels[j]), "mse"));
        }
    }
    return report;
}

}  // namespace tactile
