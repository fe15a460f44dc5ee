#include <fstream>
#include <sstream>

#include "tactile/error.hpp"
#include "tactile/eval.hpp"

namespace tactile {

using nlohmann::json;

namespace {

json record_json(const EntryRecord& r) {
    json j = {{"id", r.id}, {"category", r.category}, {"candidate", r.candidate}, {"ok", r.ok}};
    if (!r.ok) {
        j["error"] = r.error;
        return j;
    }
    j["rms_groundtruth"] = r.rms_groundtruth;
    j["rms_candidate"] = r.rms_candidate;
    j["mse"] = r.mse;
    j["ssim"] = r.ssim;
    if (r.rms_groundtruth_mm) j["rms_groundtruth_mm"] = *r.rms_groundtruth_mm;
    if (r.rms_candidate_mm) j["rms_candidate_mm"] = *r.rms_candidate_mm;
    return j;
}

EntryRecord record_from(const json& j) {
    EntryRecord r;
    r.id = j.at("id").get<std::string>();
    r.category = j.value("category", std::string{});
    r.candidate = j.at("candidate").get<std::string>();
    r.ok = j.at("ok").get<bool>();
    if (!r.ok) {
        r.error = j.value("error", std::string{});
        return r;
    }
    r.rms_groundtruth = j.at("rms_groundtruth").get<double>();
    r.rms_candidate = j.at("rms_candidate").get<double>();
    r.mse = j.at("mse").get<double>();
    r.ssim = j.at("ssim").get<double>();
    if (j.contains("rms_groundtruth_mm")) r.rms_groundtruth_mm = j["rms_groundtruth_mm"].get<double>();
    if (j.contains("rms_candidate_mm")) r.rms_candidate_mm = j["rms_candidate_mm"].get<double>();
    return r;
}

json test_json(const TestOutcome& t) {
    json j = {{"test", t.test}, {"metric", t.metric}, {"groups", t.groups}};
    if (!t.unavailable.empty()) {
        j["unavailable"] = t.unavailable;
        return j;
    }
    if (const auto* r = std::get_if<stats::TTestResult>(&t.result)) {
        j["result"] = {{"t", r->t}, {"df", r->df}, {"p", r->p}};
    } else if (const auto* r = std::get_if<stats::AnovaResult>(&t.result)) {
        j["result"] = {{"f", r->f}, {"df1", r->df1}, {"df2", r->df2}, {"p", r->p}};
    } else if (const auto* r = std::get_if<std::vector<stats::GamesHowellEntry>>(&t.result)) {
        json pairs = json::array();
        for (const auto& e : *r) {
            pairs.push_back({{"first", e.first},
                             {"second", e.second},
                             {"mean_difference", e.mean_difference},
                             {"t", e.t},
                             {"df", e.df},
                             {"p", e.p}});
        }
        j["result"] = std::move(pairs);
    }
    return j;
}

TestOutcome test_from(const json& j) {
    TestOutcome t;
    t.test = j.at("test").get<std::string>();
    t.metric = j.at("metric").get<std::string>();
    t.groups = j.at("groups").get<std::vector<std::string>>();
    if (j.contains("unavailable")) {
        t.unavailable = j["unavailable"].get<std::string>();
        return t;
    }
    const json& r = j.at("result");
    if (t.test == "welch_t") {
        t.result = stats::TTestResult{r.at("t").get<double>(), r.at("df").get<double>(), r.at("p").get<double>()};
    } else if (t.test == "welch_anova") {
        t.result = stats::AnovaResult{r.at("f").get<double>(), r.at("df1").get<double>(), r.at("df2").get<double>(),
                                      r.at("p").get<double>()};
    } else if (t.test == "games_howell") {
        std::vector<stats::GamesHowellEntry> pairs;
        for (const auto& e : r) {
            pairs.push_back({e.at("first").get<std::string>(), e.at("second").get<std::string>(),
                             e.at("mean_difference").get<double>(), e.at("t").get<double>(),
                             e.at("df").get<double>(), e.at("p").get<double>()});
        }
        t.result = std::move(pairs);
    } else {
        throw InvalidArgument("unknown test '" + t.test + "'");
    }
    return t;
}

}  // namespace

json to_json(const EvalReport& report) {
    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["experiment"] = report.experiment;
    doc["path"] = report.path;
    doc["provenance"] = {{"generators", report.provenance.generators},
                         {"manifest_hash", report.provenance.manifest_hash},
                         {"parameters", report.provenance.parameters}};
    doc["entries"] = report.entries;
    doc["failures"] = report.failures;
    json records = json::array();
    for (const auto& r : report.records) records.push_back(record_json(r));
    doc["records"] = std::move(records);
    json tests = json::array();
    for (const auto& t : report.tests) tests.push_back(test_json(t));
    doc["tests"] = std::move(tests);
    return doc;
}

EvalReport report_from_json(const json& doc, const std::string& source) {
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != kReportSchemaVersion) {
            throw ParseError(source, 0, "unsupported report schema_version " + std::to_string(version));
        }
        EvalReport report;
        report.experiment = doc.at("experiment").get<std::string>();
        report.path = doc.at("path").get<std::string>();
        const json& prov = doc.at("provenance");
        report.provenance.generators = prov.at("generators").get<std::vector<std::string>>();
        report.provenance.manifest_hash = prov.at("manifest_hash").get<std::string>();
        report.provenance.parameters = prov.value("parameters", json::object());
        report.entries = doc.at("entries").get<std::size_t>();
        report.failures = doc.at("failures").get<std::size_t>();
        for (const auto& r : doc.at("records")) report.records.push_back(record_from(r));
        for (const auto& t : doc.at("tests")) report.tests.push_back(test_from(t));
        return report;
    } catch (const json::exception& e) {
        throw ParseError(source, 0, e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(source, 0, e.what());
    }
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report " + path.string());
    out << to_json(report).dump(2) << "\n";
    if (!out) throw IoError("failed writing report " + path.string());
}

EvalReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open report " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
    return report_from_json(doc, path.string());
}

}  // namespace tactile
