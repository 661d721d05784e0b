#include "tdledger/pipeline.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include <json.hpp>

#include "tdledger/errors.hpp"

namespace fs = std::filesystem;

namespace tdledger {

std::optional<InputFormat> input_format_from(std::string_view text) {
    if (text == "checkstyle") return InputFormat::Checkstyle;
    if (text == "jacoco") return InputFormat::Jacoco;
    if (text == "designite") return InputFormat::Designite;
    if (text == "native") return InputFormat::Native;
    if (text == "depgraph") return InputFormat::Depgraph;
    return std::nullopt;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "': " + std::strerror(errno), path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw ParseError("failed reading '" + path + "'", path);
    return buffer.str();
}

RunSnapshot load_snapshot_file(const std::string& path) {
    try {
        return parse_snapshot(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.message() + " in snapshot '" + path + "'", e.where());
    }
}

namespace {

using json = nlohmann::ordered_json;

Rational config_rational(const json& value, const std::string& what) {
    try {
        if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
        if (value.is_number_float()) return Rational::from_double_repr(value.get<double>());
        if (value.is_string()) return Rational::parse(value.get<std::string>());
    } catch (const Error&) {
    }
    throw UsageError("config: " + what + " must be a number");
}

// Table-style cost keys ("cost_to_fix_a_code_smell") mapped onto item kinds.
const std::map<std::string, ItemKind>& cost_key_map() {
    static const std::map<std::string, ItemKind> keys = {
        {"cost_to_fix_a_code_smell", ItemKind::CodeSmell},
        {"cost_to_fix_a_coding_guideline_violation", ItemKind::CodingGuidelineViolation},
        {"cost_to_fix_an_inconsistent_style", ItemKind::InconsistentStyle},
        {"cost_to_fix_a_design_smell", ItemKind::DesignSmell},
        {"cost_to_fix_a_design_rule_violation", ItemKind::DesignRuleViolation},
        {"cost_to_fix_a_design_constraint_violation", ItemKind::DesignConstraintViolation},
        {"cost_to_fix_a_lack_of_test", ItemKind::LackOfTests},
        {"cost_to_fix_an_improper_test_design", ItemKind::ImproperTestDesign},
        {"cost_to_fix_an_architecture_smell", ItemKind::ArchitectureSmell},
        {"cost_to_fix_an_architecture_rule_violation", ItemKind::ArchitectureRuleViolation},
        {"cost_to_fix_a_modularity_violation", ItemKind::ModularityViolation},
    };
    return keys;
}

CostModel cost_model_from_config(const json& obj) {
    CostModel model = default_cost_model();
    if (auto it = obj.find("preset"); it != obj.end()) {
        if (*it == "default") {
            model = default_cost_model();
        } else if (*it == "sonar_subset") {
            model = sonar_subset_model();
        } else {
            throw UsageError("config: unknown cost model preset '" +
                             it->get<std::string>() + "'");
        }
    }
    for (const auto& [key, value] : obj.items()) {
        if (key == "preset") continue;
        if (key == "clamp_coverage_term") {
            if (!value.is_boolean()) throw UsageError("config: clamp_coverage_term must be a boolean");
            model.clamp_coverage_term = value.get<bool>();
            continue;
        }
        if (key == "included_items") {
            if (!value.is_array()) throw UsageError("config: included_items must be an array");
            model.included_items.clear();
            for (const auto& item : value) {
                if (!item.is_string()) throw UsageError("config: included_items entries must be strings");
                auto kind = item_kind_from(item.get<std::string>());
                if (!kind) {
                    throw UsageError("config: unknown item kind '" + item.get<std::string>() +
                                     "' in included_items");
                }
                model.included_items.insert(*kind);
            }
            continue;
        }
        auto kind = cost_key_map().find(key);
        if (kind == cost_key_map().end()) {
            throw UsageError("config: unknown cost model field '" + key + "'");
        }
        Rational cost = config_rational(value, key);
        if (cost.is_negative()) throw UsageError("config: " + key + " must be non-negative");
        model.cost_per_item[kind->second] = cost;
    }
    return model;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) throw UsageError("config: malformed JSON in '" + path + "'");
    if (!doc.is_object()) throw UsageError("config: expected a JSON object");

    for (const auto& [key, value] : doc.items()) {
        static const std::set<std::string> known = {
            "project",    "inputs",     "coverage_threshold", "cost_model",
            "ruleset",    "arch_rules", "tool_versions"};
        if (!known.contains(key)) throw UsageError("config: unknown field '" + key + "'");
    }

    RunConfig config;
    fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path candidate(p);
        return candidate.is_absolute() ? candidate.string() : (base / candidate).string();
    };

    auto project_it = doc.find("project");
    if (project_it == doc.end() || !project_it->is_object()) {
        throw UsageError("config: needs a 'project' object");
    }
    const json& project = *project_it;
    auto get_string = [&](const json& obj, const char* key) {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) {
            throw UsageError(std::string("config: project needs string field '") + key + "'");
        }
        return it->get<std::string>();
    };
    config.project.name = get_string(project, "name");
    config.project.slug = get_string(project, "slug");
    auto loc_it = project.find("loc");
    if (loc_it == project.end() || !loc_it->is_number_unsigned()) {
        throw UsageError("config: project needs a non-negative integer 'loc'");
    }
    config.project.loc = loc_it->get<std::uint64_t>();
    auto classes_it = project.find("num_classes");
    if (classes_it == project.end() || !classes_it->is_number_unsigned()) {
        throw UsageError("config: project needs a non-negative integer 'num_classes'");
    }
    config.project.num_classes = classes_it->get<std::uint64_t>();
    if (auto it = project.find("coverage_percent"); it != project.end()) {
        config.coverage_percent_override = config_rational(*it, "project.coverage_percent");
    }
    for (const Violation& v : validate_project_meta(config.project)) {
        throw UsageError("config: project " + v.field + ": " + v.message);
    }

    auto inputs_it = doc.find("inputs");
    if (inputs_it == doc.end() || !inputs_it->is_array() || inputs_it->empty()) {
        throw UsageError("config: needs a non-empty 'inputs' array");
    }
    for (const json& input : *inputs_it) {
        if (!input.is_object()) throw UsageError("config: inputs entries must be objects");
        std::string format_text = get_string(input, "format");
        auto format = input_format_from(format_text);
        if (!format) throw UsageError("config: unknown input format '" + format_text + "'");
        config.inputs.push_back({*format, resolve(get_string(input, "path"))});
    }

    if (auto it = doc.find("coverage_threshold"); it != doc.end()) {
        config.coverage_threshold = config_rational(*it, "coverage_threshold");
        if (config.coverage_threshold < Rational(0) || config.coverage_threshold > Rational(100)) {
            throw UsageError("config: coverage_threshold must lie in [0, 100]");
        }
    }

    if (auto it = doc.find("cost_model"); it != doc.end()) {
        if (!it->is_object()) throw UsageError("config: cost_model must be an object");
        config.cost_model = cost_model_from_config(*it);
    }
    config.cost_model.coverage_threshold = config.coverage_threshold;

    if (auto it = doc.find("ruleset"); it != doc.end()) {
        if (!it->is_string()) throw UsageError("config: ruleset must be a file path");
        config.ruleset = parse_ruleset(read_file(resolve(it->get<std::string>())));
    }
    if (auto it = doc.find("arch_rules"); it != doc.end()) {
        if (!it->is_string()) throw UsageError("config: arch_rules must be a file path");
        config.arch_rules = parse_arch_rules(read_file(resolve(it->get<std::string>())));
    }
    if (auto it = doc.find("tool_versions"); it != doc.end()) {
        if (!it->is_object()) throw UsageError("config: tool_versions must be an object");
        for (const auto& [tool, version] : it->items()) {
            if (!version.is_string()) throw UsageError("config: tool versions must be strings");
            config.tool_versions[tool] = version.get<std::string>();
        }
    }
    return config;
}

namespace {

// Single-writer guard: <store>/lock created O_EXCL, removed on scope exit.
class StoreLock {
public:
    explicit StoreLock(const fs::path& store) : path_(store / "lock") {
        int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0) {
            if (errno == EEXIST) {
                throw Error("store '" + store.string() +
                            "' is locked by another analyze (remove '" + path_.string() +
                            "' if stale)");
            }
            throw Error("cannot create lock '" + path_.string() + "': " + std::strerror(errno));
        }
        ::close(fd);
    }
    ~StoreLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

private:
    fs::path path_;
};

bool valid_timestamp(std::string_view s) {
    // 2019-04-15T12:30:00Z
    if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
        s[16] != ':' || s[19] != 'Z') {
        return false;
    }
    for (std::size_t i = 0; i < 19; ++i) {
        if (i == 4 || i == 7 || i == 10 || i == 13 || i == 16) continue;
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

std::string now_timestamp() {
    if (const char* pinned = std::getenv("TDLEDGER_NOW")) {
        if (!valid_timestamp(pinned)) {
            throw UsageError("TDLEDGER_NOW must be an ISO-8601 UTC timestamp "
                             "(YYYY-MM-DDTHH:MM:SSZ), got '" +
                             std::string(pinned) + "'");
        }
        return pinned;
    }
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

AnalyzeResult run_analyze(const RunConfig& config, const std::string& store_dir,
                          const std::string& now_iso) {
    if (config.inputs.empty()) throw UsageError("analyze needs at least one input report");
    if (!valid_timestamp(now_iso)) throw UsageError("invalid analysis timestamp '" + now_iso + "'");

    AnalyzeResult result;
    std::string recorded_on = now_iso.substr(0, 10);

    std::vector<RawFinding> findings;
    std::optional<CoverageSummary> coverage;
    std::optional<DepGraphSpec> graph_spec;

    auto note_records = [&](const std::string& path, const std::vector<RecordError>& errors) {
        for (const RecordError& e : errors) {
            result.warnings.push_back(path + ": " + e.message + " (" + e.where + ")");
        }
    };

    for (const RunConfig::Input& input : config.inputs) {
        std::string bytes = read_file(input.path);
        try {
            switch (input.format) {
                case InputFormat::Checkstyle: {
                    FindingParse parsed = parse_checkstyle_report(bytes);
                    note_records(input.path, parsed.record_errors);
                    for (RawFinding& f : parsed.findings) findings.push_back(std::move(f));
                    break;
                }
                case InputFormat::Designite: {
                    FindingParse parsed = parse_designite_csv(bytes);
                    note_records(input.path, parsed.record_errors);
                    for (RawFinding& f : parsed.findings) findings.push_back(std::move(f));
                    break;
                }
                case InputFormat::Native: {
                    for (RawFinding& f : parse_native_findings(bytes)) {
                        findings.push_back(std::move(f));
                    }
                    break;
                }
                case InputFormat::Jacoco: {
                    if (coverage) throw UsageError("analyze accepts a single jacoco input");
                    coverage = parse_jacoco_report(bytes);
                    break;
                }
                case InputFormat::Depgraph: {
                    if (graph_spec) throw UsageError("analyze accepts a single depgraph input");
                    graph_spec = parse_depgraph(bytes);
                    break;
                }
            }
        } catch (const ParseError& e) {
            throw ParseError(e.message() + " in '" + input.path + "'", e.where());
        }
    }

    RunSnapshot snapshot;
    snapshot.project = config.project;
    snapshot.created_at = now_iso;
    snapshot.tool_versions = config.tool_versions;
    if (coverage) {
        snapshot.project.coverage_percent = coverage->project_coverage;
    } else if (config.coverage_percent_override) {
        snapshot.project.coverage_percent = *config.coverage_percent_override;
    }

    ClassifiedRun classified =
        classify_findings(findings, config.ruleset, config.project, recorded_on);
    for (const RawFinding& f : classified.unclassified) {
        result.warnings.push_back("unclassified finding: rule '" + f.rule_id + "' from tool '" +
                                  f.source_tool + "'");
    }
    snapshot.instances = std::move(classified.instances);
    if (coverage) {
        for (TDInstance& inst : derive_coverage_findings(*coverage, config.coverage_threshold,
                                                         config.project, recorded_on)) {
            snapshot.instances.push_back(std::move(inst));
        }
    }
    assign_instance_ids(snapshot.instances, config.project);

    for (const TDInstance& inst : snapshot.instances) {
        for (const Violation& v : validate_instance(inst)) {
            throw ValidationError("instance '" + inst.id + "': " + v.message);
        }
    }

    snapshot.counts = count_by_item(snapshot.instances);
    snapshot.estimate = estimate_principal(snapshot.counts, snapshot.project, config.cost_model);

    if (graph_spec) {
        DepGraph graph = DepGraph::from_spec(*graph_spec);
        GraphMetrics metrics;
        metrics.intercomponent_cyclicality = intercomponent_cyclicality(graph);
        metrics.stability = stability(graph);
        std::vector<std::string> rule_warnings;
        metrics.violations = check_rules(graph, config.arch_rules, &rule_warnings);
        for (std::string& w : rule_warnings) result.warnings.push_back(std::move(w));
        snapshot.graph_metrics = std::move(metrics);
    }

    fs::path store(store_dir);
    fs::create_directories(store / "runs");
    StoreLock lock(store);
    fs::path out_path = store / "runs" / (snapshot.created_at + ".json");
    {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write snapshot '" + out_path.string() + "'");
        out << serialize_snapshot(snapshot);
        if (!out.good()) throw Error("failed writing snapshot '" + out_path.string() + "'");
    }

    result.snapshot = std::move(snapshot);
    result.snapshot_path = out_path.string();
    return result;
}

}  // namespace tdledger
