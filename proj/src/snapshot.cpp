#include "tdledger/snapshot.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include <json.hpp>

#include "tdledger/errors.hpp"

namespace tdledger {

namespace {

using json = nlohmann::ordered_json;

// --- fingerprint -----------------------------------------------------------

struct Fnv1a {
    std::uint64_t hash = 1469598103934665603ull;

    void feed(std::string_view text) {
        for (unsigned char c : text) {
            hash ^= c;
            hash *= 1099511628211ull;
        }
        hash ^= 0x1F;  // field separator
        hash *= 1099511628211ull;
    }
    void feed(const std::optional<std::string>& field) {
        feed(field ? std::string_view("1") : std::string_view("0"));
        if (field) feed(*field);
    }
};

}  // namespace

std::string fingerprint(const TDInstance& instance) {
    Fnv1a h;
    h.feed(instance.td_type_name);
    h.feed(item_kind_token(instance.item_kind));
    h.feed(scope_name(instance.location.scope));
    h.feed(instance.location.file_path);
    h.feed(instance.location.package);
    h.feed(instance.location.class_name);
    h.feed(instance.location.method_name);
    h.feed(instance.source_tool);

    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t v = h.hash;
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

// --- diff / gate ------------------------------------------------------------

RunDiff diff_runs(const RunSnapshot& old_run, const RunSnapshot& new_run) {
    if (old_run.project.slug != new_run.project.slug) {
        throw ValidationError("cannot diff runs of different projects ('" + old_run.project.slug +
                              "' vs '" + new_run.project.slug + "')");
    }

    auto count_by_fp = [](const RunSnapshot& run) {
        std::map<std::string, std::uint64_t> counts;
        for (const TDInstance& inst : run.instances) ++counts[fingerprint(inst)];
        return counts;
    };
    std::map<std::string, std::uint64_t> old_fps = count_by_fp(old_run);
    std::map<std::string, std::uint64_t> new_fps = count_by_fp(new_run);

    RunDiff diff;
    diff.project_slug = new_run.project.slug;

    // Surplus beyond the other run's count, in run order; the instances that
    // appear first are treated as the persisting ones.
    auto surplus = [](const RunSnapshot& run, const std::map<std::string, std::uint64_t>& other) {
        std::vector<TDInstance> out;
        std::map<std::string, std::uint64_t> seen;
        for (const TDInstance& inst : run.instances) {
            std::string fp = fingerprint(inst);
            std::uint64_t index = seen[fp]++;
            auto it = other.find(fp);
            std::uint64_t matched = it == other.end() ? 0 : it->second;
            if (index >= matched) out.push_back(inst);
        }
        return out;
    };
    diff.introduced = surplus(new_run, old_fps);
    diff.resolved = surplus(old_run, new_fps);

    for (const auto& [fp, old_count] : old_fps) {
        auto it = new_fps.find(fp);
        if (it == new_fps.end()) continue;
        std::uint64_t shared = std::min(old_count, it->second);
        for (std::uint64_t i = 0; i < shared; ++i) diff.persisting.push_back(fp);
    }
    std::sort(diff.persisting.begin(), diff.persisting.end());

    diff.principal_delta =
        new_run.estimate.total_person_hours - old_run.estimate.total_person_hours;
    return diff;
}

GateDecision evaluate_gate(const RunDiff& diff, const Rational& budget, bool fail_on_new) {
    GateDecision decision;
    if (diff.principal_delta > budget) {
        decision.pass = false;
        decision.reasons.push_back("principal delta " + diff.principal_delta.to_decimal(2) +
                                   " person-hours exceeds budget " + budget.to_decimal(2));
    }
    if (fail_on_new && !diff.introduced.empty()) {
        decision.pass = false;
        std::string ids;
        for (const TDInstance& inst : diff.introduced) {
            if (!ids.empty()) ids += ", ";
            ids += inst.id;
        }
        decision.reasons.push_back("new instances introduced: " + ids);
    }
    return decision;
}

// --- JSON -------------------------------------------------------------------

namespace {

[[noreturn]] void fail_at(const std::string& message, const std::string& path) {
    throw ParseError(message, path.empty() ? "/" : path);
}

json rational_to_json(const Rational& r) { return r.to_string(); }

Rational rational_from_json(const json& value, const std::string& path) {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_float()) return Rational::from_double_repr(value.get<double>());
    if (value.is_string()) {
        auto r = Rational::try_parse(value.get<std::string>());
        if (r) return *r;
    }
    fail_at("expected a rational number", path);
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail_at(std::string("missing field '") + key + "'", path + "/" + key);
    if (!it->is_string()) {
        fail_at(std::string("field '") + key + "' must be a string", path + "/" + key);
    }
    return it->get<std::string>();
}

std::uint64_t require_uint(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail_at(std::string("missing field '") + key + "'", path + "/" + key);
    if (!it->is_number_unsigned()) {
        fail_at(std::string("field '") + key + "' must be a non-negative integer",
                path + "/" + key);
    }
    return it->get<std::uint64_t>();
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) fail_at("unexpected field '" + key + "'", path + "/" + key);
    }
}

json location_to_json(const Location& loc) {
    json out = json::object();
    out["scope"] = std::string(scope_name(loc.scope));
    if (loc.file_path) out["file_path"] = *loc.file_path;
    if (loc.package) out["package"] = *loc.package;
    if (loc.class_name) out["class_name"] = *loc.class_name;
    if (loc.method_name) out["method_name"] = *loc.method_name;
    if (loc.line) out["line"] = *loc.line;
    return out;
}

Location location_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("location must be an object", path);
    reject_unknown(obj, {"scope", "file_path", "package", "class_name", "method_name", "line"},
                   path);
    Location loc;
    std::string scope_text = require_string(obj, "scope", path);
    auto scope = scope_from(scope_text);
    if (!scope) fail_at("unknown scope '" + scope_text + "'", path + "/scope");
    loc.scope = *scope;
    auto opt_string = [&](const char* key) -> std::optional<std::string> {
        auto it = obj.find(key);
        if (it == obj.end()) return std::nullopt;
        if (!it->is_string()) {
            fail_at(std::string("field '") + key + "' must be a string", path + "/" + key);
        }
        return it->get<std::string>();
    };
    loc.file_path = opt_string("file_path");
    loc.package = opt_string("package");
    loc.class_name = opt_string("class_name");
    loc.method_name = opt_string("method_name");
    if (auto it = obj.find("line"); it != obj.end()) {
        if (!it->is_number_unsigned() || it->get<std::uint64_t>() == 0 ||
            it->get<std::uint64_t>() > 0xFFFFFFFFull) {
            fail_at("field 'line' must be a positive integer", path + "/line");
        }
        loc.line = static_cast<std::uint32_t>(it->get<std::uint64_t>());
    }
    return loc;
}

// The ten tabular field names in snake_case, plus source_tool and
// repayment_note.
json instance_to_json(const TDInstance& inst) {
    json out = json::object();
    out["id"] = inst.id;
    out["td_type_name"] = inst.td_type_name;
    out["td_item_name"] = std::string(item_kind_name(inst.item_kind));
    out["location"] = location_to_json(inst.location);
    out["responsible_author"] = inst.responsible;
    out["dimension"] = std::string(dimension_name(inst.dimension));
    out["date_time"] = inst.recorded_at;
    out["context"] = inst.context;
    out["propagation"] = inst.propagation;
    out["intentionality"] = std::string(intentionality_name(inst.intentionality));
    out["source_tool"] = inst.source_tool;
    if (inst.repayment_note) out["repayment_note"] = *inst.repayment_note;
    return out;
}

TDInstance instance_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("instance must be an object", path);
    reject_unknown(obj,
                   {"id", "td_type_name", "td_item_name", "location", "responsible_author",
                    "dimension", "date_time", "context", "propagation", "intentionality",
                    "source_tool", "repayment_note"},
                   path);
    TDInstance inst;
    inst.id = require_string(obj, "id", path);
    inst.td_type_name = require_string(obj, "td_type_name", path);

    std::string item = require_string(obj, "td_item_name", path);
    auto kind = item_kind_from(item);
    if (!kind) fail_at("unknown TD item name '" + item + "'", path + "/td_item_name");
    inst.item_kind = *kind;

    auto loc_it = obj.find("location");
    if (loc_it == obj.end()) fail_at("missing field 'location'", path + "/location");
    inst.location = location_from_json(*loc_it, path + "/location");

    auto resp_it = obj.find("responsible_author");
    if (resp_it == obj.end() || !resp_it->is_array()) {
        fail_at("field 'responsible_author' must be an array of names",
                path + "/responsible_author");
    }
    for (const auto& name : *resp_it) {
        if (!name.is_string()) {
            fail_at("responsible_author entries must be strings", path + "/responsible_author");
        }
        inst.responsible.push_back(name.get<std::string>());
    }

    std::string dim = require_string(obj, "dimension", path);
    auto dimension = dimension_from(dim);
    if (!dimension) fail_at("unknown dimension '" + dim + "'", path + "/dimension");
    inst.dimension = *dimension;

    inst.recorded_at = require_string(obj, "date_time", path);
    inst.context = require_string(obj, "context", path);
    inst.propagation = require_string(obj, "propagation", path);

    std::string intent = require_string(obj, "intentionality", path);
    auto intentionality = intentionality_from(intent);
    if (!intentionality) fail_at("unknown intentionality '" + intent + "'",
                                 path + "/intentionality");
    inst.intentionality = *intentionality;

    inst.source_tool = require_string(obj, "source_tool", path);
    if (auto it = obj.find("repayment_note"); it != obj.end()) {
        if (!it->is_string()) fail_at("field 'repayment_note' must be a string",
                                      path + "/repayment_note");
        inst.repayment_note = it->get<std::string>();
    }
    return inst;
}

json counts_to_json(const ItemCounts& counts) {
    json out = json::object();
    for (const auto& [kind, count] : counts.by_kind) {
        out[std::string(item_kind_token(kind))] = count;
    }
    return out;
}

ItemCounts counts_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("counts must be an object", path);
    ItemCounts counts;
    for (const auto& [key, value] : obj.items()) {
        auto kind = item_kind_from(key);
        if (!kind) fail_at("unknown item kind '" + key + "'", path + "/" + key);
        if (!value.is_number_unsigned()) {
            fail_at("count must be a non-negative integer", path + "/" + key);
        }
        counts.add(*kind, value.get<std::uint64_t>());
    }
    return counts;
}

json project_to_json(const ProjectMeta& project) {
    json out = json::object();
    out["name"] = project.name;
    out["slug"] = project.slug;
    out["loc"] = project.loc;
    out["num_classes"] = project.num_classes;
    out["coverage_percent"] = rational_to_json(project.coverage_percent);
    return out;
}

ProjectMeta project_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("project must be an object", path);
    reject_unknown(obj, {"name", "slug", "loc", "num_classes", "coverage_percent"}, path);
    ProjectMeta project;
    project.name = require_string(obj, "name", path);
    project.slug = require_string(obj, "slug", path);
    project.loc = require_uint(obj, "loc", path);
    project.num_classes = require_uint(obj, "num_classes", path);
    auto it = obj.find("coverage_percent");
    if (it == obj.end()) fail_at("missing field 'coverage_percent'", path + "/coverage_percent");
    project.coverage_percent = rational_from_json(*it, path + "/coverage_percent");
    for (const Violation& v : validate_project_meta(project)) {
        fail_at(v.message, path + "/" + v.field);
    }
    return project;
}

json estimate_to_json(const Estimate& estimate) {
    json breakdown = json::object();
    for (const auto& [term, value] : estimate.breakdown) {
        breakdown[term] = rational_to_json(value);
    }
    json inputs = json::object();
    inputs["counts"] = counts_to_json(estimate.counts_echo);
    inputs["project"] = project_to_json(estimate.project_echo);
    inputs["coverage_threshold"] = rational_to_json(estimate.threshold_echo);

    json out = json::object();
    out["total_person_hours"] = rational_to_json(estimate.total_person_hours);
    out["breakdown"] = std::move(breakdown);
    out["inputs"] = std::move(inputs);
    return out;
}

Estimate estimate_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("estimate must be an object", path);
    reject_unknown(obj, {"total_person_hours", "breakdown", "inputs"}, path);
    Estimate estimate;
    auto total_it = obj.find("total_person_hours");
    if (total_it == obj.end()) fail_at("missing field 'total_person_hours'", path);
    estimate.total_person_hours = rational_from_json(*total_it, path + "/total_person_hours");

    auto breakdown_it = obj.find("breakdown");
    if (breakdown_it == obj.end() || !breakdown_it->is_object()) {
        fail_at("estimate needs a 'breakdown' object", path + "/breakdown");
    }
    Rational sum = 0;
    for (const auto& [term, value] : breakdown_it->items()) {
        Rational v = rational_from_json(value, path + "/breakdown/" + term);
        estimate.breakdown[term] = v;
        sum += v;
    }
    if (sum != estimate.total_person_hours) {
        fail_at("estimate total does not equal the sum of its breakdown", path);
    }

    auto inputs_it = obj.find("inputs");
    if (inputs_it == obj.end() || !inputs_it->is_object()) {
        fail_at("estimate needs an 'inputs' object", path + "/inputs");
    }
    reject_unknown(*inputs_it, {"counts", "project", "coverage_threshold"}, path + "/inputs");
    auto counts_it = inputs_it->find("counts");
    if (counts_it == inputs_it->end()) fail_at("missing inputs.counts", path + "/inputs/counts");
    estimate.counts_echo = counts_from_json(*counts_it, path + "/inputs/counts");
    auto project_it = inputs_it->find("project");
    if (project_it == inputs_it->end()) {
        fail_at("missing inputs.project", path + "/inputs/project");
    }
    estimate.project_echo = project_from_json(*project_it, path + "/inputs/project");
    auto threshold_it = inputs_it->find("coverage_threshold");
    if (threshold_it == inputs_it->end()) {
        fail_at("missing inputs.coverage_threshold", path + "/inputs/coverage_threshold");
    }
    estimate.threshold_echo =
        rational_from_json(*threshold_it, path + "/inputs/coverage_threshold");
    return estimate;
}

std::string_view rule_kind_token(RuleKind kind) {
    return kind == RuleKind::CannotUse ? "cannot_use" : "can_use";
}

json violation_to_json(const RuleViolation& violation) {
    json out = json::object();
    out["kind"] = std::string(rule_kind_token(violation.rule.kind));
    out["from_component"] = violation.rule.from_component;
    out["to_component"] = violation.rule.to_component;
    json edges = json::array();
    for (const DepGraphSpec::Edge& e : violation.offending_edges) {
        json edge = json::object();
        edge["from"] = e.from;
        edge["to"] = e.to;
        edge["weight"] = e.weight;
        edges.push_back(std::move(edge));
    }
    out["edges"] = std::move(edges);
    return out;
}

RuleViolation violation_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("violation must be an object", path);
    reject_unknown(obj, {"kind", "from_component", "to_component", "edges"}, path);
    RuleViolation violation;
    std::string kind = require_string(obj, "kind", path);
    if (kind == "cannot_use") {
        violation.rule.kind = RuleKind::CannotUse;
    } else if (kind == "can_use") {
        violation.rule.kind = RuleKind::CanUse;
    } else {
        fail_at("unknown rule kind '" + kind + "'", path + "/kind");
    }
    violation.rule.from_component = require_string(obj, "from_component", path);
    violation.rule.to_component = require_string(obj, "to_component", path);
    auto edges_it = obj.find("edges");
    if (edges_it == obj.end() || !edges_it->is_array() || edges_it->empty()) {
        fail_at("violation needs a non-empty 'edges' array", path + "/edges");
    }
    for (std::size_t i = 0; i < edges_it->size(); ++i) {
        const json& edge = (*edges_it)[i];
        std::string edge_path = path + "/edges/" + std::to_string(i);
        if (!edge.is_object()) fail_at("edge must be an object", edge_path);
        reject_unknown(edge, {"from", "to", "weight"}, edge_path);
        DepGraphSpec::Edge e;
        e.from = require_string(edge, "from", edge_path);
        e.to = require_string(edge, "to", edge_path);
        e.weight = require_uint(edge, "weight", edge_path);
        violation.offending_edges.push_back(std::move(e));
    }
    return violation;
}

json metrics_to_json(const GraphMetrics& metrics) {
    json out = json::object();
    out["intercomponent_cyclicality"] = rational_to_json(metrics.intercomponent_cyclicality);
    out["stability"] = rational_to_json(metrics.stability);
    json violations = json::array();
    for (const RuleViolation& v : metrics.violations) violations.push_back(violation_to_json(v));
    out["violations"] = std::move(violations);
    return out;
}

GraphMetrics metrics_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("graph_metrics must be an object", path);
    reject_unknown(obj, {"intercomponent_cyclicality", "stability", "violations"}, path);
    GraphMetrics metrics;
    auto cyc_it = obj.find("intercomponent_cyclicality");
    if (cyc_it == obj.end()) fail_at("missing intercomponent_cyclicality", path);
    metrics.intercomponent_cyclicality =
        rational_from_json(*cyc_it, path + "/intercomponent_cyclicality");
    auto stab_it = obj.find("stability");
    if (stab_it == obj.end()) fail_at("missing stability", path);
    metrics.stability = rational_from_json(*stab_it, path + "/stability");
    auto viol_it = obj.find("violations");
    if (viol_it == obj.end() || !viol_it->is_array()) {
        fail_at("graph_metrics needs a 'violations' array", path + "/violations");
    }
    for (std::size_t i = 0; i < viol_it->size(); ++i) {
        metrics.violations.push_back(
            violation_from_json((*viol_it)[i], path + "/violations/" + std::to_string(i)));
    }
    return metrics;
}

}  // namespace

std::string serialize_snapshot(const RunSnapshot& snapshot) {
    json out = json::object();
    out["tdledger_snapshot"] = 1;
    out["project"] = project_to_json(snapshot.project);
    out["created_at"] = snapshot.created_at;
    json instances = json::array();
    for (const TDInstance& inst : snapshot.instances) instances.push_back(instance_to_json(inst));
    out["instances"] = std::move(instances);
    out["counts"] = counts_to_json(snapshot.counts);
    out["estimate"] = estimate_to_json(snapshot.estimate);
    if (snapshot.graph_metrics) out["graph_metrics"] = metrics_to_json(*snapshot.graph_metrics);
    json versions = json::object();
    for (const auto& [tool, version] : snapshot.tool_versions) versions[tool] = version;
    out["tool_versions"] = std::move(versions);
    return out.dump(2) + "\n";
}

RunSnapshot parse_snapshot(std::string_view bytes) {
    json doc = json::parse(bytes, nullptr, false);
    if (doc.is_discarded()) throw ParseError("malformed JSON", "/");
    if (!doc.is_object()) throw ParseError("snapshot must be a JSON object", "/");
    reject_unknown(doc,
                   {"tdledger_snapshot", "project", "created_at", "instances", "counts",
                    "estimate", "graph_metrics", "tool_versions"},
                   "");

    auto version_it = doc.find("tdledger_snapshot");
    if (version_it == doc.end() || *version_it != 1) {
        fail_at("missing or unsupported snapshot version", "/tdledger_snapshot");
    }

    RunSnapshot snapshot;
    auto project_it = doc.find("project");
    if (project_it == doc.end()) fail_at("missing field 'project'", "/project");
    snapshot.project = project_from_json(*project_it, "/project");
    snapshot.created_at = require_string(doc, "created_at", "");

    auto instances_it = doc.find("instances");
    if (instances_it == doc.end() || !instances_it->is_array()) {
        fail_at("snapshot needs an 'instances' array", "/instances");
    }
    for (std::size_t i = 0; i < instances_it->size(); ++i) {
        snapshot.instances.push_back(
            instance_from_json((*instances_it)[i], "/instances/" + std::to_string(i)));
    }

    auto counts_it = doc.find("counts");
    if (counts_it == doc.end()) fail_at("missing field 'counts'", "/counts");
    snapshot.counts = counts_from_json(*counts_it, "/counts");

    auto estimate_it = doc.find("estimate");
    if (estimate_it == doc.end()) fail_at("missing field 'estimate'", "/estimate");
    snapshot.estimate = estimate_from_json(*estimate_it, "/estimate");

    if (auto it = doc.find("graph_metrics"); it != doc.end()) {
        snapshot.graph_metrics = metrics_from_json(*it, "/graph_metrics");
    }

    auto versions_it = doc.find("tool_versions");
    if (versions_it == doc.end() || !versions_it->is_object()) {
        fail_at("snapshot needs a 'tool_versions' object", "/tool_versions");
    }
    for (const auto& [tool, version] : versions_it->items()) {
        if (!version.is_string()) fail_at("tool version must be a string", "/tool_versions");
        snapshot.tool_versions[tool] = version.get<std::string>();
    }

    // Snapshot invariants hold on disk too.
    if (count_by_item(snapshot.instances) != snapshot.counts) {
        fail_at("snapshot counts do not match its instances", "/counts");
    }
    if (snapshot.estimate.counts_echo != snapshot.counts ||
        snapshot.estimate.project_echo != snapshot.project) {
        fail_at("estimate inputs do not echo the snapshot counts and project", "/estimate/inputs");
    }
    return snapshot;
}

std::string serialize_diff(const RunDiff& diff) {
    json out = json::object();
    out["project"] = diff.project_slug;
    out["principal_delta"] = rational_to_json(diff.principal_delta);
    json introduced = json::array();
    for (const TDInstance& inst : diff.introduced) introduced.push_back(instance_to_json(inst));
    out["introduced"] = std::move(introduced);
    json resolved = json::array();
    for (const TDInstance& inst : diff.resolved) resolved.push_back(instance_to_json(inst));
    out["resolved"] = std::move(resolved);
    out["persisting"] = diff.persisting;
    return out.dump(2) + "\n";
}

}  // namespace tdledger
