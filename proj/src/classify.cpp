#include "tdledger/classify.hpp"

#include <cctype>
#include <map>

#include <json.hpp>

#include "tdledger/errors.hpp"

namespace tdledger {

bool glob_match(std::string_view pattern, std::string_view text) {
    auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
    // Classic two-pointer scan with backtracking to the last '*'.
    std::size_t p = 0;
    std::size_t t = 0;
    std::size_t star = std::string_view::npos;
    std::size_t mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || lower(pattern[p]) == lower(text[t]))) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

namespace {

const ClassificationRule* find_rule(const RawFinding& finding, const Ruleset& rules) {
    for (const ClassificationRule& rule : rules.rules) {
        if (glob_match(rule.source_tool_pattern, finding.source_tool) &&
            glob_match(rule.rule_id_pattern, finding.rule_id)) {
            return &rule;
        }
    }
    return nullptr;
}

}  // namespace

ClassifyResult classify_finding(const RawFinding& finding, const Ruleset& rules,
                                const ProjectMeta& project, std::uint64_t next_ordinal,
                                std::string_view recorded_on) {
    const ClassificationRule* rule = find_rule(finding, rules);
    if (rule == nullptr) {
        if (rules.unmatched_policy == UnmatchedPolicy::Reject) {
            throw ValidationError("no classification rule matches rule id '" + finding.rule_id +
                                  "' from tool '" + finding.source_tool + "'");
        }
        return Unclassified{finding};
    }

    TDInstance inst;
    inst.dimension = dimension_of(rule->item_kind);
    inst.id = mint_instance_id(project.slug, inst.dimension, next_ordinal);
    inst.td_type_name = rule->td_type_name;
    inst.item_kind = rule->item_kind;
    inst.location = finding.location;
    if (finding.author) inst.responsible.push_back(*finding.author);
    inst.recorded_at = recorded_on;
    inst.context = finding.message;
    inst.intentionality = Intentionality::Unknown;
    inst.source_tool = finding.source_tool;
    return inst;
}

std::vector<TDInstance> derive_coverage_findings(const CoverageSummary& coverage,
                                                 const Rational& threshold,
                                                 const ProjectMeta& project,
                                                 std::string_view recorded_on) {
    if (threshold < Rational(0) || threshold > Rational(100)) {
        throw ValidationError("coverage threshold must lie in [0, 100]");
    }
    std::vector<TDInstance> out;
    std::uint64_t ordinal = 0;

    if (coverage.project_coverage < threshold) {
        TDInstance inst;
        inst.item_kind = ItemKind::InadequateTestCoverage;
        inst.dimension = Dimension::Test;
        inst.id = mint_instance_id(project.slug, inst.dimension, ++ordinal);
        inst.td_type_name = "Coverage below " + threshold.to_decimal(2) + "%";
        inst.location.scope = Scope::Project;
        inst.recorded_at = recorded_on;
        inst.context = "Project line coverage " + coverage.project_coverage.to_decimal(2) +
                       "% is below the " + threshold.to_decimal(2) + "% threshold.";
        inst.propagation = "Project-wide: applies to every source file.";
        inst.source_tool = "jacoco";
        out.push_back(std::move(inst));
    }

    for (const auto& [class_name, percent] : coverage.per_class) {
        if (!percent.is_zero()) continue;
        TDInstance inst;
        inst.item_kind = ItemKind::LackOfTests;
        inst.dimension = Dimension::Test;
        inst.id = mint_instance_id(project.slug, inst.dimension, ++ordinal);
        inst.td_type_name = "Add some tests to this class";
        inst.location.scope = Scope::Class;
        std::size_t dot = class_name.rfind('.');
        if (dot == std::string::npos) {
            inst.location.class_name = class_name;
        } else {
            inst.location.package = class_name.substr(0, dot);
            inst.location.class_name = class_name.substr(dot + 1);
        }
        inst.recorded_at = recorded_on;
        inst.context = "Class has 0% line coverage.";
        inst.propagation = "Limited to the class itself.";
        inst.source_tool = "jacoco";
        out.push_back(std::move(inst));
    }
    return out;
}

Ruleset default_ruleset() {
    Ruleset rs;
    rs.unmatched_policy = UnmatchedPolicy::Collect;
    rs.rules = {
        {"*", "long*method*", "Long method", ItemKind::CodeSmell},
        {"*", "long*parameter*list*", "Long parameter list", ItemKind::CodeSmell},
        {"*", "complex*method*", "Complex method", ItemKind::CodeSmell},
        {"*", "*magic*number*", "Magic number", ItemKind::CodeSmell},
        {"*", "*whitespace*around*", "Whitespace around", ItemKind::CodingGuidelineViolation},
        {"*", "*javadoc*", "Missing javadoc comment", ItemKind::CodingGuidelineViolation},
        {"*", "*line*length*", "Line too long", ItemKind::CodingGuidelineViolation},
        {"*", "*switch*default*", "Switch without default clause",
         ItemKind::CodingGuidelineViolation},
        {"*", "*unicode*escape*", "Unicode escapes should be avoided",
         ItemKind::CodingGuidelineViolation},
        {"*", "*escape*unicode*", "Unicode escapes should be avoided",
         ItemKind::CodingGuidelineViolation},
        {"*", "*assert*", "Add at least one assertion to this test case",
         ItemKind::ImproperTestDesign},
        {"*", "add*test*", "Add some tests to this class", ItemKind::LackOfTests},
        {"*", "coverage*below*", "Coverage below threshold", ItemKind::InadequateTestCoverage},
        {"*", "deficient*encapsulation*", "Deficient encapsulation", ItemKind::DesignSmell},
        {"*", "hub*modulariz*", "Hub-like modularization", ItemKind::DesignSmell},
        {"*", "unutilized*abstraction*", "Unutilized abstraction", ItemKind::DesignSmell},
        {"*", "insufficient*modulariz*", "Insufficient modularization", ItemKind::DesignSmell},
        {"*", "unnecessary*abstraction*", "Unnecessary abstraction", ItemKind::DesignSmell},
        {"*", "intercomponent*cyclical*", "Intercomponent cyclicality",
         ItemKind::ArchitectureSmell},
    };
    return rs;
}

Ruleset parse_ruleset(std::string_view bytes) {
    using json = nlohmann::ordered_json;
    json doc = json::parse(bytes, nullptr, false);
    if (doc.is_discarded()) throw ParseError("malformed JSON", "/");
    if (!doc.is_object()) throw ParseError("ruleset must be a JSON object", "/");

    Ruleset rs;
    if (auto it = doc.find("unmatched_policy"); it != doc.end()) {
        if (*it == "collect") {
            rs.unmatched_policy = UnmatchedPolicy::Collect;
        } else if (*it == "reject") {
            rs.unmatched_policy = UnmatchedPolicy::Reject;
        } else {
            throw ParseError("unmatched_policy must be 'collect' or 'reject'",
                             "/unmatched_policy");
        }
    }
    auto rules_it = doc.find("rules");
    if (rules_it == doc.end() || !rules_it->is_array()) {
        throw ParseError("ruleset needs a 'rules' array", "/rules");
    }
    for (std::size_t i = 0; i < rules_it->size(); ++i) {
        std::string path = "/rules/" + std::to_string(i);
        const json& r = (*rules_it)[i];
        if (!r.is_object()) throw ParseError("rule must be an object", path);
        auto get = [&](const char* key) {
            auto it = r.find(key);
            if (it == r.end() || !it->is_string()) {
                throw ParseError(std::string("rule needs string field '") + key + "'",
                                 path + "/" + key);
            }
            return it->get<std::string>();
        };
        ClassificationRule rule;
        rule.source_tool_pattern = get("tool");
        rule.rule_id_pattern = get("rule");
        rule.td_type_name = get("td_type");
        if (rule.source_tool_pattern.empty() || rule.rule_id_pattern.empty()) {
            throw ParseError("rule patterns must be non-empty", path);
        }
        std::string item = get("item");
        auto kind = item_kind_from(item);
        if (!kind) throw ParseError("unknown item kind '" + item + "'", path + "/item");
        rule.item_kind = *kind;
        rs.rules.push_back(std::move(rule));
    }
    if (rs.unmatched_policy == UnmatchedPolicy::Reject && rs.rules.empty()) {
        throw ParseError("policy 'reject' needs at least one rule", "/rules");
    }
    return rs;
}

ClassifiedRun classify_findings(const std::vector<RawFinding>& findings, const Ruleset& rules,
                                const ProjectMeta& project, std::string_view recorded_on) {
    ClassifiedRun out;
    std::map<Dimension, std::uint64_t> ordinals;
    for (const RawFinding& f : findings) {
        // Probe the rule first so the ordinal is only consumed on a match.
        const ClassificationRule* rule = find_rule(f, rules);
        if (rule == nullptr && rules.unmatched_policy == UnmatchedPolicy::Collect) {
            out.unclassified.push_back(f);
            continue;
        }
        Dimension dim = rule ? dimension_of(rule->item_kind) : Dimension::Code;
        ClassifyResult result = classify_finding(f, rules, project, ordinals[dim] + 1, recorded_on);
        if (auto* inst = std::get_if<TDInstance>(&result)) {
            ++ordinals[dim];
            out.instances.push_back(std::move(*inst));
        } else {
            out.unclassified.push_back(std::get<Unclassified>(result).finding);
        }
    }
    return out;
}

void assign_instance_ids(std::vector<TDInstance>& instances, const ProjectMeta& project) {
    std::map<Dimension, std::uint64_t> ordinals;
    for (TDInstance& inst : instances) {
        inst.id = mint_instance_id(project.slug, inst.dimension, ++ordinals[inst.dimension]);
    }
}

}  // namespace tdledger
