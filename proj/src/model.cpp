#include "tdledger/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "tdledger/errors.hpp"

namespace tdledger {

Dimension dimension_of(ItemKind kind) {
    switch (kind) {
        case ItemKind::CodeSmell:
        case ItemKind::CodingGuidelineViolation:
        case ItemKind::InconsistentStyle:
            return Dimension::Code;
        case ItemKind::DesignSmell:
        case ItemKind::DesignRuleViolation:
        case ItemKind::DesignConstraintViolation:
            return Dimension::Design;
        case ItemKind::LackOfTests:
        case ItemKind::InadequateTestCoverage:
        case ItemKind::ImproperTestDesign:
            return Dimension::Test;
        case ItemKind::ArchitectureSmell:
        case ItemKind::ArchitectureRuleViolation:
        case ItemKind::ModularityViolation:
            return Dimension::Architecture;
    }
    throw Error("unknown item kind");
}

std::string_view dimension_code(Dimension d) {
    switch (d) {
        case Dimension::Code: return "cd";
        case Dimension::Design: return "dd";
        case Dimension::Test: return "td";
        case Dimension::Architecture: return "ad";
        case Dimension::Documentation: return "dod";
        case Dimension::Environment: return "ed";
    }
    throw Error("unknown dimension");
}

std::string_view dimension_name(Dimension d) {
    switch (d) {
        case Dimension::Code: return "Code debt";
        case Dimension::Design: return "Design debt";
        case Dimension::Test: return "Test debt";
        case Dimension::Architecture: return "Architecture debt";
        case Dimension::Documentation: return "Documentation debt";
        case Dimension::Environment: return "Environment debt";
    }
    throw Error("unknown dimension");
}

std::string_view item_kind_name(ItemKind k) {
    switch (k) {
        case ItemKind::CodeSmell: return "Code smells";
        case ItemKind::CodingGuidelineViolation: return "Coding guideline violation";
        case ItemKind::InconsistentStyle: return "Inconsistent style";
        case ItemKind::DesignSmell: return "Design smells";
        case ItemKind::DesignRuleViolation: return "Design rule violations";
        case ItemKind::DesignConstraintViolation: return "Violation of design constraints";
        case ItemKind::LackOfTests: return "Lack of tests";
        case ItemKind::InadequateTestCoverage: return "Inadequate test coverage";
        case ItemKind::ImproperTestDesign: return "Improper test design";
        case ItemKind::ArchitectureSmell: return "Architecture smells";
        case ItemKind::ArchitectureRuleViolation: return "Architecture rule violations";
        case ItemKind::ModularityViolation: return "Modularity violations";
    }
    throw Error("unknown item kind");
}

std::string_view item_kind_token(ItemKind k) {
    switch (k) {
        case ItemKind::CodeSmell: return "code_smell";
        case ItemKind::CodingGuidelineViolation: return "coding_guideline_violation";
        case ItemKind::InconsistentStyle: return "inconsistent_style";
        case ItemKind::DesignSmell: return "design_smell";
        case ItemKind::DesignRuleViolation: return "design_rule_violation";
        case ItemKind::DesignConstraintViolation: return "design_constraint_violation";
        case ItemKind::LackOfTests: return "lack_of_tests";
        case ItemKind::InadequateTestCoverage: return "inadequate_test_coverage";
        case ItemKind::ImproperTestDesign: return "improper_test_design";
        case ItemKind::ArchitectureSmell: return "architecture_smell";
        case ItemKind::ArchitectureRuleViolation: return "architecture_rule_violation";
        case ItemKind::ModularityViolation: return "modularity_violation";
    }
    throw Error("unknown item kind");
}

std::string_view intentionality_name(Intentionality v) {
    switch (v) {
        case Intentionality::Intentional: return "Intentional";
        case Intentionality::Unintentional: return "Unintentional";
        case Intentionality::Unknown: return "Unknown";
    }
    throw Error("unknown intentionality");
}

std::string_view scope_name(Scope s) {
    switch (s) {
        case Scope::Line: return "Line";
        case Scope::Method: return "Method";
        case Scope::Class: return "Class";
        case Scope::Package: return "Package";
        case Scope::Project: return "Project";
        case Scope::CrossPackage: return "CrossPackage";
    }
    throw Error("unknown scope");
}

std::optional<Dimension> dimension_from(std::string_view text) {
    for (Dimension d : kAllDimensions) {
        if (text == dimension_name(d) || text == dimension_code(d)) return d;
    }
    if (text == "code") return Dimension::Code;
    if (text == "design") return Dimension::Design;
    if (text == "test") return Dimension::Test;
    if (text == "architecture") return Dimension::Architecture;
    if (text == "documentation") return Dimension::Documentation;
    if (text == "environment") return Dimension::Environment;
    return std::nullopt;
}

std::optional<ItemKind> item_kind_from(std::string_view text) {
    for (ItemKind k : kAllItemKinds) {
        if (text == item_kind_name(k) || text == item_kind_token(k)) return k;
    }
    return std::nullopt;
}

std::optional<Intentionality> intentionality_from(std::string_view text) {
    for (Intentionality v :
         {Intentionality::Intentional, Intentionality::Unintentional, Intentionality::Unknown}) {
        if (text == intentionality_name(v)) return v;
    }
    return std::nullopt;
}

std::optional<Scope> scope_from(std::string_view text) {
    for (Scope s : {Scope::Line, Scope::Method, Scope::Class, Scope::Package, Scope::Project,
                    Scope::CrossPackage}) {
        if (text == scope_name(s)) return s;
    }
    return std::nullopt;
}

std::vector<Violation> validate_location(const Location& loc) {
    std::vector<Violation> out;
    auto add = [&](std::string message) { out.push_back({"location", std::move(message)}); };

    if (loc.line && *loc.line == 0) add("line must be positive");
    switch (loc.scope) {
        case Scope::Line:
            if (!loc.line) add("scope Line requires a line number");
            if (!loc.file_path) add("scope Line requires a file path");
            break;
        case Scope::Method:
            if (!loc.method_name) add("scope Method requires a method name");
            break;
        case Scope::Class:
            if (!loc.class_name) add("scope Class requires a class name");
            break;
        case Scope::Package:
            if (!loc.package) add("scope Package requires a package");
            break;
        case Scope::Project:
            if (loc.file_path || loc.package || loc.class_name || loc.method_name || loc.line) {
                add("scope Project requires all narrower fields absent");
            }
            break;
        case Scope::CrossPackage:
            break;
    }
    return out;
}

std::vector<Violation> validate_project_meta(const ProjectMeta& meta) {
    std::vector<Violation> out;
    if (meta.slug.empty()) {
        out.push_back({"slug", "slug must be non-empty"});
    } else if (!std::all_of(meta.slug.begin(), meta.slug.end(), [](unsigned char c) {
                   return std::islower(c) || std::isdigit(c);
               })) {
        out.push_back({"slug", "slug must be lowercase alphanumeric"});
    }
    if (meta.coverage_percent < Rational(0) || meta.coverage_percent > Rational(100)) {
        out.push_back({"coverage_percent", "coverage must lie in [0, 100]"});
    }
    return out;
}

std::uint64_t ItemCounts::get(ItemKind k) const {
    auto it = by_kind.find(k);
    return it == by_kind.end() ? 0 : it->second;
}

void ItemCounts::add(ItemKind k, std::uint64_t n) {
    if (n == 0) return;
    by_kind[k] += n;
}

std::uint64_t ItemCounts::total() const {
    std::uint64_t sum = 0;
    for (const auto& [kind, count] : by_kind) sum += count;
    return sum;
}

ItemCounts operator+(const ItemCounts& a, const ItemCounts& b) {
    ItemCounts out = a;
    for (const auto& [kind, count] : b.by_kind) out.add(kind, count);
    return out;
}

std::string mint_instance_id(std::string_view project_slug, Dimension dimension,
                             std::uint64_t ordinal) {
    if (project_slug.empty()) throw ValidationError("invalid slug: empty");
    if (project_slug.find('_') != std::string_view::npos) {
        throw ValidationError("invalid slug '" + std::string(project_slug) +
                              "': must not contain '_'");
    }
    if (ordinal == 0) throw ValidationError("instance ordinal must be >= 1");
    std::string id(project_slug);
    id += '_';
    id += dimension_code(dimension);
    id += '_';
    id += std::to_string(ordinal);
    return id;
}

namespace {

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    int month = (s[5] - '0') * 10 + (s[6] - '0');
    int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

// Splits "<slug>_<code>_<ordinal>" and checks each part; one violation per
// broken part.
void check_id(const TDInstance& inst, std::vector<Violation>& out) {
    auto bad = [&](std::string message) { out.push_back({"id", std::move(message)}); };
    const std::string& id = inst.id;

    std::size_t first = id.find('_');
    std::size_t last = id.rfind('_');
    if (first == std::string::npos || first == last) {
        bad("id must have the form <slug>_<dimcode>_<ordinal>");
        return;
    }
    std::string_view slug = std::string_view(id).substr(0, first);
    std::string_view code = std::string_view(id).substr(first + 1, last - first - 1);
    std::string_view ordinal = std::string_view(id).substr(last + 1);

    if (slug.empty() || !std::all_of(slug.begin(), slug.end(), [](unsigned char c) {
            return std::islower(c) || std::isdigit(c);
        })) {
        bad("id slug must be non-empty lowercase alphanumeric");
    }
    if (code != dimension_code(inst.dimension)) {
        bad("id dimension code '" + std::string(code) + "' does not match dimension '" +
            std::string(dimension_name(inst.dimension)) + "'");
    }
    if (ordinal.empty() || ordinal[0] == '0' ||
        !std::all_of(ordinal.begin(), ordinal.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
        bad("id ordinal must be a positive integer without leading zeros");
    }
}

}  // namespace

std::vector<Violation> validate_instance(const TDInstance& inst) {
    std::vector<Violation> out;
    if (inst.dimension != dimension_of(inst.item_kind)) {
        out.push_back({"dimension", "dimension '" + std::string(dimension_name(inst.dimension)) +
                                        "' does not match item kind '" +
                                        std::string(item_kind_name(inst.item_kind)) + "'"});
    }
    check_id(inst, out);
    if (inst.td_type_name.empty()) {
        out.push_back({"td_type_name", "TD type name must be non-empty"});
    }
    if (!is_iso_date(inst.recorded_at)) {
        out.push_back({"recorded_at", "date must be ISO-8601 (YYYY-MM-DD)"});
    }
    for (const Violation& v : validate_location(inst.location)) out.push_back(v);
    return out;
}

ItemCounts count_by_item(const std::vector<TDInstance>& instances) {
    ItemCounts counts;
    std::set<std::string> seen_ids;
    std::set<std::string> coverage_counted_slugs;

    for (const TDInstance& inst : instances) {
        if (!seen_ids.insert(inst.id).second) {
            throw ValidationError("duplicate instance id '" + inst.id + "'");
        }
        if (inst.item_kind == ItemKind::InadequateTestCoverage &&
            inst.location.scope == Scope::Project) {
            std::string slug = inst.id.substr(0, inst.id.find('_'));
            if (!coverage_counted_slugs.insert(slug).second) continue;
        }
        counts.add(inst.item_kind);
    }
    return counts;
}

}  // namespace tdledger
