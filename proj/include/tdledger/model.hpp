#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdledger/rational.hpp"

namespace tdledger {

// The six technical-debt dimensions. Each owns a short ID code used inside
// instance ids (jws_cd_1): cd dd td ad dod ed.
enum class Dimension {
    Code,
    Design,
    Test,
    Architecture,
    Documentation,
    Environment,
};

constexpr std::array<Dimension, 6> kAllDimensions = {
    Dimension::Code,         Dimension::Design,        Dimension::Test,
    Dimension::Architecture, Dimension::Documentation, Dimension::Environment,
};

// Mid-level debt categories. Every kind belongs to exactly one dimension;
// see dimension_of.
enum class ItemKind {
    CodeSmell,
    CodingGuidelineViolation,
    InconsistentStyle,
    DesignSmell,
    DesignRuleViolation,
    DesignConstraintViolation,
    LackOfTests,
    InadequateTestCoverage,
    ImproperTestDesign,
    ArchitectureSmell,
    ArchitectureRuleViolation,
    ModularityViolation,
};

constexpr std::array<ItemKind, 12> kAllItemKinds = {
    ItemKind::CodeSmell,
    ItemKind::CodingGuidelineViolation,
    ItemKind::InconsistentStyle,
    ItemKind::DesignSmell,
    ItemKind::DesignRuleViolation,
    ItemKind::DesignConstraintViolation,
    ItemKind::LackOfTests,
    ItemKind::InadequateTestCoverage,
    ItemKind::ImproperTestDesign,
    ItemKind::ArchitectureSmell,
    ItemKind::ArchitectureRuleViolation,
    ItemKind::ModularityViolation,
};

enum class Intentionality {
    Intentional,
    Unintentional,
    Unknown,  // default; assigning intent takes human judgment
};

enum class Scope { Line, Method, Class, Package, Project, CrossPackage };

Dimension dimension_of(ItemKind kind);

std::string_view dimension_code(Dimension d);  // "cd", "dd", "td", "ad", "dod", "ed"
std::string_view dimension_name(Dimension d);  // "Code debt", ...
std::string_view item_kind_name(ItemKind k);   // "Code smells", ...
std::string_view item_kind_token(ItemKind k);  // "code_smell", ...
std::string_view intentionality_name(Intentionality v);
std::string_view scope_name(Scope s);

// Reverse lookups accept the display name or the snake token, case-sensitive.
std::optional<Dimension> dimension_from(std::string_view text);
std::optional<ItemKind> item_kind_from(std::string_view text);
std::optional<Intentionality> intentionality_from(std::string_view text);
std::optional<Scope> scope_from(std::string_view text);

// Where a debt instance lives. Which fields must be present depends on scope;
// validate_location enforces the rules.
struct Location {
    std::optional<std::string> file_path;
    std::optional<std::string> package;
    std::optional<std::string> class_name;
    std::optional<std::string> method_name;
    std::optional<std::uint32_t> line;
    Scope scope = Scope::Project;

    bool operator==(const Location&) const = default;
};

struct Violation {
    std::string field;
    std::string message;
};

std::vector<Violation> validate_location(const Location& loc);

// One debt occurrence in the ten-field tabular schema, plus the source tool
// and an optional repayment suggestion.
struct TDInstance {
    std::string id;  // <slug>_<dimcode>_<ordinal>
    std::string td_type_name;
    ItemKind item_kind = ItemKind::CodeSmell;
    Location location;
    std::vector<std::string> responsible;
    Dimension dimension = Dimension::Code;
    std::string recorded_at;  // ISO-8601 calendar date
    std::string context;
    std::string propagation;
    Intentionality intentionality = Intentionality::Unknown;
    std::string source_tool;
    std::optional<std::string> repayment_note;

    bool operator==(const TDInstance&) const = default;
};

struct ProjectMeta {
    std::string name;
    std::string slug;  // non-empty, lowercase alphanumeric
    std::uint64_t loc = 0;
    std::uint64_t num_classes = 0;
    Rational coverage_percent = 100;  // [0, 100]

    bool operator==(const ProjectMeta&) const = default;
};

std::vector<Violation> validate_project_meta(const ProjectMeta& meta);

// Tally of instances per item kind. Kinds never at zero are not stored, so
// equal tallies compare equal regardless of construction order.
struct ItemCounts {
    std::map<ItemKind, std::uint64_t> by_kind;

    std::uint64_t get(ItemKind k) const;
    void add(ItemKind k, std::uint64_t n = 1);
    std::uint64_t total() const;

    friend ItemCounts operator+(const ItemCounts& a, const ItemCounts& b);
    bool operator==(const ItemCounts&) const = default;
};

// Builds "<slug>_<code>_<ordinal>". Throws ValidationError on an empty slug,
// a slug containing '_', or ordinal 0.
std::string mint_instance_id(std::string_view project_slug, Dimension dimension,
                             std::uint64_t ordinal);

// Reports every invariant violation; an empty list means the instance is
// well-formed. Violations are data, not failures.
std::vector<Violation> validate_instance(const TDInstance& inst);

// Tallies validated instances. Project-scope inadequate-test-coverage
// instances count at most once per project slug. Throws ValidationError on a
// duplicate id.
ItemCounts count_by_item(const std::vector<TDInstance>& instances);

}  // namespace tdledger
