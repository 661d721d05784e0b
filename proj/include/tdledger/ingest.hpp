#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdledger/errors.hpp"
#include "tdledger/model.hpp"
#include "tdledger/rational.hpp"

namespace tdledger {

// An analyzer finding before classification.
struct RawFinding {
    std::string source_tool;
    std::string rule_id;
    std::string message;
    Location location;
    std::optional<std::string> author;

    bool operator==(const RawFinding&) const = default;
};

struct CoverageSummary {
    Rational project_coverage;                  // [0, 100]
    std::map<std::string, Rational> per_class;  // dotted class name -> [0, 100]

    bool operator==(const CoverageSummary&) const = default;
};

// Textual encoding of a class-level dependency graph with component
// assignments.
struct DepGraphSpec {
    struct Atom {
        std::string id;
        std::string component;
        bool operator==(const Atom&) const = default;
    };
    struct Edge {
        std::string from;
        std::string to;
        std::uint64_t weight = 1;
        bool operator==(const Edge&) const = default;
    };
    std::vector<Atom> atoms;
    std::vector<Edge> edges;

    bool operator==(const DepGraphSpec&) const = default;
};

// Findings plus record-level problems that did not abort the file.
struct FindingParse {
    std::vector<RawFinding> findings;
    std::vector<RecordError> record_errors;
};

// Checker-report XML: file elements holding error elements with line,
// severity, message and source attributes. rule_id is the last dotted segment
// of source. Malformed XML throws ParseError with a byte offset; an error
// element missing a mandatory attribute becomes a RecordError and parsing
// continues.
FindingParse parse_checkstyle_report(std::string_view bytes);

// Coverage-report XML with LINE counters (covered/missed) at report and class
// levels. Coverage is 100*covered/(covered+missed), exact. A report counting
// zero lines overall is a degenerate-report error.
CoverageSummary parse_jacoco_report(std::string_view bytes);

// Smell CSV with header columns Project, Package, Type, Smell; method-smell
// files add Method. A missing required column aborts the file; a ragged row
// becomes a RecordError.
FindingParse parse_designite_csv(std::string_view bytes);

// JSON array of findings mirroring RawFinding. Strict: a schema mismatch
// throws ParseError holding the JSON path. Round-trips losslessly with
// serialize_findings.
std::vector<RawFinding> parse_native_findings(std::string_view bytes);
std::string serialize_findings(const std::vector<RawFinding>& findings);

// Line-oriented graph text: `atom <id> <component>` declarations, then
// `edge <from> <to> [weight]` lines; '#' starts a comment line. Problems are
// file-level and carry the offending line number.
DepGraphSpec parse_depgraph(std::string_view bytes);

}  // namespace tdledger
