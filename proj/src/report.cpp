#include "tdledger/report.hpp"

#include <sstream>

namespace tdledger {

std::string render_location(const Location& loc) {
    std::string head;
    switch (loc.scope) {
        case Scope::Line:
            head = "Line " + (loc.line ? std::to_string(*loc.line) : std::string("?"));
            break;
        case Scope::Method:
            head = "Method " + loc.method_name.value_or("?");
            break;
        case Scope::Class:
            head = "Class " + loc.class_name.value_or("?");
            break;
        case Scope::Package:
            return "Package " + loc.package.value_or("?");
        case Scope::Project:
            return "All source files";
        case Scope::CrossPackage:
            return "Classes in packages " + loc.package.value_or("?");
    }
    if (loc.scope != Scope::Class && loc.class_name) head += " in class " + *loc.class_name;
    if (loc.package) head += " in package " + *loc.package;
    if (!loc.class_name && !loc.package && loc.file_path) head += " in file " + *loc.file_path;
    return head;
}

namespace {

// Markdown table cells must not break on '|' or newlines.
std::string escape_cell(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '|') {
            out += "\\|";
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const std::string& part : parts) {
        if (!out.empty()) out += ", ";
        out += part;
    }
    return out;
}

std::string render_markdown(const RunSnapshot& snapshot) {
    std::ostringstream md;
    md << "# Technical debt ledger — " << snapshot.project.name << "\n\n";
    md << "- Slug: `" << snapshot.project.slug << "`\n";
    md << "- Created: " << snapshot.created_at << "\n";
    md << "- Lines of code: " << snapshot.project.loc << "\n";
    md << "- Classes: " << snapshot.project.num_classes << "\n";
    md << "- Coverage: " << snapshot.project.coverage_percent.to_decimal(2) << "%\n";
    md << "- Instances: " << snapshot.instances.size() << "\n";
    md << "- TD principal estimate: " << snapshot.estimate.total_person_hours.to_decimal(2)
       << " person-hours\n";

    if (!snapshot.counts.by_kind.empty()) {
        md << "\n## Item counts\n\n| TD item | Count |\n|---|---|\n";
        for (const auto& [kind, count] : snapshot.counts.by_kind) {
            md << "| " << item_kind_name(kind) << " | " << count << " |\n";
        }
    }

    if (!snapshot.estimate.breakdown.empty()) {
        md << "\n## Estimate breakdown\n\n| Term | Person-hours |\n|---|---|\n";
        for (const auto& [term, value] : snapshot.estimate.breakdown) {
            md << "| " << term << " | " << value.to_decimal(2) << " |\n";
        }
    }

    if (snapshot.graph_metrics) {
        const GraphMetrics& metrics = *snapshot.graph_metrics;
        md << "\n## Architecture\n\n";
        md << "- Intercomponent cyclicality: "
           << metrics.intercomponent_cyclicality.to_decimal(2) << "%\n";
        md << "- Stability: " << metrics.stability.to_decimal(2) << "%\n";
        md << "- Rule violations: " << metrics.violations.size() << "\n";
        for (const RuleViolation& violation : metrics.violations) {
            md << "  - " << violation.rule.from_component << " must not use "
               << violation.rule.to_component << " (" << violation.offending_edges.size()
               << " offending edge" << (violation.offending_edges.size() == 1 ? "" : "s")
               << ")\n";
        }
    }

    md << "\n## Instances\n";
    if (snapshot.instances.empty()) {
        md << "\n_No instances._\n";
        return md.str();
    }
    for (const TDInstance& inst : snapshot.instances) {
        md << "\n| | |\n|---|---|\n";
        md << "| ID | " << escape_cell(inst.id) << " |\n";
        md << "| TD type name | " << escape_cell(inst.td_type_name) << " |\n";
        md << "| TD item name | " << item_kind_name(inst.item_kind) << " |\n";
        md << "| Location | " << escape_cell(render_location(inst.location)) << " |\n";
        md << "| Responsible/Author | " << escape_cell(join(inst.responsible)) << " |\n";
        md << "| Dimension | " << dimension_name(inst.dimension) << " |\n";
        md << "| Date/Time | " << escape_cell(inst.recorded_at) << " |\n";
        md << "| Context | " << escape_cell(inst.context) << " |\n";
        md << "| Propagation | " << escape_cell(inst.propagation) << " |\n";
        md << "| Intentionality | " << intentionality_name(inst.intentionality) << " |\n";
        md << "| Source tool | " << escape_cell(inst.source_tool) << " |\n";
        if (inst.repayment_note) {
            md << "| Repayment note | " << escape_cell(*inst.repayment_note) << " |\n";
        }
    }
    return md.str();
}

}  // namespace

std::string render_report(const RunSnapshot& snapshot, ReportFormat format) {
    if (format == ReportFormat::Json) return serialize_snapshot(snapshot);
    return render_markdown(snapshot);
}

}  // namespace tdledger
