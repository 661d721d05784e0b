#include "tdledger/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tdledger/xml.hpp"
#include "tdledger/csv.hpp"

namespace tdledger {

namespace {

std::optional<std::uint64_t> parse_uint(std::string_view text) {
    if (text.empty() || text.size() > 18) return std::nullopt;
    std::uint64_t v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

std::string byte_offset(std::size_t offset) { return "byte " + std::to_string(offset); }

}  // namespace

// ---------------------------------------------------------------------------
// checkstyle

FindingParse parse_checkstyle_report(std::string_view bytes) {
    xml::Element root = xml::parse_document(bytes);
    if (root.name != "checkstyle") {
        throw ParseError("expected a <checkstyle> document element, got <" + root.name + ">",
                         byte_offset(root.offset));
    }

    FindingParse out;
    for (const xml::Element& file : root.children) {
        if (file.name != "file") continue;
        const std::string* file_name = file.attribute("name");
        if (file_name == nullptr) {
            out.record_errors.push_back(
                {byte_offset(file.offset), "file element missing 'name' attribute"});
            continue;
        }
        for (const xml::Element& error : file.children) {
            if (error.name != "error") continue;
            const std::string* line_attr = error.attribute("line");
            const std::string* message = error.attribute("message");
            const std::string* source = error.attribute("source");

            std::string missing;
            if (line_attr == nullptr) missing = "line";
            else if (message == nullptr) missing = "message";
            else if (source == nullptr) missing = "source";
            if (!missing.empty()) {
                out.record_errors.push_back(
                    {byte_offset(error.offset), "error element missing '" + missing + "' attribute"});
                continue;
            }
            auto line = parse_uint(*line_attr);
            if (!line || *line == 0 || *line > 0xFFFFFFFFull) {
                out.record_errors.push_back(
                    {byte_offset(error.offset), "error element has invalid line '" + *line_attr + "'"});
                continue;
            }

            RawFinding f;
            f.source_tool = "checkstyle";
            std::size_t dot = source->rfind('.');
            f.rule_id = dot == std::string::npos ? *source : source->substr(dot + 1);
            if (f.rule_id.empty()) {
                out.record_errors.push_back(
                    {byte_offset(error.offset), "error element has empty rule source"});
                continue;
            }
            f.message = *message;
            f.location.scope = Scope::Line;
            f.location.file_path = *file_name;
            f.location.line = static_cast<std::uint32_t>(*line);
            out.findings.push_back(std::move(f));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// jacoco

namespace {

// LINE counter directly under `el`, as (covered, missed).
std::optional<std::pair<std::uint64_t, std::uint64_t>> line_counter(const xml::Element& el) {
    for (const xml::Element& child : el.children) {
        if (child.name != "counter") continue;
        const std::string* type = child.attribute("type");
        if (type == nullptr || *type != "LINE") continue;
        const std::string* covered = child.attribute("covered");
        const std::string* missed = child.attribute("missed");
        if (covered == nullptr || missed == nullptr) {
            throw ParseError("LINE counter missing covered/missed attributes",
                             byte_offset(child.offset));
        }
        auto c = parse_uint(*covered);
        auto m = parse_uint(*missed);
        if (!c || !m) {
            throw ParseError("LINE counter has non-numeric covered/missed values",
                             byte_offset(child.offset));
        }
        return std::make_pair(*c, *m);
    }
    return std::nullopt;
}

Rational coverage_percent(std::uint64_t covered, std::uint64_t missed) {
    return Rational(100) * Rational(static_cast<std::int64_t>(covered)) /
           Rational(static_cast<std::int64_t>(covered + missed));
}

void collect_classes(const xml::Element& el, CoverageSummary& out) {
    for (const xml::Element& child : el.children) {
        if (child.name == "class") {
            const std::string* name = child.attribute("name");
            if (name == nullptr) {
                throw ParseError("class element missing 'name' attribute",
                                 byte_offset(child.offset));
            }
            auto counter = line_counter(child);
            if (!counter || counter->first + counter->second == 0) continue;
            std::string dotted = *name;
            std::replace(dotted.begin(), dotted.end(), '/', '.');
            out.per_class[dotted] = coverage_percent(counter->first, counter->second);
        } else {
            collect_classes(child, out);
        }
    }
}

}  // namespace

CoverageSummary parse_jacoco_report(std::string_view bytes) {
    xml::Element root = xml::parse_document(bytes);
    if (root.name != "report") {
        throw ParseError("expected a <report> document element, got <" + root.name + ">",
                         byte_offset(root.offset));
    }
    auto project = line_counter(root);
    if (!project) {
        throw ParseError("report has no report-level LINE counter", byte_offset(root.offset));
    }
    if (project->first + project->second == 0) {
        throw ParseError("degenerate report: zero lines counted at report level",
                         byte_offset(root.offset));
    }
    CoverageSummary out;
    out.project_coverage = coverage_percent(project->first, project->second);
    collect_classes(root, out);
    return out;
}

// ---------------------------------------------------------------------------
// designite smell CSV

FindingParse parse_designite_csv(std::string_view bytes) {
    std::vector<csv::Row> rows = csv::parse(bytes);
    if (rows.empty()) throw ParseError("missing header row", "line 1");

    auto header_index = [&](std::string_view column) -> std::optional<std::size_t> {
        const auto& header = rows.front().fields;
        for (std::size_t i = 0; i < header.size(); ++i) {
            std::string cell = header[i];
            // Trim and compare case-insensitively; tools disagree on casing.
            auto not_space = [](unsigned char c) { return !std::isspace(c); };
            cell.erase(cell.begin(), std::find_if(cell.begin(), cell.end(), not_space));
            cell.erase(std::find_if(cell.rbegin(), cell.rend(), not_space).base(), cell.end());
            if (cell.size() != column.size()) continue;
            bool equal = true;
            for (std::size_t j = 0; j < cell.size(); ++j) {
                if (std::tolower(static_cast<unsigned char>(cell[j])) !=
                    std::tolower(static_cast<unsigned char>(column[j]))) {
                    equal = false;
                    break;
                }
            }
            if (equal) return i;
        }
        return std::nullopt;
    };

    auto require = [&](std::string_view column) {
        auto idx = header_index(column);
        if (!idx) {
            throw ParseError("missing required column '" + std::string(column) + "'",
                             "line " + std::to_string(rows.front().line));
        }
        return *idx;
    };

    std::size_t package_col = require("Package");
    std::size_t type_col = require("Type");
    std::size_t smell_col = require("Smell");
    require("Project");
    std::optional<std::size_t> method_col = header_index("Method");

    std::size_t needed = std::max({package_col, type_col, smell_col});
    if (method_col) needed = std::max(needed, *method_col);

    FindingParse out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        std::string where = "line " + std::to_string(row.line);
        if (row.fields.size() <= needed) {
            out.record_errors.push_back({where, "ragged row: expected at least " +
                                                    std::to_string(needed + 1) + " fields, got " +
                                                    std::to_string(row.fields.size())});
            continue;
        }
        const std::string& smell = row.fields[smell_col];
        if (smell.empty()) {
            out.record_errors.push_back({where, "empty Smell cell"});
            continue;
        }
        RawFinding f;
        f.source_tool = "designite";
        f.rule_id = smell;
        f.message = smell;
        if (!row.fields[package_col].empty()) f.location.package = row.fields[package_col];
        f.location.class_name = row.fields[type_col];
        if (method_col && !row.fields[*method_col].empty()) {
            f.location.method_name = row.fields[*method_col];
            f.location.scope = Scope::Method;
        } else {
            f.location.scope = Scope::Class;
        }
        out.findings.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// native findings JSON

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail_at(const std::string& message, const std::string& path) {
    throw ParseError(message, path.empty() ? "/" : path);
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail_at(std::string("missing field '") + key + "'", path + "/" + key);
    if (!it->is_string()) fail_at(std::string("field '") + key + "' must be a string", path + "/" + key);
    return it->get<std::string>();
}

Location location_from_json(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at("location must be an object", path);
    static const std::set<std::string> known = {"file_path", "package",     "class_name",
                                                "method_name", "line",       "scope"};
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) fail_at("unexpected field '" + key + "'", path + "/" + key);
    }
    Location loc;
    std::string scope_text = require_string(obj, "scope", path);
    auto scope = scope_from(scope_text);
    if (!scope) fail_at("unknown scope '" + scope_text + "'", path + "/scope");
    loc.scope = *scope;

    auto opt_string = [&](const char* key) -> std::optional<std::string> {
        auto it = obj.find(key);
        if (it == obj.end()) return std::nullopt;
        if (!it->is_string()) fail_at(std::string("field '") + key + "' must be a string",
                                      path + "/" + key);
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

}  // namespace

std::vector<RawFinding> parse_native_findings(std::string_view bytes) {
    json doc = json::parse(bytes, nullptr, false);
    if (doc.is_discarded()) throw ParseError("malformed JSON", "/");
    if (!doc.is_array()) throw ParseError("expected a JSON array of findings", "/");

    static const std::set<std::string> known = {"source_tool", "rule_id", "message", "location",
                                                "author"};
    std::vector<RawFinding> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        std::string path = "/" + std::to_string(i);
        const json& item = doc[i];
        if (!item.is_object()) fail_at("finding must be an object", path);
        for (const auto& [key, value] : item.items()) {
            if (!known.contains(key)) fail_at("unexpected field '" + key + "'", path + "/" + key);
        }
        RawFinding f;
        f.source_tool = require_string(item, "source_tool", path);
        f.rule_id = require_string(item, "rule_id", path);
        if (f.rule_id.empty()) fail_at("rule_id must be non-empty", path + "/rule_id");
        f.message = require_string(item, "message", path);
        auto loc_it = item.find("location");
        if (loc_it == item.end()) fail_at("missing field 'location'", path + "/location");
        f.location = location_from_json(*loc_it, path + "/location");
        for (const Violation& v : validate_location(f.location)) {
            fail_at(v.message, path + "/location");
        }
        if (auto it = item.find("author"); it != item.end()) {
            if (!it->is_string()) fail_at("field 'author' must be a string", path + "/author");
            f.author = it->get<std::string>();
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::string serialize_findings(const std::vector<RawFinding>& findings) {
    json out = json::array();
    for (const RawFinding& f : findings) {
        json item = json::object();
        item["source_tool"] = f.source_tool;
        item["rule_id"] = f.rule_id;
        item["message"] = f.message;
        item["location"] = location_to_json(f.location);
        if (f.author) item["author"] = *f.author;
        out.push_back(std::move(item));
    }
    return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// dependency graph text

DepGraphSpec parse_depgraph(std::string_view bytes) {
    DepGraphSpec spec;
    std::set<std::string> atom_ids;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= bytes.size()) {
        std::size_t end = bytes.find('\n', pos);
        if (end == std::string_view::npos) end = bytes.size();
        std::string_view line = bytes.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::vector<std::string> tokens;
        std::istringstream stream{std::string(line)};
        std::string token;
        while (stream >> token) tokens.push_back(token);
        if (tokens.empty() || tokens.front().starts_with('#')) {
            if (pos > bytes.size()) break;
            continue;
        }

        std::string where = "line " + std::to_string(line_no);
        if (tokens[0] == "atom") {
            if (tokens.size() != 3) {
                throw ParseError("atom line needs exactly: atom <id> <component>", where);
            }
            if (!atom_ids.insert(tokens[1]).second) {
                throw ParseError("duplicate atom '" + tokens[1] + "'", where);
            }
            spec.atoms.push_back({tokens[1], tokens[2]});
        } else if (tokens[0] == "edge") {
            if (tokens.size() != 3 && tokens.size() != 4) {
                throw ParseError("edge line needs: edge <from> <to> [weight]", where);
            }
            for (std::size_t i : {1u, 2u}) {
                if (!atom_ids.contains(tokens[i])) {
                    throw ParseError("edge references undeclared atom '" + tokens[i] + "'", where);
                }
            }
            std::uint64_t weight = 1;
            if (tokens.size() == 4) {
                auto w = parse_uint(tokens[3]);
                if (!w || *w == 0) {
                    throw ParseError("edge weight must be a positive integer", where);
                }
                weight = *w;
            }
            spec.edges.push_back({tokens[1], tokens[2], weight});
        } else {
            throw ParseError("unknown directive '" + tokens[0] + "'", where);
        }
        if (pos > bytes.size()) break;
    }
    return spec;
}

}  // namespace tdledger
