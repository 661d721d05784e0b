#include "tdledger/quality_rank.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "tdledger/csv.hpp"
#include "tdledger/errors.hpp"

namespace tdledger {

std::string_view quality_attribute_name(QualityAttribute a) {
    switch (a) {
        case QualityAttribute::Reliability: return "reliability";
        case QualityAttribute::Maintainability: return "maintainability";
        case QualityAttribute::Security: return "security";
        case QualityAttribute::Stability: return "stability";
    }
    throw Error("unknown quality attribute");
}

std::optional<QualityAttribute> quality_attribute_from(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (QualityAttribute a : {QualityAttribute::Reliability, QualityAttribute::Maintainability,
                               QualityAttribute::Security, QualityAttribute::Stability}) {
        if (lower == quality_attribute_name(a)) return a;
    }
    return std::nullopt;
}

namespace {

// Sort key where smaller is better. Grades map to 0..4; scores negate so a
// higher score sorts first.
struct RatingKey {
    Rational primary;
    Rational effort;

    friend bool operator==(const RatingKey&, const RatingKey&) = default;
    friend bool operator<(const RatingKey& a, const RatingKey& b) {
        if (a.primary != b.primary) return a.primary < b.primary;
        return a.effort < b.effort;
    }
};

// Generic competition/dense ranking of (name, key) pairs, smaller key first.
std::map<std::string, int> rank_by_key(std::vector<std::pair<std::string, RatingKey>> entries,
                                       TieRule ties) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second == b.second) return a.first < b.first;
        return a.second < b.second;
    });
    std::map<std::string, int> out;
    int rank = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i == 0 || !(entries[i].second == entries[i - 1].second)) {
            rank = ties == TieRule::Competition ? static_cast<int>(i) + 1 : rank + 1;
        }
        out[entries[i].first] = rank;
    }
    return out;
}

}  // namespace

std::map<std::string, int> rank_attribute(const std::vector<AttributeRating>& ratings,
                                          TieRule ties) {
    if (ratings.empty()) throw ValidationError("no ratings to rank");

    QualityAttribute attribute = ratings.front().attribute;
    bool graded = ratings.front().grade.has_value();
    std::set<std::string> projects;
    std::vector<std::pair<std::string, RatingKey>> entries;

    for (const AttributeRating& r : ratings) {
        if (r.attribute != attribute) {
            throw ValidationError("mixed attributes in one ranking input");
        }
        if (r.grade.has_value() == r.score.has_value()) {
            throw ValidationError("rating for '" + r.project +
                                  "' must carry exactly one of grade and score");
        }
        if (r.grade.has_value() != graded) {
            throw ValidationError("attribute '" +
                                  std::string(quality_attribute_name(attribute)) +
                                  "' mixes letter grades and numeric scores");
        }
        if (!projects.insert(r.project).second) {
            throw ValidationError("duplicate project '" + r.project + "' in ratings");
        }
        RatingKey key;
        if (r.grade) {
            char g = static_cast<char>(std::toupper(static_cast<unsigned char>(*r.grade)));
            if (g < 'A' || g > 'E') {
                throw ValidationError("grade must be a letter A-E, got '" +
                                      std::string(1, *r.grade) + "'");
            }
            key.primary = g - 'A';
        } else {
            key.primary = -*r.score;
        }
        key.effort = r.remediation_effort;
        entries.emplace_back(r.project, key);
    }
    return rank_by_key(std::move(entries), ties);
}

std::map<std::string, RankTable> aggregate_overall(
    const std::map<QualityAttribute, std::map<std::string, int>>& per_attribute_ranks,
    TieRule ties) {
    if (per_attribute_ranks.empty()) throw ValidationError("no attribute ranks to aggregate");

    std::set<std::string> projects;
    for (const auto& [attribute, ranks] : per_attribute_ranks) {
        for (const auto& [project, rank] : ranks) projects.insert(project);
    }

    std::map<std::string, RankTable> out;
    for (const std::string& project : projects) {
        RankTable table;
        for (const auto& [attribute, ranks] : per_attribute_ranks) {
            auto it = ranks.find(project);
            if (it == ranks.end()) {
                throw ValidationError("incomplete rank matrix: project '" + project +
                                      "' has no rank for attribute '" +
                                      std::string(quality_attribute_name(attribute)) + "'");
            }
            table.ranks[attribute] = it->second;
            table.sum += it->second;
        }
        out[project] = table;
    }

    std::vector<std::pair<std::string, RatingKey>> entries;
    for (const auto& [project, table] : out) {
        entries.emplace_back(project, RatingKey{table.sum, 0});
    }
    std::map<std::string, int> overall = rank_by_key(std::move(entries), ties);
    for (auto& [project, table] : out) table.overall_rank = overall[project];
    return out;
}

std::vector<AttributeRating> parse_ratings_csv(std::string_view bytes) {
    std::vector<csv::Row> rows = csv::parse(bytes);
    if (rows.empty()) throw ParseError("missing header row", "line 1");

    const auto& header = rows.front().fields;
    auto column = [&](std::string_view name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            std::string lower = header[i];
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (lower == name) return i;
        }
        throw ParseError("missing required column '" + std::string(name) + "'",
                         "line " + std::to_string(rows.front().line));
    };
    std::size_t project_col = column("project");
    std::size_t attribute_col = column("attribute");
    std::size_t rating_col = column("rating");
    std::size_t effort_col = column("effort");
    std::size_t needed = std::max({project_col, attribute_col, rating_col, effort_col});

    std::vector<AttributeRating> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        std::string where = "line " + std::to_string(row.line);
        if (row.fields.size() <= needed) {
            throw ParseError("ragged row: expected at least " + std::to_string(needed + 1) +
                                 " fields",
                             where);
        }
        AttributeRating rating;
        rating.project = row.fields[project_col];
        if (rating.project.empty()) throw ParseError("empty project cell", where);

        auto attribute = quality_attribute_from(row.fields[attribute_col]);
        if (!attribute) {
            throw ParseError("unknown attribute '" + row.fields[attribute_col] + "'", where);
        }
        rating.attribute = *attribute;

        const std::string& cell = row.fields[rating_col];
        if (cell.size() == 1 && std::isalpha(static_cast<unsigned char>(cell[0]))) {
            char g = static_cast<char>(std::toupper(static_cast<unsigned char>(cell[0])));
            if (g < 'A' || g > 'E') throw ParseError("grade must be A-E, got '" + cell + "'", where);
            rating.grade = g;
        } else if (auto score = Rational::try_parse(cell)) {
            rating.score = *score;
        } else {
            throw ParseError("rating must be a letter A-E or a number, got '" + cell + "'", where);
        }

        auto effort = Rational::try_parse(row.fields[effort_col]);
        if (!effort || effort->is_negative()) {
            throw ParseError("effort must be a non-negative number, got '" +
                                 row.fields[effort_col] + "'",
                             where);
        }
        rating.remediation_effort = *effort;
        out.push_back(std::move(rating));
    }
    return out;
}

}  // namespace tdledger
