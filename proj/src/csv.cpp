#include "tdledger/csv.hpp"

#include "tdledger/errors.hpp"

namespace tdledger::csv {

namespace {

[[noreturn]] void fail(const std::string& message, std::size_t line) {
    throw ParseError(message, "line " + std::to_string(line));
}

}  // namespace

std::vector<Row> parse(std::string_view bytes) {
    std::vector<Row> rows;
    std::size_t pos = 0;
    std::size_t line = 1;

    while (pos < bytes.size()) {
        Row row;
        row.line = line;
        bool row_done = false;
        while (!row_done) {
            std::string field;
            if (pos < bytes.size() && bytes[pos] == '"') {
                std::size_t field_line = line;
                ++pos;
                while (true) {
                    if (pos >= bytes.size()) fail("unterminated quoted field", field_line);
                    char ch = bytes[pos];
                    if (ch == '"') {
                        ++pos;
                        if (pos < bytes.size() && bytes[pos] == '"') {
                            field += '"';
                            ++pos;
                        } else {
                            break;
                        }
                    } else {
                        if (ch == '\n') ++line;
                        field += ch;
                        ++pos;
                    }
                }
                if (pos < bytes.size() && bytes[pos] != ',' && bytes[pos] != '\n' &&
                    bytes[pos] != '\r') {
                    fail("unexpected character after closing quote", line);
                }
            } else {
                while (pos < bytes.size() && bytes[pos] != ',' && bytes[pos] != '\n' &&
                       bytes[pos] != '\r') {
                    field += bytes[pos];
                    ++pos;
                }
            }
            row.fields.push_back(std::move(field));

            if (pos >= bytes.size()) {
                row_done = true;
            } else if (bytes[pos] == ',') {
                ++pos;
            } else if (bytes[pos] == '\r') {
                ++pos;
                if (pos < bytes.size() && bytes[pos] == '\n') ++pos;
                ++line;
                row_done = true;
            } else {  // '\n'
                ++pos;
                ++line;
                row_done = true;
            }
        }
        bool blank = row.fields.size() == 1 && row.fields[0].empty();
        if (!blank) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace tdledger::csv
