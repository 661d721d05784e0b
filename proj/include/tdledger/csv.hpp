#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tdledger::csv {

struct Row {
    std::size_t line = 0;  // 1-based line the row starts on
    std::vector<std::string> fields;
};

// RFC-4180 field splitting: comma separators, CRLF or LF row ends, quoted
// fields with doubled-quote escapes and embedded newlines. Completely blank
// lines are dropped. Throws ParseError (with a line number) on an unterminated
// quote or stray text after a closing quote.
std::vector<Row> parse(std::string_view bytes);

}  // namespace tdledger::csv
