#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tdledger::xml {

struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::size_t offset = 0;  // byte offset of the opening '<'

    // First attribute with the given name, or nullptr.
    const std::string* attribute(std::string_view attr_name) const;
};

// Parses a standalone XML document into an element tree. Supported: prolog,
// processing instructions, comments, CDATA, the five predefined entities and
// numeric character references. DOCTYPE declarations are rejected, so entity
// expansion attacks cannot reach the tree. Element text content is validated
// and discarded; the report formats carry everything in attributes.
//
// Throws ParseError with a byte offset on malformed input.
Element parse_document(std::string_view bytes);

}  // namespace tdledger::xml
