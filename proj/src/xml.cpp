#include "tdledger/xml.hpp"

#include <cctype>
#include <charconv>

#include "tdledger/errors.hpp"

namespace tdledger::xml {

const std::string* Element::attribute(std::string_view attr_name) const {
    for (const auto& [name, value] : attributes) {
        if (name == attr_name) return &value;
    }
    return nullptr;
}

namespace {

constexpr int kMaxDepth = 200;

struct Cursor {
    std::string_view in;
    std::size_t pos = 0;

    bool eof() const { return pos >= in.size(); }
    char peek() const { return in[pos]; }
    bool starts(std::string_view s) const { return in.compare(pos, s.size(), s) == 0; }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, "byte " + std::to_string(pos));
    }

    void expect(char c, const char* what) {
        if (eof() || peek() != c) fail(std::string("expected ") + what);
        ++pos;
    }
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

void skip_ws(Cursor& c) {
    while (!c.eof() && is_space(c.peek())) ++c.pos;
}

std::string parse_name(Cursor& c) {
    if (c.eof() || !is_name_start(c.peek())) c.fail("expected a name");
    std::size_t start = c.pos;
    while (!c.eof() && is_name_char(c.peek())) ++c.pos;
    return std::string(c.in.substr(start, c.pos - start));
}

void skip_until(Cursor& c, std::string_view terminator, const char* what) {
    std::size_t found = c.in.find(terminator, c.pos);
    if (found == std::string_view::npos) c.fail(std::string("unterminated ") + what);
    c.pos = found + terminator.size();
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Cursor sits on '&'. Decodes the reference and appends it to out.
void parse_reference(Cursor& c, std::string& out) {
    std::size_t amp = c.pos;
    ++c.pos;
    std::size_t semi = c.in.find(';', c.pos);
    if (semi == std::string_view::npos || semi - c.pos == 0 || semi - c.pos > 10) {
        c.pos = amp;
        c.fail("malformed entity reference");
    }
    std::string_view body = c.in.substr(c.pos, semi - c.pos);
    c.pos = semi + 1;

    if (body == "amp") {
        out += '&';
    } else if (body == "lt") {
        out += '<';
    } else if (body == "gt") {
        out += '>';
    } else if (body == "quot") {
        out += '"';
    } else if (body == "apos") {
        out += '\'';
    } else if (body[0] == '#') {
        std::uint32_t cp = 0;
        std::string_view digits = body.substr(1);
        int base = 10;
        if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
            base = 16;
            digits = digits.substr(1);
        }
        auto res = std::from_chars(digits.data(), digits.data() + digits.size(), cp, base);
        if (digits.empty() || res.ec != std::errc() || res.ptr != digits.data() + digits.size() ||
            cp == 0 || cp > 0x10FFFF) {
            c.pos = amp;
            c.fail("malformed character reference");
        }
        append_utf8(out, cp);
    } else {
        c.pos = amp;
        c.fail("undefined entity '&" + std::string(body) + ";'");
    }
}

std::string parse_attribute_value(Cursor& c) {
    if (c.eof() || (c.peek() != '"' && c.peek() != '\'')) c.fail("expected a quoted value");
    char quote = c.peek();
    ++c.pos;
    std::string out;
    while (true) {
        if (c.eof()) c.fail("unterminated attribute value");
        char ch = c.peek();
        if (ch == quote) {
            ++c.pos;
            return out;
        }
        if (ch == '<') c.fail("raw '<' inside attribute value");
        if (ch == '&') {
            parse_reference(c, out);
        } else {
            out += ch;
            ++c.pos;
        }
    }
}

// Skips whitespace, comments and processing instructions between markup.
void skip_misc(Cursor& c) {
    while (true) {
        skip_ws(c);
        if (c.starts("<!--")) {
            c.pos += 4;
            skip_until(c, "-->", "comment");
        } else if (c.starts("<?")) {
            c.pos += 2;
            skip_until(c, "?>", "processing instruction");
        } else {
            return;
        }
    }
}

Element parse_element(Cursor& c, int depth) {
    if (depth > kMaxDepth) c.fail("element nesting too deep");
    Element el;
    el.offset = c.pos;
    c.expect('<', "'<'");
    el.name = parse_name(c);

    while (true) {
        bool had_space = !c.eof() && is_space(c.peek());
        skip_ws(c);
        if (c.eof()) c.fail("unterminated start tag");
        if (c.starts("/>")) {
            c.pos += 2;
            return el;
        }
        if (c.peek() == '>') {
            ++c.pos;
            break;
        }
        if (!had_space) c.fail("expected whitespace before attribute");
        std::size_t attr_offset = c.pos;
        std::string attr_name = parse_name(c);
        skip_ws(c);
        c.expect('=', "'='");
        skip_ws(c);
        std::string value = parse_attribute_value(c);
        if (el.attribute(attr_name) != nullptr) {
            c.pos = attr_offset;
            c.fail("duplicate attribute '" + attr_name + "'");
        }
        el.attributes.emplace_back(std::move(attr_name), std::move(value));
    }

    // Content until the matching close tag. Text is validated, not kept.
    std::string discard;
    while (true) {
        if (c.eof()) c.fail("missing closing tag for '" + el.name + "'");
        if (c.starts("<!--")) {
            c.pos += 4;
            skip_until(c, "-->", "comment");
        } else if (c.starts("<![CDATA[")) {
            c.pos += 9;
            skip_until(c, "]]>", "CDATA section");
        } else if (c.starts("</")) {
            std::size_t close_offset = c.pos;
            c.pos += 2;
            std::string close_name = parse_name(c);
            skip_ws(c);
            c.expect('>', "'>'");
            if (close_name != el.name) {
                c.pos = close_offset;
                c.fail("mismatched closing tag '" + close_name + "' for '" + el.name + "'");
            }
            return el;
        } else if (c.starts("<?")) {
            c.pos += 2;
            skip_until(c, "?>", "processing instruction");
        } else if (c.starts("<!")) {
            c.fail("unsupported markup declaration");
        } else if (c.peek() == '<') {
            el.children.push_back(parse_element(c, depth + 1));
        } else if (c.peek() == '&') {
            discard.clear();
            parse_reference(c, discard);
        } else {
            ++c.pos;
        }
    }
}

}  // namespace

Element parse_document(std::string_view bytes) {
    Cursor c{bytes, 0};
    if (c.starts("\xEF\xBB\xBF")) c.pos += 3;
    skip_misc(c);
    if (c.starts("<!DOCTYPE")) c.fail("DOCTYPE declarations are not supported");
    if (c.eof() || c.peek() != '<') c.fail("expected a document element");
    Element root = parse_element(c, 0);
    skip_misc(c);
    if (!c.eof()) c.fail("content after the document element");
    return root;
}

}  // namespace tdledger::xml
