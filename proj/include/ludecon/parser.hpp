// parser.hpp - lexer, recursive descent parser and printer for the
// parenthesized game description language (.lud files).
//
// The parser is constructor-agnostic: any head symbol is accepted and
// validation is left to the compiler. `//` starts a line comment. Header
// comments of the form `//@ annotation Key=Value` carry declared values for
// quantities that cannot be computed from the description (see
// parse_annotations).
#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ludecon {

struct SourceSpan {
    std::size_t start = 0;  // byte offset, inclusive
    std::size_t end = 0;    // byte offset, exclusive
    int line = 1;           // 1-based line of the first byte
};

enum class TokenKind { LParen, RParen, LBrace, RBrace, Symbol, StringLit, NumberLit };

struct Token {
    TokenKind kind;
    std::string text;  // string literals stored unquoted
    SourceSpan span;
};

struct ParseError : std::runtime_error {
    ParseError(std::string code, const std::string& message, SourceSpan where)
        : std::runtime_error(message + " (line " + std::to_string(where.line) + ")"),
          code(std::move(code)),
          span(where) {}
    std::string code;  // UnterminatedString, IllegalCharacter, UnbalancedDelimiter,
                       // EmptyConstructor, TrailingInput, BadConstructorHead, BadNumber
    SourceSpan span;
};

namespace detail {
inline bool symbol_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool symbol_char(char c) {
    return symbol_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}
inline bool digit(char c) { return c >= '0' && c <= '9'; }
}  // namespace detail

inline std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    const std::size_t n = source.size();
    while (i < n) {
        char c = source[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '/') {
            while (i < n && source[i] != '\n') ++i;
            continue;
        }
        SourceSpan span{i, i + 1, line};
        switch (c) {
            case '(': out.push_back({TokenKind::LParen, "(", span}); ++i; continue;
            case ')': out.push_back({TokenKind::RParen, ")", span}); ++i; continue;
            case '{': out.push_back({TokenKind::LBrace, "{", span}); ++i; continue;
            case '}': out.push_back({TokenKind::RBrace, "}", span}); ++i; continue;
            default: break;
        }
        if (c == '"') {
            std::size_t start = i++;
            std::string text;
            while (i < n && source[i] != '"' && source[i] != '\n') text += source[i++];
            if (i >= n || source[i] != '"')
                throw ParseError("UnterminatedString", "unterminated string literal",
                                 {start, i, line});
            ++i;
            out.push_back({TokenKind::StringLit, std::move(text), {start, i, line}});
            continue;
        }
        if (detail::digit(c) || (c == '-' && i + 1 < n && detail::digit(source[i + 1]))) {
            std::size_t start = i;
            if (source[i] == '-') ++i;
            while (i < n && detail::digit(source[i])) ++i;
            if (i < n && source[i] == '.') {
                ++i;
                if (i >= n || !detail::digit(source[i]))
                    throw ParseError("BadNumber", "malformed number", {start, i, line});
                while (i < n && detail::digit(source[i])) ++i;
            }
            out.push_back({TokenKind::NumberLit,
                           std::string(source.substr(start, i - start)),
                           {start, i, line}});
            continue;
        }
        if (detail::symbol_start(c)) {
            std::size_t start = i;
            while (i < n && detail::symbol_char(source[i])) ++i;
            out.push_back({TokenKind::Symbol,
                           std::string(source.substr(start, i - start)),
                           {start, i, line}});
            continue;
        }
        throw ParseError("IllegalCharacter",
                         std::string("illegal character '") + c + "'", span);
    }
    return out;
}

enum class NodeKind { Constructor, Set, SymbolLit, StringLit, NumberLit };

struct LudemeNode {
    NodeKind kind = NodeKind::Constructor;
    std::string head;                  // Constructor only
    std::vector<LudemeNode> children;  // Constructor and Set
    std::string value;                 // literal lexeme (strings unquoted)
    SourceSpan span;

    bool is(NodeKind k) const { return kind == k; }
    bool is_constructor(std::string_view h) const {
        return kind == NodeKind::Constructor && head == h;
    }
    bool is_symbol(std::string_view s) const {
        return kind == NodeKind::SymbolLit && value == s;
    }
    long long as_int() const { return std::stoll(value); }
    double as_real() const { return std::stod(value); }
};

// Structural equality; spans are ignored.
inline bool operator==(const LudemeNode& a, const LudemeNode& b) {
    if (a.kind != b.kind || a.head != b.head || a.value != b.value) return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!(a.children[i] == b.children[i])) return false;
    return true;
}
inline bool operator!=(const LudemeNode& a, const LudemeNode& b) { return !(a == b); }

namespace detail {

struct NodeParser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;

    const Token& peek() const {
        if (pos >= toks.size())
            throw ParseError("UnbalancedDelimiter", "unexpected end of input",
                             toks.empty() ? SourceSpan{} : toks.back().span);
        return toks[pos];
    }
    const Token& take() {
        const Token& t = peek();
        ++pos;
        return t;
    }

    LudemeNode expression() {
        const Token& t = take();
        switch (t.kind) {
            case TokenKind::Symbol:
                return {NodeKind::SymbolLit, {}, {}, t.text, t.span};
            case TokenKind::StringLit:
                return {NodeKind::StringLit, {}, {}, t.text, t.span};
            case TokenKind::NumberLit:
                return {NodeKind::NumberLit, {}, {}, t.text, t.span};
            case TokenKind::LParen: {
                if (peek().kind == TokenKind::RParen)
                    throw ParseError("EmptyConstructor", "empty constructor ()", t.span);
                const Token& head = take();
                if (head.kind != TokenKind::Symbol)
                    throw ParseError("BadConstructorHead",
                                     "constructor head must be a symbol", head.span);
                LudemeNode node{NodeKind::Constructor, head.text, {}, {}, t.span};
                while (peek().kind != TokenKind::RParen) node.children.push_back(expression());
                node.span.end = take().span.end;  // consume ')'
                return node;
            }
            case TokenKind::LBrace: {
                LudemeNode node{NodeKind::Set, {}, {}, {}, t.span};
                while (peek().kind != TokenKind::RBrace) node.children.push_back(expression());
                node.span.end = take().span.end;  // consume '}'
                return node;
            }
            case TokenKind::RParen:
            case TokenKind::RBrace:
                throw ParseError("UnbalancedDelimiter", "unmatched closing delimiter",
                                 t.span);
        }
        throw ParseError("UnbalancedDelimiter", "unreachable", t.span);
    }
};

}  // namespace detail

inline LudemeNode parse(const std::vector<Token>& tokens) {
    if (tokens.empty())
        throw ParseError("UnbalancedDelimiter", "empty input", SourceSpan{});
    detail::NodeParser p{tokens};
    LudemeNode root = p.expression();
    if (p.pos != tokens.size())
        throw ParseError("TrailingInput", "trailing input after root expression",
                         tokens[p.pos].span);
    return root;
}

inline LudemeNode parse(std::string_view source) { return parse(tokenize(source)); }

inline void print_to(const LudemeNode& node, std::string& out) {
    switch (node.kind) {
        case NodeKind::SymbolLit:
        case NodeKind::NumberLit:
            out += node.value;
            return;
        case NodeKind::StringLit:
            out += '"';
            out += node.value;
            out += '"';
            return;
        case NodeKind::Constructor: {
            out += '(';
            out += node.head;
            for (const auto& c : node.children) {
                out += ' ';
                print_to(c, out);
            }
            out += ')';
            return;
        }
        case NodeKind::Set: {
            out += '{';
            bool first = true;
            for (const auto& c : node.children) {
                if (!first) out += ' ';
                first = false;
                print_to(c, out);
            }
            out += '}';
            return;
        }
    }
}

inline std::string print(const LudemeNode& node) {
    std::string out;
    print_to(node, out);
    return out;
}

// Declared values from `//@ annotation Key=Value` comment lines. Values are
// surfaced to reports as annotations, never mixed into computed concepts.
inline std::map<std::string, std::string> parse_annotations(std::string_view source) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    const std::string_view marker = "//@ annotation ";
    while (pos < source.size()) {
        std::size_t eol = source.find('\n', pos);
        if (eol == std::string_view::npos) eol = source.size();
        std::string_view tail = source.substr(pos, eol - pos);
        while (!tail.empty() && (tail.front() == ' ' || tail.front() == '\t'))
            tail.remove_prefix(1);
        if (tail.substr(0, marker.size()) == marker) {
            std::string_view body = tail.substr(marker.size());
            std::size_t eq = body.find('=');
            if (eq != std::string_view::npos && eq > 0) {
                std::string_view val = body.substr(eq + 1);
                while (!val.empty() && (val.back() == ' ' || val.back() == '\r'))
                    val.remove_suffix(1);
                out[std::string(body.substr(0, eq))] = std::string(val);
            }
        }
        pos = eol + 1;
    }
    return out;
}

}  // namespace ludecon
