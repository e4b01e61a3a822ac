#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace provcurate::rdf {

enum class TokenKind {
    iri,          // <...>, text is the IRI without brackets
    prefixed,     // prefix:local, text is the full "prefix:local"
    blank,        // _:label, text is the label
    variable,     // ?name or $name, text is the name
    string,       // quoted literal, text is the unescaped value
    lang_tag,     // @tag, text is the tag without '@'
    integer,
    decimal,
    double_,
    word,         // bare identifier or keyword (a, true, SELECT, CONTAINS, ...)
    punct,        // { } ( ) [ ] . ; , ^^ * = != < > <= >= && || ! + - / |
    end,
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
    /// Byte offset of the token start in the source.
    std::size_t offset = 0;

    bool is(TokenKind k, std::string_view t) const noexcept { return kind == k && text == t; }
    bool is_punct(std::string_view t) const noexcept { return is(TokenKind::punct, t); }
    /// Case-insensitive keyword match.
    bool is_keyword(std::string_view kw) const noexcept;
};

/// Tokenizes the whole input. Throws ParseError on malformed tokens.
std::vector<Token> tokenize(std::string_view source);

/// Cursor over a token vector with convenience checks used by the parsers.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool at_end() const { return peek().kind == TokenKind::end; }

    bool accept_punct(std::string_view p);
    bool accept_keyword(std::string_view kw);
    const Token& expect_punct(std::string_view p);
    void expect_keyword(std::string_view kw);

    [[noreturn]] void fail(const std::string& message) const;
    [[noreturn]] void fail_at(const Token& token, const std::string& message) const;

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string describe(const Token& token);

} // namespace provcurate::rdf
