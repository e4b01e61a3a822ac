#include "provcurate/rdf/lexer.hpp"

#include "provcurate/error.hpp"

#include <cctype>

namespace provcurate::rdf {

namespace {

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80; }

void append_utf8(std::string& out, unsigned long cp)
{
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

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            Token tok;
            tok.line = line_;
            tok.column = col_;
            tok.offset = pos_;
            if (pos_ >= src_.size()) {
                tok.kind = TokenKind::end;
                out.push_back(tok);
                return out;
            }
            lex_one(tok);
            out.push_back(std::move(tok));
        }
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    unsigned char at(std::size_t i) const { return i < src_.size() ? static_cast<unsigned char>(src_[i]) : 0; }
    unsigned char cur() const { return at(pos_); }

    void advance(std::size_t n = 1)
    {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    void skip_space_and_comments()
    {
        while (pos_ < src_.size()) {
            const auto c = cur();
            if (std::isspace(c)) {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && cur() != '\n') {
                    advance();
                }
            } else {
                break;
            }
        }
    }

    bool looks_like_iri() const
    {
        std::size_t i = pos_ + 1;
        while (i < src_.size()) {
            const auto c = at(i);
            if (c == '>') {
                return true;
            }
            if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
                return false;
            }
            ++i;
        }
        return false;
    }

    void lex_one(Token& tok)
    {
        const auto c = cur();
        if (c == '<' && looks_like_iri()) {
            advance();
            std::string text;
            while (cur() != '>') {
                if (cur() == '\\') {
                    text += read_escape(false);
                    continue;
                }
                text += static_cast<char>(cur());
                advance();
            }
            advance();
            tok.kind = TokenKind::iri;
            tok.text = std::move(text);
            return;
        }
        if (c == '"' || c == '\'') {
            tok.kind = TokenKind::string;
            tok.text = read_string();
            return;
        }
        if (c == '_' && at(pos_ + 1) == ':') {
            advance(2);
            std::string label;
            while (is_name_char(cur()) || (cur() == '.' && is_name_char(at(pos_ + 1)))) {
                label += static_cast<char>(cur());
                advance();
            }
            if (label.empty()) {
                fail("empty blank node label");
            }
            tok.kind = TokenKind::blank;
            tok.text = std::move(label);
            return;
        }
        if ((c == '?' || c == '$') && is_name_char(at(pos_ + 1))) {
            advance();
            std::string name;
            while (is_name_char(cur()) && cur() != '-') {
                name += static_cast<char>(cur());
                advance();
            }
            tok.kind = TokenKind::variable;
            tok.text = std::move(name);
            return;
        }
        if (c == '@' && std::isalpha(at(pos_ + 1))) {
            advance();
            std::string tag;
            while (std::isalnum(cur()) || cur() == '-') {
                tag += static_cast<char>(cur());
                advance();
            }
            tok.kind = TokenKind::lang_tag;
            tok.text = std::move(tag);
            return;
        }
        if (std::isdigit(c) || (c == '.' && std::isdigit(at(pos_ + 1)))) {
            lex_number(tok);
            return;
        }
        if (is_name_start(c) || c == ':') {
            lex_name(tok);
            return;
        }
        static constexpr std::string_view two_char[] = {"^^", "!=", "<=", ">=", "&&", "||"};
        for (const auto op : two_char) {
            if (src_.substr(pos_, 2) == op) {
                tok.kind = TokenKind::punct;
                tok.text = std::string(op);
                advance(2);
                return;
            }
        }
        static constexpr std::string_view single = "{}()[].;,*=<>!+-/|";
        if (single.find(static_cast<char>(c)) != std::string_view::npos) {
            tok.kind = TokenKind::punct;
            tok.text = std::string(1, static_cast<char>(c));
            advance();
            return;
        }
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
    }

    void lex_number(Token& tok)
    {
        std::string text;
        bool has_dot = false;
        bool has_exp = false;
        while (std::isdigit(cur())) {
            text += static_cast<char>(cur());
            advance();
        }
        if (cur() == '.' && std::isdigit(at(pos_ + 1))) {
            has_dot = true;
            text += '.';
            advance();
            while (std::isdigit(cur())) {
                text += static_cast<char>(cur());
                advance();
            }
        }
        if (cur() == 'e' || cur() == 'E') {
            std::size_t look = pos_ + 1;
            if (at(look) == '+' || at(look) == '-') {
                ++look;
            }
            if (std::isdigit(at(look))) {
                has_exp = true;
                while (pos_ < look) {
                    text += static_cast<char>(cur());
                    advance();
                }
                while (std::isdigit(cur())) {
                    text += static_cast<char>(cur());
                    advance();
                }
            }
        }
        tok.kind = has_exp ? TokenKind::double_ : (has_dot ? TokenKind::decimal : TokenKind::integer);
        tok.text = std::move(text);
    }

    void lex_name(Token& tok)
    {
        std::string text;
        bool has_colon = false;
        while (true) {
            const auto ch = cur();
            if (is_name_char(ch) || ch == '.' || ch == '%') {
                text += static_cast<char>(ch);
                advance();
            } else if (ch == ':') {
                has_colon = true;
                text += ':';
                advance();
            } else if (ch == '\\' && has_colon && at(pos_ + 1) != 0) {
                // PN_LOCAL_ESC
                advance();
                text += static_cast<char>(cur());
                advance();
            } else {
                break;
            }
        }
        // A trailing '.' terminates a statement, it is not part of the name.
        while (!text.empty() && text.back() == '.') {
            text.pop_back();
            --pos_;
            --col_;
        }
        tok.kind = has_colon ? TokenKind::prefixed : TokenKind::word;
        tok.text = std::move(text);
    }

    std::string read_escape(bool in_string)
    {
        advance(); // backslash
        const auto e = cur();
        auto hex = [this](int digits) {
            unsigned long cp = 0;
            for (int i = 0; i < digits; ++i) {
                advance();
                const auto h = cur();
                if (!std::isxdigit(h)) {
                    fail("bad unicode escape");
                }
                cp = cp * 16 + static_cast<unsigned long>(std::isdigit(h) ? h - '0' : std::tolower(h) - 'a' + 10);
            }
            advance();
            std::string out;
            append_utf8(out, cp);
            return out;
        };
        if (e == 'u') {
            return hex(4);
        }
        if (e == 'U') {
            return hex(8);
        }
        if (!in_string) {
            fail("invalid escape in IRI");
        }
        advance();
        switch (e) {
        case 't': return "\t";
        case 'b': return "\b";
        case 'n': return "\n";
        case 'r': return "\r";
        case 'f': return "\f";
        case '"': return "\"";
        case '\'': return "'";
        case '\\': return "\\";
        default: fail(std::string("invalid string escape '\\") + static_cast<char>(e) + "'");
        }
    }

    std::string read_string()
    {
        const auto quote = cur();
        const bool is_long = at(pos_ + 1) == quote && at(pos_ + 2) == quote;
        advance(is_long ? 3 : 1);
        std::string out;
        while (true) {
            if (pos_ >= src_.size()) {
                fail("unterminated string literal");
            }
            const auto c = cur();
            if (c == '\\') {
                out += read_escape(true);
                continue;
            }
            if (is_long) {
                if (c == quote && at(pos_ + 1) == quote && at(pos_ + 2) == quote) {
                    advance(3);
                    return out;
                }
            } else {
                if (c == quote) {
                    advance();
                    return out;
                }
                if (c == '\n' || c == '\r') {
                    fail("newline in short string literal");
                }
            }
            out += static_cast<char>(c);
            advance();
        }
    }
};

} // namespace

bool Token::is_keyword(std::string_view kw) const noexcept
{
    if (kind != TokenKind::word || text.size() != kw.size()) {
        return false;
    }
    for (std::size_t i = 0; i < kw.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(text[i])) != std::toupper(static_cast<unsigned char>(kw[i]))) {
            return false;
        }
    }
    return true;
}

std::vector<Token> tokenize(std::string_view source)
{
    return Lexer(source).run();
}

const Token& TokenStream::peek(std::size_t ahead) const
{
    const auto i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
}

const Token& TokenStream::next()
{
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) {
        ++pos_;
    }
    return t;
}

bool TokenStream::accept_punct(std::string_view p)
{
    if (peek().is_punct(p)) {
        next();
        return true;
    }
    return false;
}

bool TokenStream::accept_keyword(std::string_view kw)
{
    if (peek().is_keyword(kw)) {
        next();
        return true;
    }
    return false;
}

const Token& TokenStream::expect_punct(std::string_view p)
{
    if (!peek().is_punct(p)) {
        fail("expected '" + std::string(p) + "' but found " + describe(peek()));
    }
    return next();
}

void TokenStream::expect_keyword(std::string_view kw)
{
    if (!peek().is_keyword(kw)) {
        fail("expected " + std::string(kw) + " but found " + describe(peek()));
    }
    next();
}

void TokenStream::fail(const std::string& message) const
{
    fail_at(peek(), message);
}

void TokenStream::fail_at(const Token& token, const std::string& message) const
{
    throw ParseError(message, token.line, token.column);
}

std::string describe(const Token& token)
{
    switch (token.kind) {
    case TokenKind::end: return "end of input";
    case TokenKind::iri: return "<" + token.text + ">";
    case TokenKind::variable: return "?" + token.text;
    case TokenKind::string: return "string literal";
    default: return "'" + token.text + "'";
    }
}

} // namespace provcurate::rdf
