#include "mtl_lexer.hpp"

#include <cctype>
#include <charconv>

#include "mtmorph/errors.hpp"

namespace mtmorph::mtl::detail {

std::string_view describe(Tok tok) {
  switch (tok) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string literal";
    case Tok::Integer: return "integer literal";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Bang: return "'!'";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'<-'";
    case Tok::At: return "'@'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'<>'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        tok.kind = Tok::End;
        out.push_back(tok);
        return out;
      }
      const char c = text_[pos_];
      if (ident_start(c)) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        tok.kind = Tok::Ident;
        tok.text = std::string(text_.substr(start, pos_ - start));
      } else if (digit(c) || (c == '-' && digit(peek(1)))) {
        lex_integer(tok);
      } else if (c == '\'') {
        lex_string(tok);
      } else {
        lex_punct(tok);
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(message, line_, column_);
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_integer(Token& tok) {
    const std::size_t start = pos_;
    advance();
    while (pos_ < text_.size() && digit(text_[pos_])) advance();
    const std::string_view digits = text_.substr(start, pos_ - start);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), tok.integer);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw SyntaxError("integer literal out of range", tok.line, tok.column);
    }
    if (pos_ < text_.size() && ident_start(text_[pos_])) fail("malformed integer literal");
    tok.kind = Tok::Integer;
  }

  void lex_string(Token& tok) {
    advance();  // opening quote
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        throw SyntaxError("unterminated string literal", tok.line, tok.column);
      }
      const char c = text_[pos_];
      if (c == '\'') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        const char e = peek(0);
        if (e == '\'' || e == '\\') {
          tok.text += e;
        } else if (e == 'n') {
          tok.text += '\n';
        } else {
          fail("unknown escape sequence");
        }
        advance();
        continue;
      }
      tok.text += c;
      advance();
    }
    tok.kind = Tok::String;
  }

  void lex_punct(Token& tok) {
    const char c = text_[pos_];
    const char n = peek(1);
    auto two = [&](Tok kind) {
      advance();
      advance();
      tok.kind = kind;
    };
    auto one = [&](Tok kind) {
      advance();
      tok.kind = kind;
    };
    switch (c) {
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case ',': return one(Tok::Comma);
      case ':': return one(Tok::Colon);
      case ';': return one(Tok::Semi);
      case '.': return one(Tok::Dot);
      case '@': return one(Tok::At);
      case '=': return one(Tok::Eq);
      case '!': return n == '=' ? two(Tok::Ne) : one(Tok::Bang);
      case '<':
        if (n == '-') return two(Tok::Arrow);
        if (n == '>') return two(Tok::Ne);
        if (n == '=') return two(Tok::Le);
        return one(Tok::Lt);
      case '>': return n == '=' ? two(Tok::Ge) : one(Tok::Gt);
      default: break;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace mtmorph::mtl::detail
