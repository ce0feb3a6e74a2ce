#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mtmorph::mtl::detail {

enum class Tok {
  Ident,
  String,
  Integer,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Colon,
  Semi,
  Bang,
  Dot,
  Arrow,  // <-
  At,
  Eq,
  Ne,  // <> or !=
  Lt,
  Le,
  Gt,
  Ge,
  End,
};

std::string_view describe(Tok tok);

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name or unescaped string contents
  std::int64_t integer = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Throws SyntaxError on unterminated strings, bad escapes, stray characters
/// and out-of-range integers.
std::vector<Token> tokenize(std::string_view text);

}  // namespace mtmorph::mtl::detail
