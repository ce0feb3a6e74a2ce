#include <algorithm>
#include <map>
#include <set>

#include "mtl_lexer.hpp"
#include "mtmorph/mtl.hpp"

namespace mtmorph::mtl {

namespace {

using detail::Tok;
using detail::Token;

struct Pos {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  TransformationProgram run() {
    TransformationProgram program;
    expect_keyword("transformation");
    program.name = expect_ident("transformation name");
    expect_keyword("from");
    program.source_metamodel = expect_ident("source metamodel name");
    expect_keyword("to");
    program.target_metamodel = expect_ident("target metamodel name");
    expect(Tok::Semi);
    source_mm_ = program.source_metamodel;
    target_mm_ = program.target_metamodel;

    std::set<std::string> constant_names;
    while (is_keyword("const")) {
      const Pos at = here();
      Constant c = parse_constant();
      if (!constant_names.insert(c.name).second) {
        analysis_error("duplicate constant \"" + c.name + "\"", at);
      }
      program.constants.push_back(std::move(c));
    }

    std::map<std::vector<std::string>, std::string> signatures;
    while (is_keyword("rule")) {
      const Pos at = here();
      Rule rule = parse_rule();
      if (program.find_rule(rule.name) != nullptr) {
        analysis_error("duplicate rule name \"" + rule.name + "\"", at);
      }
      auto [it, inserted] = signatures.emplace(rule.signature(), rule.name);
      if (!inserted) {
        analysis_error("rule \"" + rule.name + "\" has the same source signature as rule \"" +
                           it->second + "\"",
                       at);
      }
      program.rules.push_back(std::move(rule));
    }
    if (peek().kind != Tok::End) {
      syntax_error("expected 'rule', 'const' or end of input");
    }

    for (const auto& [name, at] : constant_uses_) {
      if (!constant_names.contains(name)) analysis_error("undeclared constant @" + name, at);
    }
    return program;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  Pos here() const { return {peek().line, peek().column}; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void syntax_error(const std::string& message) const {
    const Token& t = peek();
    std::string found(detail::describe(t.kind));
    if (t.kind == Tok::Ident) found += " \"" + t.text + "\"";
    throw SyntaxError(message + ", found " + found, t.line, t.column);
  }
  [[noreturn]] void analysis_error(const std::string& message, Pos at) const {
    throw AnalysisError(message, at.line, at.column);
  }

  bool is_keyword(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }
  static bool reserved(std::string_view word) {
    static const std::set<std::string_view> words = {"transformation", "from", "to", "rule",
                                                     "const", "and", "true", "false"};
    return words.contains(word);
  }

  void expect_keyword(std::string_view word) {
    if (!is_keyword(word)) syntax_error("expected '" + std::string(word) + "'");
    next();
  }
  void expect(Tok kind) {
    if (peek().kind != kind) syntax_error("expected " + std::string(detail::describe(kind)));
    next();
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }
  std::string expect_ident(std::string_view what) {
    if (peek().kind != Tok::Ident || reserved(peek().text)) {
      syntax_error("expected " + std::string(what));
    }
    return next().text;
  }

  /// `Type` or `Qualifier!Type`; the qualifier must name `metamodel`.
  std::string parse_type(const std::string& metamodel) {
    const Pos at = here();
    std::string first = expect_ident("type name");
    if (!accept(Tok::Bang)) return first;
    std::string type = expect_ident("type name after '!'");
    if (first != metamodel) {
      analysis_error("metamodel qualifier \"" + first + "\" does not match \"" + metamodel + "\"",
                     at);
    }
    return type;
  }

  Value parse_literal() {
    const Token& t = peek();
    if (t.kind == Tok::String) return next().text;
    if (t.kind == Tok::Integer) return next().integer;
    if (is_keyword("true")) {
      next();
      return true;
    }
    if (is_keyword("false")) {
      next();
      return false;
    }
    syntax_error("expected literal");
  }

  Constant parse_constant() {
    expect_keyword("const");
    Constant c;
    c.name = expect_ident("constant name");
    expect(Tok::Colon);
    c.type = parse_type(target_mm_);
    if (accept(Tok::LParen)) {
      if (peek().kind != Tok::RParen) {
        do {
          Binding b;
          b.feature = expect_ident("feature name");
          expect(Tok::Arrow);
          if (accept(Tok::At)) {
            const Pos at = here();
            b.expr = ConstantRef{expect_ident("constant name")};
            constant_uses_.emplace_back(std::get<ConstantRef>(b.expr).name, at);
          } else {
            b.expr = Literal{parse_literal()};
          }
          c.bindings.push_back(std::move(b));
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen);
    }
    expect(Tok::Semi);
    return c;
  }

  Comparison parse_comparison(const std::string& guarded_var) {
    Comparison cmp;
    const Pos at = here();
    const std::string var = expect_ident("guarded variable");
    expect(Tok::Dot);
    cmp.attr = expect_ident("attribute name");
    if (var != guarded_var) {
      analysis_error("guard must constrain the first source variable \"" + guarded_var +
                         "\", not \"" + var + "\"",
                     at);
    }
    switch (peek().kind) {
      case Tok::Eq: cmp.op = CompareOp::Eq; break;
      case Tok::Ne: cmp.op = CompareOp::Ne; break;
      case Tok::Lt: cmp.op = CompareOp::Lt; break;
      case Tok::Le: cmp.op = CompareOp::Le; break;
      case Tok::Gt: cmp.op = CompareOp::Gt; break;
      case Tok::Ge: cmp.op = CompareOp::Ge; break;
      default: syntax_error("expected comparison operator");
    }
    next();
    cmp.literal = parse_literal();
    return cmp;
  }

  struct PendingRef {
    enum { Source, Target } kind;
    std::string var;
    Pos at;
  };

  BindingExpr parse_expr(std::vector<PendingRef>& pending) {
    const Token& t = peek();
    if (t.kind == Tok::String || t.kind == Tok::Integer || is_keyword("true") ||
        is_keyword("false")) {
      return Literal{parse_literal()};
    }
    if (accept(Tok::At)) {
      const Pos at = here();
      ConstantRef ref{expect_ident("constant name")};
      constant_uses_.emplace_back(ref.name, at);
      return ref;
    }
    const Pos at = here();
    std::string var = expect_ident("binding expression");
    if (accept(Tok::Dot)) {
      std::string feature = expect_ident("feature name");
      pending.push_back({PendingRef::Source, var, at});
      return FeatureOf{std::move(var), std::move(feature)};
    }
    pending.push_back({PendingRef::Target, var, at});
    return TargetVar{std::move(var)};
  }

  Rule parse_rule() {
    expect_keyword("rule");
    Rule rule;
    rule.name = expect_ident("rule name");
    expect(Tok::LBrace);
    expect_keyword("from");

    std::set<std::string> vars;
    auto declare = [&](const std::string& var, Pos at) {
      if (!vars.insert(var).second) {
        analysis_error("duplicate variable \"" + var + "\" in rule " + rule.name, at);
      }
    };

    do {
      const Pos at = here();
      SourceVar sv;
      sv.name = expect_ident("source variable");
      expect(Tok::Colon);
      sv.type = parse_type(source_mm_);
      declare(sv.name, at);
      rule.sources.push_back(std::move(sv));
      if (rule.sources.size() == 1 && accept(Tok::LParen)) {
        Guard guard;
        for (;;) {
          guard.terms.push_back(parse_comparison(rule.sources.front().name));
          if (!is_keyword("and")) break;
          next();
        }
        expect(Tok::RParen);
        rule.guard = std::move(guard);
      }
    } while (accept(Tok::Comma));

    expect_keyword("to");
    std::vector<PendingRef> pending;
    do {
      const Pos at = here();
      TargetTemplate tt;
      tt.var = expect_ident("target variable");
      expect(Tok::Colon);
      tt.type = parse_type(target_mm_);
      declare(tt.var, at);
      expect(Tok::LParen);
      if (peek().kind != Tok::RParen) {
        do {
          Binding b;
          b.feature = expect_ident("feature name");
          expect(Tok::Arrow);
          b.expr = parse_expr(pending);
          tt.bindings.push_back(std::move(b));
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen);
      rule.targets.push_back(std::move(tt));
    } while (accept(Tok::Comma));
    expect(Tok::RBrace);

    for (const auto& ref : pending) {
      if (ref.kind == PendingRef::Source && rule.find_source(ref.var) == nullptr) {
        analysis_error("unknown source variable \"" + ref.var + "\" in rule " + rule.name,
                       ref.at);
      }
      if (ref.kind == PendingRef::Target && rule.find_target(ref.var) == nullptr) {
        analysis_error("unknown target variable \"" + ref.var + "\" in rule " + rule.name,
                       ref.at);
      }
    }
    return rule;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string source_mm_;
  std::string target_mm_;
  std::vector<std::pair<std::string, Pos>> constant_uses_;
};

}  // namespace

std::vector<std::string> Rule::signature() const {
  std::vector<std::string> sig;
  for (const auto& s : sources) sig.push_back(s.type);
  return sig;
}

const TargetTemplate* Rule::find_target(std::string_view var) const {
  auto it = std::find_if(targets.begin(), targets.end(),
                         [&](const TargetTemplate& t) { return t.var == var; });
  return it == targets.end() ? nullptr : &*it;
}

const SourceVar* Rule::find_source(std::string_view var) const {
  auto it = std::find_if(sources.begin(), sources.end(),
                         [&](const SourceVar& s) { return s.name == var; });
  return it == sources.end() ? nullptr : &*it;
}

const Rule* TransformationProgram::find_rule(std::string_view rule) const {
  auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.name == rule; });
  return it == rules.end() ? nullptr : &*it;
}

const Constant* TransformationProgram::find_constant(std::string_view constant) const {
  auto it = std::find_if(constants.begin(), constants.end(),
                         [&](const Constant& c) { return c.name == constant; });
  return it == constants.end() ? nullptr : &*it;
}

std::vector<std::string> TransformationProgram::referenced_constants() const {
  std::set<std::string> used;
  auto scan = [&](const std::vector<Binding>& bindings) {
    for (const auto& b : bindings) {
      if (const auto* c = std::get_if<ConstantRef>(&b.expr)) used.insert(c->name);
    }
  };
  for (const auto& r : rules) {
    for (const auto& t : r.targets) scan(t.bindings);
  }
  // A constant referenced only from another referenced constant is needed too.
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& c : constants) {
      if (!used.contains(c.name)) continue;
      for (const auto& b : c.bindings) {
        if (const auto* ref = std::get_if<ConstantRef>(&b.expr)) {
          grew |= used.insert(ref->name).second;
        }
      }
    }
  }
  std::vector<std::string> out;
  for (const auto& c : constants) {
    if (used.contains(c.name)) out.push_back(c.name);
  }
  return out;
}

TransformationProgram parse_transformation(std::string_view text) {
  return Parser(detail::tokenize(text)).run();
}

TransformationProgram load_transformation(const std::filesystem::path& path) {
  return parse_transformation(read_file(path));
}

}  // namespace mtmorph::mtl
