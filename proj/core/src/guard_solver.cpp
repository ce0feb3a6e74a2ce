#include <limits>
#include <set>

#include "mtmorph/mrgen.hpp"

namespace mtmorph::guards {

namespace {

using mtl::CompareOp;
using mtl::Comparison;

std::optional<Value> solve_integer(const std::vector<const Comparison*>& terms) {
  using Limits = std::numeric_limits<std::int64_t>;
  std::int64_t lo = Limits::min();
  std::int64_t hi = Limits::max();
  bool has_lo = false;
  bool has_hi = false;
  std::optional<std::int64_t> eq;
  std::set<std::int64_t> excluded;
  for (const Comparison* t : terms) {
    const std::int64_t v = std::get<std::int64_t>(t->literal);
    switch (t->op) {
      case CompareOp::Eq:
        if (eq && *eq != v) return std::nullopt;
        eq = v;
        break;
      case CompareOp::Ne: excluded.insert(v); break;
      case CompareOp::Lt:
        if (v == Limits::min()) return std::nullopt;
        hi = std::min(hi, v - 1);
        has_hi = true;
        break;
      case CompareOp::Le:
        hi = std::min(hi, v);
        has_hi = true;
        break;
      case CompareOp::Gt:
        if (v == Limits::max()) return std::nullopt;
        lo = std::max(lo, v + 1);
        has_lo = true;
        break;
      case CompareOp::Ge:
        lo = std::max(lo, v);
        has_lo = true;
        break;
    }
  }
  if (lo > hi) return std::nullopt;
  if (eq) {
    if (*eq < lo || *eq > hi || excluded.contains(*eq)) return std::nullopt;
    return *eq;
  }
  // Walk away from the tightest bound; with no bound start at the default.
  if (has_lo || !has_hi) {
    std::int64_t candidate = has_lo ? lo : std::clamp<std::int64_t>(0, lo, hi);
    while (excluded.contains(candidate)) {
      if (candidate == hi) return std::nullopt;
      ++candidate;
    }
    return candidate;
  }
  std::int64_t candidate = hi;
  while (excluded.contains(candidate)) {
    if (candidate == lo) return std::nullopt;
    --candidate;
  }
  return candidate;
}

std::optional<Value> solve_string(const std::vector<const Comparison*>& terms) {
  std::optional<std::string> eq;
  std::set<std::string> excluded;
  for (const Comparison* t : terms) {
    const auto& v = std::get<std::string>(t->literal);
    if (t->op == CompareOp::Eq) {
      if (eq && *eq != v) return std::nullopt;
      eq = v;
    } else if (t->op == CompareOp::Ne) {
      excluded.insert(v);
    } else {
      return std::nullopt;
    }
  }
  if (eq) {
    if (excluded.contains(*eq)) return std::nullopt;
    return *eq;
  }
  std::string candidate;
  for (std::size_t n = 0; excluded.contains(candidate); ++n) {
    candidate = "x" + (n == 0 ? std::string() : std::to_string(n));
  }
  return candidate;
}

std::optional<Value> solve_boolean(const std::vector<const Comparison*>& terms) {
  bool allow_false = true;
  bool allow_true = true;
  for (const Comparison* t : terms) {
    const bool v = std::get<bool>(t->literal);
    if (t->op == CompareOp::Eq) {
      (v ? allow_false : allow_true) = false;
    } else if (t->op == CompareOp::Ne) {
      (v ? allow_true : allow_false) = false;
    } else {
      return std::nullopt;
    }
  }
  if (allow_false) return false;
  if (allow_true) return true;
  return std::nullopt;
}

}  // namespace

std::optional<std::map<std::string, Value>> solve(const mtl::Guard& guard,
                                                  const ElementType& type) {
  std::map<std::string, std::vector<const Comparison*>> by_attr;
  for (const auto& term : guard.terms) by_attr[term.attr].push_back(&term);

  std::map<std::string, Value> witness;
  for (const auto& [attr, terms] : by_attr) {
    const AttributeDecl* decl = type.find_attribute(attr);
    if (decl == nullptr) return std::nullopt;
    for (const Comparison* t : terms) {
      if (kind_of(t->literal) != decl->kind) return std::nullopt;
    }
    std::optional<Value> value;
    switch (decl->kind) {
      case AttrKind::Integer: value = solve_integer(terms); break;
      case AttrKind::String: value = solve_string(terms); break;
      case AttrKind::Boolean: value = solve_boolean(terms); break;
    }
    if (!value) return std::nullopt;
    witness.emplace(attr, std::move(*value));
  }
  return witness;
}

}  // namespace mtmorph::guards
