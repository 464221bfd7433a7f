#include "lepage/symbol.hpp"

#include <cctype>

namespace lepage {

std::string Symbol::name() const {
  auto d = [](int v) { return std::to_string(v); };
  switch (kind) {
    case SymKind::X: return "x" + d(i);
    case SymKind::Y: return "y" + d(i);
    case SymKind::Y1: return "y" + d(i) + "_" + d(j);
    case SymKind::Y2: return "y" + d(i) + "_" + d(j) + d(k);
    case SymKind::W: return "w" + d(i);
    case SymKind::W1: return "w" + d(i) + "_" + d(j);
    case SymKind::Z: return "z" + d(i) + "_" + d(j);
    case SymKind::A: return "a" + d(i) + "_" + d(j);
  }
  return "?";
}

std::string Symbol::latex() const {
  auto d = [](int v) { return std::to_string(v); };
  switch (kind) {
    case SymKind::X: return "x^{" + d(i) + "}";
    case SymKind::Y: return "y^{" + d(i) + "}";
    case SymKind::Y1: return "y^{" + d(i) + "}_{" + d(j) + "}";
    case SymKind::Y2: return "y^{" + d(i) + "}_{" + d(j) + d(k) + "}";
    case SymKind::W: return "w^{" + d(i) + "}";
    case SymKind::W1: return "w^{" + d(i) + "}_{" + d(j) + "}";
    case SymKind::Z: return "z^{" + d(i) + "}_{" + d(j) + "}";
    case SymKind::A: return "a^{" + d(i) + "}_{" + d(j) + "}";
  }
  return "?";
}

std::optional<Symbol> Symbol::from_name(std::string_view s) {
  if (s.size() < 2) return std::nullopt;
  char head = s[0];
  std::string_view rest = s.substr(1);
  auto digit = [](char c) { return c >= '1' && c <= '9'; };
  auto val = [](char c) { return c - '0'; };
  // single-digit indices only; the DSL never needs more than nine
  if (rest.size() == 1 && digit(rest[0])) {
    if (head == 'x') return Symbol::x(val(rest[0]));
    if (head == 'y') return Symbol::y(val(rest[0]));
    if (head == 'w') return Symbol::w(val(rest[0]));
    return std::nullopt;
  }
  if (rest.size() == 3 && digit(rest[0]) && rest[1] == '_' && digit(rest[2])) {
    int a = val(rest[0]), b = val(rest[2]);
    if (head == 'y') return Symbol::y1(a, b);
    if (head == 'w') return Symbol::w1(a, b);
    if (head == 'z') return Symbol::z(a, b);
    if (head == 'a') return Symbol::a(a, b);
    return std::nullopt;
  }
  if (rest.size() == 4 && head == 'y' && digit(rest[0]) && rest[1] == '_' && digit(rest[2]) &&
      digit(rest[3]))
    return Symbol::y2(val(rest[0]), val(rest[2]), val(rest[3]));
  return std::nullopt;
}

}  // namespace lepage
