#include "lepage/parser.hpp"

#include <cctype>

#include "lepage/error.hpp"

namespace lepage {

namespace {

class Parser {
 public:
  Parser(std::string_view s, ParseContext& ctx) : s_(s), ctx_(ctx) {}

  Expr parse_all() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  std::string_view s_;
  ParseContext& ctx_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "', got end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = e + term();
      else if (accept('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (peek('/')) {
        std::size_t at = pos_++;
        Expr d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return factor();
  }

  Expr factor() {
    Expr base = atom();
    if (accept('^')) {
      skip();
      std::size_t at = pos_;
      bool neg = accept('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected integer exponent", pos_);
      long k = std::stol(std::string(s_.substr(start, pos_ - start)));
      if (k > 64) throw ParseError("exponent too large", at);
      if (neg && base.is_zero()) throw ParseError("division by zero", at);
      base = base.pow(static_cast<int>(neg ? -k : k));
    }
    return base;
  }

  Expr number() {
    std::size_t start = pos_;
    std::int64_t num = 0, den = 1;
    auto push = [&](char c) {
      if (num > (INT64_MAX - 9) / 10) throw ParseError("numeric literal too large", start);
      num = num * 10 + (c - '0');
    };
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) push(s_[pos_++]);
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        push(s_[pos_++]);
        if (den > INT64_MAX / 10) throw ParseError("numeric literal too long", start);
        den *= 10;
      }
    }
    return Expr(Rational(num, den));
  }

  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<Expr> arg_list() {
    std::vector<Expr> args;
    if (accept(')')) return args;
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    expect(')');
    return args;
  }

  Expr atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) throw ParseError(std::string("unexpected '") + c + "'", pos_);
    std::size_t at = pos_;
    std::string id = ident();
    if (accept('(')) return call(id, at);
    auto sym = Symbol::from_name(id);
    if (!sym || (ctx_.symbol_ok && !ctx_.symbol_ok(*sym)))
      throw ParseError("unknown identifier '" + id + "'", at);
    return Expr::sym(*sym);
  }

  Expr call(const std::string& id, std::size_t at) {
    std::vector<Expr> args = arg_list();
    if (id == "sqrt") {
      if (args.size() != 1) throw ParseError("sqrt takes one argument", at);
      return sqrt(args[0]);
    }
    if (id.size() == 4 && id.compare(0, 3, "det") == 0 && std::isdigit(static_cast<unsigned char>(id[3]))) {
      int n = id[3] - '0';
      if (n < 1 || n > 4) throw ParseError("determinant size must be 1..4", at);
      if (args.size() != static_cast<std::size_t>(n * n))
        throw ParseError(id + " expects " + std::to_string(n * n) + " entries", at);
      std::vector<std::vector<Expr>> m(static_cast<std::size_t>(n));
      for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col) m[static_cast<std::size_t>(r)].push_back(args[static_cast<std::size_t>(r * n + col)]);
      return det(m);
    }
    if (is_builtin_function(id)) {
      if (args.size() != 1) throw ParseError(id + " takes one argument", at);
      return Expr::func(id, std::move(args));
    }
    std::string name = id;
    std::vector<int> derivs;
    if (auto p = id.find("__"); p != std::string::npos) {
      name = id.substr(0, p);
      std::string rest = id.substr(p + 2);
      std::size_t q = 0;
      while (q < rest.size()) {
        std::size_t e = rest.find('_', q);
        std::string part = rest.substr(q, e == std::string::npos ? std::string::npos : e - q);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
          throw ParseError("malformed derivative index in '" + id + "'", at);
        int k = std::stoi(part);
        if (k < 1 || static_cast<std::size_t>(k) > args.size())
          throw ParseError("derivative index out of range in '" + id + "'", at);
        derivs.push_back(k - 1);
        if (e == std::string::npos) break;
        q = e + 1;
      }
    }
    if (name.empty() || Symbol::from_name(name) || is_builtin_function(name) || name == "sqrt")
      throw ParseError("invalid function name '" + id + "'", at);
    auto it = ctx_.arities.find(name);
    if (it == ctx_.arities.end())
      ctx_.arities.emplace(name, static_cast<int>(args.size()));
    else if (it->second != static_cast<int>(args.size()))
      throw ParseError("arity mismatch for '" + name + "': expected " + std::to_string(it->second) +
                           ", got " + std::to_string(args.size()),
                       at);
    return Expr::func(name, std::move(args), std::move(derivs));
  }
};

// ---- printing ------------------------------------------------------------------

struct Style {
  bool latex;
};

std::string print(const Expr& e, Style st);

std::string func_name(const AtomNode& a, Style st) {
  if (!st.latex) {
    std::string s = a.name;
    if (!a.derivs.empty()) {
      s += "_";
      for (int d : a.derivs) s += "_" + std::to_string(d + 1);
    }
    return s;
  }
  static const std::map<std::string, std::string> tex = {{"sin", "\\sin"}, {"cos", "\\cos"},
                                                         {"tan", "\\tan"}, {"exp", "\\exp"},
                                                         {"log", "\\log"}, {"atan", "\\arctan"}};
  auto it = tex.find(a.name);
  if (it != tex.end()) return it->second;
  std::string s = "\\mathrm{" + a.name + "}";
  if (!a.derivs.empty()) {
    s += "_{,";
    for (int d : a.derivs) s += std::to_string(d + 1);
    s += "}";
  }
  return s;
}

std::string print_atom(const AtomNode& a, int exp, Style st) {
  std::string body;
  bool needs_paren = false;
  switch (a.kind) {
    case AtomKind::Symbol:
      body = st.latex ? a.sym.latex() : a.sym.name();
      needs_paren = st.latex;
      break;
    case AtomKind::Sqrt:
      body = st.latex ? "\\sqrt{" + print(a.base(), st) + "}" : "sqrt(" + print(a.base(), st) + ")";
      break;
    case AtomKind::Sum:
      body = st.latex ? "\\left(" + print(a.base(), st) + "\\right)" : "(" + print(a.base(), st) + ")";
      break;
    case AtomKind::Func: {
      body = func_name(a, st) + (st.latex ? "\\left(" : "(");
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) body += ", ";
        body += print(a.args[i], st);
      }
      body += st.latex ? "\\right)" : ")";
      break;
    }
  }
  if (exp == 1) return body;
  if (st.latex) {
    if (needs_paren) body = "\\left(" + body + "\\right)";
    return body + "^{" + std::to_string(exp) + "}";
  }
  return body + "^" + std::to_string(exp);
}

std::string print(const Expr& e, Style st) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    Rational c = t.coef;
    bool neg = c.sign() < 0;
    if (neg) c = -c;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    std::string factors;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (i) factors += st.latex ? " " : "*";
      factors += print_atom(*t.mono[i].atom, t.mono[i].exp, st);
    }
    if (t.mono.empty()) {
      out += st.latex && !c.is_integer() ? "\\tfrac{" + std::to_string(c.num()) + "}{" + std::to_string(c.den()) + "}"
                                         : c.str();
    } else if (c.is_one()) {
      out += factors;
    } else if (st.latex) {
      out += (c.is_integer() ? c.str() : "\\tfrac{" + std::to_string(c.num()) + "}{" + std::to_string(c.den()) + "}") +
             " " + factors;
    } else {
      out += c.str() + "*" + factors;
    }
  }
  return out;
}

}  // namespace

Expr parse(std::string_view text, ParseContext& ctx) {
  Parser p(text, ctx);
  return p.parse_all();
}

Expr parse(std::string_view text) {
  ParseContext ctx;
  return parse(text, ctx);
}

std::string to_string(const Expr& e) { return print(e, Style{false}); }
std::string to_latex(const Expr& e) { return print(e, Style{true}); }

}  // namespace lepage
