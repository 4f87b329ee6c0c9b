#include "vg/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "vg/geometry.hpp"

namespace vg {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  Lexer(std::string_view src, int line0, int col0) : src_(src), line_(line0), col_(col0) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      int line = line_, col = col_;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits += src_[pos_];
          advance();
        }
        out.push_back({Tok::Number, digits, line, col});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          ident += src_[pos_];
          advance();
        }
        out.push_back({Tok::Ident, ident, line, col});
        continue;
      }
      Tok t;
      switch (c) {
        case '+': t = Tok::Plus; break;
        case '-': t = Tok::Minus; break;
        case '*': t = Tok::Star; break;
        case '/': t = Tok::Slash; break;
        case '^': t = Tok::Caret; break;
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        default:
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
      out.push_back({t, std::string(1, c), line, col});
      advance();
    }
    out.push_back({Tok::End, "", line_, col_});
    return out;
  }

 private:
  void advance() {
    ++pos_;
    ++col_;
  }
  std::string_view src_;
  size_t pos_ = 0;
  int line_, col_;
};

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, const VariableSpace& space)
      : toks_(std::move(toks)), space_(space) {}

  Ex run() {
    Ex e = parse_sum();
    expect(Tok::End, "end of expression");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token next() { return toks_[i_++]; }
  void expect(Tok k, const std::string& what) {
    if (peek().kind != k)
      throw ParseError(peek().line, peek().col,
                       "expected " + what + ", found '" + peek().text + "'");
    ++i_;
  }

  Ex parse_sum() {
    Ex e = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool plus = next().kind == Tok::Plus;
      Ex rhs = parse_term();
      e = plus ? add(e, rhs) : sub(e, rhs);
    }
    return e;
  }

  Ex parse_term() {
    Ex e = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Token op = next();
      Ex rhs = parse_unary();
      e = op.kind == Tok::Star ? mul(e, rhs) : div(e, rhs);
    }
    return e;
  }

  Ex parse_unary() {
    if (peek().kind == Tok::Minus) {
      next();
      return neg(parse_unary());
    }
    return parse_power();
  }

  Ex parse_power() {
    Ex base = parse_atom();
    if (peek().kind != Tok::Caret) return base;
    Token caret = next();
    Ex exp_expr = parse_unary();  // right-associative
    mpq_class e;
    try {
      auto v = try_eval_exact(exp_expr, EvalPoint{});
      if (!v)
        throw ParseError(caret.line, caret.col, "exponent must be a rational constant");
      e = *v;
    } catch (const UnboundVariableError& u) {
      throw ParseError(caret.line, caret.col,
                       "exponent must be a rational constant, depends on " + name(u.var));
    } catch (const SingularPointError&) {
      throw ParseError(caret.line, caret.col, "singular exponent");
    }
    return power(base, e);
  }

  Ex parse_atom() {
    Token t = next();
    switch (t.kind) {
      case Tok::Number:
        return number(mpq_class(t.text));
      case Tok::LParen: {
        Ex e = parse_sum();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        if (peek().kind == Tok::LParen) {
          next();
          Ex arg = parse_sum();
          expect(Tok::RParen, "')'");
          if (t.text == "sqrt") return sqrt_of(arg);
          if (auto f = func_from_name(t.text)) return call(*f, arg);
          throw ParseError(t.line, t.col, "unknown function '" + t.text + "'");
        }
        if (t.text == "pi") return pi();
        auto v = var_from_name(t.text);
        if (!v || !space_.contains(*v))
          throw ParseError(t.line, t.col, "unknown identifier '" + t.text + "'");
        return symbol(*v);
      }
      default:
        throw ParseError(t.line, t.col, "expected a term, found '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  VariableSpace space_;
  size_t i_ = 0;
};

Ex parse_expr_at(std::string_view text, const VariableSpace& space, int line0, int col0) {
  return ExprParser(Lexer(text, line0, col0).run(), space).run();
}

struct Line {
  int no;
  std::string text;
};

std::vector<Line> logical_lines(std::string_view contents) {
  std::vector<Line> out;
  int no = 0;
  size_t pos = 0;
  while (pos <= contents.size()) {
    size_t nl = contents.find('\n', pos);
    std::string_view raw =
        contents.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++no;
    std::string text(raw);
    if (auto h = text.find('#'); h != std::string::npos) text.erase(h);
    auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      text.clear();
    } else {
      auto last = text.find_last_not_of(" \t\r");
      text = text.substr(first, last - first + 1);
    }
    if (!text.empty()) out.push_back({no, text});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

struct Assignment {
  int line;
  std::string key;
  std::string value;
  int value_col;
};

std::tuple<int, int, int> parse_gamma_key(const Assignment& a) {
  // Keys look like G[i][j][k].
  const std::string& k = a.key;
  size_t p = 0;
  auto fail = [&]() -> std::tuple<int, int, int> {
    throw ParseError(a.line, 1, "bad christoffel key '" + k + "', expected G[i][j][k]");
  };
  if (p >= k.size() || k[p] != 'G') return fail();
  ++p;
  int idx[3];
  for (int slot = 0; slot < 3; ++slot) {
    if (p >= k.size() || k[p] != '[') return fail();
    ++p;
    size_t start = p;
    while (p < k.size() && std::isdigit(static_cast<unsigned char>(k[p]))) ++p;
    if (p == start || p >= k.size() || k[p] != ']') return fail();
    idx[slot] = std::stoi(k.substr(start, p - start));
    ++p;
  }
  if (p != k.size()) return fail();
  return {idx[0], idx[1], idx[2]};
}

}  // namespace

Ex parse_expr(std::string_view text, const VariableSpace& space) {
  return parse_expr_at(text, space, 1, 1);
}

ParsedStructure parse_structure(std::string_view contents) {
  auto lines = logical_lines(contents);
  size_t li = 0;
  if (li >= lines.size() || lines[li].text != "[header]")
    throw ParseError(lines.empty() ? 1 : lines[0].no, 1, "expected [header] block");
  ++li;

  std::string kind;
  int n = -1;
  std::vector<Assignment> body;
  bool in_header = true;
  for (; li < lines.size(); ++li) {
    const auto& ln = lines[li];
    if (ln.text == "[body]") {
      in_header = false;
      continue;
    }
    auto eq = ln.text.find('=');
    if (eq == std::string::npos)
      throw ParseError(ln.no, 1, "expected 'key = value', found '" + ln.text + "'");
    std::string key = ln.text.substr(0, eq);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::string value = ln.text.substr(eq + 1);
    size_t skip = value.find_first_not_of(" \t");
    int value_col = static_cast<int>(eq + 2 + (skip == std::string::npos ? 0 : skip));
    if (skip != std::string::npos) value = value.substr(skip);

    if (in_header && key == "kind") {
      kind = value;
      continue;
    }
    if (in_header && key == "n") {
      try {
        n = std::stoi(value);
      } catch (...) {
        throw ParseError(ln.no, value_col, "n must be an integer");
      }
      continue;
    }
    in_header = false;
    body.push_back({ln.no, key, value, value_col});
  }

  if (kind.empty()) throw ParseError(1, 1, "header is missing 'kind'");
  if (n < 1) throw ParseError(1, 1, "header is missing 'n' (or n < 1)");

  auto parse_named = [&](const Assignment& a, const VariableSpace& space) {
    return parse_expr_at(a.value, space, a.line, a.value_col);
  };
  auto reject_class = [&](const Ex& e, VarClass cls, const Assignment& a, const char* what) {
    if (depends_on_class(e, cls))
      throw ParseError(a.line, a.value_col, std::string(a.key) + " must not depend on " + what);
  };

  if (kind == "ode") {
    VariableSpace sp = VariableSpace::inhomogeneous(n);
    PathStructure P{n, std::vector<Ex>(n, number(0L))};
    std::vector<bool> seen(n + 1, false);
    for (const auto& a : body) {
      if (a.key.size() < 2 || a.key[0] != 'f')
        throw ParseError(a.line, 1, "unexpected key '" + a.key + "' in ode body");
      int i = 0;
      try {
        i = std::stoi(a.key.substr(1));
      } catch (...) {
        throw ParseError(a.line, 1, "unexpected key '" + a.key + "' in ode body");
      }
      if (i < 1 || i > n) throw ParseError(a.line, 1, "component index out of range in '" + a.key + "'");
      if (seen[i]) throw ParseError(a.line, 1, "duplicate component '" + a.key + "'");
      seen[i] = true;
      Ex e = parse_named(a, sp);
      reject_class(e, VarClass::FiberAcc, a, "accelerations");
      P.f[i - 1] = e;
    }
    for (int i = 1; i <= n; ++i)
      if (!seen[i]) throw ParseError(1, 1, "missing component f" + std::to_string(i));
    return P;
  }

  if (kind == "homogeneous") {
    VariableSpace sp = VariableSpace::homogeneous(n);
    HomogeneousStructure H{n, std::vector<Ex>(n + 1, number(0L))};
    std::vector<bool> seen(n + 1, false);
    std::vector<int> line_of(n + 1, 1);
    for (const auto& a : body) {
      if (a.key.size() < 2 || a.key[0] != 'h')
        throw ParseError(a.line, 1, "unexpected key '" + a.key + "' in homogeneous body");
      int i = 0;
      try {
        i = std::stoi(a.key.substr(1));
      } catch (...) {
        throw ParseError(a.line, 1, "unexpected key '" + a.key + "' in homogeneous body");
      }
      if (i < 0 || i > n) throw ParseError(a.line, 1, "component index out of range in '" + a.key + "'");
      if (seen[i]) throw ParseError(a.line, 1, "duplicate component '" + a.key + "'");
      seen[i] = true;
      line_of[i] = a.line;
      Ex e = parse_named(a, sp);
      reject_class(e, VarClass::HAcc, a, "accelerations");
      H.h[i] = e;
    }
    for (int i = 0; i <= n; ++i)
      if (!seen[i]) throw ParseError(1, 1, "missing component h" + std::to_string(i));
    if (auto violation = homogeneity_violation(H))
      throw ParseError(line_of[violation->component], 1, violation->message);
    return H;
  }

  if (kind == "christoffel") {
    VariableSpace sp = VariableSpace::homogeneous(n);
    std::map<std::tuple<int, int, int>, Ex> raw;
    for (const auto& a : body) {
      auto [i, j, k] = parse_gamma_key(a);
      if (i < 0 || i > n || j < 0 || j > n || k < 0 || k > n)
        throw ParseError(a.line, 1, "christoffel index out of range in '" + a.key + "'");
      Ex e = parse_named(a, sp);
      for (Var v : free_vars(e))
        if (v.cls != VarClass::HPos)
          throw ParseError(a.line, a.value_col,
                           "christoffel entries may only depend on positions, found " + name(v));
      auto key = std::make_tuple(i, j, k);
      if (raw.count(key)) throw ParseError(a.line, 1, "duplicate entry '" + a.key + "'");
      raw[key] = e;
    }
    // The table is symmetric in the lower pair: a single listed order fixes
    // both; listing both orders with different values symmetrizes (torsion is
    // invisible to geodesics).
    ChristoffelTable G;
    G.n = n;
    for (const auto& [key, e] : raw) {
      auto [i, j, k] = key;
      if (j > k) continue;  // handled from the (j <= k) side
      auto other = raw.find({i, k, j});
      Ex value = e;
      if (j != k && other != raw.end())
        value = mul(number(1, 2), add(e, other->second));
      if (!value->is_zero()) G.entries[{i, j, k}] = value;
    }
    for (const auto& [key, e] : raw) {
      auto [i, j, k] = key;
      if (j <= k || raw.count({i, k, j})) continue;  // only the (j > k) order listed
      if (!e->is_zero()) G.entries[{i, k, j}] = e;
    }
    return G;
  }

  if (kind == "lagrangian" || kind == "lagrangian2") {
    bool second = kind == "lagrangian2";
    VariableSpace sp =
        second ? VariableSpace::homogeneous(n) : VariableSpace::inhomogeneous(n);
    std::optional<Ex> L;
    for (const auto& a : body) {
      if (a.key != "L")
        throw ParseError(a.line, 1, "unexpected key '" + a.key + "' in lagrangian body");
      if (L) throw ParseError(a.line, 1, "duplicate key 'L'");
      Ex e = parse_named(a, sp);
      if (!second) reject_class(e, VarClass::FiberAcc, a, "accelerations");
      L = e;
    }
    if (!L) throw ParseError(1, 1, "missing component L");
    if (second) return SecondOrderLagrangian{n, *L};
    return Lagrangian{n, *L};
  }

  throw ParseError(1, 1, "unknown kind '" + kind + "'");
}

ParsedStructure parse_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_structure(ss.str());
}

std::string print_structure(const ParsedStructure& s) {
  std::ostringstream out;
  auto header = [&](const char* kind, int n) {
    out << "[header]\nkind = " << kind << "\nn = " << n << "\n\n";
  };
  if (const auto* p = std::get_if<PathStructure>(&s)) {
    header("ode", p->n);
    for (int i = 1; i <= p->n; ++i) out << "f" << i << " = " << to_string(p->rhs(i)) << "\n";
  } else if (const auto* h = std::get_if<HomogeneousStructure>(&s)) {
    header("homogeneous", h->n);
    for (int i = 0; i <= h->n; ++i) out << "h" << i << " = " << to_string(h->h[i]) << "\n";
  } else if (const auto* g = std::get_if<ChristoffelTable>(&s)) {
    header("christoffel", g->n);
    for (const auto& [key, e] : g->entries) {
      auto [i, j, k] = key;
      out << "G[" << i << "][" << j << "][" << k << "] = " << to_string(e) << "\n";
    }
  } else if (const auto* l = std::get_if<Lagrangian>(&s)) {
    header("lagrangian", l->n);
    out << "L = " << to_string(l->L) << "\n";
  } else if (const auto* l2 = std::get_if<SecondOrderLagrangian>(&s)) {
    header("lagrangian2", l2->n);
    out << "L = " << to_string(l2->L) << "\n";
  }
  return out.str();
}

}  // namespace vg
