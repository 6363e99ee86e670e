#include "bigiso/document.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bigiso/linalg.hpp"

namespace bigiso {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

// ---------------------------------------------------------------- expressions

enum class Kind { scalar, vector, form, bivector, twoform };

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::scalar: return "polynomial";
    case Kind::vector: return "vector field";
    case Kind::form: return "1-form";
    case Kind::bivector: return "bivector";
    case Kind::twoform: return "2-form";
  }
  return "?";
}

struct Value {
  Kind kind = Kind::scalar;
  Polynomial p;
  std::vector<Polynomial> v;
  Skew2 w;

  bool is_zero() const {
    switch (kind) {
      case Kind::scalar: return p.is_zero();
      case Kind::vector:
      case Kind::form: return bigiso::is_zero(v);
      default: return w.is_zero();
    }
  }
};

struct Token {
  enum Type { number, ident, op, end } type = end;
  std::string text;
  std::size_t col = 0;  // 0-based offset into the expression
};

class ExprParser {
 public:
  ExprParser(std::string_view text, const Chart& chart, std::size_t line, std::size_t col0)
      : text_(text), chart_(chart), m_(chart.dim()), line_(line), col0_(col0) {
    tokenize();
  }

  Value parse_all() {
    if (toks_[pos_].type == Token::end) fail(toks_[pos_], "empty expression");
    auto v = expr();
    if (toks_[pos_].type != Token::end) fail(toks_[pos_], "unexpected '" + toks_[pos_].text + "'");
    return v;
  }

  [[noreturn]] void fail(std::size_t offset, const std::string& msg) const {
    throw ParseError(line_, col0_ + offset + 1, msg);
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const { fail(t.col, msg); }

 private:
  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        toks_.push_back({Token::number, std::string(text_.substr(i, j - i)), i});
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        toks_.push_back({Token::ident, std::string(text_.substr(i, j - i)), i});
        i = j;
      } else if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
        toks_.push_back({Token::op, std::string(1, c), i});
        ++i;
      } else {
        fail(i, std::string("unexpected character '") + c + "'");
      }
    }
    toks_.push_back({Token::end, "end of expression", text_.size()});
  }

  bool at_op(const char* s) const { return toks_[pos_].type == Token::op && toks_[pos_].text == s; }

  Value scalar(Polynomial p) const {
    Value v;
    v.p = p.with_nvars(m_);
    return v;
  }

  Value add(Value a, const Value& b, const Token& at) const {
    if (a.kind == Kind::scalar && a.p.is_zero() && b.kind != Kind::scalar) return b;
    if (b.kind == Kind::scalar && b.p.is_zero()) return a;
    if (a.kind != b.kind) fail(at, "cannot add a " + kind_name(a.kind) + " and a " + kind_name(b.kind));
    switch (a.kind) {
      case Kind::scalar: a.p += b.p; break;
      case Kind::vector:
      case Kind::form:
        for (std::size_t i = 0; i < m_; ++i) a.v[i] += b.v[i];
        break;
      default: a.w = a.w + b.w;
    }
    return a;
  }

  static Value scale(const Polynomial& f, Value a) {
    switch (a.kind) {
      case Kind::scalar: a.p = f * a.p; break;
      case Kind::vector:
      case Kind::form:
        for (auto& c : a.v) c = f * c;
        break;
      default: a.w = a.w.scaled(f);
    }
    return a;
  }

  Value mul(const Value& a, const Value& b, const Token& at) const {
    if (a.kind == Kind::scalar) return scale(a.p, b);
    if (b.kind == Kind::scalar) return scale(b.p, a);
    fail(at, "product of a " + kind_name(a.kind) + " and a " + kind_name(b.kind) + " (use ^ for the wedge product)");
  }

  Value wedge(const Value& a, const Value& b, const Token& at) const {
    if (a.kind != b.kind || (a.kind != Kind::vector && a.kind != Kind::form))
      fail(at, "wedge needs two vector fields or two 1-forms, got a " + kind_name(a.kind) + " and a " +
                   kind_name(b.kind));
    Value r;
    r.kind = a.kind == Kind::vector ? Kind::bivector : Kind::twoform;
    r.w = Skew2(m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = i + 1; j < m_; ++j) {
        auto c = a.v[i] * b.v[j] - a.v[j] * b.v[i];
        if (!c.is_zero()) r.w.set(i, j, c);
      }
    return r;
  }

  Value expr() {
    Value v = term();
    while (at_op("+") || at_op("-")) {
      const Token t = toks_[pos_++];
      Value r = term();
      if (t.text == "-") r = scale(Polynomial(m_, Rational(-1)), r);
      v = add(std::move(v), r, t);
    }
    return v;
  }

  Value term() {
    Value v = unary();
    while (at_op("*") || at_op("/")) {
      const Token t = toks_[pos_++];
      const Token rhs_tok = toks_[pos_];
      Value r = unary();
      if (t.text == "*") {
        v = mul(v, r, t);
      } else {
        if (r.kind != Kind::scalar) fail(rhs_tok, "division by a " + kind_name(r.kind));
        if (!r.p.is_constant()) fail(rhs_tok, "non-constant divisor");
        const auto c = r.p.constant_term();
        if (c.is_zero()) fail(rhs_tok, "division by zero");
        v = scale(Polynomial(m_, Rational(1) / c), v);
      }
    }
    return v;
  }

  Value unary() {
    if (at_op("-")) {
      ++pos_;
      return scale(Polynomial(m_, Rational(-1)), unary());
    }
    if (at_op("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Value power() {
    Value base = primary();
    if (!at_op("^")) return base;
    const Token t = toks_[pos_++];
    if (base.kind == Kind::scalar) {
      const Token e = toks_[pos_];
      if (e.type != Token::number) fail(e, "exponent must be a nonnegative integer");
      ++pos_;
      if (e.text.size() > 4) fail(e, "exponent too large");
      return scalar(base.p.pow(static_cast<unsigned>(std::stoul(e.text))));
    }
    Value rhs = primary();
    if (at_op("^")) fail(toks_[pos_], "only wedge products of two factors are supported");
    return wedge(base, rhs, t);
  }

  std::optional<std::size_t> coordinate(const std::string& name) const { return chart_.index_of(name); }

  Value basis(Kind k, std::size_t i) const {
    Value v;
    v.kind = k;
    v.v = std::vector<Polynomial>(m_, Polynomial(m_));
    v.v[i] = Polynomial(m_, Rational(1));
    return v;
  }

  Value primary() {
    const Token t = toks_[pos_];
    if (t.type == Token::number) {
      ++pos_;
      return scalar(Polynomial(m_, Rational::parse(t.text)));
    }
    if (t.type == Token::op && t.text == "(") {
      ++pos_;
      Value v = expr();
      if (!at_op(")")) fail(toks_[pos_], "expected ')'");
      ++pos_;
      return v;
    }
    if (t.type == Token::ident) {
      // d/dname
      if (t.text == "d" && pos_ + 2 < toks_.size() && toks_[pos_ + 1].type == Token::op &&
          toks_[pos_ + 1].text == "/" && toks_[pos_ + 2].type == Token::ident &&
          toks_[pos_ + 2].text.size() > 1 && toks_[pos_ + 2].text[0] == 'd') {
        const Token& n = toks_[pos_ + 2];
        auto i = coordinate(n.text.substr(1));
        if (!i) fail(n.col + 1, "unknown coordinate '" + n.text.substr(1) + "'");
        pos_ += 3;
        return basis(Kind::vector, *i);
      }
      ++pos_;
      if (auto i = coordinate(t.text)) return scalar(Polynomial::variable(m_, *i));
      if (t.text.size() > 1 && t.text[0] == 'd') {
        if (auto i = coordinate(t.text.substr(1))) return basis(Kind::form, *i);
      }
      fail(t, "unknown coordinate '" + t.text + "'");
    }
    fail(t, "unexpected '" + t.text + "'");
  }

  std::string_view text_;
  const Chart& chart_;
  std::size_t m_;
  std::size_t line_;
  std::size_t col0_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- lines

struct Piece {
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;  // 0-based column of text[0]
};

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

Piece trim(const Piece& p) {
  std::size_t a = skip_space(p.text, 0);
  std::size_t b = p.text.size();
  while (b > a && std::isspace(static_cast<unsigned char>(p.text[b - 1]))) --b;
  return {p.text.substr(a, b - a), p.line, p.col + a};
}

std::vector<Piece> split(const Piece& p, char sep) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= p.text.size(); ++i) {
    if (i == p.text.size() || p.text[i] == sep) {
      out.push_back(trim({p.text.substr(start, i - start), p.line, p.col + start}));
      start = i + 1;
    }
  }
  return out;
}

std::vector<Piece> words(const Piece& p) {
  std::vector<Piece> out;
  std::size_t i = 0;
  while (true) {
    i = skip_space(p.text, i);
    if (i >= p.text.size()) break;
    std::size_t j = i;
    while (j < p.text.size() && !std::isspace(static_cast<unsigned char>(p.text[j])) && p.text[j] != ',') ++j;
    if (j == i) {
      ++i;
      continue;
    }
    out.push_back({p.text.substr(i, j - i), p.line, p.col + i});
    i = j;
    while (i < p.text.size() && p.text[i] == ',') ++i;
  }
  return out;
}

[[noreturn]] void fail_at(const Piece& p, const std::string& msg) { throw ParseError(p.line, p.col + 1, msg); }

Value parse_value(const Piece& p, const Chart& chart) {
  ExprParser ep(p.text, chart, p.line, p.col);
  return ep.parse_all();
}

Value parse_kind(const Piece& p, const Chart& chart, Kind want) {
  auto v = parse_value(p, chart);
  if (v.kind == want) return v;
  if (v.kind == Kind::scalar && v.p.is_zero()) {
    Value z;
    z.kind = want;
    if (want == Kind::vector || want == Kind::form) z.v = std::vector<Polynomial>(chart.dim(), Polynomial(chart.dim()));
    if (want == Kind::bivector || want == Kind::twoform) z.w = Skew2(chart.dim());
    return z;
  }
  fail_at(p, "expected a " + kind_name(want) + ", got a " + kind_name(v.kind));
}

BigSection section_of(const Piece& p, const Chart& chart) {
  auto parts = split(p, ';');
  if (parts.size() != 2) fail_at(p, "a section is written 'vector field ; 1-form'");
  return {parse_kind(parts[0], chart, Kind::vector).v, parse_kind(parts[1], chart, Kind::form).v};
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::vector<std::string> coordinate_names(const Piece& p, const Chart& chart, bool allow_empty = true) {
  std::vector<std::string> out;
  for (const auto& w : words(p)) {
    if (!chart.index_of(w.text)) fail_at(w, "unknown coordinate '" + w.text + "'");
    out.push_back(w.text);
  }
  if (!allow_empty && out.empty()) fail_at(p, "expected coordinate names");
  return out;
}

Rational parse_rational(const Piece& p) {
  Chart none;
  auto v = parse_value(p, none);
  if (v.kind != Kind::scalar || !v.p.is_constant()) fail_at(p, "expected a rational number");
  return v.p.constant_term();
}

Grid grid_of(const Piece& p) {
  Grid g;
  auto ws = words(p);
  if (ws.empty()) fail_at(p, "expected 'lo..hi'");
  const auto& r = ws[0].text;
  const auto dots = r.find("..");
  if (dots == std::string::npos) fail_at(ws[0], "expected 'lo..hi'");
  try {
    std::size_t used = 0;
    g.lo = std::stol(r.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument("lo");
    const auto hi = r.substr(dots + 2);
    g.hi = std::stol(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("hi");
  } catch (const std::exception&) {
    fail_at(ws[0], "expected integer bounds 'lo..hi'");
  }
  if (g.lo > g.hi) fail_at(ws[0], "empty grid range");
  if (ws.size() == 3 && ws[1].text == "cap") {
    try {
      std::size_t used = 0;
      const long c = std::stol(ws[2].text, &used);
      if (used != ws[2].text.size() || c <= 0) throw std::invalid_argument("cap");
      g.cap = static_cast<std::size_t>(c);
    } catch (const std::exception&) {
      fail_at(ws[2], "cap must be a positive integer");
    }
  } else if (ws.size() != 1) {
    fail_at(ws[1], "expected 'cap N'");
  }
  return g;
}

struct Directive {
  std::string key;
  std::string arg;  // word after the key, e.g. the hamiltonian name
  Piece key_piece;
  Piece value;
};

const std::set<std::string> kRepeatable = {"E", "E'", "F", "F'", "S", "S*", "hamiltonian", "expect"};
const std::set<std::string> kKeys = {"name",  "chart",  "E",      "E'",        "construct",  "F",
                                     "F'",    "S",      "S*",     "theta",     "P",          "omega",
                                     "change", "lift",  "adapted", "grid",     "submanifold", "foliation",
                                     "hamiltonian", "expect"};

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "valid",         "integrable",      "module_property", "dirac_extension", "regular_criterion",
      "canonical",     "decomposable",    "coupling",        "transversal",     "reducible",
      "projectable",   "reduction",       "hamiltonian",     "theta_condition", "P_conditions",
      "P_projectable", "omega_foliated",  "consistency"};
  return names;
}

std::optional<bool> StructureDocument::expected(const std::string& check) const {
  for (const auto& e : expectations)
    if (e.check == check) return e.value;
  return std::nullopt;
}

Polynomial parse_polynomial(std::string_view text, const Chart& chart) {
  auto v = parse_value({std::string(text), 1, 0}, chart);
  if (v.kind != Kind::scalar) throw ParseError(1, 1, "expected a polynomial, got a " + kind_name(v.kind));
  return v.p;
}

BigSection parse_section(std::string_view text, const Chart& chart) {
  return section_of({std::string(text), 1, 0}, chart);
}

Grid parse_grid(std::string_view text) { return grid_of({std::string(text), 1, 0}); }

std::vector<BigSection> derive_orthogonal(const std::vector<BigSection>& E, std::size_t m) {
  std::vector<PolyRow> rows;
  for (const auto& e : E) {
    PolyRow r;
    for (const auto& c : e.a) r.push_back(c.with_nvars(m));
    for (const auto& c : e.X) r.push_back(c.with_nvars(m));
    rows.push_back(std::move(r));
  }
  std::vector<BigSection> out;
  if (rows.empty()) {
    for (std::size_t i = 0; i < m; ++i) out.push_back({coordinate_field(m, i), zero_form(m)});
    for (std::size_t i = 0; i < m; ++i) out.push_back({zero_field(m), coordinate_form(m, i)});
    return out;
  }
  for (const auto& r : polynomial_kernel(rows, 2 * m, m)) out.push_back(unflatten(r));
  return out;
}

StructureDocument parse_document(std::string_view text) {
  std::vector<Directive> dirs;
  std::map<std::string, std::size_t> seen;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
      Piece p = trim({raw, line, 0});
      if (p.text.empty()) continue;
      const auto colon = p.text.find(':');
      if (colon == std::string::npos) fail_at(p, "expected 'key: value'");
      Piece head = trim({p.text.substr(0, colon), line, p.col});
      Piece value = trim({p.text.substr(colon + 1), line, p.col + colon + 1});
      auto hw = words(head);
      if (hw.empty()) fail_at(head, "missing directive name");
      Directive d{hw[0].text, "", hw[0], value};
      if (!kKeys.count(d.key)) fail_at(hw[0], "unknown directive '" + d.key + "'");
      if (d.key == "hamiltonian") {
        if (hw.size() != 2) fail_at(head, "expected 'hamiltonian NAME: f ; X_f'");
        d.arg = hw[1].text;
      } else if (hw.size() != 1) {
        fail_at(hw[1], "unexpected '" + hw[1].text + "'");
      }
      if (!kRepeatable.count(d.key) && seen.count(d.key))
        fail_at(hw[0], "directive '" + d.key + "' repeated (first on line " + std::to_string(seen[d.key]) + ")");
      seen.emplace(d.key, line);
      dirs.push_back(std::move(d));
    }
  }
  auto find = [&](const std::string& key) -> const Directive* {
    for (const auto& d : dirs)
      if (d.key == key) return &d;
    return nullptr;
  };
  auto all = [&](const std::string& key) {
    std::vector<const Directive*> out;
    for (const auto& d : dirs)
      if (d.key == key) out.push_back(&d);
    return out;
  };

  StructureDocument doc;
  if (auto d = find("name")) doc.name = d->value.text;
  const Directive* chart_d = find("chart");
  if (!chart_d) throw ParseError(1, 1, "missing 'chart:' directive");
  {
    std::vector<std::string> names;
    for (const auto& w : words(chart_d->value)) {
      if (!is_identifier(w.text)) fail_at(w, "invalid coordinate name '" + w.text + "'");
      if (w.text == "d") fail_at(w, "'d' is reserved");
      if (std::find(names.begin(), names.end(), w.text) != names.end())
        fail_at(w, "repeated coordinate '" + w.text + "'");
      names.push_back(w.text);
    }
    if (names.empty()) fail_at(chart_d->value, "chart needs at least one coordinate");
    doc.base_chart = Chart(names);
  }
  const Chart& C = doc.base_chart;
  const std::size_t m = C.dim();

  for (const auto* d : all("F")) doc.F.push_back(parse_kind(d->value, C, Kind::vector).v);
  for (const auto* d : all("F'")) doc.F_prime.push_back(parse_kind(d->value, C, Kind::vector).v);
  for (const auto* d : all("S")) doc.S.push_back(parse_kind(d->value, C, Kind::vector).v);
  for (const auto* d : all("S*")) {
    if (d->value.text == "all") {
      doc.S_star_all = true;
      for (std::size_t i = 0; i < m; ++i) doc.S_star.push_back(coordinate_form(m, i));
    } else {
      doc.S_star.push_back(parse_kind(d->value, C, Kind::form).v);
    }
  }
  if (auto d = find("theta")) doc.theta = parse_kind(d->value, C, Kind::twoform).w;
  if (auto d = find("omega")) doc.omega = parse_kind(d->value, C, Kind::twoform).w;
  if (auto d = find("P")) doc.P = parse_kind(d->value, C, Kind::bivector).w;

  const auto E_lines = all("E");
  const auto Ep_lines = all("E'");
  const Directive* cons = find("construct");
  auto require = [&](bool ok, const Directive* at, const std::string& what) {
    if (!ok) fail_at(at->value, "construct " + at->value.text + " needs " + what);
  };
  try {
    if (cons) {
      doc.construct = cons->value.text;
      if (!E_lines.empty() || !Ep_lines.empty())
        fail_at(cons->value, "'construct' and explicit E/E' frames are exclusive");
      if (doc.construct == "foliation_pair") {
        doc.structure = foliation_pair(C, doc.F, doc.F_prime);
      } else if (doc.construct == "graph_theta") {
        require(doc.theta.has_value(), cons, "'theta:'");
        doc.structure = graph_theta(C, doc.S, *doc.theta);
      } else if (doc.construct == "graph_P") {
        require(doc.P.has_value(), cons, "'P:'");
        doc.structure = graph_P(C, doc.S_star, *doc.P);
      } else if (doc.construct == "dirac_P" || doc.construct == "dirac_omega") {
        const Directive* fol = find("foliation");
        require(fol != nullptr, cons, "'foliation:'");
        auto F = FoliationData::from_leaf_names(C, coordinate_names(fol->value, C));
        if (doc.construct == "dirac_P") {
          require(doc.P.has_value(), cons, "'P:'");
          doc.structure = dirac_along_foliation_P(F, *doc.P);
        } else {
          require(doc.omega.has_value(), cons, "'omega:'");
          doc.structure = dirac_along_foliation_omega(F, *doc.omega);
        }
      } else {
        fail_at(cons->value, "unknown construction '" + doc.construct + "'");
      }
    } else {
      if (E_lines.empty() && Ep_lines.empty()) throw ParseError(chart_d->key_piece.line, 1, "no 'E:' frame and no 'construct:'");
      doc.structure.chart = C;
      for (const auto* d : E_lines) doc.structure.E.push_back(section_of(d->value, C));
      for (const auto* d : Ep_lines) doc.structure.E_prime.push_back(section_of(d->value, C));
      if (Ep_lines.empty()) {
        doc.E_prime_derived = true;
        doc.structure.E_prime = derive_orthogonal(doc.structure.E, m);
      }
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    const Directive* at = cons ? cons : (E_lines.empty() ? chart_d : E_lines.front());
    fail_at(at->value, e.what());
  }

  if (auto d = find("change")) {
    std::vector<std::string> names;
    Matrix<Rational> M(m, m);
    std::vector<Rational> c(m, Rational(0));
    auto eqs = split(d->value, ',');
    if (eqs.size() != m) fail_at(d->value, "change needs " + std::to_string(m) + " equations 'new = expr'");
    for (std::size_t r = 0; r < m; ++r) {
      auto sides = split(eqs[r], '=');
      if (sides.size() != 2 || !is_identifier(sides[0].text)) fail_at(eqs[r], "expected 'new = expr'");
      if (std::find(names.begin(), names.end(), sides[0].text) != names.end())
        fail_at(sides[0], "repeated coordinate '" + sides[0].text + "'");
      names.push_back(sides[0].text);
      auto v = parse_kind(sides[1], C, Kind::scalar).p;
      if (v.total_degree() > 1) fail_at(sides[1], "change of coordinates must be affine");
      c[r] = v.constant_term();
      for (std::size_t j = 0; j < m; ++j) M(r, j) = v.derivative(j).constant_term();
    }
    if (!inverse(M)) fail_at(d->value, "change of coordinates is not invertible");
    doc.change = AffineChange{M, c};
    BigIsotropicStructure t;
    t.chart = Chart(names);
    for (const auto& e : doc.structure.E) t.E.push_back(transform_section(*doc.change, e));
    for (const auto& e : doc.structure.E_prime) t.E_prime.push_back(transform_section(*doc.change, e));
    doc.structure = std::move(t);
  }
  if (auto d = find("lift")) {
    if (d->value.text != "tangent") fail_at(d->value, "only 'lift: tangent' is supported");
    doc.tangent_lift = true;
    doc.structure = tangent_lift(doc.structure);
  }

  const Chart& final_chart = doc.structure.chart;
  if (auto d = find("adapted")) {
    auto parts = split(d->value, '|');
    if (parts.size() != 3) fail_at(d->value, "expected 'x names | y names | z names'");
    std::vector<std::string> cols[3];
    for (int i = 0; i < 3; ++i) cols[i] = coordinate_names(parts[i], final_chart);
    std::set<std::string> used;
    for (const auto& v : cols)
      for (const auto& n : v)
        if (!used.insert(n).second) fail_at(d->value, "coordinate '" + n + "' listed twice");
    if (used.size() != final_chart.dim()) fail_at(d->value, "adapted chart must list every coordinate once");
    doc.adapted = AdaptedChart::from_names(final_chart, cols[0], cols[1], cols[2]);
  }
  if (auto d = find("grid")) doc.grid = grid_of(d->value);
  if (auto d = find("submanifold")) {
    std::vector<std::pair<std::string, Rational>> fixed;
    for (const auto& eq : split(d->value, ',')) {
      auto sides = split(eq, '=');
      if (sides.size() != 2) fail_at(eq, "expected 'coordinate = value'");
      if (!final_chart.index_of(sides[0].text)) fail_at(sides[0], "unknown coordinate '" + sides[0].text + "'");
      fixed.emplace_back(sides[0].text, parse_rational(sides[1]));
    }
    doc.submanifold = SubmanifoldData::slice(final_chart, fixed);
  }
  if (auto d = find("foliation")) {
    const Chart& on = doc.submanifold ? doc.submanifold->chart : final_chart;
    doc.foliation = FoliationData::from_leaf_names(on, coordinate_names(d->value, on));
  }
  for (const auto* d : all("hamiltonian")) {
    auto parts = split(d->value, ';');
    if (parts.size() != 2) fail_at(d->value, "expected 'f ; X_f'");
    doc.hamiltonians.push_back({d->arg, parse_kind(parts[0], final_chart, Kind::scalar).p,
                                parse_kind(parts[1], final_chart, Kind::vector).v});
  }
  for (const auto* d : all("expect")) {
    for (const auto& item : split(d->value, ',')) {
      auto sides = split(item, '=');
      if (sides.size() != 2) fail_at(item, "expected 'check = true|false'");
      const auto& names = known_checks();
      if (std::find(names.begin(), names.end(), sides[0].text) == names.end())
        fail_at(sides[0], "unknown check '" + sides[0].text + "'");
      if (sides[1].text != "true" && sides[1].text != "false") fail_at(sides[1], "expected true or false");
      doc.expectations.push_back({sides[0].text, sides[1].text == "true", d->value.line});
    }
  }
  return doc;
}

StructureDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

}  // namespace bigiso
