#include "isynt/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace isynt {

namespace {

enum class tok_kind { ident, number, symbol, end };

struct token {
  tok_kind kind;
  std::string text;
  i64 value = 0;
  int line = 1, col = 1;
};

const std::set<std::string> reserved = {
    "arena", "objective", "var",  "env",   "con", "trans", "skip",
    "int",   "true",      "false", "X",    "U",   "W",     "F",
    "G",     "R"};

class lexer {
 public:
  explicit lexer(const std::string& text) : s_(text) { advance(); }
  const token& peek() const { return cur_; }
  token next() {
    token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= s_.size()) {
      cur_.kind = tok_kind::end;
      cur_.text = "<eof>";
      return;
    }
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
              s_[pos_] == '_'))
        take();
      cur_.kind = tok_kind::ident;
      cur_.text = s_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        take();
      if (pos_ < s_.size() && s_[pos_] == '.')
        throw parse_error(line_, col_, "real-valued literal");
      cur_.kind = tok_kind::number;
      cur_.text = s_.substr(start, pos_ - start);
      cur_.value = std::stoll(cur_.text);
      return;
    }
    // multi-char symbols first
    static const char* syms[] = {":=", "<->", "->", "<=", ">=", "!=", nullptr};
    for (int i = 0; syms[i]; ++i) {
      size_t n = std::string(syms[i]).size();
      if (s_.compare(pos_, n, syms[i]) == 0) {
        cur_.kind = tok_kind::symbol;
        cur_.text = syms[i];
        for (size_t j = 0; j < n; ++j) take();
        return;
      }
    }
    static const std::string singles = "{}():;,=<>!&|+-*";
    if (singles.find(c) != std::string::npos) {
      cur_.kind = tok_kind::symbol;
      cur_.text = std::string(1, c);
      take();
      return;
    }
    throw parse_error(line_, col_, std::string("unexpected character '") + c +
                                       "'");
  }
  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
        while (pos_ < s_.size() && s_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }
  void take() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  token cur_;
};

class parser {
 public:
  explicit parser(const std::string& text) : lx_(text) {}

  problem parse() {
    expect_ident("arena");
    expect_sym("{");
    while (is_ident("var") || is_ident("env") || is_ident("con")) decl();
    while (is_ident("trans")) trans();
    expect_sym("}");
    expect_ident("objective");
    expect_sym(":");
    p_.objective = parse_formula(/*temporal=*/true);
    expect_sym(";");
    if (lx_.peek().kind != tok_kind::end)
      err("trailing input after objective");
    check_objective();
    return p_;
  }

  formula_ptr parse_only_ltl(const arena& a) {
    p_.a = a;
    auto f = parse_formula(true);
    if (lx_.peek().kind != tok_kind::end) err("trailing input");
    return f;
  }

 private:
  [[noreturn]] void err(const std::string& msg) {
    throw parse_error(lx_.peek().line, lx_.peek().col, msg);
  }
  bool is_ident(const std::string& s) {
    return lx_.peek().kind == tok_kind::ident && lx_.peek().text == s;
  }
  bool is_sym(const std::string& s) {
    return lx_.peek().kind == tok_kind::symbol && lx_.peek().text == s;
  }
  bool accept_sym(const std::string& s) {
    if (!is_sym(s)) return false;
    lx_.next();
    return true;
  }
  void expect_sym(const std::string& s) {
    if (!accept_sym(s)) err("expected '" + s + "'");
  }
  void expect_ident(const std::string& s) {
    if (!is_ident(s)) err("expected '" + s + "'");
    lx_.next();
  }
  std::string ident() {
    if (lx_.peek().kind != tok_kind::ident) err("expected identifier");
    std::string n = lx_.next().text;
    if (reserved.count(n)) err("'" + n + "' is reserved");
    return n;
  }

  void declare(const std::string& n) {
    if (!declared_.insert(n).second) err("duplicate declaration of " + n);
  }

  void decl() {
    std::string kw = lx_.next().text;
    if (kw == "var") {
      std::string n = ident();
      declare(n);
      expect_sym(":");
      expect_ident("int");
      expect_sym("=");
      p_.a.vars.emplace_back(n, parse_int());
      expect_sym(";");
    } else {
      auto& dst = kw == "env" ? p_.a.env_bools : p_.a.con_bools;
      do {
        std::string n = ident();
        declare(n);
        dst.push_back(n);
      } while (accept_sym(","));
      expect_sym(";");
    }
  }

  i64 parse_int() {
    bool neg = accept_sym("-");
    if (lx_.peek().kind != tok_kind::number) err("expected integer");
    i64 v = lx_.next().value;
    return neg ? -v : v;
  }

  void trans() {
    lx_.next();  // trans
    guarded_update g;
    // guards are plain boolean combinations; -> stays the update arrow
    g.guard = parse_or(/*temporal=*/false);
    expect_sym("->");
    if (is_ident("skip")) {
      lx_.next();
    } else {
      do {
        std::string v = ident();
        if (!p_.a.is_var(v)) err("unknown variable " + v);
        expect_sym(":=");
        g.update[v] = parse_linterm();
      } while (accept_sym(","));
    }
    expect_sym(";");
    p_.a.transitions.push_back(std::move(g));
  }

  // linterm := addend (("+"|"-") addend)*
  lin_term parse_linterm() {
    lin_term t = parse_addend();
    while (is_sym("+") || is_sym("-")) {
      bool minus = lx_.next().text == "-";
      lin_term u = parse_addend();
      if (minus)
        t -= u;
      else
        t += u;
    }
    return t;
  }

  lin_term parse_addend() {
    if (accept_sym("-")) return -parse_addend();
    if (accept_sym("(")) {
      lin_term t = parse_linterm();
      expect_sym(")");
      return t;
    }
    if (lx_.peek().kind == tok_kind::number) {
      i64 k = lx_.next().value;
      if (accept_sym("*")) {
        if (lx_.peek().kind != tok_kind::ident) err("expected variable");
        return lin_term::var(var_ref(), k);
      }
      return lin_term(k);
    }
    if (lx_.peek().kind == tok_kind::ident) {
      lin_term t = lin_term::var(var_ref());
      if (accept_sym("*")) {
        if (lx_.peek().kind == tok_kind::number)
          return t * lx_.next().value;
        err("non-linear term");  // IDENT * IDENT
      }
      return t;
    }
    err("expected linear term");
  }

  std::string var_ref() {
    auto pos = lx_.peek();
    std::string n = ident();
    if (!p_.a.is_var(n))
      throw parse_error(pos.line, pos.col, "unknown variable " + n);
    return n;
  }

  // precedence: <-> | -> | '|' | '&' | U,W | unary | atom
  formula_ptr parse_formula(bool temporal) {
    formula_ptr l = parse_implies(temporal);
    while (is_sym("<->")) {
      lx_.next();
      l = f_iff(l, parse_implies(temporal));
    }
    return l;
  }
  formula_ptr parse_implies(bool temporal) {
    formula_ptr l = parse_or(temporal);
    if (is_sym("->")) {
      lx_.next();
      return f_implies(l, parse_implies(temporal));  // right-assoc
    }
    return l;
  }
  formula_ptr parse_or(bool temporal) {
    formula_ptr l = parse_and(temporal);
    while (is_sym("|")) {
      lx_.next();
      l = f_or(l, parse_and(temporal));
    }
    return l;
  }
  formula_ptr parse_and(bool temporal) {
    formula_ptr l = parse_until(temporal);
    while (is_sym("&")) {
      lx_.next();
      l = f_and(l, parse_until(temporal));
    }
    return l;
  }
  formula_ptr parse_until(bool temporal) {
    formula_ptr l = parse_unary(temporal);
    if (temporal && (is_ident("U") || is_ident("W"))) {
      bool weak = lx_.next().text == "W";
      formula_ptr r = parse_until(temporal);  // right-assoc
      return weak ? f_weak_until(l, r) : f_until(l, r);
    }
    return l;
  }
  formula_ptr parse_unary(bool temporal) {
    if (accept_sym("!")) return f_not(parse_unary(temporal));
    if (temporal && is_ident("X")) {
      lx_.next();
      return f_next(parse_unary(temporal));
    }
    if (temporal && is_ident("F")) {
      lx_.next();
      return f_eventually(parse_unary(temporal));
    }
    if (temporal && is_ident("G")) {
      lx_.next();
      return f_globally(parse_unary(temporal));
    }
    return parse_atom(temporal);
  }

  formula_ptr parse_atom(bool temporal) {
    if (is_ident("true")) {
      lx_.next();
      return f_true();
    }
    if (is_ident("false")) {
      lx_.next();
      return f_false();
    }
    if (is_sym("(")) {
      lx_.next();
      formula_ptr f = parse_formula(temporal);
      expect_sym(")");
      return f;
    }
    // A bare identifier not continued by an arithmetic or comparison
    // operator is a boolean variable.
    if (lx_.peek().kind == tok_kind::ident) {
      token t = lx_.peek();
      if (reserved.count(t.text)) err("'" + t.text + "' is reserved");
      bool known_bool = is_bool(t.text);
      bool known_var = p_.a.is_var(t.text);
      if (!known_bool && !known_var)
        err("unknown variable " + t.text);
      if (known_bool) {
        lx_.next();
        return f_prop(t.text);
      }
    }
    lin_term lhs = parse_linterm();
    return parse_comparison(lhs);
  }

  formula_ptr parse_comparison(const lin_term& lhs) {
    static const char* ops[] = {"<=", "<", ">=", ">", "=", "!=", nullptr};
    std::string op;
    for (int i = 0; ops[i]; ++i)
      if (is_sym(ops[i])) {
        op = ops[i];
        break;
      }
    if (op.empty()) err("expected comparison operator");
    lx_.next();
    lin_term rhs = parse_linterm();
    lin_term d = lhs - rhs;  // compare d with 0
    if (op == "<=") return f_pred(predicate(d, 0));
    if (op == "<") return f_pred(predicate(d, -1));
    if (op == ">=") return f_pred(predicate(-d, 0));
    if (op == ">") return f_pred(predicate(-d, -1));
    if (op == "=")
      return f_and(f_pred(predicate(d, 0)), f_pred(predicate(-d, 0)));
    // !=
    return f_or(f_pred(predicate(d, -1)), f_pred(predicate(-d, -1)));
  }

  bool is_bool(const std::string& n) const {
    for (auto& b : p_.a.env_bools)
      if (b == n) return true;
    for (auto& b : p_.a.con_bools)
      if (b == n) return true;
    return false;
  }

  void check_objective() {
    for (auto& s : subformulas(p_.objective)) {
      if (s->op == ltl_op::pred && s->pred->kind() != pred_kind::state)
        throw parse_error(0, 0, "objective atoms must be state predicates");
    }
  }

  lexer lx_;
  problem p_;
  std::set<std::string> declared_;
};

}  // namespace

problem parse_problem(const std::string& text) { return parser(text).parse(); }

formula_ptr parse_ltl(const std::string& text, const arena& a) {
  return parser(text).parse_only_ltl(a);
}

std::string print_problem(const problem& p) {
  std::ostringstream os;
  os << "arena {\n";
  for (auto& [n, v] : p.a.vars) os << "  var " << n << " : int = " << v << ";\n";
  auto bools = [&](const char* kw, const std::vector<std::string>& bs) {
    if (bs.empty()) return;
    os << "  " << kw << " ";
    for (size_t i = 0; i < bs.size(); ++i) os << (i ? ", " : "") << bs[i];
    os << ";\n";
  };
  bools("env", p.a.env_bools);
  bools("con", p.a.con_bools);
  for (auto& t : p.a.transitions) {
    os << "  trans " << t.guard->str() << " -> ";
    if (t.update.empty()) {
      os << "skip";
    } else {
      bool first = true;
      for (auto& [v, term] : t.update) {
        os << (first ? "" : ", ") << v << " := " << term.str();
        first = false;
      }
    }
    os << ";\n";
  }
  os << "}\n";
  os << "objective: " << p.objective->str() << ";\n";
  return os.str();
}

}  // namespace isynt
