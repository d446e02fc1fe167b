#include "cpd/parser.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <set>

namespace cpd {

namespace {

enum class Tok { ident, integer, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  SourcePos pos;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t end = 0;     // one past the last character
};

struct Failure {
  Diagnostic diag;
  std::size_t offset = 0;
};

const std::set<std::string> kKeywords = {
    "controllable", "uncontrollable", "var",     "proc",     "plant",      "supervisor", "encap",
    "require",      "invariant",      "event",   "implies",  "disables",   "incomplete", "true",
    "false"};

std::vector<Token> lex(std::string_view src, std::vector<Diagnostic>& diags) {
  static const char* kTwo[] = {"..", ":=", "!=", "<=", ">=", "||", "=>", "->"};
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    t.offset = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::integer;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      t.kind = Tok::punct;
      bool two = false;
      if (i + 1 < src.size()) {
        for (const char* p : kTwo) {
          if (src[i] == p[0] && src[i + 1] == p[1]) {
            two = true;
            break;
          }
        }
      }
      if (two) {
        t.text = std::string(src.substr(i, 2));
        advance(2);
      } else if (std::string_view("(){}[],;:.=<>+-*!?&|").find(c) != std::string_view::npos) {
        t.text = std::string(1, c);
        advance(1);
      } else {
        diags.push_back({t.pos, std::string("unexpected character '") + c + "'"});
        advance(1);
        continue;
      }
    }
    t.end = i;
    out.push_back(std::move(t));
  }
  Token e;
  e.kind = Tok::end;
  e.pos = {line, col};
  e.offset = e.end = src.size();
  out.push_back(e);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature* sig, const std::map<std::string, Term>* procs)
      : toks_(std::move(toks)), sig_(sig), procs_(procs) {}

  // ------------------------------------------------------------------ helpers
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::end; }
  bool is(const char* p, std::size_t k = 0) const { return peek(k).kind == Tok::punct && peek(k).text == p; }
  bool is_kw(const char* kw, std::size_t k = 0) const { return peek(k).kind == Tok::ident && peek(k).text == kw; }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw Failure{{at.pos, msg}, at.offset};
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(peek(), msg); }

  std::string describe(const Token& t) const {
    if (t.kind == Tok::end) return "end of input";
    return "'" + t.text + "'";
  }

  void expect(const char* p) {
    if (!is(p)) fail(std::string("expected '") + p + "' but found " + describe(peek()));
    ++i_;
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail(std::string("expected '") + kw + "' but found " + describe(peek()));
    ++i_;
  }
  bool accept(const char* p) {
    if (!is(p)) return false;
    ++i_;
    return true;
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::ident || kKeywords.count(peek().text))
      fail(std::string("expected ") + what + " but found " + describe(peek()));
    return toks_[i_++];
  }
  std::int64_t expect_int() {
    bool neg = accept("-");
    if (peek().kind != Tok::integer) fail("expected an integer but found " + describe(peek()));
    std::int64_t v = 0;
    const auto& s = peek().text;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc()) fail("integer literal out of range");
    ++i_;
    return neg ? -v : v;
  }

  template <class F>
  auto attempt(F&& f) -> std::optional<decltype(f())> {
    const std::size_t saved = i_;
    try {
      return f();
    } catch (const Failure& e) {
      note(e);
      i_ = saved;
      return std::nullopt;
    }
  }
  void note(const Failure& e) {
    if (!furthest_ || e.offset > furthest_->offset) furthest_ = e;
  }
  /// Rethrows whichever of `e` and earlier speculative failures got furthest.
  [[noreturn]] void rethrow_furthest(const Failure& e) {
    if (furthest_ && furthest_->offset > e.offset) throw *furthest_;
    throw e;
  }

  void skip() { ++i_; }
  const Signature& sig() const { return *sig_; }
  void set_signature(const Signature* s) { sig_ = s; }
  void set_processes(const std::map<std::string, Term>* p) { procs_ = p; }
  std::size_t position() const { return i_; }
  void skip_past_semicolon() {
    while (!at_end() && !is(";")) ++i_;
    if (!at_end()) ++i_;
  }
  void clear_furthest() { furthest_.reset(); }

  // ------------------------------------------------------------------ data
  DataExpr data_expr() {
    DataExpr e = data_term();
    while (is("+") || is("-")) {
      const ArithOp op = is("+") ? ArithOp::add : ArithOp::sub;
      ++i_;
      e = DataExpr::binary(op, e, data_term());
    }
    return e;
  }
  DataExpr data_term() {
    DataExpr e = data_unary();
    while (is("*")) {
      ++i_;
      e = DataExpr::binary(ArithOp::mul, e, data_unary());
    }
    return e;
  }
  DataExpr data_unary() {
    if (is("-")) {
      if (peek(1).kind == Tok::integer && peek(1).offset == peek().end) return DataExpr::literal(expect_int());
      ++i_;
      return DataExpr::negate(data_unary());
    }
    return data_primary();
  }
  DataExpr data_primary() {
    if (peek().kind == Tok::integer) return DataExpr::literal(expect_int());
    if (accept("(")) {
      DataExpr e = data_expr();
      expect(")");
      return e;
    }
    if (peek().kind == Tok::ident && !kKeywords.count(peek().text)) {
      const Token& t = toks_[i_];
      if (auto v = sig().find_variable(t.text)) {
        ++i_;
        return DataExpr::variable(*v, t.text);
      }
      if (auto e = sig().find_enumerator(t.text)) {
        ++i_;
        return DataExpr::literal(*e, t.text);
      }
      fail(t, "unknown variable '" + t.text + "'");
    }
    fail("expected a data expression but found " + describe(peek()));
  }

  // ------------------------------------------------------------------ boolean
  BoolExpr bool_expr() {
    BoolExpr lhs = bool_or();
    if (accept("=>")) return BoolExpr::implication(lhs, bool_expr());
    return lhs;
  }
  BoolExpr bool_or() {
    BoolExpr e = bool_and();
    while (accept("|")) e = BoolExpr::disjunction(e, bool_and());
    return e;
  }
  BoolExpr bool_and() {
    BoolExpr e = bool_not();
    while (accept("&")) e = BoolExpr::conjunction(e, bool_not());
    return e;
  }
  BoolExpr bool_not() {
    if (accept("!")) return BoolExpr::negation(bool_not());
    return bool_primary();
  }
  BoolExpr bool_primary() {
    if (is_kw("true")) {
      ++i_;
      return BoolExpr::constant(true);
    }
    if (is_kw("false")) {
      ++i_;
      return BoolExpr::constant(false);
    }
    if (is("(")) {
      if (auto c = attempt([&] { return comparison(); })) return *c;
      expect("(");
      BoolExpr e = bool_expr();
      expect(")");
      return e;
    }
    return comparison();
  }
  BoolExpr comparison() {
    DataExpr l = data_expr();
    static const std::pair<const char*, CmpOp> kOps[] = {{"<=", CmpOp::le}, {">=", CmpOp::ge}, {"!=", CmpOp::ne},
                                                         {"<", CmpOp::lt},  {">", CmpOp::gt},  {"=", CmpOp::eq}};
    for (const auto& [text, op] : kOps) {
      if (accept(text)) return BoolExpr::compare(op, l, data_expr());
    }
    fail("expected a comparison operator but found " + describe(peek()));
  }

  // ------------------------------------------------------------------ actions
  std::uint32_t arity_suffix(const Token& mark) {
    // `_n` glued to `!` or `?`
    const Token& t = peek();
    if (t.kind != Tok::ident || t.offset != mark.end || t.text.empty() || t.text[0] != '_') return 1;
    const std::string digits = t.text.substr(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(t, "malformed arity annotation '" + t.text + "'");
    ++i_;
    return static_cast<std::uint32_t>(std::stoul(digits));
  }

  Action action() {
    const Token& name = expect_ident("a channel name");
    auto ch = sig().find_channel(name.text);
    if (!ch) fail(name, "unknown channel '" + name.text + "'");
    Action a{*ch, 0, 0};
    bool any = false;
    if (is("!") && peek().offset == toks_[i_ - 1].end) {
      const Token& mark = toks_[i_++];
      a.senders = arity_suffix(mark);
      any = true;
    }
    if (is("?") && peek().offset == toks_[i_ - 1].end) {
      const Token& mark = toks_[i_++];
      a.receivers = arity_suffix(mark);
      any = true;
    }
    if (!any) fail(name, "action '" + name.text + "' needs a direction ('!' or '?')");
    if (a.senders + a.receivers == 0) fail(name, "action '" + name.text + "' has no communicating parties");
    return a;
  }

  UpdateMap update_map() {
    std::vector<Assignment> as;
    expect("[");
    if (!is("]")) {
      do {
        const Token& v = expect_ident("a variable");
        auto id = sig().find_variable(v.text);
        if (!id) fail(v, "unknown variable '" + v.text + "'");
        for (const auto& prev : as)
          if (prev.var == *id) fail(v, "variable '" + v.text + "' updated twice");
        expect(":=");
        as.push_back(Assignment{*id, v.text, data_expr()});
      } while (accept(","));
    }
    expect("]");
    return UpdateMap(std::move(as));
  }

  ActionSet action_set() {
    expect("{");
    std::vector<Action> actions;
    std::vector<IncompletePattern> patterns;
    if (!is("}")) {
      do {
        if (is_kw("incomplete")) {
          ++i_;
          expect("(");
          const Token& name = expect_ident("a channel name");
          auto ch = sig().find_channel(name.text);
          if (!ch) fail(name, "unknown channel '" + name.text + "'");
          expect(",");
          const auto k = expect_int();
          if (k < 1) fail("party count of incomplete() must be positive");
          expect(")");
          patterns.push_back(IncompletePattern{*ch, static_cast<std::uint32_t>(k)});
        } else {
          actions.push_back(action());
        }
      } while (accept(","));
    }
    expect("}");
    return ActionSet(std::move(actions), std::move(patterns));
  }

  // ------------------------------------------------------------------ terms
  Term term() {
    Term t = alt_term();
    while (accept("||")) t = Term::par(t, alt_term());
    return t;
  }
  Term alt_term() {
    Term t = seq_term();
    while (accept("+")) t = Term::alt(t, seq_term());
    return t;
  }
  Term seq_term() {
    Term t = unary_term();
    while (accept(".")) t = Term::seq(t, unary_term());
    return t;
  }
  bool is_channel_start() const {
    return peek().kind == Tok::ident && sig().find_channel(peek().text).has_value() &&
           ((peek(1).kind == Tok::punct && (peek(1).text == "!" || peek(1).text == "?") &&
             peek(1).offset == peek().end));
  }
  bool is_process_ref() const {
    return peek().kind == Tok::ident && procs_ && procs_->count(peek().text) && !sig().find_variable(peek().text);
  }
  Term unary_term() {
    if (is_channel_start()) {
      Action a = action();
      UpdateMap f;
      if (is("[")) f = update_map();
      expect(".");
      return Term::prefix(a, std::move(f), unary_term());
    }
    // A leading integer is the constant 0 or 1, never a guard; numeric guards
    // such as `(1 < x) -> T` need parentheses.
    if (!is_kw("encap") && !is_process_ref() && peek().kind != Tok::integer) {
      auto g = attempt([&] {
        BoolExpr phi = bool_expr();
        expect("->");
        return phi;
      });
      if (g) return Term::guard(*g, unary_term());
    }
    return postfix_term();
  }
  Term postfix_term() {
    Term t = atom_term();
    while (accept("*")) t = Term::star(t);
    return t;
  }
  Term atom_term() {
    if (peek().kind == Tok::integer && (peek().text == "0" || peek().text == "1")) {
      const bool one = peek().text == "1";
      ++i_;
      return one ? Term::termination() : Term::deadlock();
    }
    if (accept("(")) {
      Term t = term();
      expect(")");
      return t;
    }
    if (is_kw("encap")) {
      ++i_;
      ActionSet h = action_set();
      expect("(");
      Term t = term();
      expect(")");
      return Term::encap(std::move(h), t);
    }
    if (peek().kind == Tok::ident && !kKeywords.count(peek().text)) {
      const Token& t = peek();
      if (procs_) {
        if (auto it = procs_->find(t.text); it != procs_->end()) {
          ++i_;
          return it->second;
        }
      }
      if (sig().find_channel(t.text)) fail(t, "action '" + t.text + "' needs a direction ('!' or '?')");
      const Token& next = peek(1);
      if (next.kind == Tok::punct && (next.text == "!" || next.text == "?") && next.offset == t.end)
        fail(t, "undeclared channel '" + t.text + "'");
      fail(t, "unknown process '" + t.text + "'");
    }
    fail("expected a process term but found " + describe(peek()));
  }

  // ------------------------------------------------------------------ requirements
  Requirement requirement() {
    if (is_kw("invariant")) {
      ++i_;
      return Requirement::invariant(bool_expr());
    }
    if (is_kw("event")) {
      ++i_;
      Action a = action();
      expect_kw("implies");
      return Requirement::event_implies(a, bool_expr());
    }
    BoolExpr phi = bool_expr();
    expect_kw("disables");
    return Requirement::state_excludes_event(phi, action());
  }

  template <class F>
  auto whole(F&& f) {
    try {
      auto r = f();
      if (!at_end()) fail("unexpected " + describe(peek()));
      return r;
    } catch (const Failure& e) {
      rethrow_furthest(e);
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const Signature* sig_;
  const std::map<std::string, Term>* procs_;
  std::optional<Failure> furthest_;
};

// ---------------------------------------------------------------------- file level

class FileParser {
 public:
  explicit FileParser(std::string_view src) {
    auto toks = lex(src, diags_);
    parser_ = std::make_unique<Parser>(std::move(toks), &sig_, &spec_.processes);
  }

  ParseResult run() {
    Parser& p = *parser_;
    SourcePos plant_pos, sup_pos;
    while (!p.at_end()) {
      const Token start = p.peek();
      try {
        p.clear_furthest();
        declaration(start, plant_pos, sup_pos);
      } catch (const Failure& e) {
        try {
          p.rethrow_furthest(e);
        } catch (const Failure& best) {
          if (!suppress_) diags_.push_back(best.diag);
        }
        suppress_ = false;
        p.skip_past_semicolon();
      } catch (const ModelError& e) {
        diags_.push_back({start.pos, e.what()});
        p.skip_past_semicolon();
      }
    }
    validate(plant_pos, sup_pos);
    ParseResult r;
    r.diagnostics = std::move(diags_);
    if (r.diagnostics.empty()) {
      spec_.signature = std::make_shared<const Signature>(std::move(sig_));
      r.spec = std::move(spec_);
    }
    return r;
  }

 private:
  void declaration(const Token& start, SourcePos& plant_pos, SourcePos& sup_pos) {
    Parser& p = *parser_;
    if (p.is_kw("controllable") || p.is_kw("uncontrollable")) {
      const auto cls = p.is_kw("controllable") ? Controllability::controllable : Controllability::uncontrollable;
      p.skip();
      do {
        const Token& name = p.expect_ident("a channel name");
        if (auto existing = sig_.find_channel(name.text)) {
          if (sig_.channel(*existing).cls != cls)
            p.fail(name, "channel '" + name.text + "' declared both controllable and uncontrollable");
          p.fail(name, "channel '" + name.text + "' declared twice");
        }
        check_fresh(name);
        sig_.add_channel(Channel{name.text, cls});
      } while (p.accept(","));
      p.expect(";");
      return;
    }
    if (p.is_kw("var")) {
      p.expect_kw("var");
      const Token& name = p.expect_ident("a variable name");
      check_fresh(name);
      p.expect(":");
      Domain dom;
      if (p.accept("{")) {
        std::vector<std::string> names;
        do {
          const Token& e = p.expect_ident("an enumerator");
          if (sig_.find_channel(e.text) || sig_.find_variable(e.text) || e.text == name.text)
            p.fail(e, "enumerator '" + e.text + "' clashes with a declared name");
          if (std::find(names.begin(), names.end(), e.text) != names.end())
            p.fail(e, "enumerator '" + e.text + "' repeated");
          names.push_back(e.text);
        } while (p.accept(","));
        p.expect("}");
        dom = Domain::enumeration(std::move(names));
      } else {
        const auto lo = p.expect_int();
        p.expect("..");
        const auto hi = p.expect_int();
        if (hi < lo) p.fail("empty domain " + std::to_string(lo) + ".." + std::to_string(hi));
        dom = Domain::range(lo, hi);
      }
      p.expect("=");
      Value init = 0;
      if (dom.is_enum()) {
        const Token& e = p.expect_ident("an enumerator");
        auto it = std::find(dom.enumerators.begin(), dom.enumerators.end(), e.text);
        if (it == dom.enumerators.end()) p.fail(e, "'" + e.text + "' is not in the domain of '" + name.text + "'");
        init = it - dom.enumerators.begin();
      } else {
        const Token& at = p.peek();
        init = p.expect_int();
        if (!dom.contains(init)) p.fail(at, "initial value of '" + name.text + "' lies outside its domain");
      }
      p.expect(";");
      sig_.add_variable(VariableDecl{name.text, std::move(dom), init});
      return;
    }
    if (p.is_kw("proc")) {
      p.expect_kw("proc");
      const Token& name = p.expect_ident("a process name");
      if (spec_.processes.count(name.text)) p.fail(name, "process '" + name.text + "' defined twice");
      check_fresh(name);
      failed_procs_.insert(name.text);  // until the body parses
      p.expect("=");
      Term t = p.term();
      p.expect(";");
      spec_.set_process(name.text, std::move(t));
      failed_procs_.erase(name.text);
      return;
    }
    if (p.is_kw("plant") || p.is_kw("supervisor")) {
      const bool plant = p.is_kw("plant");
      p.skip();
      const Token& name = p.expect_ident("a process name");
      if (!spec_.processes.count(name.text)) {
        // A process whose body was already reported is not reported again.
        if (failed_procs_.count(name.text)) suppress_ = true;
        p.fail(name, "unknown process '" + name.text + "'");
      }
      p.expect(";");
      if (plant) {
        if (!spec_.plant.empty()) p.fail(start, "plant declared twice");
        spec_.plant = name.text;
        plant_pos = start.pos;
      } else {
        if (spec_.supervisor) p.fail(start, "supervisor declared twice");
        spec_.supervisor = name.text;
        sup_pos = start.pos;
      }
      return;
    }
    if (p.is_kw("encap")) {
      p.expect_kw("encap");
      ActionSet h = p.action_set();
      p.expect(";");
      if (spec_.encapsulation) p.fail(start, "encapsulation set declared twice");
      spec_.encapsulation = std::move(h);
      return;
    }
    if (p.is_kw("require")) {
      p.expect_kw("require");
      Requirement r = p.requirement();
      p.expect(";");
      spec_.requirements.push_back(std::move(r));
      return;
    }
    p.fail("expected a declaration but found " + p.describe(p.peek()));
  }

  void check_fresh(const Token& name) {
    if (sig_.find_channel(name.text) || sig_.find_variable(name.text) || sig_.find_enumerator(name.text) ||
        spec_.processes.count(name.text))
      parser_->fail(name, "name '" + name.text + "' already declared");
  }

  void validate(SourcePos plant_pos, SourcePos sup_pos) {
    if (!diags_.empty()) return;
    if (spec_.plant.empty()) {
      diags_.push_back({parser_->peek().pos, "no plant declared"});
      return;
    }
    if (auto c = classify_plant(spec_.processes.at(spec_.plant), sig_); !c) {
      for (const auto& o : c.offending) diags_.push_back({plant_pos, "plant '" + spec_.plant + "' is not a plant term: " + o});
    }
    if (spec_.supervisor) {
      if (auto c = classify_supervisor(spec_.processes.at(*spec_.supervisor), sig_); !c) {
        for (const auto& o : c.offending)
          diags_.push_back({sup_pos, "supervisor '" + *spec_.supervisor + "' is not a supervisor term: " + o});
      }
    }
  }

  Signature sig_;
  SystemSpec spec_;
  std::set<std::string> failed_procs_;
  bool suppress_ = false;
  std::vector<Diagnostic> diags_;
  std::unique_ptr<Parser> parser_;
};

template <class R, class F>
R parse_fragment(const Signature& sig, std::string_view text, const std::map<std::string, Term>* procs, F&& f) {
  std::vector<Diagnostic> diags;
  auto toks = lex(text, diags);
  if (!diags.empty()) throw ParseError(diags);
  Parser p(std::move(toks), &sig, procs);
  try {
    return p.whole([&] { return f(p); });
  } catch (const Failure& e) {
    throw ParseError({e.diag});
  }
}

}  // namespace

ParseResult try_parse(std::string_view source) { return FileParser(source).run(); }

SystemSpec parse(std::string_view source) {
  auto r = try_parse(source);
  if (!r.ok()) throw ParseError(std::move(r.diagnostics));
  return std::move(*r.spec);
}

Term parse_term(const Signature& sig, std::string_view text, const std::map<std::string, Term>* processes) {
  return parse_fragment<Term>(sig, text, processes, [](Parser& p) { return p.term(); });
}

BoolExpr parse_bool(const Signature& sig, std::string_view text) {
  return parse_fragment<BoolExpr>(sig, text, nullptr, [](Parser& p) { return p.bool_expr(); });
}

Action parse_action(const Signature& sig, std::string_view text) {
  return parse_fragment<Action>(sig, text, nullptr, [](Parser& p) { return p.action(); });
}

Requirement parse_requirement(const Signature& sig, std::string_view text) {
  return parse_fragment<Requirement>(sig, text, nullptr, [](Parser& p) { return p.requirement(); });
}

}  // namespace cpd
