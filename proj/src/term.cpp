#include "ualw/term.hpp"

#include <algorithm>
#include <cctype>

namespace ualw {

Signature::Signature(std::vector<OpSymbol> ops) : ops_(std::move(ops)) {
  for (size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].arity < 0)
      throw Error("ArityMismatch", "negative arity for " + ops_[i].name);
    if (!index_.emplace(ops_[i].name, static_cast<int>(i)).second)
      throw Error("SyntaxError", "duplicate operation name " + ops_[i].name);
  }
}

int Signature::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int Signature::arity(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw Error("UnknownOp", name);
  return ops_[i].arity;
}

Formula Formula::atom(std::string name) {
  Formula f;
  auto n = std::make_shared<Node>();
  n->head = std::move(name);
  n->is_atom = true;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::app(std::string op, std::vector<Formula> args) {
  Formula f;
  auto n = std::make_shared<Node>();
  n->head = std::move(op);
  n->args = std::move(args);
  n->is_atom = false;
  f.node_ = std::move(n);
  return f;
}

int Formula::depth() const {
  if (is_atom() || args().empty()) return 0;
  int d = 0;
  for (const auto& a : args()) d = std::max(d, a.depth());
  return d + 1;
}

void Formula::collect_atoms(std::set<std::string>& out) const {
  if (is_atom()) {
    out.insert(head());
    return;
  }
  for (const auto& a : args()) a.collect_atoms(out);
}

std::set<std::string> Formula::atoms() const {
  std::set<std::string> out;
  collect_atoms(out);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->is_atom != b.node_->is_atom || a.node_->head != b.node_->head)
    return false;
  if (a.node_->args.size() != b.node_->args.size()) return false;
  for (size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

bool operator<(const Formula& a, const Formula& b) {
  return format_formula(a) < format_formula(b);
}

static void format_into(const Formula& f, std::string& out) {
  out += f.head();
  if (!f.is_atom() && !f.args().empty()) {
    out += '(';
    for (size_t i = 0; i < f.args().size(); ++i) {
      if (i) out += ',';
      format_into(f.args()[i], out);
    }
    out += ')';
  }
}

std::string format_formula(const Formula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

namespace {

// Identifiers: anything that is not whitespace or one of ( ) ,
// so relation-atom names like "R1[0,1]" stay single tokens.
struct Lexer {
  const std::string& text;
  size_t pos = 0;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  char take() {
    skip_ws();
    if (pos >= text.size()) throw Error("SyntaxError", "unexpected end of input");
    return text[pos++];
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    int brackets = 0;  // relation-atom names like R[0,1] are single tokens
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '[') ++brackets;
      if (c == ']' && brackets > 0) --brackets;
      if (brackets == 0 &&
          (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ','))
        break;
      ++pos;
    }
    if (pos == start) throw Error("SyntaxError", "expected identifier at position " + std::to_string(pos));
    return text.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lex;
  const Signature& sig;
  const std::set<std::string>& atoms;

  Parser(const std::string& t, const Signature& s, const std::set<std::string>& a)
      : lex(t), sig(s), atoms(a) {}

  Formula leaf(const std::string& name) {
    if (atoms.count(name)) return Formula::atom(name);
    int i = sig.index_of(name);
    if (i < 0) throw Error("UnknownSymbol", name);
    if (sig.ops()[i].arity != 0)
      throw Error("ArityMismatch", name + " expects " + std::to_string(sig.ops()[i].arity) + " arguments");
    return Formula::app(name, {});
  }

  Formula parse() {
    if (lex.peek() == '(') {
      // grouping or fully parenthesized infix for a binary op
      lex.take();
      Formula lhs = parse();
      if (lex.peek() == ')') {
        lex.take();
        return lhs;
      }
      std::string op = lex.ident();
      int i = sig.index_of(op);
      if (i < 0) throw Error("UnknownSymbol", op);
      if (sig.ops()[i].arity != 2)
        throw Error("SyntaxError", "infix form requires a binary op, got " + op);
      Formula rhs = parse();
      if (lex.take() != ')') throw Error("SyntaxError", "expected ) after infix application");
      return Formula::app(op, {lhs, rhs});
    }
    std::string name = lex.ident();
    if (lex.peek() != '(') return leaf(name);
    if (atoms.count(name)) throw Error("SyntaxError", "atom " + name + " is not applicable");
    int i = sig.index_of(name);
    if (i < 0) throw Error("UnknownSymbol", name);
    lex.take();  // (
    std::vector<Formula> args;
    if (lex.peek() == ')') {
      lex.take();
    } else {
      for (;;) {
        args.push_back(parse());
        char c = lex.take();
        if (c == ')') break;
        if (c != ',') throw Error("SyntaxError", "expected , or ) in argument list");
      }
    }
    if (static_cast<int>(args.size()) != sig.ops()[i].arity)
      throw Error("ArityMismatch", name + " expects " + std::to_string(sig.ops()[i].arity) +
                                      " arguments, got " + std::to_string(args.size()));
    return Formula::app(name, std::move(args));
  }
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig,
                      const std::set<std::string>& atoms) {
  for (const auto& a : atoms)
    if (sig.has(a)) throw Error("SyntaxError", "atom " + a + " collides with a connective name");
  Parser p(text, sig, atoms);
  Formula f = p.parse();
  if (!p.lex.at_end())
    throw Error("SyntaxError", "trailing input at position " + std::to_string(p.lex.pos));
  return f;
}

Substitution Substitution::identity_on(const std::set<std::string>& atoms) {
  Substitution s;
  for (const auto& a : atoms) s.map.emplace(a, Formula::atom(a));
  return s;
}

Formula apply_substitution(const Substitution& s, const Formula& f) {
  if (f.is_atom()) {
    auto it = s.map.find(f.head());
    if (it == s.map.end()) throw Error("UnknownAtom", f.head() + " not in substitution domain");
    return it->second;
  }
  std::vector<Formula> args;
  args.reserve(f.args().size());
  for (const auto& a : f.args()) args.push_back(apply_substitution(s, a));
  return Formula::app(f.head(), std::move(args));
}

Substitution compose(const Substitution& s, const Substitution& t) {
  Substitution out;
  for (const auto& [p, img] : s.map) out.map.emplace(p, apply_substitution(t, img));
  return out;
}

}  // namespace ualw
