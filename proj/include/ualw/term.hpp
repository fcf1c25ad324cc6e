#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ualw {

/// Error with a stable machine-readable code ("SyntaxError", "UnknownAtom", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct OpSymbol {
  std::string name;
  int arity = 0;

  friend bool operator==(const OpSymbol& a, const OpSymbol& b) {
    return a.name == b.name && a.arity == b.arity;
  }
};

/// Ordered list of operation symbols; names unique, arity fixed per name.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<OpSymbol> ops);

  const std::vector<OpSymbol>& ops() const { return ops_; }
  int index_of(const std::string& name) const;  // -1 if absent
  bool has(const std::string& name) const { return index_of(name) >= 0; }
  int arity(const std::string& name) const;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.ops_ == b.ops_;
  }

 private:
  std::vector<OpSymbol> ops_;
  std::map<std::string, int> index_;
};

/// Formula over atoms and connectives; an immutable tree with shared subterms.
/// Atoms are bare identifiers, applications carry the operation name.
class Formula {
 public:
  Formula() = default;

  static Formula atom(std::string name);
  static Formula app(std::string op, std::vector<Formula> args);

  bool valid() const { return node_ != nullptr; }
  bool is_atom() const { return node_->is_atom; }
  const std::string& head() const { return node_->head; }
  const std::vector<Formula>& args() const { return node_->args; }

  int depth() const;
  void collect_atoms(std::set<std::string>& out) const;
  std::set<std::string> atoms() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node {
    std::string head;
    std::vector<Formula> args;
    bool is_atom = false;
  };
  std::shared_ptr<const Node> node_;
};

/// Canonical printing: prefix form, children comma separated, no whitespace.
/// Nullary connectives print bare, like atoms.
std::string format_formula(const Formula& f);

/// Grammar:  formula := atom | opname | opname "(" formula ("," formula)* ")"
/// Input sugar: a fully parenthesized infix form "(a op b)" for binary ops and
/// plain grouping "(a)".
Formula parse_formula(const std::string& text, const Signature& sig,
                      const std::set<std::string>& atoms);

/// Atom-wise substitution, total on its declared domain.
struct Substitution {
  std::map<std::string, Formula> map;

  static Substitution identity_on(const std::set<std::string>& atoms);
};

Formula apply_substitution(const Substitution& s, const Formula& f);

/// Atom-wise composition (s then t applied to s's images): (compose(s,t))(p) = t̄(s(p)).
Substitution compose(const Substitution& s, const Substitution& t);

}  // namespace ualw
