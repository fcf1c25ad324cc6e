#include "ualw/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace ualw {

namespace {

size_t pow_size(int base, int exp) {
  size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<size_t>(base);
  return r;
}

// Disjoint-set with least-element representatives on demand.
struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep least element as root
    parent[b] = a;
    return true;
  }
};

}  // namespace

FiniteAlgebra::FiniteAlgebra(Signature sig, int size, std::vector<std::vector<int>> tables,
                             std::string name, std::vector<std::string> element_names)
    : sig_(std::move(sig)),
      size_(size),
      tables_(std::move(tables)),
      name_(std::move(name)),
      element_names_(std::move(element_names)) {
  if (size_ <= 0) throw Error("IndexOutOfRange", "algebra universe must be nonempty");
  if (tables_.size() != sig_.ops().size())
    throw Error("SignatureMismatch", "expected one table per operation");
  for (size_t i = 0; i < tables_.size(); ++i) {
    size_t want = pow_size(size_, sig_.ops()[i].arity);
    if (tables_[i].size() != want)
      throw Error("ArityMismatch", "table size mismatch for " + sig_.ops()[i].name);
    for (int v : tables_[i])
      if (v < 0 || v >= size_)
        throw Error("IndexOutOfRange", "table entry out of range in " + sig_.ops()[i].name);
  }
  if (element_names_.empty()) {
    element_names_.reserve(size_);
    for (int e = 0; e < size_; ++e) element_names_.push_back(std::to_string(e));
  }
  if (static_cast<int>(element_names_.size()) != size_)
    throw Error("IndexOutOfRange", "element name list does not match universe size");
}

int FiniteAlgebra::apply(int op_index, const std::vector<int>& args) const {
  const auto& op = sig_.ops()[op_index];
  if (static_cast<int>(args.size()) != op.arity) throw Error("ArityMismatch", op.name);
  size_t idx = 0;
  for (int a : args) {
    if (a < 0 || a >= size_) throw Error("IndexOutOfRange", op.name + " argument");
    idx = idx * static_cast<size_t>(size_) + static_cast<size_t>(a);
  }
  return tables_[op_index][idx];
}

int FiniteAlgebra::element_by_name(const std::string& n) const {
  for (int e = 0; e < size_; ++e)
    if (element_names_[e] == n) return e;
  return -1;
}

int GenAssignment::image_of(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return images[i];
  throw Error("UnknownAtom", label + " not assigned");
}

int evaluate(const FiniteAlgebra& alg, const Formula& term, const GenAssignment& env) {
  if (term.is_atom()) return env.image_of(term.head());
  int op = alg.signature().index_of(term.head());
  if (op < 0) throw Error("UnknownOp", term.head());
  if (static_cast<int>(term.args().size()) != alg.signature().ops()[op].arity)
    throw Error("ArityMismatch", term.head());
  std::vector<int> args;
  args.reserve(term.args().size());
  for (const auto& a : term.args()) args.push_back(evaluate(alg, a, env));
  return alg.apply(op, args);
}

int Congruence::classes() const {
  int c = 0;
  for (size_t e = 0; e < rep.size(); ++e)
    if (rep[e] == static_cast<int>(e)) ++c;
  return c;
}

std::vector<std::vector<int>> Congruence::class_list() const {
  std::map<int, std::vector<int>> by_rep;
  for (size_t e = 0; e < rep.size(); ++e) by_rep[rep[e]].push_back(static_cast<int>(e));
  std::vector<std::vector<int>> out;
  out.reserve(by_rep.size());
  for (auto& [r, members] : by_rep) out.push_back(std::move(members));
  return out;
}

Congruence congruence_generated(const FiniteAlgebra& alg,
                                const std::vector<std::pair<int, int>>& pairs) {
  const int n = alg.size();
  UnionFind uf(n);
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw Error("IndexOutOfRange", "congruence generator pair out of range");
    uf.unite(a, b);
  }

  // Propagate compatibility: argument tuples with congruent components must
  // produce congruent results.  Buckets keyed by the representative tuple.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t op = 0; op < alg.signature().ops().size(); ++op) {
      int k = alg.signature().ops()[op].arity;
      if (k == 0) continue;
      std::map<std::vector<int>, int> bucket;  // rep tuple -> rep of result
      std::vector<int> args(k, 0);
      size_t total = pow_size(n, k);
      for (size_t idx = 0; idx < total; ++idx) {
        size_t t = idx;
        for (int i = k - 1; i >= 0; --i) {
          args[i] = static_cast<int>(t % n);
          t /= n;
        }
        std::vector<int> key(k);
        for (int i = 0; i < k; ++i) key[i] = uf.find(args[i]);
        int res = uf.find(alg.table(static_cast<int>(op))[idx]);
        auto [it, fresh] = bucket.emplace(std::move(key), res);
        if (!fresh && uf.unite(it->second, res)) changed = true;
      }
    }
  }

  Congruence c;
  c.rep.resize(n);
  for (int e = 0; e < n; ++e) c.rep[e] = uf.find(e);
  return c;
}

Subalgebra subalgebra_generated(const FiniteAlgebra& alg, const std::vector<int>& seeds) {
  const int n = alg.size();
  std::vector<bool> in(n, false);
  std::vector<int> members;
  auto add = [&](int e) {
    if (e < 0 || e >= n) throw Error("IndexOutOfRange", "seed out of range");
    if (!in[e]) {
      in[e] = true;
      members.push_back(e);
    }
  };
  for (int s : seeds) add(s);
  for (size_t op = 0; op < alg.signature().ops().size(); ++op)
    if (alg.signature().ops()[op].arity == 0) add(alg.table(static_cast<int>(op))[0]);

  // Worklist closure over all operations.
  for (size_t head = 0; head < members.size(); ++head) {
    for (size_t op = 0; op < alg.signature().ops().size(); ++op) {
      int k = alg.signature().ops()[op].arity;
      if (k == 0) continue;
      // every argument tuple from current members that involves members[head]
      std::vector<size_t> pick(k, 0);
      size_t count = members.size();
      std::vector<int> args(k);
      for (;;) {
        bool uses_head = false;
        for (int i = 0; i < k; ++i) {
          args[i] = members[pick[i]];
          if (pick[i] == head) uses_head = true;
        }
        if (uses_head) add(alg.apply(static_cast<int>(op), args));
        int i = k - 1;
        while (i >= 0 && ++pick[i] == count) pick[i--] = 0;
        if (i < 0) break;
      }
    }
  }

  std::sort(members.begin(), members.end());
  std::vector<int> new_index(n, -1);
  for (size_t i = 0; i < members.size(); ++i) new_index[members[i]] = static_cast<int>(i);

  int m = static_cast<int>(members.size());
  std::vector<std::vector<int>> tables;
  for (size_t op = 0; op < alg.signature().ops().size(); ++op) {
    int k = alg.signature().ops()[op].arity;
    std::vector<int> table(pow_size(m, k));
    std::vector<int> args(k);
    for (size_t idx = 0; idx < table.size(); ++idx) {
      size_t t = idx;
      for (int i = k - 1; i >= 0; --i) {
        args[i] = members[t % m];
        t /= m;
      }
      table[idx] = new_index[alg.apply(static_cast<int>(op), args)];
    }
    tables.push_back(std::move(table));
  }

  std::vector<std::string> names;
  names.reserve(members.size());
  for (int e : members) names.push_back(alg.element_name(e));
  Subalgebra out{FiniteAlgebra(alg.signature(), m, std::move(tables), alg.name() + "|sub",
                               std::move(names)),
                 members};
  return out;
}

FiniteAlgebra product(const std::vector<AlgebraPtr>& factors) {
  if (factors.empty()) throw Error("SignatureMismatch", "empty product");
  const Signature& sig = factors[0]->signature();
  size_t total = 1;
  for (const auto& f : factors) {
    if (!(f->signature() == sig)) throw Error("SignatureMismatch", "product factors differ");
    total *= static_cast<size_t>(f->size());
    if (total > (1u << 22))
      throw Error("BudgetExceeded", "materialized product too large");
  }
  int n = static_cast<int>(total);

  auto decode = [&](size_t idx, std::vector<int>& slots) {
    for (size_t j = factors.size(); j-- > 0;) {
      slots[j] = static_cast<int>(idx % factors[j]->size());
      idx /= factors[j]->size();
    }
  };
  auto encode = [&](const std::vector<int>& slots) {
    size_t idx = 0;
    for (size_t j = 0; j < factors.size(); ++j)
      idx = idx * factors[j]->size() + static_cast<size_t>(slots[j]);
    return idx;
  };

  std::vector<std::vector<int>> tables;
  for (size_t op = 0; op < sig.ops().size(); ++op) {
    int k = sig.ops()[op].arity;
    std::vector<int> table(pow_size(n, k));
    std::vector<std::vector<int>> arg_slots(k, std::vector<int>(factors.size()));
    std::vector<int> args(k), res(factors.size()), call(k);
    for (size_t idx = 0; idx < table.size(); ++idx) {
      size_t t = idx;
      for (int i = k - 1; i >= 0; --i) {
        args[i] = static_cast<int>(t % n);
        t /= n;
      }
      for (int i = 0; i < k; ++i) decode(args[i], arg_slots[i]);
      for (size_t j = 0; j < factors.size(); ++j) {
        for (int i = 0; i < k; ++i) call[i] = arg_slots[i][j];
        res[j] = factors[j]->apply(static_cast<int>(op), call);
      }
      table[idx] = static_cast<int>(encode(res));
    }
    tables.push_back(std::move(table));
  }
  return FiniteAlgebra(sig, n, std::move(tables), "product");
}

Quotient quotient(const FiniteAlgebra& alg, const Congruence& cong) {
  if (static_cast<int>(cong.rep.size()) != alg.size())
    throw Error("SignatureMismatch", "congruence belongs to a different algebra");
  std::vector<int> reps;
  for (int e = 0; e < alg.size(); ++e)
    if (cong.rep[e] == e) reps.push_back(e);
  std::vector<int> proj(alg.size());
  for (int e = 0; e < alg.size(); ++e) {
    auto it = std::lower_bound(reps.begin(), reps.end(), cong.rep[e]);
    proj[e] = static_cast<int>(it - reps.begin());
  }
  int m = static_cast<int>(reps.size());
  std::vector<std::vector<int>> tables;
  for (size_t op = 0; op < alg.signature().ops().size(); ++op) {
    int k = alg.signature().ops()[op].arity;
    std::vector<int> table(pow_size(m, k));
    std::vector<int> args(k);
    for (size_t idx = 0; idx < table.size(); ++idx) {
      size_t t = idx;
      for (int i = k - 1; i >= 0; --i) {
        args[i] = reps[t % m];
        t /= m;
      }
      table[idx] = proj[alg.apply(static_cast<int>(op), args)];
    }
    tables.push_back(std::move(table));
  }
  std::vector<std::string> names;
  names.reserve(reps.size());
  for (int r : reps) names.push_back(alg.element_name(r));
  return Quotient{FiniteAlgebra(alg.signature(), m, std::move(tables), alg.name() + "/~",
                                std::move(names)),
                  std::move(proj)};
}

GeneratedProductSubalgebra generated_product_subalgebra(
    const std::vector<AlgebraPtr>& factors,
    const std::vector<std::string>& generator_labels,
    const std::vector<std::vector<int>>& generator_tuples, size_t element_budget) {
  if (factors.empty()) throw Error("SignatureMismatch", "no factors");
  const Signature& sig = factors[0]->signature();
  for (const auto& f : factors)
    if (!(f->signature() == sig)) throw Error("SignatureMismatch", "factor signatures differ");

  struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
      size_t h = 1469598103934665603ull;
      for (int x : v) {
        h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
      }
      return h;
    }
  };

  GeneratedProductSubalgebra out;
  std::unordered_map<std::vector<int>, int, VecHash> index;
  auto intern = [&](const std::vector<int>& tup, const Formula& term) {
    auto it = index.find(tup);
    if (it != index.end()) return std::pair<int, bool>{it->second, false};
    if (out.tuples.size() >= element_budget)
      throw Error("BudgetExceeded", "generated subalgebra exceeds element budget");
    int id = static_cast<int>(out.tuples.size());
    index.emplace(tup, id);
    out.tuples.push_back(tup);
    out.witness_terms.push_back(term);
    return std::pair<int, bool>{id, true};
  };

  for (size_t g = 0; g < generator_tuples.size(); ++g) {
    if (generator_tuples[g].size() != factors.size())
      throw Error("IndexOutOfRange", "generator tuple length mismatch");
    intern(generator_tuples[g], Formula::atom(generator_labels[g]));
  }
  std::vector<int> tmp(factors.size());
  for (size_t op = 0; op < sig.ops().size(); ++op)
    if (sig.ops()[op].arity == 0) {
      for (size_t j = 0; j < factors.size(); ++j) tmp[j] = factors[j]->table(static_cast<int>(op))[0];
      intern(tmp, Formula::app(sig.ops()[op].name, {}));
    }
  if (out.tuples.empty())
    throw Error("IndexOutOfRange", "no generators and no constants: empty subuniverse");

  // BFS closure; op tables built as elements appear.
  std::vector<std::vector<int>> tables(sig.ops().size());
  for (size_t op = 0; op < sig.ops().size(); ++op)
    if (sig.ops()[op].arity == 0) {
      for (size_t j = 0; j < factors.size(); ++j) tmp[j] = factors[j]->table(static_cast<int>(op))[0];
      tables[op].push_back(index.at(tmp));
    }

  for (size_t head = 0; head < out.tuples.size(); ++head) {
    for (size_t op = 0; op < sig.ops().size(); ++op) {
      int k = sig.ops()[op].arity;
      if (k == 0) continue;
      std::vector<size_t> pick(k, 0);
      std::vector<int> call(k);
      for (;;) {
        bool uses_head = false;
        for (int i = 0; i < k; ++i)
          if (pick[i] == head) uses_head = true;
        // tuples below head were combined in earlier rounds
        bool all_seen = true;
        for (int i = 0; i < k; ++i)
          if (pick[i] > head) all_seen = false;
        if (uses_head && all_seen) {
          for (size_t j = 0; j < factors.size(); ++j) {
            for (int i = 0; i < k; ++i) call[i] = out.tuples[pick[i]][j];
            tmp[j] = factors[j]->apply(static_cast<int>(op), call);
          }
          std::vector<Formula> args;
          for (int i = 0; i < k; ++i) args.push_back(out.witness_terms[pick[i]]);
          intern(tmp, Formula::app(sig.ops()[op].name, std::move(args)));
        }
        int i = k - 1;
        while (i >= 0 && ++pick[i] > head) pick[i--] = 0;
        if (i < 0) break;
      }
    }
  }

  int m = static_cast<int>(out.tuples.size());
  for (size_t op = 0; op < sig.ops().size(); ++op) {
    int k = sig.ops()[op].arity;
    if (k == 0) continue;
    tables[op].assign(pow_size(m, k), 0);
    std::vector<int> args(k), call(k);
    for (size_t idx = 0; idx < tables[op].size(); ++idx) {
      size_t t = idx;
      for (int i = k - 1; i >= 0; --i) {
        args[i] = static_cast<int>(t % m);
        t /= m;
      }
      for (size_t j = 0; j < factors.size(); ++j) {
        for (int i = 0; i < k; ++i) call[i] = out.tuples[args[i]][j];
        tmp[j] = factors[j]->apply(static_cast<int>(op), call);
      }
      tables[op][idx] = index.at(tmp);
    }
  }
  out.algebra = FiniteAlgebra(sig, m, std::move(tables), "gensub");
  return out;
}

namespace {

// Partial evaluation: -1 when some atom is unassigned.
int eval_partial(const FiniteAlgebra& alg, const Formula& f,
                 const std::vector<std::string>& labels, const std::vector<int>& images) {
  if (f.is_atom()) {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == f.head()) return images[i];
    throw Error("UnknownAtom", f.head());
  }
  int op = alg.signature().index_of(f.head());
  if (op < 0) throw Error("UnknownOp", f.head());
  if (static_cast<int>(f.args().size()) != alg.signature().ops()[op].arity)
    throw Error("ArityMismatch", f.head());
  std::vector<int> args;
  args.reserve(f.args().size());
  for (const auto& a : f.args()) {
    int v = eval_partial(alg, a, labels, images);
    if (v < 0) return -1;
    args.push_back(v);
  }
  return alg.apply(op, args);
}

struct HomSearch {
  const HomSearchSpec& spec;
  const FiniteAlgebra& target;
  const std::function<bool(const GenAssignment&)>& visit;
  std::vector<int> images;
  // constraints[i] = flattened list of (lhs, rhs) pairs to try after assigning generator i
  std::vector<std::pair<Formula, Formula>> all_pairs;

  bool consistent() const {
    for (const auto& [l, r] : all_pairs) {
      int a = eval_partial(target, l, spec.generators, images);
      if (a < 0) continue;
      int b = eval_partial(target, r, spec.generators, images);
      if (b < 0) continue;
      if (a != b) return false;
    }
    return true;
  }

  bool rec(size_t i) {
    if (i == spec.generators.size())
      return visit(GenAssignment{spec.generators, images});
    int pinned = -1;
    for (size_t j = 0; j < spec.partial.labels.size(); ++j)
      if (spec.partial.labels[j] == spec.generators[i]) pinned = spec.partial.images[j];
    for (int e = 0; e < target.size(); ++e) {
      if (pinned >= 0 && e != pinned) continue;
      images[i] = e;
      if (consistent()) {
        if (!rec(i + 1)) return false;
      }
    }
    images[i] = -1;
    return true;
  }
};

}  // namespace

void enumerate_homs(const HomSearchSpec& spec, const FiniteAlgebra& target,
                    const std::function<bool(const GenAssignment&)>& visit) {
  HomSearch s{spec, target, visit, std::vector<int>(spec.generators.size(), -1), {}};
  s.all_pairs = spec.relators;
  s.all_pairs.insert(s.all_pairs.end(), spec.kernel_must_contain.begin(),
                     spec.kernel_must_contain.end());
  for (const auto& [l, r] : s.all_pairs)
    for (const auto& f : {l, r})
      for (const auto& a : f.atoms())
        if (std::find(spec.generators.begin(), spec.generators.end(), a) == spec.generators.end())
          throw Error("UnknownAtom", "constraint uses undeclared generator " + a);
  s.rec(0);
}

std::vector<GenAssignment> enumerate_homs(const HomSearchSpec& spec,
                                          const FiniteAlgebra& target) {
  std::vector<GenAssignment> out;
  enumerate_homs(spec, target, [&](const GenAssignment& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

std::optional<std::vector<int>> extend_to_hom(const FiniteAlgebra& source,
                                              const FiniteAlgebra& target,
                                              const std::vector<std::pair<int, int>>& anchor) {
  std::vector<int> map(source.size(), -1);
  std::vector<int> frontier;
  auto set = [&](int s, int t) {
    if (map[s] == -1) {
      map[s] = t;
      frontier.push_back(s);
      return true;
    }
    return map[s] == t;
  };
  for (auto [s, t] : anchor) {
    if (s < 0 || s >= source.size() || t < 0 || t >= target.size())
      throw Error("IndexOutOfRange", "anchor out of range");
    if (!set(s, t)) return std::nullopt;
  }
  for (size_t op = 0; op < source.signature().ops().size(); ++op)
    if (source.signature().ops()[op].arity == 0)
      if (!set(source.table(static_cast<int>(op))[0], target.table(static_cast<int>(op))[0]))
        return std::nullopt;

  for (size_t head = 0; head < frontier.size(); ++head) {
    for (size_t op = 0; op < source.signature().ops().size(); ++op) {
      int k = source.signature().ops()[op].arity;
      if (k == 0) continue;
      std::vector<size_t> pick(k, 0);
      std::vector<int> sargs(k), targs(k);
      for (;;) {
        bool uses_head = false, all_seen = true;
        for (int i = 0; i < k; ++i) {
          if (pick[i] == head) uses_head = true;
          if (pick[i] > head) all_seen = false;
        }
        if (uses_head && all_seen) {
          for (int i = 0; i < k; ++i) {
            sargs[i] = frontier[pick[i]];
            targs[i] = map[sargs[i]];
          }
          if (!set(source.apply(static_cast<int>(op), sargs),
                   target.apply(static_cast<int>(op), targs)))
            return std::nullopt;
        }
        int i = k - 1;
        while (i >= 0 && ++pick[i] > head) pick[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  return map;
}

void enumerate_algebra_homs(const FiniteAlgebra& source, const FiniteAlgebra& target,
                            const std::vector<int>& generating_set,
                            const std::vector<std::pair<int, int>>& anchor,
                            const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> gens = generating_set;
  if (gens.empty()) {
    gens.resize(source.size());
    std::iota(gens.begin(), gens.end(), 0);
  }
  std::vector<std::pair<int, int>> pins = anchor;

  // depth-first over generator images with closure-based propagation
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    auto partial = extend_to_hom(source, target, pins);
    if (!partial) return true;
    if (i == gens.size()) {
      // generating set covered: map must be total on the generated subalgebra;
      // require totality on the whole source
      for (int e = 0; e < source.size(); ++e)
        if ((*partial)[e] == -1)
          throw Error("IndexOutOfRange", "generating set does not generate the source algebra");
      return visit(*partial);
    }
    if ((*partial)[gens[i]] != -1) return rec(i + 1);
    for (int t = 0; t < target.size(); ++t) {
      pins.emplace_back(gens[i], t);
      if (!rec(i + 1)) return false;
      pins.pop_back();
    }
    return true;
  };
  rec(0);
}

bool is_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                     const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != source.size()) return false;
  for (int v : map)
    if (v < 0 || v >= target.size()) return false;
  for (size_t op = 0; op < source.signature().ops().size(); ++op) {
    int k = source.signature().ops()[op].arity;
    std::vector<int> args(k), targs(k);
    size_t total = pow_size(source.size(), k);
    for (size_t idx = 0; idx < total; ++idx) {
      size_t t = idx;
      for (int i = k - 1; i >= 0; --i) {
        args[i] = static_cast<int>(t % source.size());
        t /= source.size();
      }
      for (int i = 0; i < k; ++i) targs[i] = map[args[i]];
      if (map[source.table(static_cast<int>(op))[idx]] != target.apply(static_cast<int>(op), targs))
        return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> find_isomorphism(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                                 const std::vector<std::pair<int, int>>& anchor) {
  if (!(a.signature() == b.signature()) || a.size() != b.size()) return std::nullopt;
  const int n = a.size();
  std::vector<int> fwd(n, -1), bwd(n, -1);

  auto ok_so_far = [&]() {
    // check op compatibility restricted to assigned elements
    for (size_t op = 0; op < a.signature().ops().size(); ++op) {
      int k = a.signature().ops()[op].arity;
      std::vector<int> args(k), targs(k);
      size_t total = pow_size(n, k);
      for (size_t idx = 0; idx < total; ++idx) {
        size_t t = idx;
        bool all = true;
        for (int i = k - 1; i >= 0; --i) {
          args[i] = static_cast<int>(t % n);
          t /= n;
          if (fwd[args[i]] == -1) all = false;
        }
        if (!all) continue;
        int res = a.table(static_cast<int>(op))[idx];
        if (fwd[res] == -1) continue;
        for (int i = 0; i < k; ++i) targs[i] = fwd[args[i]];
        if (b.apply(static_cast<int>(op), targs) != fwd[res]) return false;
      }
    }
    return true;
  };

  for (auto [s, t] : anchor) {
    if (s < 0 || s >= n || t < 0 || t >= n) throw Error("IndexOutOfRange", "anchor out of range");
    if (fwd[s] != -1 && fwd[s] != t) return std::nullopt;
    if (bwd[t] != -1 && bwd[t] != s) return std::nullopt;
    fwd[s] = t;
    bwd[t] = s;
  }
  if (!ok_so_far()) return std::nullopt;

  std::function<bool(int)> rec = [&](int s) -> bool {
    while (s < n && fwd[s] != -1) ++s;
    if (s == n) return true;
    for (int t = 0; t < n; ++t) {
      if (bwd[t] != -1) continue;
      fwd[s] = t;
      bwd[t] = s;
      if (ok_so_far() && rec(s + 1)) return true;
      fwd[s] = -1;
      bwd[t] = -1;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return fwd;
}

}  // namespace ualw
