#include "ualw/fol.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ualw {

bool Bitset::empty() const {
  for (uint64_t x : w)
    if (x) return false;
  return true;
}

size_t Bitset::count() const {
  size_t c = 0;
  for (uint64_t x : w) c += static_cast<size_t>(__builtin_popcountll(x));
  return c;
}

Bitset Bitset::operator&(const Bitset& o) const {
  Bitset r(bits);
  for (size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] & o.w[i];
  return r;
}

Bitset Bitset::operator|(const Bitset& o) const {
  Bitset r(bits);
  for (size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] | o.w[i];
  return r;
}

Bitset Bitset::complement() const {
  Bitset r(bits);
  for (size_t i = 0; i < w.size(); ++i) r.w[i] = ~w[i];
  size_t tail = bits & 63;
  if (tail && !r.w.empty()) r.w.back() &= (uint64_t(1) << tail) - 1;
  return r;
}

int SimilarityType::arity_of(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw Error("UnknownSymbol", "relation " + name);
  return relations[i].second;
}

int SimilarityType::index_of(const std::string& name) const {
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].first == name) return static_cast<int>(i);
  return -1;
}

bool FOModel::holds(int rel, const std::vector<int>& tuple, const SimilarityType& t) const {
  size_t cell = 0;
  size_t stride = 1;
  for (size_t i = 0; i < tuple.size(); ++i) {
    cell += static_cast<size_t>(tuple[i]) * stride;
    stride *= static_cast<size_t>(size);
  }
  (void)t;
  return relations[rel].get(cell);
}

std::string fol_eq_name(int i, int j) {
  if (i > j) std::swap(i, j);
  std::string sep = (i > 9 || j > 9) ? "_" : "";
  return "eq" + std::to_string(i) + sep + std::to_string(j);
}

Signature fol_signature(int k) {
  std::vector<OpSymbol> ops;
  ops.push_back({"and", 2});
  ops.push_back({"not", 1});
  ops.push_back({"bot", 0});
  for (int i = 0; i < k; ++i) ops.push_back({"E" + std::to_string(i), 1});
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) ops.push_back({fol_eq_name(i, j), 0});
  return Signature(std::move(ops));
}

std::string fol_atom_name(const std::string& rel, const std::vector<int>& idx) {
  std::string s = rel + "[";
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(idx[i]);
  }
  return s + "]";
}

std::vector<std::string> fol_atoms(const SimilarityType& t, int k) {
  std::vector<std::string> out;
  for (const auto& [name, arity] : t.relations) {
    std::vector<int> idx(arity, 0);
    for (;;) {
      out.push_back(fol_atom_name(name, idx));
      int i = arity - 1;
      while (i >= 0 && ++idx[i] == k) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return out;
}

std::optional<std::pair<int, std::vector<int>>> parse_fol_atom(const std::string& name,
                                                               const SimilarityType& t) {
  auto bracket = name.find('[');
  if (bracket == std::string::npos || name.back() != ']') return std::nullopt;
  int rel = t.index_of(name.substr(0, bracket));
  if (rel < 0) return std::nullopt;
  std::vector<int> idx;
  int cur = -1;
  for (size_t i = bracket + 1; i + 1 < name.size(); ++i) {
    char c = name[i];
    if (c == ',') {
      if (cur < 0) return std::nullopt;
      idx.push_back(cur);
      cur = -1;
    } else if (c >= '0' && c <= '9') {
      cur = (cur < 0 ? 0 : cur * 10) + (c - '0');
    } else {
      return std::nullopt;
    }
  }
  if (cur >= 0) idx.push_back(cur);
  if (static_cast<int>(idx.size()) != t.relations[rel].second) return std::nullopt;
  return std::make_pair(rel, idx);
}

namespace {

size_t pow_size(int base, int exp) {
  size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<size_t>(base);
  return r;
}

Bitset diagonal(int m, int k, int vi, int vj) {
  Bitset b(pow_size(m, k));
  size_t cells = pow_size(m, k);
  size_t si = pow_size(m, vi), sj = pow_size(m, vj);
  for (size_t c = 0; c < cells; ++c)
    if ((c / si) % m == (c / sj) % m) b.set(c);
  return b;
}

Bitset cylindrify(const Bitset& a, int m, int k, int var) {
  size_t cells = pow_size(m, k);
  size_t stride = pow_size(m, var);
  Bitset r(cells);
  for (size_t c = 0; c < cells; ++c) {
    if (!a.get(c)) continue;
    size_t base = c - ((c / stride) % m) * stride;
    for (int d = 0; d < m; ++d) r.set(base + d * stride);
  }
  return r;
}

Bitset atom_meaning(const FOModel& model, const SimilarityType& t, int k, int rel,
                    const std::vector<int>& idx) {
  int m = model.size;
  size_t cells = pow_size(m, k);
  Bitset b(cells);
  std::vector<int> tuple(idx.size());
  for (size_t c = 0; c < cells; ++c) {
    for (size_t pos = 0; pos < idx.size(); ++pos)
      tuple[pos] = static_cast<int>((c / pow_size(m, idx[pos])) % m);
    if (model.holds(rel, tuple, t)) b.set(c);
  }
  return b;
}

}  // namespace

Bitset eval_meaning(const FOModel& model, const SimilarityType& t, int k, const Formula& f) {
  int m = model.size;
  size_t cells = pow_size(m, k);
  if (f.is_atom()) {
    auto parsed = parse_fol_atom(f.head(), t);
    if (!parsed) throw Error("UnknownAtom", f.head());
    for (int v : parsed->second)
      if (v >= k) throw Error("ArityVsVariables", f.head() + " uses variable v" + std::to_string(v));
    return atom_meaning(model, t, k, parsed->first, parsed->second);
  }
  const std::string& op = f.head();
  if (op == "and") return eval_meaning(model, t, k, f.args()[0]) & eval_meaning(model, t, k, f.args()[1]);
  if (op == "not") return eval_meaning(model, t, k, f.args()[0]).complement();
  if (op == "bot") return Bitset(cells);
  if (op[0] == 'E') {
    int var = std::stoi(op.substr(1));
    return cylindrify(eval_meaning(model, t, k, f.args()[0]), m, k, var);
  }
  if (op.rfind("eq", 0) == 0) {
    std::string rest = op.substr(2);
    auto us = rest.find('_');
    int i, j;
    if (us != std::string::npos) {
      i = std::stoi(rest.substr(0, us));
      j = std::stoi(rest.substr(us + 1));
    } else {
      i = rest[0] - '0';
      j = rest[1] - '0';
    }
    return diagonal(m, k, i, j);
  }
  throw Error("UnknownOp", op);
}

ConceptAlgebra build_concept_algebra(const FOModel& model, const SimilarityType& t, int k,
                                     size_t element_budget) {
  int m = model.size;
  size_t cells = pow_size(m, k);
  if (cells > (1u << 20)) throw Error("BudgetExceeded", "assignment space m^k too large");

  Signature sig = fol_signature(k);
  std::vector<std::string> atoms = fol_atoms(t, k);

  ConceptAlgebra ca;
  ca.m = m;
  ca.k = k;

  std::map<std::vector<uint64_t>, int> index;
  auto intern = [&](const Bitset& b) {
    auto it = index.find(b.w);
    if (it != index.end()) return it->second;
    if (ca.elements.size() >= element_budget)
      throw Error("BudgetExceeded", "concept algebra exceeds element budget");
    int id = static_cast<int>(ca.elements.size());
    index.emplace(b.w, id);
    ca.elements.push_back(b);
    return id;
  };

  for (const auto& a : atoms) {
    auto parsed = parse_fol_atom(a, t);
    ca.atom_meaning.push_back(intern(atom_meaning(model, t, k, parsed->first, parsed->second)));
  }
  intern(Bitset(cells));  // bot
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) intern(diagonal(m, k, i, j));

  // closure under not, and, and cylindrifications
  for (size_t head = 0; head < ca.elements.size(); ++head) {
    Bitset h = ca.elements[head];
    intern(h.complement());
    for (int v = 0; v < k; ++v) intern(cylindrify(h, m, k, v));
    for (size_t other = 0; other <= head; ++other) {
      intern(h & ca.elements[other]);
      intern(ca.elements[other] & h);
    }
  }

  int n = static_cast<int>(ca.elements.size());
  std::vector<std::vector<int>> tables;
  for (const auto& op : sig.ops()) {
    std::vector<int> table;
    if (op.name == "and") {
      table.resize(static_cast<size_t>(n) * n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          table[static_cast<size_t>(a) * n + b] = index.at((ca.elements[a] & ca.elements[b]).w);
    } else if (op.name == "not") {
      table.resize(n);
      for (int a = 0; a < n; ++a) table[a] = index.at(ca.elements[a].complement().w);
    } else if (op.name == "bot") {
      table = {index.at(Bitset(cells).w)};
    } else if (op.name[0] == 'E') {
      int var = std::stoi(op.name.substr(1));
      table.resize(n);
      for (int a = 0; a < n; ++a) table[a] = index.at(cylindrify(ca.elements[a], m, k, var).w);
    } else {  // diagonal constant
      std::string rest = op.name.substr(2);
      auto us = rest.find('_');
      int i = us != std::string::npos ? std::stoi(rest.substr(0, us)) : rest[0] - '0';
      int j = us != std::string::npos ? std::stoi(rest.substr(us + 1)) : rest[1] - '0';
      table = {index.at(diagonal(m, k, i, j).w)};
    }
    tables.push_back(std::move(table));
  }
  ca.algebra = std::make_shared<FiniteAlgebra>(sig, n, std::move(tables),
                                               "concept[m=" + std::to_string(m) + "]");
  return ca;
}

int ConceptAlgebra::element_of(const Bitset& b) const {
  for (size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == b) return static_cast<int>(i);
  return -1;
}

int ConceptAlgebra::full_element() const {
  size_t cells = pow_size(m, k);
  Bitset full(cells);
  for (size_t c = 0; c < cells; ++c) full.set(c);
  return element_of(full);
}

FolLogic build_presented_fol(const std::vector<FOModel>& models,
                             const std::vector<std::string>& labels, const SimilarityType& t,
                             int k, size_t element_budget, const std::string& name) {
  if (models.empty()) throw Error("InvariantViolation", "fol logic needs models");
  for (const auto& [name, arity] : t.relations)
    if (arity < 1) throw Error("InvariantViolation", "nullary relation " + name);
  FolLogic out;
  out.type = t;
  out.k = k;
  out.fomodels = models;
  std::vector<std::string> atoms = fol_atoms(t, k);
  std::vector<ModelPresentation> presentations;
  for (size_t i = 0; i < models.size(); ++i) {
    ConceptAlgebra ca = build_concept_algebra(models[i], t, k, element_budget);
    ModelPresentation mp;
    mp.label = i < labels.size() ? labels[i] : "m" + std::to_string(i);
    mp.algebra = ca.algebra;
    mp.assignment = ca.atom_meaning;
    mp.designated = {ca.full_element()};
    presentations.push_back(std::move(mp));
    out.concepts.push_back(std::move(ca));
  }
  out.logic = std::make_shared<PresentedLogic>(name, atoms, fol_signature(k),
                                               std::move(presentations));
  return out;
}

uint64_t BoundedModelSpace::models_of_size(int m) const {
  uint64_t bits = 0;
  for (const auto& [name, arity] : t.relations) bits += pow_size(m, arity);
  if (bits >= 62) throw Error("BudgetExceeded", "bounded model space too large");
  return uint64_t(1) << bits;
}

uint64_t BoundedModelSpace::total() const {
  uint64_t sum = 0;
  for (int m = 1; m <= max_size; ++m) {
    uint64_t c = models_of_size(m);
    if (sum + c < sum) throw Error("BudgetExceeded", "bounded model space too large");
    sum += c;
  }
  return sum;
}

std::pair<int, uint64_t> BoundedModelSpace::locate(uint64_t index) const {
  for (int m = 1; m <= max_size; ++m) {
    uint64_t c = models_of_size(m);
    if (index < c) return {m, index};
    index -= c;
  }
  throw Error("IndexOutOfRange", "model index beyond space");
}

FOModel BoundedModelSpace::decode(int m, uint64_t code) const {
  FOModel model;
  model.size = m;
  for (const auto& [name, arity] : t.relations) {
    size_t cells = pow_size(m, arity);
    Bitset b(cells);
    for (size_t c = 0; c < cells; ++c) {
      if (code & 1) b.set(c);
      code >>= 1;
    }
    model.relations.push_back(std::move(b));
  }
  return model;
}

namespace {

// Compiled evaluator for assignment spaces of <= 64 cells; meanings and
// relation masks live in single words.
struct SmallTape {
  enum Kind { kAtom, kAnd, kNot, kBot, kConst, kExists };
  struct Ins {
    Kind kind;
    int a = -1, b = -1;
    int rel = -1;
    std::vector<uint64_t> scatter;  // kAtom: per relation-cell mask of assignment cells
    std::vector<uint64_t> groups;   // kExists: cylinder masks
    uint64_t constant = 0;
  };
  std::vector<Ins> ins;
  uint64_t universe = 0;

  uint64_t eval(const std::vector<uint64_t>& rels, std::vector<uint64_t>& regs) const {
    regs.resize(ins.size());
    for (size_t i = 0; i < ins.size(); ++i) {
      const Ins& s = ins[i];
      switch (s.kind) {
        case kAtom: {
          uint64_t r = 0, bits = rels[s.rel];
          while (bits) {
            int t = __builtin_ctzll(bits);
            r |= s.scatter[t];
            bits &= bits - 1;
          }
          regs[i] = r;
          break;
        }
        case kAnd:
          regs[i] = regs[s.a] & regs[s.b];
          break;
        case kNot:
          regs[i] = ~regs[s.a] & universe;
          break;
        case kBot:
          regs[i] = 0;
          break;
        case kConst:
          regs[i] = s.constant;
          break;
        case kExists: {
          uint64_t v = regs[s.a], r = 0;
          for (uint64_t g : s.groups)
            if (v & g) r |= g;
          regs[i] = r;
          break;
        }
      }
    }
    return regs.back();
  }
};

int compile_into(const Formula& f, const SimilarityType& t, int k, int m, SmallTape& tape) {
  size_t cells = pow_size(m, k);
  auto add = [&](SmallTape::Ins ins) {
    tape.ins.push_back(std::move(ins));
    return static_cast<int>(tape.ins.size() - 1);
  };
  if (f.is_atom()) {
    auto parsed = parse_fol_atom(f.head(), t);
    if (!parsed) throw Error("UnknownAtom", f.head());
    SmallTape::Ins ins;
    ins.kind = SmallTape::kAtom;
    ins.rel = parsed->first;
    size_t rel_cells = pow_size(m, t.relations[parsed->first].second);
    ins.scatter.assign(rel_cells, 0);
    for (size_t c = 0; c < cells; ++c) {
      size_t tuple_cell = 0, stride = 1;
      for (int v : parsed->second) {
        tuple_cell += ((c / pow_size(m, v)) % m) * stride;
        stride *= m;
      }
      ins.scatter[tuple_cell] |= uint64_t(1) << c;
    }
    return add(std::move(ins));
  }
  const std::string& op = f.head();
  if (op == "and") {
    int a = compile_into(f.args()[0], t, k, m, tape);
    int b = compile_into(f.args()[1], t, k, m, tape);
    SmallTape::Ins ins;
    ins.kind = SmallTape::kAnd;
    ins.a = a;
    ins.b = b;
    return add(std::move(ins));
  }
  if (op == "not") {
    int a = compile_into(f.args()[0], t, k, m, tape);
    SmallTape::Ins ins;
    ins.kind = SmallTape::kNot;
    ins.a = a;
    return add(std::move(ins));
  }
  if (op == "bot") {
    SmallTape::Ins ins;
    ins.kind = SmallTape::kBot;
    return add(std::move(ins));
  }
  if (op[0] == 'E') {
    int var = std::stoi(op.substr(1));
    int a = compile_into(f.args()[0], t, k, m, tape);
    SmallTape::Ins ins;
    ins.kind = SmallTape::kExists;
    ins.a = a;
    size_t stride = pow_size(m, var);
    std::vector<bool> done(cells, false);
    for (size_t c = 0; c < cells; ++c) {
      if (done[c]) continue;
      size_t base = c - ((c / stride) % m) * stride;
      uint64_t g = 0;
      for (int d = 0; d < m; ++d) {
        size_t cc = base + d * stride;
        g |= uint64_t(1) << cc;
        done[cc] = true;
      }
      ins.groups.push_back(g);
    }
    return add(std::move(ins));
  }
  // diagonal constant
  Bitset d = eval_meaning(FOModel{m, std::vector<Bitset>(t.relations.size(), Bitset(1))}, t, k, f);
  SmallTape::Ins ins;
  ins.kind = SmallTape::kConst;
  ins.constant = d.w.empty() ? 0 : d.w[0];
  return add(std::move(ins));
}

SmallTape compile_formula(const Formula& f, const SimilarityType& t, int k, int m) {
  size_t cells = pow_size(m, k);
  if (cells > 64) throw Error("BudgetExceeded", "compiled evaluator needs m^k <= 64");
  for (const auto& [name, arity] : t.relations)
    if (pow_size(m, arity) > 64)
      throw Error("BudgetExceeded", "compiled evaluator needs m^arity <= 64");
  SmallTape tape;
  tape.universe = cells == 64 ? ~uint64_t(0) : (uint64_t(1) << cells) - 1;
  compile_into(f, t, k, m, tape);
  return tape;
}

}  // namespace

BoundedResult taut_equivalent_bounded(const SimilarityType& t, int k, const Formula& phi,
                                      const Formula& psi, int max_size, ExecPolicy policy) {
  if (max_size < 1) throw Error("BudgetExceeded", "maxSize must be at least 1");
  BoundedModelSpace space{t, max_size};
  BoundedResult out;
  out.checked_up_to = max_size;
  uint64_t offset = 0;
  for (int m = 1; m <= max_size; ++m) {
    SmallTape tape_phi = compile_formula(phi, t, k, m);
    SmallTape tape_psi = compile_formula(psi, t, k, m);
    uint64_t count = space.models_of_size(m);
    size_t nrel = t.relations.size();
    std::vector<int> shifts(nrel), widths(nrel);
    int shift = 0;
    for (size_t r = 0; r < nrel; ++r) {
      shifts[r] = shift;
      widths[r] = static_cast<int>(pow_size(m, t.relations[r].second));
      shift += widths[r];
    }
    // scan in chunks: the hot loop stays free of function-call indirection,
    // and the least hit within the least hit chunk is the global least
    const uint64_t chunk = uint64_t(1) << 14;
    const uint64_t nchunks = (count + chunk - 1) / chunk;
    std::vector<uint64_t> chunk_hit(nchunks, ~uint64_t(0));
    auto scan_chunk = [&](uint64_t ci) {
      std::vector<uint64_t> rels(nrel), regs1, regs2;
      uint64_t lo = ci * chunk;
      uint64_t hi = std::min(lo + chunk, count);
      for (uint64_t code = lo; code < hi; ++code) {
        for (size_t r = 0; r < nrel; ++r)
          rels[r] = (code >> shifts[r]) &
                    (widths[r] == 64 ? ~uint64_t(0) : (uint64_t(1) << widths[r]) - 1);
        if (tape_phi.eval(rels, regs1) != tape_psi.eval(rels, regs2)) {
          chunk_hit[ci] = code;
          return true;
        }
      }
      return false;
    };
    auto hit = find_first(nchunks, scan_chunk, policy);
    if (hit) {
      out.refuted = true;
      out.model_index = offset + chunk_hit[*hit];
      out.model = space.decode(m, chunk_hit[*hit]);
      Bitset a = eval_meaning(out.model, t, k, phi);
      Bitset b = eval_meaning(out.model, t, k, psi);
      for (size_t c = 0; c < a.bits; ++c)
        if (a.get(c) != b.get(c)) {
          out.assignment.resize(k);
          for (int v = 0; v < k; ++v) out.assignment[v] = static_cast<int>((c / pow_size(m, v)) % m);
          break;
        }
      return out;
    }
    offset += count;
  }
  return out;
}

bool pair_in_kernel(const FOModel& model, const SimilarityType& t, int k, const Formula& phi,
                    const Formula& psi) {
  return eval_meaning(model, t, k, phi) == eval_meaning(model, t, k, psi);
}

namespace {

Formula eq_formula(int i, int j) { return Formula::app(fol_eq_name(i, j), {}); }

Formula exists(int var, Formula f) {
  return Formula::app("E" + std::to_string(var), {std::move(f)});
}

Formula conj(std::vector<Formula> fs) {
  if (fs.empty()) throw Error("InvariantViolation", "empty conjunction");
  Formula out = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) out = Formula::app("and", {fs[i], out});
  return out;
}

}  // namespace

Formula restricted_rewrite(const std::string& rel, const std::vector<int>& idx, int n, int k) {
  if (static_cast<int>(idx.size()) != n)
    throw Error("ArityMismatch", "index tuple length differs from arity");
  for (int v : idx)
    if (v < 0 || v >= k) throw Error("ArityVsVariables", "atom uses a variable beyond v" +
                                                             std::to_string(k - 1));
  if (n > k) throw Error("NoSpareVariables", "arity exceeds the variable supply");

  std::vector<int> target(n);
  std::iota(target.begin(), target.end(), 0);
  std::vector<int> b = idx;
  // steps (s, x): wrap E_s(eq(s,x) and .) around the current formula, where
  // the inner atom has the occurrences renamed from x to s
  std::vector<std::pair<int, int>> steps;
  while (b != target) {
    int p = 0;
    while (b[p] == p) ++p;
    bool p_used = std::find(b.begin(), b.end(), p) != b.end();
    if (p_used) {
      // vacate v_p: rename every occurrence to the least unused variable
      int s = -1;
      for (int cand = 0; cand < k && s < 0; ++cand)
        if (std::find(b.begin(), b.end(), cand) == b.end()) s = cand;
      if (s < 0)
        throw Error("NoSpareVariables",
                    fol_atom_name(rel, idx) + " admits no restricted equivalent with " +
                        std::to_string(k) + " variables");
      steps.emplace_back(s, p);
      for (int& v : b)
        if (v == p) v = s;
    } else {
      // set position p to v_p, leaving other occurrences of b[p] in place
      steps.emplace_back(p, b[p]);
      b[p] = p;
    }
  }

  Formula f = Formula::atom(fol_atom_name(rel, target));
  for (size_t i = steps.size(); i-- > 0;) {
    auto [s, x] = steps[i];
    f = exists(s, Formula::app("and", {eq_formula(s, x), f}));
  }
  return f;
}

bool is_restricted(const Formula& f, const SimilarityType& t) {
  if (f.is_atom()) {
    auto parsed = parse_fol_atom(f.head(), t);
    if (!parsed) return false;
    for (size_t i = 0; i < parsed->second.size(); ++i)
      if (parsed->second[i] != static_cast<int>(i)) return false;
    return true;
  }
  for (const auto& a : f.args())
    if (!is_restricted(a, t)) return false;
  return true;
}

std::optional<Formula> simultaneous_rewrite(const std::string& rel, const std::vector<int>& idx,
                                            int n,
                                   int k) {
  // fresh j_0 < ... < j_{n-1}, the first variables not among v_0..v_{n-1}
  // and the index tuple
  std::vector<int> fresh;
  for (int cand = 0; cand < k && static_cast<int>(fresh.size()) < n; ++cand) {
    if (cand < n) continue;
    if (std::find(idx.begin(), idx.end(), cand) != idx.end()) continue;
    fresh.push_back(cand);
  }
  if (static_cast<int>(fresh.size()) < n) return std::nullopt;

  std::vector<int> target(n);
  std::iota(target.begin(), target.end(), 0);
  std::vector<Formula> inner_conj;
  for (int l = 0; l < n; ++l) inner_conj.push_back(eq_formula(l, fresh[l]));
  inner_conj.push_back(Formula::atom(fol_atom_name(rel, target)));
  Formula inner = conj(std::move(inner_conj));
  for (int l = n; l-- > 0;) inner = exists(l, std::move(inner));

  std::vector<Formula> outer_conj;
  for (int l = 0; l < n; ++l) outer_conj.push_back(eq_formula(idx[l], fresh[l]));
  outer_conj.push_back(std::move(inner));
  Formula out = conj(std::move(outer_conj));
  for (int l = n; l-- > 0;) out = exists(fresh[l], std::move(out));
  return out;
}

DtPairs generate_Dt(const SimilarityType& t, int k) {
  DtPairs out;
  for (const auto& [name, arity] : t.relations) {
    if (arity > k) continue;  // the restricted atom itself needs k >= arity
    std::vector<int> target(arity);
    std::iota(target.begin(), target.end(), 0);
    Formula restricted = Formula::atom(fol_atom_name(name, target));
    for (int j = arity; j < k; ++j)
      out.entries.push_back({restricted, exists(j, restricted), 'S'});

    std::vector<int> idx(arity, 0);
    for (;;) {
      bool in_range = *std::max_element(idx.begin(), idx.end()) < k;
      if (in_range) {
        if (idx == target) {
          out.entries.push_back({Formula::atom(fol_atom_name(name, idx)), restricted, 'E'});
        } else if (auto star = simultaneous_rewrite(name, idx, arity, k)) {
          out.entries.push_back({Formula::atom(fol_atom_name(name, idx)), *star, 'E'});
        } else {
          out.skipped_atoms.push_back(fol_atom_name(name, idx));
        }
      }
      int i = arity - 1;
      while (i >= 0 && ++idx[i] == k) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return out;
}

std::vector<int> delta_set(const ConceptAlgebra& ca, int element) {
  std::vector<int> out;
  const Bitset& a = ca.elements[element];
  for (int v = 0; v < ca.k; ++v)
    if (!(cylindrify(a, ca.m, ca.k, v) == a)) out.push_back(v);
  return out;
}

bool is_regular(const ConceptAlgebra& ca, int element) {
  std::vector<int> delta = delta_set(ca, element);
  const Bitset& a = ca.elements[element];
  size_t cells = pow_size(ca.m, ca.k);
  // group cells by their restriction to delta; membership must be constant per group
  std::map<std::vector<int>, bool> seen;
  for (size_t c = 0; c < cells; ++c) {
    std::vector<int> key;
    key.reserve(delta.size());
    for (int v : delta) key.push_back(static_cast<int>((c / pow_size(ca.m, v)) % ca.m));
    auto [it, fresh] = seen.emplace(std::move(key), a.get(c));
    if (!fresh && it->second != a.get(c)) return false;
  }
  return true;
}

Bitset converse(const Bitset& b, int m) {
  Bitset r(b.bits);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (b.get(static_cast<size_t>(u) + static_cast<size_t>(v) * m))
        r.set(static_cast<size_t>(v) + static_cast<size_t>(u) * m);
  return r;
}

}  // namespace ualw
