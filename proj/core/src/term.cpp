#include "kbc/term.hpp"

#include <algorithm>
#include <charconv>

namespace kbc {

namespace {

constexpr std::size_t kVarSeed = 0x9e3779b97f4a7c15ull;
constexpr std::size_t kAppSeed = 0xc2b2ae3d27d4eb4full;

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace

// --- Term ------------------------------------------------------------------

Term Term::variable(VarId v) {
  auto node = std::make_shared<Node>();
  node->is_var = true;
  node->id = v;
  node->var_bound = v + 1;
  node->hash = mix(kVarSeed, v);
  return Term(std::move(node));
}

Term Term::apply(SymbolId f, std::vector<Term> args) {
  auto node = std::make_shared<Node>();
  node->id = f;
  std::size_t h = mix(kAppSeed, f);
  std::uint32_t size = 1;
  std::uint32_t depth = 0;
  VarId bound = 0;
  for (const Term& a : args) {
    size += a.size();
    depth = std::max(depth, a.depth());
    bound = std::max(bound, a.var_bound());
    h = mix(h, a.hash());
  }
  node->args = std::move(args);
  node->size = size;
  node->depth = depth + 1;
  node->var_bound = bound;
  node->hash = mix(h, node->args.size());
  return Term(std::move(node));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.is_var() != b.is_var() ||
      a.node_->id != b.node_->id || a.arity() != b.arity()) {
    return false;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.arg(i) == b.arg(i))) return false;
  }
  return true;
}

// --- Signature -------------------------------------------------------------

SymbolId Signature::intern(std::string_view name, std::uint32_t arity) {
  if (name.empty()) throw SignatureError("empty symbol name");
  std::string key(name);
  if (var_ids_.contains(key)) {
    throw SignatureError("'" + key + "' is declared as a variable");
  }
  if (auto it = symbol_ids_.find(key); it != symbol_ids_.end()) {
    if (symbols_[it->second].arity != arity) {
      throw SignatureError("symbol '" + key + "' used with arity " + std::to_string(arity) +
                           " and " + std::to_string(symbols_[it->second].arity));
    }
    return it->second;
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back({key, arity});
  symbol_ids_.emplace(std::move(key), id);
  return id;
}

std::optional<SymbolId> Signature::find(std::string_view name) const {
  if (auto it = symbol_ids_.find(std::string(name)); it != symbol_ids_.end()) return it->second;
  return std::nullopt;
}

VarId Signature::variable(std::string_view name) {
  if (name.empty()) throw SignatureError("empty variable name");
  std::string key(name);
  if (symbol_ids_.contains(key)) {
    throw SignatureError("'" + key + "' is already a function symbol");
  }
  if (auto it = var_ids_.find(key); it != var_ids_.end()) return it->second;
  auto id = static_cast<VarId>(var_names_.size());
  var_names_.push_back(key);
  var_ids_.emplace(std::move(key), id);
  return id;
}

std::optional<VarId> Signature::find_variable(std::string_view name) const {
  if (auto it = var_ids_.find(std::string(name)); it != var_ids_.end()) return it->second;
  return std::nullopt;
}

std::string Signature::variable_name(VarId v) const {
  if (v < var_names_.size()) return var_names_[v];
  std::string name = "x" + std::to_string(v);
  while (var_ids_.contains(name) || symbol_ids_.contains(name)) name.insert(0, "_");
  return name;
}

Term Signature::make(SymbolId f, std::vector<Term> args) const {
  if (f >= symbols_.size()) throw SignatureError("unknown symbol id " + std::to_string(f));
  if (args.size() != symbols_[f].arity) {
    throw SignatureError("symbol '" + symbols_[f].name + "' expects " +
                         std::to_string(symbols_[f].arity) + " arguments, got " +
                         std::to_string(args.size()));
  }
  return Term::apply(f, std::move(args));
}

Term Signature::make(std::string_view name, std::vector<Term> args) const {
  auto f = find(name);
  if (!f) throw SignatureError("unknown symbol '" + std::string(name) + "'");
  return make(*f, std::move(args));
}

// --- Position --------------------------------------------------------------

Position Position::child(std::uint32_t i) const {
  Position p = *this;
  p.path_.push_back(i);
  return p;
}

std::string Position::to_string() const {
  if (path_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path_[i]);
  }
  return out;
}

Position Position::parse(std::string_view text) {
  std::vector<std::uint32_t> path;
  if (text.empty() || text == "e") return Position();
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    if (dot == std::string_view::npos) dot = text.size();
    std::uint32_t value = 0;
    auto piece = text.substr(start, dot - start);
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || ptr != piece.data() + piece.size() || value == 0) {
      throw InvalidPosition("malformed position '" + std::string(text) + "'");
    }
    path.push_back(value);
    start = dot + 1;
  }
  return Position(std::move(path));
}

// --- Substitution ----------------------------------------------------------

Substitution::Substitution(std::initializer_list<Binding> bindings) {
  for (const auto& [v, t] : bindings) bind(v, t);
}

const Term* Substitution::lookup(VarId v) const {
  for (const auto& b : bindings_) {
    if (b.first == v) return &b.second;
  }
  return nullptr;
}

void Substitution::bind(VarId v, Term t) {
  auto it = std::find_if(bindings_.begin(), bindings_.end(),
                         [v](const Binding& b) { return b.first == v; });
  if (t.is_var() && t.var() == v) {
    if (it != bindings_.end()) bindings_.erase(it);
    return;
  }
  if (it != bindings_.end()) {
    it->second = std::move(t);
  } else {
    bindings_.emplace_back(v, std::move(t));
  }
}

void Substitution::assign(VarId v, Term t) {
  auto it = std::find_if(bindings_.begin(), bindings_.end(),
                         [v](const Binding& b) { return b.first == v; });
  if (it != bindings_.end()) {
    it->second = std::move(t);
  } else {
    bindings_.emplace_back(v, std::move(t));
  }
}

namespace {

bool identity(const Substitution::Binding& b) { return b.second.is_var() && b.second.var() == b.first; }

}  // namespace

std::vector<VarId> Substitution::domain() const {
  std::vector<VarId> out;
  out.reserve(bindings_.size());
  for (const auto& b : bindings_) {
    if (!identity(b)) out.push_back(b.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const Substitution& a, const Substitution& b) {
  const auto covered = [](const Substitution& x, const Substitution& y) {
    for (const auto& binding : x.bindings_) {
      if (identity(binding)) continue;
      const Term* other = y.lookup(binding.first);
      if (!other || !(*other == binding.second)) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

Term apply(const Substitution& sigma, const Term& t) {
  if (sigma.empty() || t.ground()) return t;
  if (t.is_var()) {
    const Term* b = sigma.lookup(t.var());
    return b ? *b : t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(apply(sigma, a));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::apply(t.symbol(), std::move(args)) : t;
}

Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  for (const auto& [v, t] : first.bindings()) out.bind(v, apply(second, t));
  for (const auto& [v, t] : second.bindings()) {
    if (!first.contains(v)) out.bind(v, t);
  }
  return out;
}

// --- Positions -------------------------------------------------------------

bool valid_position(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::uint32_t i : p.path()) {
    if (cur->is_var() || i == 0 || i > cur->arity()) return false;
    cur = &cur->arg(i - 1);
  }
  return true;
}

Term subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::uint32_t i : p.path()) {
    if (cur->is_var() || i == 0 || i > cur->arity()) {
      throw InvalidPosition("position " + p.to_string() + " does not exist");
    }
    cur = &cur->arg(i - 1);
  }
  return *cur;
}

namespace {

Term replace_from(const Term& t, const std::vector<std::uint32_t>& path, std::size_t depth,
                  Term s, const Position& p) {
  if (depth == path.size()) return s;
  std::uint32_t i = path[depth];
  if (t.is_var() || i == 0 || i > t.arity()) {
    throw InvalidPosition("position " + p.to_string() + " does not exist");
  }
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[i - 1] = replace_from(args[i - 1], path, depth + 1, std::move(s), p);
  return Term::apply(t.symbol(), std::move(args));
}

void collect_positions(const Term& t, std::vector<std::uint32_t>& path, bool functions_only,
                       std::vector<Position>& out) {
  if (t.is_var()) {
    if (!functions_only) out.emplace_back(path);
    return;
  }
  out.emplace_back(path);
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    path.push_back(i + 1);
    collect_positions(t.arg(i), path, functions_only, out);
    path.pop_back();
  }
}

}  // namespace

Term replace_at(const Term& t, const Position& p, Term s) {
  return replace_from(t, p.path(), 0, std::move(s), p);
}

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  std::vector<std::uint32_t> path;
  collect_positions(t, path, false, out);
  return out;
}

std::vector<Position> function_positions(const Term& t) {
  std::vector<Position> out;
  std::vector<std::uint32_t> path;
  collect_positions(t, path, true, out);
  return out;
}

std::uint32_t term_size(const Term& t) { return t.size(); }

std::vector<VarId> variables(const Term& t) {
  std::vector<VarId> out;
  if (t.ground()) return out;
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->ground()) continue;
    if (cur->is_var()) {
      if (std::find(out.begin(), out.end(), cur->var()) == out.end()) out.push_back(cur->var());
      continue;
    }
    for (std::size_t i = cur->arity(); i-- > 0;) stack.push_back(&cur->arg(i));
  }
  return out;
}

bool occurs(VarId v, const Term& t) {
  if (t.var_bound() <= v) return false;
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->var_bound() <= v) continue;
    if (cur->is_var()) {
      if (cur->var() == v) return true;
      continue;
    }
    for (const Term& a : cur->args()) stack.push_back(&a);
  }
  return false;
}

// --- Unification and matching ---------------------------------------------

namespace {

// Follows variable bindings of a triangular substitution.
Term walk(Term t, const Substitution& tri) {
  while (t.is_var()) {
    const Term* b = tri.lookup(t.var());
    if (!b) break;
    t = *b;
  }
  return t;
}

bool occurs_under(VarId v, const Term& t, const Substitution& tri) {
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term cur = walk(stack.back(), tri);
    stack.pop_back();
    if (cur.ground()) continue;
    if (cur.is_var()) {
      if (cur.var() == v) return true;
      continue;
    }
    for (const Term& a : cur.args()) stack.push_back(a);
  }
  return false;
}

Term resolve(const Term& t, const Substitution& tri, std::unordered_map<VarId, Term>& memo) {
  if (t.ground()) return t;
  if (t.is_var()) {
    const Term* b = tri.lookup(t.var());
    if (!b) return t;
    if (auto it = memo.find(t.var()); it != memo.end()) return it->second;
    Term r = resolve(*b, tri, memo);
    memo.emplace(t.var(), r);
    return r;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(resolve(a, tri, memo));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::apply(t.symbol(), std::move(args)) : t;
}

}  // namespace

UnifyResult unify(const Term& s, const Term& t) {
  Substitution tri;
  std::vector<std::pair<Term, Term>> work{{s, t}};
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    a = walk(a, tri);
    b = walk(b, tri);
    if (a == b) continue;
    if (!a.is_var() && b.is_var()) std::swap(a, b);
    if (a.is_var()) {
      if (occurs_under(a.var(), b, tri)) return {std::nullopt, UnifyFailure::OccursCheck};
      tri.bind(a.var(), b);
      continue;
    }
    if (a.symbol() != b.symbol() || a.arity() != b.arity()) {
      return {std::nullopt, UnifyFailure::Clash};
    }
    for (std::size_t i = a.arity(); i-- > 0;) work.emplace_back(a.arg(i), b.arg(i));
  }
  Substitution mgu;
  std::unordered_map<VarId, Term> memo;
  for (const auto& [v, u] : tri.bindings()) mgu.bind(v, resolve(u, tri, memo));
  return {std::move(mgu), UnifyFailure::None};
}

bool match_into(const Term& pattern, const Term& subject, Substitution& sigma) {
  std::vector<std::pair<const Term*, const Term*>> work{{&pattern, &subject}};
  while (!work.empty()) {
    auto [p, s] = work.back();
    work.pop_back();
    if (p->is_var()) {
      if (const Term* b = sigma.lookup(p->var())) {
        if (!(*b == *s)) return false;
      } else {
        sigma.assign(p->var(), *s);
      }
      continue;
    }
    if (s->is_var() || p->symbol() != s->symbol() || p->arity() != s->arity()) return false;
    if (p->ground() && p->same_node(*s)) continue;
    for (std::size_t i = p->arity(); i-- > 0;) work.emplace_back(&p->arg(i), &s->arg(i));
  }
  return true;
}

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  Substitution sigma;
  if (!match_into(pattern, subject, sigma)) return std::nullopt;
  return sigma;
}

// --- Renaming --------------------------------------------------------------

Term rename_apart(const Term& t, std::span<const VarId> avoid) {
  VarId next = t.var_bound();
  for (VarId v : avoid) next = std::max(next, v + 1);
  Substitution renaming;
  for (VarId v : variables(t)) renaming.bind(v, Term::variable(next++));
  return apply(renaming, t);
}

Term shift_variables(const Term& t, VarId offset) {
  if (offset == 0 || t.ground()) return t;
  if (t.is_var()) return Term::variable(t.var() + offset);
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(shift_variables(a, offset));
  return Term::apply(t.symbol(), std::move(args));
}

Substitution canonical_renaming(std::span<const Term> terms) {
  std::vector<VarId> order;
  for (const Term& t : terms) {
    for (VarId v : variables(t)) {
      if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    }
  }
  // apply() is simultaneous, so overlapping source and target ids are fine.
  Substitution renaming;
  for (VarId i = 0; i < order.size(); ++i) renaming.bind(order[i], Term::variable(i));
  return renaming;
}

bool is_variant(const Term& a, const Term& b) {
  if (a.size() != b.size()) return false;
  Term ca = apply(canonical_renaming(std::span(&a, 1)), a);
  Term cb = apply(canonical_renaming(std::span(&b, 1)), b);
  return ca == cb;
}

namespace {

void print(const Term& t, const Signature& sig, std::string& out) {
  if (t.is_var()) {
    out += sig.variable_name(t.var());
    return;
  }
  out += sig.symbol(t.symbol()).name;
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print(t.arg(i), sig, out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const Term& t, const Signature& sig) {
  std::string out;
  print(t, sig, out);
  return out;
}

}  // namespace kbc
