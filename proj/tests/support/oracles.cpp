#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <stdexcept>

namespace oracle {

namespace {

struct Parser {
  Signature& sig;
  std::string_view text;
  const std::vector<std::string>& vars;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                                 text[pos] == '\'')) {
      ++pos;
    }
    if (start == pos) throw std::runtime_error("bad term: " + std::string(text));
    return std::string(text.substr(start, pos - start));
  }
  Term term() {
    std::string name = ident();
    skip();
    std::vector<Term> args;
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      for (;;) {
        args.push_back(term());
        skip();
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        throw std::runtime_error("bad term: " + std::string(text));
      }
    }
    if (args.empty() && std::find(vars.begin(), vars.end(), name) != vars.end()) {
      return Term::variable(sig.variable(name));
    }
    SymbolId f = sig.intern(name, static_cast<std::uint32_t>(args.size()));
    return Term::apply(f, std::move(args));
  }
};

}  // namespace

Term parse(Signature& sig, std::string_view text, const std::vector<std::string>& vars) {
  Parser p{sig, text, vars};
  return p.term();
}

std::string show(const Term& t, const Signature& sig) {
  if (t.is_var()) return "x" + std::to_string(t.var());
  std::string out = sig.symbol(t.symbol()).name;
  if (t.arity() == 0) return out;
  out += '(';
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    out += show(t.arg(i), sig);
  }
  return out + ')';
}

Term subst(const Subst& s, const Term& t) {
  if (t.is_var()) {
    auto it = s.find(t.var());
    return it == s.end() ? t : it->second;
  }
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(subst(s, a));
  return Term::apply(t.symbol(), std::move(args));
}

Term at(const Term& t, const Path& p) {
  Term cur = t;
  for (auto i : p) cur = cur.arg(i - 1);
  return cur;
}

Term put(const Term& t, const Path& p, const Term& s, std::size_t depth) {
  if (depth == p.size()) return s;
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[p[depth] - 1] = put(args[p[depth] - 1], p, s, depth + 1);
  return Term::apply(t.symbol(), std::move(args));
}

namespace {

void collect_paths(const Term& t, Path& cur, std::vector<Path>& out, bool functions_only) {
  if (!functions_only || !t.is_var()) out.push_back(cur);
  if (t.is_var()) return;
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    cur.push_back(i + 1);
    collect_paths(t.arg(i), cur, out, functions_only);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Path> all_paths(const Term& t) {
  std::vector<Path> out;
  Path cur;
  collect_paths(t, cur, out, false);
  return out;
}

std::vector<Path> function_paths(const Term& t) {
  std::vector<Path> out;
  Path cur;
  collect_paths(t, cur, out, true);
  return out;
}

void vars_of(const Term& t, std::vector<VarId>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.var()) == out.end()) out.push_back(t.var());
    return;
  }
  for (const Term& a : t.args()) vars_of(a, out);
}

VarId max_var_plus_one(const Term& t) {
  std::vector<VarId> vs;
  vars_of(t, vs);
  VarId m = 0;
  for (VarId v : vs) m = std::max(m, v + 1);
  return m;
}

Term shift(const Term& t, VarId offset) {
  if (t.is_var()) return Term::variable(t.var() + offset);
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(shift(a, offset));
  return Term::apply(t.symbol(), std::move(args));
}

std::vector<Term> canonical(const std::vector<Term>& ts) {
  std::vector<VarId> order;
  for (const Term& t : ts) vars_of(t, order);
  Subst s;
  for (VarId i = 0; i < order.size(); ++i) s.emplace(order[i], Term::variable(i));
  std::vector<Term> out;
  for (const Term& t : ts) out.push_back(subst(s, t));
  return out;
}

bool variant(const Term& a, const Term& b) {
  auto ca = canonical({a});
  auto cb = canonical({b});
  return ca[0] == cb[0];
}

namespace {

bool occurs_in(VarId v, const Term& t) {
  if (t.is_var()) return t.var() == v;
  for (const Term& a : t.args()) {
    if (occurs_in(v, a)) return true;
  }
  return false;
}

}  // namespace

Unify unify(const Term& s, const Term& t, Subst* out) {
  std::deque<std::pair<Term, Term>> eqs{{s, t}};
  std::vector<std::pair<VarId, Term>> solved;
  while (!eqs.empty()) {
    auto [a, b] = eqs.front();
    eqs.pop_front();
    if (a == b) continue;  // delete
    if (!a.is_var() && !b.is_var()) {
      if (a.symbol() != b.symbol() || a.arity() != b.arity()) return Unify::Clash;  // clash
      for (std::size_t i = 0; i < a.arity(); ++i) eqs.emplace_back(a.arg(i), b.arg(i));  // decompose
      continue;
    }
    if (!a.is_var()) std::swap(a, b);  // orient
    if (occurs_in(a.var(), b)) return Unify::Occurs;
    // eliminate: substitute everywhere, in the pending and the solved part
    Subst one{{a.var(), b}};
    for (auto& [l, r] : eqs) {
      l = subst(one, l);
      r = subst(one, r);
    }
    for (auto& [v, r] : solved) r = subst(one, r);
    solved.emplace_back(a.var(), b);
  }
  if (out) {
    out->clear();
    for (auto& [v, r] : solved) out->insert_or_assign(v, r);
  }
  return Unify::Ok;
}

namespace {

bool match_rec(const Term& p, const Term& s, Subst& m) {
  if (p.is_var()) {
    auto it = m.find(p.var());
    if (it != m.end()) return it->second == s;
    m.emplace(p.var(), s);
    return true;
  }
  if (s.is_var() || p.symbol() != s.symbol()) return false;
  for (std::size_t i = 0; i < p.arity(); ++i) {
    if (!match_rec(p.arg(i), s.arg(i), m)) return false;
  }
  return true;
}

}  // namespace

std::optional<Subst> match(const Term& pattern, const Term& subject) {
  Subst m;
  if (!match_rec(pattern, subject, m)) return std::nullopt;
  for (auto it = m.begin(); it != m.end();) {
    if (it->second.is_var() && it->second.var() == it->first) {
      it = m.erase(it);
    } else {
      ++it;
    }
  }
  return m;
}

bool encompasses_strictly(const Term& s, const Term& l) {
  if (variant(s, l)) return false;
  for (const Path& p : all_paths(s)) {
    if (oracle::match(l, at(s, p))) return true;
  }
  return false;
}

// --- Orders ----------------------------------------------------------------

bool Prec::add(SymbolId f, SymbolId g) {
  std::size_t n = std::max<std::size_t>({gt.size(), f + 1, g + 1});
  if (n > gt.size()) {
    for (auto& row : gt) row.resize(n, false);
    gt.resize(n, std::vector<bool>(n, false));
  }
  gt[f][g] = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (gt[i][k] && gt[k][j]) gt[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (gt[i][i]) return false;
  }
  return true;
}

bool lpo(const Prec& p, const Term& s, const Term& t) {
  if (s.is_var()) return false;
  if (t.is_var()) return occurs_in(t.var(), s) && !(s == t);
  // (a) some argument of s equals or exceeds t
  for (const Term& si : s.args()) {
    if (si == t || lpo(p, si, t)) return true;
  }
  const auto all_below = [&] {
    for (const Term& tj : t.args()) {
      if (!lpo(p, s, tj)) return false;
    }
    return true;
  };
  // (b) precedence
  if (p.greater(s.symbol(), t.symbol())) return all_below();
  // (c) same head, lexicographic
  if (s.symbol() == t.symbol()) {
    for (std::size_t i = 0; i < s.arity(); ++i) {
      if (s.arg(i) == t.arg(i)) continue;
      return lpo(p, s.arg(i), t.arg(i)) && all_below();
    }
  }
  return false;
}

namespace {

unsigned weight(const Weights& w, const Term& t) {
  if (t.is_var()) return w.w0;
  unsigned sum = w.of(t.symbol());
  for (const Term& a : t.args()) sum += weight(w, a);
  return sum;
}

void count_vars(const Term& t, std::map<VarId, int>& c, int sign) {
  if (t.is_var()) {
    c[t.var()] += sign;
    return;
  }
  for (const Term& a : t.args()) count_vars(a, c, sign);
}

}  // namespace

bool kbo(const Weights& w, const Prec& p, const Term& s, const Term& t) {
  std::map<VarId, int> c;
  count_vars(s, c, 1);
  count_vars(t, c, -1);
  for (auto& [v, n] : c) {
    if (n < 0) return false;
  }
  unsigned ws = weight(w, s);
  unsigned wt = weight(w, t);
  if (ws > wt) return true;
  if (ws < wt || s.is_var()) return false;
  if (t.is_var()) {
    // s = f^n(t) for a unary f chain
    Term cur = s;
    while (!cur.is_var() && cur.arity() == 1) cur = cur.arg(0);
    return cur.is_var() && cur.var() == t.var() && !(s == t);
  }
  if (p.greater(s.symbol(), t.symbol())) return true;
  if (s.symbol() != t.symbol()) return false;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.arg(i) == t.arg(i)) continue;
    return kbo(w, p, s.arg(i), t.arg(i));
  }
  return false;
}

// --- Critical pairs --------------------------------------------------------

std::vector<CpTriple> critical_pairs(const std::vector<RuleTerm>& rules) {
  std::vector<CpTriple> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const RuleTerm& outer = rules[j];
      VarId offset = std::max(max_var_plus_one(outer.lhs), max_var_plus_one(outer.rhs));
      Term il = shift(rules[i].lhs, offset);
      Term ir = shift(rules[i].rhs, offset);
      for (const Path& p : function_paths(outer.lhs)) {
        if (i == j && p.empty()) continue;
        Subst mgu;
        if (unify(il, at(outer.lhs, p), &mgu) != Unify::Ok) continue;
        Term peak = subst(mgu, outer.lhs);
        Term left = subst(mgu, outer.rhs);
        Term right = put(peak, p, subst(mgu, ir));
        auto c = canonical({left, right, peak});
        out.push_back(CpTriple{c[2], c[0], c[1], i, j, p});
      }
    }
  }
  return out;
}

// --- Random generation -----------------------------------------------------

RandomSignature make_signature(Signature& sig, std::size_t constants, std::size_t unary,
                               std::size_t binary, const std::string& prefix) {
  RandomSignature rs;
  for (std::size_t i = 0; i < constants; ++i) rs.constants.push_back(sig.intern(prefix + "c" + std::to_string(i), 0));
  for (std::size_t i = 0; i < unary; ++i) rs.unary.push_back(sig.intern(prefix + "u" + std::to_string(i), 1));
  for (std::size_t i = 0; i < binary; ++i) rs.binary.push_back(sig.intern(prefix + "b" + std::to_string(i), 2));
  return rs;
}

Term random_term(std::mt19937& rng, const RandomSignature& rs, std::size_t depth, std::size_t nvars,
                 double var_bias) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const auto pick = [&](const std::vector<SymbolId>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  const bool leaf = depth <= 1 || (rs.unary.empty() && rs.binary.empty()) || coin(rng) < 0.3;
  if (leaf) {
    if (nvars > 0 && (rs.constants.empty() || coin(rng) < var_bias)) {
      return Term::variable(static_cast<VarId>(std::uniform_int_distribution<std::size_t>(0, nvars - 1)(rng)));
    }
    if (!rs.constants.empty()) return Term::apply(pick(rs.constants));
  }
  bool unary = !rs.unary.empty() && (rs.binary.empty() || coin(rng) < 0.5);
  if (unary) return Term::apply(pick(rs.unary), {random_term(rng, rs, depth - 1, nvars, var_bias)});
  if (!rs.binary.empty()) {
    SymbolId f = pick(rs.binary);
    Term a = random_term(rng, rs, depth - 1, nvars, var_bias);
    Term b = random_term(rng, rs, depth - 1, nvars, var_bias);
    return Term::apply(f, {a, b});
  }
  return Term::variable(0);
}

}  // namespace oracle
