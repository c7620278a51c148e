#include "kbc/ordering.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <map>

#include "kbc/tpdb.hpp"

namespace kbc {

// --- Precedence ------------------------------------------------------------

Precedence::Precedence(std::initializer_list<SymbolPair> pairs) {
  for (const auto& [f, g] : pairs) add(f, g);
}

void Precedence::grow(std::size_t n) {
  if (gt_.size() >= n) return;
  gt_.resize(n);
  for (auto& row : gt_) row.resize(n, 0);
}

void Precedence::add(SymbolId f, SymbolId g) {
  if (!can_add(f, g)) {
    throw OrderingError("precedence pair " + std::to_string(f) + " > " + std::to_string(g) +
                        " creates a cycle");
  }
  if (greater(f, g)) return;
  grow(std::max(f, g) + 1);
  const std::size_t n = gt_.size();
  // Everything at or above f now dominates everything at or below g.
  std::vector<SymbolId> above{f};
  std::vector<SymbolId> below{g};
  for (SymbolId x = 0; x < n; ++x) {
    if (gt_[x][f]) above.push_back(x);
    if (gt_[g][x]) below.push_back(x);
  }
  for (SymbolId a : above) {
    for (SymbolId b : below) gt_[a][b] = 1;
  }
}

std::vector<SymbolPair> Precedence::pairs() const {
  std::vector<SymbolPair> out;
  for (SymbolId f = 0; f < gt_.size(); ++f) {
    for (SymbolId g = 0; g < gt_[f].size(); ++g) {
      if (gt_[f][g]) out.emplace_back(f, g);
    }
  }
  return out;
}

// --- KBO weights -----------------------------------------------------------

KboWeights KboWeights::uniform(const Signature& sig, std::uint32_t w0, std::uint32_t symbol_weight) {
  KboWeights w;
  w.w0_ = w0;
  w.default_ = symbol_weight;
  for (SymbolId f = 0; f < sig.symbol_count(); ++f) {
    w.set_weight(f, symbol_weight);
    w.set_arity(f, sig.symbol(f).arity);
  }
  return w;
}

void KboWeights::set_weight(SymbolId f, std::uint32_t w) {
  if (weights_.size() <= f) weights_.resize(f + 1, default_);
  weights_[f] = w;
}

void KboWeights::set_arity(SymbolId f, std::uint32_t arity) {
  if (arities_.size() <= f) arities_.resize(f + 1, 2);
  arities_[f] = arity;
}

void KboWeights::check_admissible(const Precedence& prec) const {
  if (w0_ == 0) throw OrderingError("KBO variable weight must be positive");
  for (SymbolId f = 0; f < arities_.size(); ++f) {
    if (arities_[f] == 0 && weight(f) < w0_) {
      throw OrderingError("KBO constant " + std::to_string(f) + " weighs less than w0");
    }
    if (arities_[f] == 1 && weight(f) == 0) {
      for (SymbolId g = 0; g < arities_.size(); ++g) {
        if (g != f && !prec.greater(f, g)) {
          throw OrderingError("KBO unary symbol " + std::to_string(f) +
                              " has weight 0 but is not maximal");
        }
      }
    }
  }
}

bool KboWeights::admissible(const Precedence& prec) const {
  try {
    check_admissible(prec);
    return true;
  } catch (const OrderingError&) {
    return false;
  }
}

// --- LPO -------------------------------------------------------------------

namespace {

bool lpo_ge(const Precedence& prec, const Term& s, const Term& t);

bool lpo_dominates_args(const Precedence& prec, const Term& s, const Term& t) {
  for (const Term& tj : t.args()) {
    if (!lpo_gt(prec, s, tj)) return false;
  }
  return true;
}

bool lpo_ge(const Precedence& prec, const Term& s, const Term& t) {
  return s == t || lpo_gt(prec, s, t);
}

}  // namespace

bool lpo_gt(const Precedence& prec, const Term& s, const Term& t) {
  if (s.is_var()) return false;
  if (t.is_var()) return occurs(t.var(), s);
  for (const Term& si : s.args()) {
    if (lpo_ge(prec, si, t)) return true;
  }
  if (s.symbol() != t.symbol()) {
    return prec.greater(s.symbol(), t.symbol()) && lpo_dominates_args(prec, s, t);
  }
  if (!lpo_dominates_args(prec, s, t)) return false;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.arg(i) == t.arg(i)) continue;
    return lpo_gt(prec, s.arg(i), t.arg(i));
  }
  return false;
}

// --- KBO -------------------------------------------------------------------

namespace {

std::uint64_t kbo_weight(const KboWeights& w, const Term& t) {
  if (t.is_var()) return w.variable_weight();
  std::uint64_t sum = w.weight(t.symbol());
  for (const Term& a : t.args()) sum += kbo_weight(w, a);
  return sum;
}

void count_vars(const Term& t, std::map<VarId, long>& counts, long delta) {
  if (t.is_var()) {
    counts[t.var()] += delta;
    return;
  }
  for (const Term& a : t.args()) count_vars(a, counts, delta);
}

bool kbo_gt_unchecked(const KboWeights& w, const Precedence& prec, const Term& s, const Term& t) {
  if (s.is_var() || s == t) return false;
  std::map<VarId, long> counts;
  count_vars(s, counts, 1);
  count_vars(t, counts, -1);
  for (const auto& [v, c] : counts) {
    if (c < 0) return false;
  }
  std::uint64_t ws = kbo_weight(w, s);
  std::uint64_t wt = kbo_weight(w, t);
  if (ws != wt) return ws > wt;
  if (t.is_var()) {
    // s = f^n(t) with f unary of weight zero.
    const Term* cur = &s;
    while (!cur->is_var() && cur->arity() == 1) cur = &cur->arg(0);
    return cur->is_var() && cur->var() == t.var();
  }
  if (s.symbol() != t.symbol()) return prec.greater(s.symbol(), t.symbol());
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.arg(i) == t.arg(i)) continue;
    return kbo_gt_unchecked(w, prec, s.arg(i), t.arg(i));
  }
  return false;
}

}  // namespace

bool kbo_gt(const KboWeights& w, const Precedence& prec, const Term& s, const Term& t) {
  w.check_admissible(prec);
  return kbo_gt_unchecked(w, prec, s, t);
}

std::string describe(const TerminationBackend& backend) {
  if (const auto* kind = std::get_if<OrderKind>(&backend)) {
    return *kind == OrderKind::Lpo ? "lpo" : "kbo";
  }
  return "external:" + std::get<ExternalTool>(backend).command;
}

// --- Internal orientation --------------------------------------------------

OrderState::OrderState(OrderKind kind, KboWeights weights, Limits limits)
    : kind_(kind), weights_(std::move(weights)), limits_(limits) {
  if (kind_ != OrderKind::Kbo) return;
  for (SymbolId f = 0; f < weights_.symbol_count(); ++f) {
    if (weights_.arity(f) != 1 || weights_.weight(f) != 0) continue;
    for (SymbolId g = 0; g < weights_.symbol_count(); ++g) {
      if (g == f || prec_.greater(f, g)) continue;
      if (!prec_.can_add(f, g)) throw OrderingError("KBO admits at most one unary symbol of weight 0");
      prec_.add(f, g);
      seeded_.emplace_back(f, g);
    }
  }
  weights_.check_admissible(prec_);
}

bool OrderState::greater(const Term& s, const Term& t) const { return greater(prec_, s, t); }

bool OrderState::greater(const Precedence& prec, const Term& s, const Term& t) const {
  return kind_ == OrderKind::Lpo ? lpo_gt(prec, s, t) : kbo_gt_unchecked(weights_, prec, s, t);
}

bool OrderState::usable(const Precedence& prec) const {
  return kind_ == OrderKind::Lpo || weights_.admissible(prec);
}

namespace {

void collect_symbols(const Term& t, std::vector<SymbolId>& out) {
  if (t.is_var()) return;
  if (std::find(out.begin(), out.end(), t.symbol()) == out.end()) out.push_back(t.symbol());
  for (const Term& a : t.args()) collect_symbols(a, out);
}

}  // namespace

std::optional<Orientation> OrderState::try_orient(const Term& s, const Term& t) {
  if (s == t) return std::nullopt;
  if (greater(s, t)) return Orientation{true, {}};
  if (greater(t, s)) return Orientation{false, {}};

  std::vector<SymbolId> symbols;
  collect_symbols(s, symbols);
  collect_symbols(t, symbols);
  std::sort(symbols.begin(), symbols.end());
  std::vector<SymbolPair> candidates;
  for (SymbolId f : symbols) {
    for (SymbolId g : symbols) {
      if (f != g && !prec_.comparable(f, g)) candidates.emplace_back(f, g);
    }
  }

  std::size_t evaluations = 0;
  const std::size_t max_size = std::min(limits_.max_extension, candidates.size());
  for (std::size_t k = 1; k <= max_size; ++k) {
    for (bool left_to_right : {true, false}) {
      const Term& bigger = left_to_right ? s : t;
      const Term& smaller = left_to_right ? t : s;
      // Lexicographic enumeration of k-subsets of the candidate list.
      std::vector<std::size_t> pick(k);
      for (std::size_t i = 0; i < k; ++i) pick[i] = i;
      for (;;) {
        Precedence extended = prec_;
        bool consistent = true;
        for (std::size_t i : pick) {
          const auto& [f, g] = candidates[i];
          if (!extended.can_add(f, g)) {
            consistent = false;
            break;
          }
          extended.add(f, g);
        }
        if (consistent && usable(extended)) {
          if (++evaluations > limits_.max_evaluations) return std::nullopt;
          if (greater(extended, bigger, smaller)) {
            Orientation o{left_to_right, {}};
            for (std::size_t i : pick) o.added.push_back(candidates[i]);
            prec_ = std::move(extended);
            return o;
          }
        }
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == candidates.size() - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }
  return std::nullopt;
}

// --- External termination tools --------------------------------------------

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "YES";
    case Verdict::No:
      return "NO";
    case Verdict::Maybe:
      return "MAYBE";
  }
  return "MAYBE";
}

Verdict parse_verdict(std::string_view output) {
  std::string_view line = output.substr(0, output.find('\n'));
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
  std::string upper(line);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "YES") return Verdict::Yes;
  if (upper == "NO") return Verdict::No;
  return Verdict::Maybe;
}

namespace {

struct Pipe {
  int fd[2] = {-1, -1};
  ~Pipe() {
    for (int f : fd) {
      if (f >= 0) ::close(f);
    }
  }
  void close_end(int i) {
    if (fd[i] >= 0) ::close(fd[i]);
    fd[i] = -1;
  }
};

}  // namespace

Verdict external_terminates(const std::string& command, const Signature& sig,
                            std::span<const std::pair<Term, Term>> rules,
                            std::chrono::milliseconds timeout) {
  ::signal(SIGPIPE, SIG_IGN);
  const std::string input = print_trs(sig, rules);

  Pipe in;
  Pipe out;
  if (::pipe(in.fd) != 0 || ::pipe(out.fd) != 0) {
    throw ExternalToolError(std::string("pipe: ") + std::strerror(errno));
  }
  pid_t pid = ::fork();
  if (pid < 0) throw ExternalToolError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in.fd[0], STDIN_FILENO);
    ::dup2(out.fd[1], STDOUT_FILENO);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::close(in.fd[0]);
    ::close(in.fd[1]);
    ::close(out.fd[0]);
    ::close(out.fd[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in.close_end(0);
  out.close_end(1);
  ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::size_t written = 0;
  std::string output;
  bool timed_out = false;
  for (;;) {
    if (written == input.size()) in.close_end(1);
    if (output.find('\n') != std::string::npos) break;
    pollfd fds[2];
    nfds_t n = 0;
    fds[n++] = {out.fd[0], POLLIN, 0};
    if (in.fd[1] >= 0) fds[n++] = {in.fd[1], POLLOUT, 0};
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    int ready = ::poll(fds, n, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    if (n == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t w = ::write(in.fd[1], input.data() + written, input.size() - written);
      if (w > 0) {
        written += static_cast<std::size_t>(w);
      } else if (w < 0 && errno != EAGAIN) {
        written = input.size();  // tool closed its input; stop feeding it
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      char buf[4096];
      ssize_t r = ::read(out.fd[0], buf, sizeof buf);
      if (r <= 0) break;
      output.append(buf, static_cast<std::size_t>(r));
    }
  }

  if (::kill(-pid, SIGKILL) != 0) ::kill(pid, SIGKILL);
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (timed_out) return Verdict::Maybe;
  if (output.empty() && WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    throw ExternalToolError("could not run termination tool: " + command);
  }
  return parse_verdict(output);
}

}  // namespace kbc
