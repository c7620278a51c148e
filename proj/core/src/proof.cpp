#include "kbc/proof.hpp"

#include <ostream>
#include <sstream>

namespace kbc {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

class Writer {
 public:
  Writer(std::ostream& out, const Signature& sig) : out_(out), sig_(sig) {}

  void open(std::string_view tag) {
    indent();
    out_ << '<' << tag << ">\n";
    ++depth_;
  }
  void close(std::string_view tag) {
    --depth_;
    indent();
    out_ << "</" << tag << ">\n";
  }
  void leaf(std::string_view tag, std::string_view text) {
    indent();
    out_ << '<' << tag << '>' << escape(text) << "</" << tag << ">\n";
  }
  void leaf(std::string_view tag, std::uint64_t value) { leaf(tag, std::to_string(value)); }

  void term(std::string_view tag, const Term& t) {
    indent();
    out_ << '<' << tag << '>';
    inline_term(t);
    out_ << "</" << tag << ">\n";
  }

  void position(const Position& p) { leaf("position", p.to_string()); }

  void symbol_pairs(std::string_view tag, const std::vector<SymbolPair>& pairs) {
    open(tag);
    for (const auto& [f, g] : pairs) {
      indent();
      out_ << "<greater><name>" << escape(sig_.symbol(f).name) << "</name><name>"
           << escape(sig_.symbol(g).name) << "</name></greater>\n";
    }
    close(tag);
  }

  void rewrites(const std::vector<SideRewrite>& steps) {
    open("rewrites");
    for (const auto& s : steps) {
      indent();
      out_ << "<rewrite><side>" << (s.rhs_side ? "rhs" : "lhs") << "</side><rule>" << s.rule
           << "</rule><position>" << s.position.to_string() << "</position></rewrite>\n";
    }
    close("rewrites");
  }

  void equation(std::string_view tag, Index index, const Term& lhs, const Term& rhs) {
    open(tag);
    leaf("index", index);
    term("lhs", lhs);
    term("rhs", rhs);
    close(tag);
  }

 private:
  void indent() {
    for (int i = 0; i < depth_; ++i) out_ << "  ";
  }

  void inline_term(const Term& t) {
    if (t.is_var()) {
      out_ << "<var>" << escape(sig_.variable_name(t.var())) << "</var>";
      return;
    }
    out_ << "<funapp><name>" << escape(sig_.symbol(t.symbol()).name) << "</name>";
    for (const Term& a : t.args()) {
      out_ << "<arg>";
      inline_term(a);
      out_ << "</arg>";
    }
    out_ << "</funapp>";
  }

  std::ostream& out_;
  const Signature& sig_;
  int depth_ = 0;
};

}  // namespace

void write_proof(std::ostream& out, const ProofTrace& trace, const Signature& sig, Outcome outcome) {
  Writer w(out, sig);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  w.open("completionProof");
  w.leaf("outcome", to_string(outcome));

  w.open("signature");
  for (const Symbol& s : sig.symbols()) {
    w.open("symbol");
    w.leaf("name", s.name);
    w.leaf("arity", s.arity);
    w.close("symbol");
  }
  w.close("signature");

  w.open("order");
  w.leaf("kind", trace.order);
  if (!trace.initial_precedence.empty()) w.symbol_pairs("initialPrecedence", trace.initial_precedence);
  w.symbol_pairs("precedence", trace.precedence);
  if (trace.weights) {
    w.open("weights");
    w.leaf("variableWeight", trace.weights->variable_weight());
    for (SymbolId f = 0; f < sig.symbol_count(); ++f) {
      w.open("weight");
      w.leaf("name", sig.symbol(f).name);
      w.leaf("value", trace.weights->weight(f));
      w.close("weight");
    }
    w.close("weights");
  }
  w.close("order");

  w.open("initial");
  for (const auto& e : trace.initial) w.equation("equation", e.index, e.lhs, e.rhs);
  w.close("initial");

  w.open("steps");
  for (const auto& step : trace.steps) {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, DeduceStep>) {
            w.open("deduce");
            w.leaf("inner", s.inner);
            w.leaf("outer", s.outer);
            w.position(s.position);
            w.term("peak", s.peak);
            w.equation("equation", s.equation, s.lhs, s.rhs);
            w.close("deduce");
          } else if constexpr (std::is_same_v<S, OrientStep>) {
            w.open("orient");
            w.leaf("from", s.equation);
            w.leaf("direction", s.left_to_right ? "lr" : "rl");
            if (s.external) w.leaf("external", "yes");
            w.symbol_pairs("precedence", s.precedence);
            w.equation("rule", s.rule, s.lhs, s.rhs);
            w.close("orient");
          } else if constexpr (std::is_same_v<S, DeleteStep>) {
            w.open("delete");
            w.leaf("from", s.equation);
            if (s.duplicate_of) w.leaf("duplicateOf", *s.duplicate_of);
            w.close("delete");
          } else if constexpr (std::is_same_v<S, SimplifyStep>) {
            w.open("simplify");
            w.leaf("from", s.from);
            w.rewrites(s.rewrites);
            w.equation("equation", s.to, s.lhs, s.rhs);
            w.close("simplify");
          } else if constexpr (std::is_same_v<S, ComposeStep>) {
            w.open("compose");
            w.leaf("from", s.from);
            w.leaf("to", s.to);
            w.rewrites(s.rewrites);
            w.term("rhs", s.rhs);
            w.close("compose");
          } else {
            w.open("collapse");
            w.leaf("from", s.rule);
            w.leaf("by", s.by);
            w.position(s.position);
            w.equation("equation", s.equation, s.lhs, s.rhs);
            w.close("collapse");
          }
        },
        step);
  }
  w.close("steps");

  w.open("rules");
  for (const auto& r : trace.rules) w.equation("rule", r.index, r.lhs, r.rhs);
  w.close("rules");
  w.open("equations");
  for (const auto& e : trace.equations) w.equation("equation", e.index, e.lhs, e.rhs);
  w.close("equations");
  w.close("completionProof");
}

std::string proof_xml(const ProofTrace& trace, const Signature& sig, Outcome outcome) {
  std::ostringstream out;
  write_proof(out, trace, sig, outcome);
  return out.str();
}

}  // namespace kbc
