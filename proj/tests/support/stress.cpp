#include "stress.hpp"

namespace stress {

namespace {

std::string word(std::size_t n, std::size_t length, char zero, char one, const std::string& inner) {
  std::string out;
  for (std::size_t k = 0; k < length; ++k) out += std::string(1, (n >> k) & 1 ? one : zero) + "(";
  out += inner;
  out += std::string(length, ')');
  return out;
}

}  // namespace

std::string chain_system(std::size_t rules, std::size_t depth) {
  std::string out = "(VAR x)\n(RULES\n";
  const std::size_t words = std::size_t{1} << depth;
  for (std::size_t i = 0; i < rules; ++i) {
    out += "  f" + std::to_string(i) + "(" + word(i % words, depth, 'g', 'h', "x") + ") == f" +
           std::to_string(i + 1) + "(" + word((i + 1) % words, depth, 'g', 'h', "x") + ")\n";
  }
  return out + ")\n";
}

std::string word_system(std::size_t rules, std::size_t length) {
  std::string out = "(VAR x)\n(RULES\n";
  const std::size_t words = std::size_t{1} << length;
  // Odd stride visits every residue once.
  const std::size_t stride = 2 * (words / 3) + 1;
  for (std::size_t i = 0; i < rules && i < words; ++i) {
    out += "  " + word(i * stride % words, length, 'a', 'b', "x") + " -> x\n";
  }
  return out + ")\n";
}

}  // namespace stress
