#include "percolab/rational.hpp"

#include <cctype>

#include "percolab/errors.hpp"

namespace percolab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string to_string(const Rational& q) {
  return q.str();
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  auto parse_big = [&](std::string_view s) {
    s = trim(s);
    if (s.empty()) throw ParseError("empty rational component");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw ParseError("bad rational '" + std::string(text) + "'");
    for (std::size_t k = start; k < s.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k])))
        throw ParseError("bad rational '" + std::string(text) + "'");
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  if (slash == std::string_view::npos) return Rational(parse_big(text));
  BigInt den = parse_big(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_big(text.substr(0, slash)), den);
}

}  // namespace percolab
