#include "gwpf/common.hpp"

#include <cctype>

namespace gwpf {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw input_error("empty rational literal");
  size_t slash = s.find('/');
  auto check_int = [&](const std::string& t) {
    if (t.empty()) throw input_error("bad rational literal: " + s);
    size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i == t.size()) throw input_error("bad rational literal: " + s);
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        throw input_error("bad rational literal: " + s);
  };
  if (slash == std::string::npos) {
    check_int(s);
    return Rat(Int(s));
  }
  std::string p = s.substr(0, slash), q = s.substr(slash + 1);
  check_int(p);
  check_int(q);
  Int den(q);
  if (den == 0) throw input_error("zero denominator: " + s);
  return Rat(Int(p), den);
}

}  // namespace gwpf
