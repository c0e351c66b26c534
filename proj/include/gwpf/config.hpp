#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "gwpf/brackets.hpp"
#include "gwpf/common.hpp"

namespace gwpf {

// Global sign toggle for the balanced elimination families.  Auto probes the
// positive sign first and falls back to the negative one if the leftover terms
// do not all live in strictly simpler families.
enum class SignMode { Auto, Plus, Minus };

struct Config {
  int degree_cap = 8;      // largest degree the engine accepts
  long q_cap = 6;          // top-level bound in the tau~ search
  long v_cap = -1;         // omega-power bound; -1 means 2*|P(d)|
  SignMode sign_mode = SignMode::Auto;
  int max_bijections = 6;  // refuse the sigma-sum above this many pairings
  // user-named refined profiles for the t{~name} syntax, keyed by name, then
  // by the degree the profile is meant for
  std::map<std::string, std::map<int, RefinedDescendent>> profiles;
};

// Plain key = value lines; '#' starts a comment.  Keys:
//   degree_cap, q_cap, v_cap, max_bijections    integers
//   sign_mode                                   auto | plus | minus
//   tilde.<name>.d<D>                           q:c,q:c,...   (c rational)
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

}  // namespace gwpf
