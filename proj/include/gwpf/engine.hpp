#pragma once

#include <string>

#include "gwpf/config.hpp"
#include "gwpf/reducer.hpp"

namespace gwpf {

// One-stop entry point: owns the configuration and a reducer, runs a start-up
// self-check (known linear-algebra seed plus two degeneration genus
// identities) so a miscompiled or miswired build fails loudly.
class Engine {
 public:
  explicit Engine(Config cfg = {});

  const Config& config() const { return cfg_; }
  Reducer& reducer() { return red_; }

  const TildeData& tilde(int d) { return red_.tilde(d); }

  // Reduces and, for r = 0 inputs, folds the relative basis to a number.
  ClassExpr reduce(const BracketTerm& t) { return red_.reduce(t); }
  Rat eval0(const BracketTerm& t);

  // "" means the pairing payload of the degree; anything else is looked up
  // in config profiles.
  RefinedDescendent profile(const std::string& name, int d);

 private:
  void self_check();

  Config cfg_;
  Reducer red_;
};

}  // namespace gwpf
