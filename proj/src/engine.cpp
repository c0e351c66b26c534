#include "gwpf/engine.hpp"

#include "gwpf/degeneration.hpp"

namespace gwpf {

Engine::Engine(Config cfg) : cfg_(std::move(cfg)), red_(cfg_) {
  self_check();
}

void Engine::self_check() {
  auto c = solve_linalg(2);
  if (c.size() != 3 || !(c[0] == 2) || !(c[1] == -3) || !(c[2] == 6))
    throw internal_error("self-check: solve_linalg(2) seed mismatch");

  // irreducible degeneration drops the genus by the length of the new profile
  {
    BracketTerm t(1, 2, 1);
    t.tau(0, CohSymbol::omega());
    GenusResult g = genus_of(t);
    if (g.half || g.g != 2)
      throw internal_error("self-check: bad base genus (irreducible)");
    for (const auto& [a, cf] : degenerate_irreducible(t).t) {
      const Bracket& b = *a->br;
      GenusResult g2 = genus_of(b);
      if (g2.half ||
          g2.g != g.g - static_cast<long>(b.profiles.back().length()))
        throw internal_error("self-check: irreducible genus identity failed");
    }
  }

  // separating degeneration: genera and pair count rebalance the total
  {
    BracketTerm t(2, 1, 1);
    t.tau(0, CohSymbol::alpha(2));
    t.tau(0, CohSymbol::beta(2));
    GenusResult g = genus_of(t);
    if (g.half || g.g != 3)
      throw internal_error("self-check: bad base genus (separating)");
    for (const auto& sp : separating_terms(t)) {
      GenusResult g1 = genus_of(sp.left);
      GenusResult g2 = genus_of(sp.right);
      if (g1.half || g2.half) continue;
      if (g1.g + g2.g + sp.pairs - 1 != g.g)
        throw internal_error("self-check: separating genus identity failed");
    }
  }
}

Rat Engine::eval0(const BracketTerm& t) {
  return evaluate_expr(expand_refined(red_.reduce(t)));
}

RefinedDescendent Engine::profile(const std::string& name, int d) {
  if (name.empty()) return red_.tilde(d).tilde;
  auto it = cfg_.profiles.find(name);
  if (it == cfg_.profiles.end())
    throw input_error("unknown payload profile '" + name + "'");
  auto jt = it->second.find(d);
  if (jt == it->second.end())
    throw input_error("payload profile '" + name +
                      "' has no entry for degree " + std::to_string(d));
  return jt->second;
}

}  // namespace gwpf
