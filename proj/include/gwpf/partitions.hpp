#pragma once

#include <compare>
#include <string>
#include <vector>

#include "gwpf/common.hpp"

namespace gwpf {

// Integer partition, parts weakly decreasing, all >= 1.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p);

  int size() const;                 // |mu|
  int length() const { return static_cast<int>(parts.size()); }
  auto operator<=>(const Partition&) const = default;

  std::string to_string() const;    // "(3,2,1)"; "()" for the empty partition
};

// All partitions of d in reverse-lexicographic order: (d) first, (1^d) last.
std::vector<Partition> enumerate_partitions(int d);

// prod_k m_k! over part multiplicities.
Int aut_count(const Partition& mu);

// |Aut(mu)| * prod mu_i = centralizer order of a permutation of type mu.
Int zfactor(const Partition& mu);

}  // namespace gwpf
