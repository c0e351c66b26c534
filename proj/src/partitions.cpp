#include "gwpf/partitions.hpp"

#include <algorithm>
#include <numeric>

namespace gwpf {

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 1) throw input_error("partition part < 1");
    if (i && parts[i] > parts[i - 1])
      throw input_error("partition parts not weakly decreasing");
  }
}

int Partition::size() const {
  return std::accumulate(parts.begin(), parts.end(), 0);
}

std::string Partition::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts[i]);
  }
  return s + ")";
}

static void enum_rec(int rest, int maxpart, std::vector<int>& cur,
                     std::vector<Partition>& out) {
  if (rest == 0) {
    out.push_back(Partition(cur));
    return;
  }
  for (int p = std::min(rest, maxpart); p >= 1; --p) {
    cur.push_back(p);
    enum_rec(rest - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<Partition> enumerate_partitions(int d) {
  if (d <= 0) throw input_error("enumerate_partitions requires d >= 1");
  std::vector<Partition> out;
  std::vector<int> cur;
  enum_rec(d, d, cur, out);
  return out;
}

Int aut_count(const Partition& mu) {
  Int r = 1;
  size_t i = 0;
  while (i < mu.parts.size()) {
    size_t j = i;
    while (j < mu.parts.size() && mu.parts[j] == mu.parts[i]) ++j;
    r *= factorial(static_cast<long>(j - i));
    i = j;
  }
  return r;
}

Int zfactor(const Partition& mu) {
  Int r = aut_count(mu);
  for (int p : mu.parts) r *= p;
  return r;
}

}  // namespace gwpf
