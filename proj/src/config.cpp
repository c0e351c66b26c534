#include "gwpf/config.hpp"

#include <fstream>
#include <sstream>

namespace gwpf {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw input_error("trailing junk");
    return x;
  } catch (...) {
    throw input_error("config: bad integer for " + key + ": '" + v + "'");
  }
}

RefinedDescendent parse_profile(const std::string& v, const std::string& key) {
  RefinedDescendent rd;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw input_error("config: " + key + " wants q:c pairs, got '" + item +
                        "'");
    long q = parse_long(trim(item.substr(0, colon)), key);
    if (q < 0) throw input_error("config: negative level in " + key);
    rd.add(static_cast<int>(q), rat_from_string(trim(item.substr(colon + 1))));
  }
  if (rd.is_zero()) throw input_error("config: empty profile for " + key);
  return rd;
}

}  // namespace

Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "config line " + std::to_string(lineno);
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw input_error(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "degree_cap") {
      long x = parse_long(val, key);
      if (x < 1) throw input_error(where + ": degree_cap must be positive");
      cfg.degree_cap = static_cast<int>(x);
    } else if (key == "q_cap") {
      long x = parse_long(val, key);
      if (x < 1) throw input_error(where + ": q_cap must be positive");
      cfg.q_cap = x;
    } else if (key == "v_cap") {
      long x = parse_long(val, key);
      if (x < -1) throw input_error(where + ": v_cap must be >= -1");
      cfg.v_cap = x;
    } else if (key == "max_bijections") {
      long x = parse_long(val, key);
      if (x < 1) throw input_error(where + ": max_bijections must be positive");
      cfg.max_bijections = static_cast<int>(x);
    } else if (key == "sign_mode") {
      if (val == "auto")
        cfg.sign_mode = SignMode::Auto;
      else if (val == "plus")
        cfg.sign_mode = SignMode::Plus;
      else if (val == "minus")
        cfg.sign_mode = SignMode::Minus;
      else
        throw input_error(where + ": sign_mode wants auto|plus|minus, got '" +
                          val + "'");
    } else if (key.rfind("tilde.", 0) == 0) {
      std::string rest = key.substr(6);
      auto dot = rest.rfind('.');
      if (dot == std::string::npos || dot == 0)
        throw input_error(where + ": tilde key wants tilde.<name>.d<D>");
      std::string name = rest.substr(0, dot);
      std::string suffix = rest.substr(dot + 1);
      if (suffix.size() < 2 || suffix[0] != 'd')
        throw input_error(where + ": tilde key wants tilde.<name>.d<D>");
      long d = parse_long(suffix.substr(1), key);
      if (d < 1) throw input_error(where + ": tilde degree must be positive");
      cfg.profiles[name][static_cast<int>(d)] = parse_profile(val, key);
    } else {
      throw input_error(where + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace gwpf
