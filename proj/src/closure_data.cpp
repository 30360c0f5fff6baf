#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>

#include "beam/embedded_data.hpp"
#include "beam/error.hpp"
#include "beam/sbp.hpp"

namespace beam {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Accepts "p/q" rationals and ordinary decimals.
double parse_number(const std::string& token) {
  const auto slash = token.find('/');
  char* end = nullptr;
  if (slash == std::string::npos) {
    const long double v = std::strtold(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw Error(ErrorCode::DataFormat, "bad number '" + token + "'");
    }
    return static_cast<double>(v);
  }
  const std::string num = token.substr(0, slash);
  const std::string den = token.substr(slash + 1);
  const long double p = std::strtold(num.c_str(), &end);
  if (end != num.c_str() + num.size()) throw Error(ErrorCode::DataFormat, "bad numerator '" + token + "'");
  const long double q = std::strtold(den.c_str(), &end);
  if (end != den.c_str() + den.size() || q == 0.0L) {
    throw Error(ErrorCode::DataFormat, "bad denominator '" + token + "'");
  }
  return static_cast<double>(p / q);
}

std::vector<double> parse_list(const std::string& value) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_number(token));
  return out;
}

}  // namespace

int ClosureData::closure_width() const {
  const std::size_t w = std::max({norm.size(), d1.size(), d2.size(), d3.size(),
                                  static_cast<std::size_t>(block.rows())});
  return static_cast<int>(w);
}

ClosureData parse_closure_data(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (!trim(line).empty()) throw Error(ErrorCode::DataFormat, "expected key = value: " + line);
      continue;
    }
    kv[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorCode::DataFormat, "missing key '" + key + "'");
    return it->second;
  };

  ClosureData c;
  c.order = static_cast<int>(parse_number(need("order")));
  c.version = need("version");
  c.interior = parse_list(need("interior"));
  c.norm = parse_list(need("norm"));
  c.d1 = parse_list(need("d1"));
  c.d2 = parse_list(need("d2"));
  c.d3 = parse_list(need("d3"));
  const int b = static_cast<int>(parse_number(need("block_size")));
  if (c.interior.size() % 2 == 0 || b <= 0) throw Error(ErrorCode::DataFormat, "bad stencil or block size");
  c.block.resize(b, b);
  for (int i = 0; i < b; ++i) {
    const auto row = parse_list(need("row" + std::to_string(i)));
    if (static_cast<int>(row.size()) != b) throw Error(ErrorCode::DataFormat, "row length mismatch");
    for (int j = 0; j < b; ++j) c.block(i, j) = row[j];
  }
  if (max_abs(c.block - c.block.transpose()) != 0.0) {
    throw Error(ErrorCode::DataFormat, "boundary block is not symmetric");
  }
  if (static_cast<int>(c.norm.size()) > b || static_cast<int>(c.d3.size()) > b) {
    throw Error(ErrorCode::DataFormat, "closure vectors wider than the boundary block");
  }
  return c;
}

const ClosureData& closure_data(int order) {
  static const std::array<ClosureData, 3> table = [] {
    std::array<ClosureData, 3> t;
    for (const auto& f : embedded::files()) {
      for (int k = 0; k < 3; ++k) {
        if (f.name == "sbp_d4_order" + std::to_string(2 * (k + 1))) t[k] = parse_closure_data(f.text);
      }
    }
    for (int k = 0; k < 3; ++k) {
      if (t[k].order != 2 * (k + 1)) throw Error(ErrorCode::DataFormat, "embedded closure data missing");
    }
    return t;
  }();
  if (order != 2 && order != 4 && order != 6) {
    throw Error(ErrorCode::UnsupportedOrder, "order " + std::to_string(order));
  }
  return table[order / 2 - 1];
}

int minimum_points(int order) { return 2 * closure_data(order).closure_width() + 1; }

}  // namespace beam
