#include "minimax/report.hpp"

#include <cstdio>

namespace minimax {

namespace {

void dump_rec(const nlohmann::json& j, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (j.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        dump_rec(it.value(), out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_rec(v, out);
      }
      out += ']';
      break;
    }
    case value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.12e", j.get<double>());
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
  std::string out;
  dump_rec(j, out);
  return out;
}

}  // namespace minimax
