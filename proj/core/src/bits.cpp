#include "commlab/bits.hpp"

namespace commlab {

std::string Bits::to_string() const {
  std::string s = "{";
  bool first = true;
  for_each_set([&](uint32_t i) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  });
  s += '}';
  return s;
}

}  // namespace commlab
