#include "cvinfer/interval.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace cvinfer {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::MSLR: return "mslr";
    case Method::SLR: return "slr";
    case Method::GV1: return "gv1";
    case Method::GV2: return "gv2";
    case Method::GV3: return "gv3";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Method m : {Method::MSLR, Method::SLR, Method::GV1, Method::GV2, Method::GV3}) {
    if (lower == to_string(m)) return m;
  }
  return std::nullopt;
}

}  // namespace cvinfer
