#include "conelef/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

#include "conelef/errors.hpp"

namespace conelef {

std::size_t configured_threads() {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("CONE_LEFSCHETZ_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  const std::string_view text(env);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DomainError("CONE_LEFSCHETZ_THREADS must be a non-negative integer, got '" + std::string(text) + "'");
  }
  return value == 0 ? hw : value;
}

}  // namespace conelef
