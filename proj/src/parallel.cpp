#include "taperconv/parallel.hpp"

#include "taperconv/diagnostics.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

namespace taperconv {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TAPERCONV_THREADS")) {
    const std::string_view s(env);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size() && value >= 0) {
      if (value > 0) return value;
    } else {
      warn("ignoring malformed TAPERCONV_THREADS='" + std::string(s) + "'");
    }
  }
  return omp_get_max_threads();
}

} // namespace taperconv
