#include "taperconv/version.hpp"

namespace taperconv {

std::string_view version() noexcept { return TAPERCONV_VERSION; }

} // namespace taperconv
