#pragma once

#include <string_view>

namespace taperconv {

std::string_view version() noexcept;

} // namespace taperconv
