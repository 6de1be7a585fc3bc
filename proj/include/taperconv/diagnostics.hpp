#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace taperconv {

using WarningHandler = std::function<void(std::string_view)>;

// Routes a non-fatal warning to the installed handler (stderr by default).
// Safe to call from worker threads.
void warn(std::string_view message);

// Installs a handler and returns the previous one. Passing an empty
// function restores the stderr default.
WarningHandler set_warning_handler(WarningHandler handler);

// Installs a handler for the lifetime of the guard.
class ScopedWarningHandler {
public:
  explicit ScopedWarningHandler(WarningHandler handler)
      : previous_(set_warning_handler(std::move(handler))) {}
  ~ScopedWarningHandler() { set_warning_handler(std::move(previous_)); }

  ScopedWarningHandler(const ScopedWarningHandler&) = delete;
  ScopedWarningHandler& operator=(const ScopedWarningHandler&) = delete;

private:
  WarningHandler previous_;
};

} // namespace taperconv
