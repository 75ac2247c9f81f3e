#pragma once

#include <stdexcept>
#include <string>

namespace uak {

// Base class for every error thrown by the library. Specific conditions get
// their own subclass so callers can catch them by name.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define UAK_DEFINE_ERROR(Name)                                 \
  struct Name : ::uak::Error {                                 \
    explicit Name(const std::string& what) : Error(what) {}    \
  }

}  // namespace uak
