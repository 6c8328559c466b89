#pragma once

#include <stdexcept>
#include <string>

namespace fiberfuse {

/// Malformed or out-of-contract input (bad file, bad flag, bad value).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two rasters that must share a canvas do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void check_same_size(int w0, int h0, int w1, int h1, const char* what);

}  // namespace fiberfuse
