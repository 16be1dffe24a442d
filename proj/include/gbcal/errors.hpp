#pragma once

#include <stdexcept>

namespace gbcal {

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gbcal
