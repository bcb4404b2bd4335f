#pragma once

#include <stdexcept>
#include <string>

namespace ridg {

/// A numerical failure during a run: singular systems, Newton breakdown,
/// coefficient blow-up.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ridg
