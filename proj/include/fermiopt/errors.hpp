#pragma once

#include <stdexcept>
#include <string>

namespace fermiopt {

// Exit-code mapping lives in the CLI: InputError -> 2, ResourceError -> 3,
// InvariantError -> 4. ContractError is a caller bug and also maps to 4.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace fermiopt
