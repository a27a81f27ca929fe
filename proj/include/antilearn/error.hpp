#pragma once

#include <stdexcept>
#include <string>

namespace antilearn {

/// Bad input: malformed files, violated preconditions, unknown names.
/// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training or solving produced non-finite values or a singular system.
/// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace antilearn
