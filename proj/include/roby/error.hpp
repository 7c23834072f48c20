#ifndef ROBY_ERROR_HPP
#define ROBY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace roby
{

// Malformed or inconsistent user input (CLI exit code 2).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct zero_division_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Two cyclotomic scalars whose orders cannot be embedded in a common field
// below the configured order cap.
struct incompatible_fields_error : std::domain_error {
    using std::domain_error::domain_error;
};

// An identity that was expected to hold by construction did not (CLI exit code 1).
struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace roby

#endif // ROBY_ERROR_HPP
