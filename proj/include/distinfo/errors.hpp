#pragma once

#include <stdexcept>
#include <string>

namespace distinfo {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad index, dead pair, ...).
struct contract_error : error {
    using error::error;
};

// Input data is malformed or out of the accepted numeric range.
struct invalid_input : error {
    using error::error;
};

// An iterative routine failed to converge or produced non-finite values.
struct numerical_error : error {
    using error::error;
};

// The request exceeds a documented size cap (e.g. exhaustive posterior).
struct unsupported_size : error {
    using error::error;
};

// Rejection sampling gave up after the attempt cap.
struct sampling_error : error {
    using error::error;
};

// A file or document could not be parsed.
struct parse_error : error {
    using error::error;
};

}  // namespace distinfo
