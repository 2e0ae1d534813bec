#pragma once

#include <stdexcept>
#include <string>

namespace etq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonUnit : Error {
    using Error::Error;
};
struct OffsetMisalignment : Error {
    using Error::Error;
};
struct NotConverged : Error {
    using Error::Error;
};
struct InsufficientSupport : Error {
    using Error::Error;
};
struct InsufficientTruncation : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct PoleDetectionFailure : Error {
    using Error::Error;
};
struct Overflow : Error {
    using Error::Error;
};

}  // namespace etq
