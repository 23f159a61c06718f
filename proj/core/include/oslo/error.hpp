#pragma once

#include <stdexcept>
#include <string>

namespace oslo {

/// Raised for unreadable, unwritable or malformed files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a precondition on an argument does not hold.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the detection pipeline cannot produce a result for an input,
/// e.g. no saliency level yields any intersecting region.
class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace oslo
