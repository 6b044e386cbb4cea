#pragma once

#include <stdexcept>
#include <string>

namespace maxsub {

/// Raised for any precondition violation on caller-supplied data.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace maxsub
