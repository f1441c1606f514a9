#pragma once

#include <stdexcept>

namespace bqc {

// Register or volume request beyond the supported desk-scale caps.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bqc
