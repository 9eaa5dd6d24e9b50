#pragma once

#include <stdexcept>
#include <string>

namespace puedet {

// Invalid parameters, malformed input files, or violated invariants.
// The CLI maps this to exit status 1; everything else is a runtime failure (2).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace puedet
