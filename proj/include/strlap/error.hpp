#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strlap {

/// Invalid input or a violated precondition. The CLI maps this to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AlphabetMismatch : public Error {
public:
    AlphabetMismatch() : Error("strings are over different alphabets") {}
};

/// A configured resource cap (enumeration size, automaton states, integer
/// width) would be exceeded. The CLI maps this to exit code 2.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mixture component lost (almost) all responsibility mass.
class DegenerateComponent : public Error {
public:
    explicit DegenerateComponent(std::size_t component)
        : Error("component " + std::to_string(component) + " has vanishing responsibility mass"),
          component_(component) {}

    std::size_t component() const noexcept { return component_; }

private:
    std::size_t component_;
};

} // namespace strlap
