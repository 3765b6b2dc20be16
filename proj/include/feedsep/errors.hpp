#ifndef FEEDSEP_ERRORS_HPP
#define FEEDSEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace feedsep {

// Bad ids, overlapping query sets, unknown names.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed the configured state-space cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Conditioning on an event of probability zero.
class UndefinedConditional : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace feedsep

#endif  // FEEDSEP_ERRORS_HPP
