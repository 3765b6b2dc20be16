#ifndef FEEDSEP_FIXTURES_HPP
#define FEEDSEP_FIXTURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "feedsep/scm.hpp"

namespace feedsep {

std::vector<std::string> fixture_names();

/// Model text of a built-in fixture, if `name` is one.
std::optional<std::string> fixture_text(const std::string& name);

/// neal-fig1: seven binary variables, uniform disturbances, mod-2 equations
///   X1 = U1, X2 = X1 + X3, X3 = X1 + X2, X4 = U4, X5 = U5,
///   X6 = (X2 + X4 + X5)(X7 + 1), X7 = (X2 + X4 + X5) X6.
/// Unique solution for every u, X4 and X5 d-separated by X2 but dependent
/// given X2, and no update schedule converges.
///
/// chain3: X1 -> X2 -> X3. collider3: X1 -> X3 <- X2.
///
/// Throws InputError listing the available names.
Scm fixture(const std::string& name);

}  // namespace feedsep

#endif  // FEEDSEP_FIXTURES_HPP
