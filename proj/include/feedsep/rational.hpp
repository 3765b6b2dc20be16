#ifndef FEEDSEP_RATIONAL_HPP
#define FEEDSEP_RATIONAL_HPP

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace feedsep {

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Accepts "n", "-n" or "n/d". Throws InputError on anything else or on a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& r);

}  // namespace feedsep

#endif  // FEEDSEP_RATIONAL_HPP
