#include "feedsep/rational.hpp"

#include <cctype>

#include "feedsep/errors.hpp"

namespace feedsep {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
        throw InputError("malformed rational '" + std::string(text) + "'");
    }
    const cpp_int n{std::string(num)};
    const cpp_int d{std::string(den)};
    if (d == 0) {
        throw InputError("zero denominator in '" + std::string(text) + "'");
    }
    Rational r(n, d);
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace feedsep
