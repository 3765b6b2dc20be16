#ifndef FEEDSEP_MODEL_IO_HPP
#define FEEDSEP_MODEL_IO_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "feedsep/scm.hpp"

namespace feedsep {

/// Base for errors tied to a position in model text. Lines and columns are
/// 1-based; column 0 means "whole line", line 0 means "whole file".
class ModelTextError : public std::runtime_error {
public:
    ModelTextError(std::size_t line, std::size_t column, std::string message, std::string token);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }
    const std::string& token() const { return token_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
    std::string token_;
};

/// Text that does not follow the grammar.
class ParseError : public ModelTextError {
public:
    using ModelTextError::ModelTextError;
};

/// Well-formed text describing an invalid model (self-reference, bad
/// probabilities, wrong table length, ...).
class ValidationError : public ModelTextError {
public:
    using ModelTextError::ModelTextError;
};

/// Line-oriented model format:
///
///     # comment
///     model <name>
///     mod <k>
///     disturbance <U> prob <p0> ... <p(k-1)>
///     var <X> [noise <U>] = <expr>
///     var <X> parents <X...> noise <U> table <v...>
///
/// expr := term ('+' term)*, term := factor ('*' factor)*,
/// factor := INT | IDENT | '(' expr ')'. Without `noise`, variable X<s>
/// owns disturbance U<s> (any other name N owns UN).
Scm parse_model(std::string_view text);

/// Canonical text: variables in VarId order, one statement per line.
std::string serialize_model(const Scm& scm);

/// Disturbance name a variable owns when no `noise` clause is given.
std::string default_disturbance_name(std::string_view var_name);

/// A parsed model and where it came from.
struct ModelSource {
    std::string text;
    Scm scm;
    std::string provenance;  // file path or "fixture:<name>"
};

/// Built-in fixture when `ref` names one, otherwise a model file path.
ModelSource load_model(const std::string& ref);

}  // namespace feedsep

#endif  // FEEDSEP_MODEL_IO_HPP
