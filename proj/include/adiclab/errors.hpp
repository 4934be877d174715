#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adiclab {

// Column requested above an operator's reliable depth.
class UnreliableLevel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A composition or comparison would leave no trustworthy levels.
class EmptyWindow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WindowTooDeep : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class IndexOutOfGrid : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class NonCanonicalResidue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parser and evaluator errors carry the byte offset into the source text.
class ExprError : public std::runtime_error {
public:
    ExprError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class SyntaxError : public ExprError {
public:
    using ExprError::ExprError;
};

class ArityError : public ExprError {
public:
    using ExprError::ExprError;
};

class EvalError : public ExprError {
public:
    using ExprError::ExprError;
};

}  // namespace adiclab
