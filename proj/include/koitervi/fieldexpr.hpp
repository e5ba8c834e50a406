#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

#include "koitervi/fem.hpp"

namespace koitervi {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t off) : std::runtime_error(msg), offset(off) {}
    size_t offset;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar expression over (y1, y2): numbers, + - * / ^, unary minus,
/// parentheses, sin/cos/exp/sqrt/abs.  ^ binds tightest and associates right,
/// unary minus sits between ^ and * /.
class FieldExpr {
public:
    static FieldExpr parse(const std::string& text);

    std::string print() const;
    double eval(double y1, double y2) const;
    FieldFn fn() const;

    struct Node;

    explicit FieldExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

private:
    std::shared_ptr<const Node> root_;
};

}  // namespace koitervi
