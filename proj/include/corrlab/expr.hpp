#pragma once

#include <memory>
#include <string>

#include "corrlab/common.hpp"

namespace corrlab {

// Closed-form scalar expression in one real variable n: constants, the
// variable itself, and the four field operations. Degenerating families and
// rescaling sequences are supplied this way so arbitrarily large n can be
// sampled.
class Expr {
public:
    enum class Op { Const, Var, Add, Sub, Mul, Div };

    Expr();

    static Expr constant(cplx v);
    static Expr var_n();

    friend Expr operator+(const Expr& a, const Expr& b) { return combine(Op::Add, a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return combine(Op::Sub, a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return combine(Op::Mul, a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return combine(Op::Div, a, b); }

    cplx eval(double n) const;

    Op op() const;
    cplx value() const;
    Expr lhs() const;
    Expr rhs() const;

    std::string to_string() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr combine(Op op, const Expr& a, const Expr& b);

    std::shared_ptr<const Node> node_;
};

} // namespace corrlab
