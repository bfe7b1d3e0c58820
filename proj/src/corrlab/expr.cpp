#include "corrlab/expr.hpp"

#include <sstream>

namespace corrlab {

struct Expr::Node {
    Op op;
    cplx value{};
    std::shared_ptr<const Node> lhs, rhs;
    Node(Op o, cplx v) : op(o), value(v) {}
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(cplx v) {
    return Expr(std::make_shared<const Node>(Op::Const, v));
}

Expr Expr::var_n() {
    return Expr(std::make_shared<const Node>(Op::Var, cplx{}));
}

Expr Expr::combine(Op op, const Expr& a, const Expr& b) {
    auto node = std::make_shared<Node>(op, cplx{});
    node->lhs = a.node_;
    node->rhs = b.node_;
    return Expr(std::shared_ptr<const Node>(std::move(node)));
}

cplx Expr::eval(double n) const {
    switch (node_->op) {
    case Op::Const: return node_->value;
    case Op::Var: return cplx(n, 0.0);
    case Op::Add: return lhs().eval(n) + rhs().eval(n);
    case Op::Sub: return lhs().eval(n) - rhs().eval(n);
    case Op::Mul: return lhs().eval(n) * rhs().eval(n);
    case Op::Div: return lhs().eval(n) / rhs().eval(n);
    }
    fail("InternalError", "unreachable expression op");
}

Expr::Op Expr::op() const { return node_->op; }
cplx Expr::value() const { return node_->value; }

Expr Expr::lhs() const {
    if (!node_->lhs) fail("InternalError", "expression leaf has no children");
    return Expr(node_->lhs);
}

Expr Expr::rhs() const {
    if (!node_->rhs) fail("InternalError", "expression leaf has no children");
    return Expr(node_->rhs);
}

std::string Expr::to_string() const {
    std::ostringstream os;
    switch (node_->op) {
    case Op::Const: {
        os << node_->value.real();
        if (node_->value.imag() != 0.0) os << (node_->value.imag() > 0 ? "+" : "") << node_->value.imag() << "i";
        break;
    }
    case Op::Var: os << "n"; break;
    case Op::Add: os << "(" << lhs().to_string() << " + " << rhs().to_string() << ")"; break;
    case Op::Sub: os << "(" << lhs().to_string() << " - " << rhs().to_string() << ")"; break;
    case Op::Mul: os << "(" << lhs().to_string() << " * " << rhs().to_string() << ")"; break;
    case Op::Div: os << "(" << lhs().to_string() << " / " << rhs().to_string() << ")"; break;
    }
    return os.str();
}

} // namespace corrlab
