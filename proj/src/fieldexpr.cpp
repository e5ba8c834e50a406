#include <cctype>
#include <cmath>
#include <cstdio>

#include "koitervi/fieldexpr.hpp"

namespace koitervi {

struct FieldExpr::Node {
    enum Kind { Num, Var, Neg, Bin, Call } kind;
    double value = 0.0;
    int var = 0;  // 0: y1, 1: y2
    char op = 0;
    std::string func;
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = FieldExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Num;
    n->value = v;
    return n;
}

NodePtr make_var(int i) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Var;
    n->var = i;
    return n;
}

NodePtr make_neg(NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Neg;
    n->a = std::move(a);
    return n;
}

NodePtr make_bin(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Bin;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_call(std::string f, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Call;
    n->func = std::move(f);
    n->a = std::move(a);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", 0);
        NodePtr e = expr();
        skip_ws();
        if (pos_ < s_.size())
            fail("trailing input, expected end of expression");
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;
    int depth_ = 0;

    struct DepthGuard {
        int& d;
        explicit DepthGuard(Parser& p) : d(p.depth_) {
            if (++d > 4096)
                throw ParseError("expression nesting too deep at offset " + std::to_string(p.pos_),
                                 p.pos_);
        }
        ~DepthGuard() { --d; }
    };

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(what + " at offset " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+'))
                e = make_bin('+', e, term());
            else if (eat('-'))
                e = make_bin('-', e, term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (eat('*'))
                e = make_bin('*', e, unary());
            else if (eat('/'))
                e = make_bin('/', e, unary());
            else
                return e;
        }
    }

    NodePtr unary() {
        DepthGuard guard(*this);
        if (eat('-')) return make_neg(unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make_bin('^', base, unary());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end, expected number, name or '('");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return name();
        fail("unexpected character, expected number, name or '('");
    }

    NodePtr number() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t mark = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to a following name, not this number
            }
        }
        std::string tok = s_.substr(start, pos_ - start);
        try {
            return make_num(std::stod(tok));
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    NodePtr name() {
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '_'))
            ++pos_;
        std::string id = s_.substr(start, pos_ - start);
        if (id == "y1") return make_var(0);
        if (id == "y2") return make_var(1);
        if (id == "sin" || id == "cos" || id == "exp" || id == "sqrt" || id == "abs") {
            if (!eat('(')) fail("expected '(' after function name");
            NodePtr arg = expr();
            if (!eat(')')) fail("expected ')'");
            return make_call(id, arg);
        }
        pos_ = start;
        throw ParseError("unknown identifier at offset " + std::to_string(start), start);
    }
};

void print_node(const NodePtr& n, std::string& out) {
    switch (n->kind) {
        case Node::Num: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n->value);
            out += buf;
            break;
        }
        case Node::Var:
            out += n->var == 0 ? "y1" : "y2";
            break;
        case Node::Neg:
            out += "(-";
            print_node(n->a, out);
            out += ")";
            break;
        case Node::Bin:
            out += "(";
            print_node(n->a, out);
            out += n->op;
            print_node(n->b, out);
            out += ")";
            break;
        case Node::Call:
            out += n->func;
            out += "(";
            print_node(n->a, out);
            out += ")";
            break;
    }
}

double eval_node(const NodePtr& n, double y1, double y2) {
    switch (n->kind) {
        case Node::Num:
            return n->value;
        case Node::Var:
            return n->var == 0 ? y1 : y2;
        case Node::Neg:
            return -eval_node(n->a, y1, y2);
        case Node::Bin: {
            double a = eval_node(n->a, y1, y2);
            double b = eval_node(n->b, y1, y2);
            switch (n->op) {
                case '+':
                    return a + b;
                case '-':
                    return a - b;
                case '*':
                    return a * b;
                case '/':
                    if (b == 0.0) {
                        std::string txt;
                        print_node(n, txt);
                        throw EvalError("division by zero in " + txt);
                    }
                    return a / b;
                case '^':
                    return std::pow(a, b);
            }
            throw EvalError("corrupt expression node");
        }
        case Node::Call: {
            double a = eval_node(n->a, y1, y2);
            if (n->func == "sin") return std::sin(a);
            if (n->func == "cos") return std::cos(a);
            if (n->func == "exp") return std::exp(a);
            if (n->func == "abs") return std::fabs(a);
            if (n->func == "sqrt") {
                if (a < 0.0) {
                    std::string txt;
                    print_node(n, txt);
                    throw EvalError("sqrt of negative value in " + txt);
                }
                return std::sqrt(a);
            }
            throw EvalError("corrupt expression node");
        }
    }
    throw EvalError("corrupt expression node");
}

}  // namespace

FieldExpr FieldExpr::parse(const std::string& text) {
    return FieldExpr(Parser(text).run());
}

std::string FieldExpr::print() const {
    std::string out;
    print_node(root_, out);
    return out;
}

double FieldExpr::eval(double y1, double y2) const { return eval_node(root_, y1, y2); }

FieldFn FieldExpr::fn() const {
    auto root = root_;
    return [root](double y1, double y2) { return eval_node(root, y1, y2); };
}

}  // namespace koitervi
