#include "stdg/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "stdg/errors.hpp"

namespace stdg {

struct Expr::Node {
  enum Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;  // Const
  char var = 'x';      // Var
  std::string fn;      // Call
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Node = Expr::Node;

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Const;
  n->value = v;
  return n;
}
NodePtr make_var(char c) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Var;
  n->var = c;
  return n;
}
NodePtr make_un(Node::Kind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}
NodePtr make_bin(Node::Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
NodePtr make_call(std::string fn, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Call;
  n->fn = std::move(fn);
  n->a = std::move(a);
  return n;
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression: " + msg + " at position " + std::to_string(pos) + " in '" +
                     s + "'");
  }

  NodePtr parse_expr() { return parse_add(); }

  NodePtr parse_add() {
    NodePtr lhs = parse_mul();
    for (;;) {
      if (eat('+'))
        lhs = make_bin(Node::Add, lhs, parse_mul());
      else if (eat('-'))
        lhs = make_bin(Node::Sub, lhs, parse_mul());
      else
        return lhs;
    }
  }

  NodePtr parse_mul() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*'))
        lhs = make_bin(Node::Mul, lhs, parse_unary());
      else if (eat('/'))
        lhs = make_bin(Node::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make_un(Node::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_pow();
  }

  NodePtr parse_pow() {
    NodePtr base = parse_atom();
    if (eat('^')) return make_bin(Node::Pow, base, parse_unary());  // right associative
    return base;
  }

  NodePtr parse_atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s.substr(pos), &used);
      pos += used;
      return make_const(v);
    }
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      if (name == "pi") return make_const(M_PI);
      if (name == "x" || name == "y" || name == "t") return make_var(name[0]);
      if (eat('(')) {
        NodePtr arg = parse_expr();
        if (!eat(')')) fail("missing ')' after " + name);
        static const char* known[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs"};
        for (const char* k : known)
          if (name == k) return make_call(name, arg);
        fail("unknown function '" + name + "'");
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

double eval_node(const Node* n, double x, double y, double t) {
  switch (n->kind) {
    case Node::Const:
      return n->value;
    case Node::Var:
      return n->var == 'x' ? x : (n->var == 'y' ? y : t);
    case Node::Neg:
      return -eval_node(n->a.get(), x, y, t);
    case Node::Add:
      return eval_node(n->a.get(), x, y, t) + eval_node(n->b.get(), x, y, t);
    case Node::Sub:
      return eval_node(n->a.get(), x, y, t) - eval_node(n->b.get(), x, y, t);
    case Node::Mul:
      return eval_node(n->a.get(), x, y, t) * eval_node(n->b.get(), x, y, t);
    case Node::Div:
      return eval_node(n->a.get(), x, y, t) / eval_node(n->b.get(), x, y, t);
    case Node::Pow:
      return std::pow(eval_node(n->a.get(), x, y, t), eval_node(n->b.get(), x, y, t));
    case Node::Call: {
      double v = eval_node(n->a.get(), x, y, t);
      if (n->fn == "sin") return std::sin(v);
      if (n->fn == "cos") return std::cos(v);
      if (n->fn == "tan") return std::tan(v);
      if (n->fn == "exp") return std::exp(v);
      if (n->fn == "log") return std::log(v);
      if (n->fn == "sqrt") return std::sqrt(v);
      return std::abs(v);
    }
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, char var);

NodePtr diff_call(const NodePtr& n, char var) {
  NodePtr da = diff_node(n->a, var);
  NodePtr inner;
  if (n->fn == "sin")
    inner = make_call("cos", n->a);
  else if (n->fn == "cos")
    inner = make_un(Node::Neg, make_call("sin", n->a));
  else if (n->fn == "tan")
    inner = make_bin(Node::Div, make_const(1.0),
                     make_bin(Node::Pow, make_call("cos", n->a), make_const(2.0)));
  else if (n->fn == "exp")
    inner = make_call("exp", n->a);
  else if (n->fn == "log")
    inner = make_bin(Node::Div, make_const(1.0), n->a);
  else if (n->fn == "sqrt")
    inner = make_bin(Node::Div, make_const(0.5), make_call("sqrt", n->a));
  else
    throw ParseError("expression: abs() is not differentiable");
  return make_bin(Node::Mul, inner, da);
}

NodePtr diff_node(const NodePtr& n, char var) {
  switch (n->kind) {
    case Node::Const:
      return make_const(0.0);
    case Node::Var:
      return make_const(n->var == var ? 1.0 : 0.0);
    case Node::Neg:
      return make_un(Node::Neg, diff_node(n->a, var));
    case Node::Add:
      return make_bin(Node::Add, diff_node(n->a, var), diff_node(n->b, var));
    case Node::Sub:
      return make_bin(Node::Sub, diff_node(n->a, var), diff_node(n->b, var));
    case Node::Mul:
      return make_bin(Node::Add, make_bin(Node::Mul, diff_node(n->a, var), n->b),
                      make_bin(Node::Mul, n->a, diff_node(n->b, var)));
    case Node::Div:
      return make_bin(
          Node::Div,
          make_bin(Node::Sub, make_bin(Node::Mul, diff_node(n->a, var), n->b),
                   make_bin(Node::Mul, n->a, diff_node(n->b, var))),
          make_bin(Node::Pow, n->b, make_const(2.0)));
    case Node::Pow: {
      // a^c with constant exponent: c * a^(c-1) * a'
      if (n->b->kind != Node::Const)
        throw ParseError("expression: d/d" + std::string(1, var) +
                         " of a^b needs a constant exponent");
      double c = n->b->value;
      return make_bin(Node::Mul, make_const(c),
                      make_bin(Node::Mul, make_bin(Node::Pow, n->a, make_const(c - 1.0)),
                               diff_node(n->a, var)));
    }
    case Node::Call:
      return diff_call(n, var);
  }
  return make_const(0.0);
}

void print_node(const Node* n, std::ostream& os) {
  switch (n->kind) {
    case Node::Const:
      os << n->value;
      return;
    case Node::Var:
      os << n->var;
      return;
    case Node::Neg:
      os << "(-";
      print_node(n->a.get(), os);
      os << ")";
      return;
    case Node::Call:
      os << n->fn << "(";
      print_node(n->a.get(), os);
      os << ")";
      return;
    default: {
      const char* op = n->kind == Node::Add   ? "+"
                       : n->kind == Node::Sub ? "-"
                       : n->kind == Node::Mul ? "*"
                       : n->kind == Node::Div ? "/"
                                              : "^";
      os << "(";
      print_node(n->a.get(), os);
      os << op;
      print_node(n->b.get(), os);
      os << ")";
    }
  }
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Parser p(text);
  NodePtr root = p.parse_expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return Expr(root);
}

double Expr::operator()(double x, double y, double t) const {
  return eval_node(root_.get(), x, y, t);
}

Expr Expr::diff(char var) const { return Expr(diff_node(root_, var)); }

std::string Expr::str() const {
  std::ostringstream os;
  print_node(root_.get(), os);
  return os.str();
}

}  // namespace stdg
