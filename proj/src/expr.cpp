#include "monocert/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace monocert {

struct Expr::Node {
  enum class Op { Num, VarX, VarZ, Add, Sub, Mul, Div, Pow, Neg };
  Op op;
  double value = 0.0;       // Num
  std::size_t index = 0;    // VarX/VarZ, 0-based
  std::unique_ptr<Node> lhs, rhs;

  static std::unique_ptr<Node> leaf(Op o) {
    auto n = std::make_unique<Node>();
    n->op = o;
    return n;
  }
};

namespace {

using Node = Expr::Node;
using Op = Expr::Node::Op;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  std::unique_ptr<Node> run() {
    auto n = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression parse error at position " +
                      std::to_string(pos_) + ": " + msg + " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
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

  std::unique_ptr<Node> parse_expr() {
    auto lhs = parse_term();
    while (true) {
      if (consume('+')) {
        auto n = Node::leaf(Op::Add);
        n->lhs = std::move(lhs);
        n->rhs = parse_term();
        lhs = std::move(n);
      } else if (consume('-')) {
        auto n = Node::leaf(Op::Sub);
        n->lhs = std::move(lhs);
        n->rhs = parse_term();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> parse_term() {
    auto lhs = parse_factor();
    while (true) {
      if (consume('*')) {
        auto n = Node::leaf(Op::Mul);
        n->lhs = std::move(lhs);
        n->rhs = parse_factor();
        lhs = std::move(n);
      } else if (consume('/')) {
        auto n = Node::leaf(Op::Div);
        n->lhs = std::move(lhs);
        n->rhs = parse_factor();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> parse_factor() {
    if (consume('-')) {
      auto n = Node::leaf(Op::Neg);
      n->lhs = parse_factor();
      return n;
    }
    if (consume('+')) return parse_factor();
    return parse_power();
  }

  std::unique_ptr<Node> parse_power() {
    auto base = parse_atom();
    if (consume('^')) {
      auto n = Node::leaf(Op::Pow);
      n->lhs = std::move(base);
      n->rhs = parse_factor();
      return n;
    }
    return base;
  }

  std::unique_ptr<Node> parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected operand");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return n;
    }
    if (c == 'x' || c == 'z') {
      ++pos_;
      std::size_t idx = parse_index();
      auto n = Node::leaf(c == 'x' ? Op::VarX : Op::VarZ);
      n->index = idx - 1;
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::size_t parse_index() {
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      fail("variable needs an index (x1..xn, z1..zn)");
    }
    std::size_t idx = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      idx = idx * 10 + static_cast<std::size_t>(s_[pos_] - '0');
      ++pos_;
    }
    if (idx == 0) fail("variable index starts at 1");
    return idx;
  }

  std::unique_ptr<Node> parse_number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    if (!std::isfinite(v)) fail("non-finite literal");
    auto n = Node::leaf(Op::Num);
    n->value = v;
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::unique_ptr<Node> clone(const Node* n) {
  if (!n) return nullptr;
  auto out = std::make_unique<Node>();
  out->op = n->op;
  out->value = n->value;
  out->index = n->index;
  out->lhs = clone(n->lhs.get());
  out->rhs = clone(n->rhs.get());
  return out;
}

double eval_node(const Node* n, std::span<const double> x,
                 std::span<const double> z) {
  switch (n->op) {
    case Op::Num:
      return n->value;
    case Op::VarX:
      if (n->index >= x.size()) {
        throw std::out_of_range("expression references x" +
                                std::to_string(n->index + 1) +
                                " beyond dimension");
      }
      return x[n->index];
    case Op::VarZ:
      if (n->index >= z.size()) {
        throw std::out_of_range("expression references z" +
                                std::to_string(n->index + 1) +
                                " beyond dimension");
      }
      return z[n->index];
    case Op::Add:
      return eval_node(n->lhs.get(), x, z) + eval_node(n->rhs.get(), x, z);
    case Op::Sub:
      return eval_node(n->lhs.get(), x, z) - eval_node(n->rhs.get(), x, z);
    case Op::Mul:
      return eval_node(n->lhs.get(), x, z) * eval_node(n->rhs.get(), x, z);
    case Op::Div:
      return eval_node(n->lhs.get(), x, z) / eval_node(n->rhs.get(), x, z);
    case Op::Pow:
      return std::pow(eval_node(n->lhs.get(), x, z),
                      eval_node(n->rhs.get(), x, z));
    case Op::Neg:
      return -eval_node(n->lhs.get(), x, z);
  }
  return 0.0;  // unreachable
}

void print_node(const Node* n, std::ostream& os) {
  switch (n->op) {
    case Op::Num: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n->value;
      std::string t = tmp.str();
      if (!t.empty() && t[0] == '-') {
        os << "(0 - " << t.substr(1) << ")";
      } else {
        os << t;
      }
      return;
    }
    case Op::VarX:
      os << 'x' << (n->index + 1);
      return;
    case Op::VarZ:
      os << 'z' << (n->index + 1);
      return;
    case Op::Neg:
      os << "(-";
      print_node(n->lhs.get(), os);
      os << ')';
      return;
    default:
      break;
  }
  os << '(';
  print_node(n->lhs.get(), os);
  switch (n->op) {
    case Op::Add: os << " + "; break;
    case Op::Sub: os << " - "; break;
    case Op::Mul: os << " * "; break;
    case Op::Div: os << " / "; break;
    case Op::Pow: os << " ^ "; break;
    default: break;
  }
  print_node(n->rhs.get(), os);
  os << ')';
}

std::size_t max_index(const Node* n, Op which) {
  if (!n) return 0;
  std::size_t m = 0;
  if (n->op == which) m = n->index + 1;
  return std::max({m, max_index(n->lhs.get(), which),
                   max_index(n->rhs.get(), which)});
}

}  // namespace

Expr::Expr(std::unique_ptr<Node> root) : root_(std::move(root)) {}

Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;
Expr::~Expr() = default;

Expr::Expr(const Expr& other) : root_(clone(other.root_.get())) {}

Expr& Expr::operator=(const Expr& other) {
  if (this != &other) root_ = clone(other.root_.get());
  return *this;
}

Expr Expr::parse(const std::string& text) {
  return Expr(Parser(text).run());
}

double Expr::eval(std::span<const double> x, std::span<const double> z) const {
  return eval_node(root_.get(), x, z);
}

std::string Expr::to_string() const {
  std::ostringstream os;
  print_node(root_.get(), os);
  return os.str();
}

std::size_t Expr::max_x_index() const { return max_index(root_.get(), Node::Op::VarX); }
std::size_t Expr::max_z_index() const { return max_index(root_.get(), Node::Op::VarZ); }

}  // namespace monocert
