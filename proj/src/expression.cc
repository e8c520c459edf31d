#include "riesz/expression.h"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace riesz {

struct Expression::Node {
  enum class Op { kNumber, kCoord, kRadius, kAdd, kSub, kMul, kDiv, kNeg,
                  kPow, kAbs, kLog, kMax };
  Op op;
  double value = 0.0;
  int index = 0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr Make(Node::Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr ParseAll() {
    NodePtr e = ParseExpr();
    Skip();
    if (pos_ != s_.size()) Fail("unexpected character");
    return e;
  }

  int max_coordinate() const { return max_coord_; }

 private:
  [[noreturn]] void Fail(const std::string& why) const {
    throw std::invalid_argument("expression: " + why + " at position " +
                                std::to_string(pos_) + " in \"" + s_ + "\"");
  }

  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool Accept(char c) {
    Skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void Expect(char c) {
    if (!Accept(c)) Fail(std::string("expected '") + c + "'");
  }

  NodePtr ParseExpr() {
    NodePtr left = ParseTerm();
    for (;;) {
      if (Accept('+')) {
        left = Make(Node::Op::kAdd, {left, ParseTerm()});
      } else if (Accept('-')) {
        left = Make(Node::Op::kSub, {left, ParseTerm()});
      } else {
        return left;
      }
    }
  }

  NodePtr ParseTerm() {
    NodePtr left = ParseUnary();
    for (;;) {
      if (Accept('*')) {
        left = Make(Node::Op::kMul, {left, ParseUnary()});
      } else if (Accept('/')) {
        left = Make(Node::Op::kDiv, {left, ParseUnary()});
      } else {
        return left;
      }
    }
  }

  NodePtr ParseUnary() {
    if (Accept('-')) return Make(Node::Op::kNeg, {ParseUnary()});
    if (Accept('+')) return ParseUnary();
    return ParsePower();
  }

  NodePtr ParsePower() {
    NodePtr base = ParsePrimary();
    if (Accept('^')) return Make(Node::Op::kPow, {base, ParseUnary()});
    return base;
  }

  NodePtr ParsePrimary() {
    Skip();
    if (pos_ >= s_.size()) Fail("unexpected end of input");
    const char c = s_[pos_];
    if (Accept('(')) {
      NodePtr e = ParseExpr();
      Expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        Fail("malformed number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->op = Node::Op::kNumber;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isalnum(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "r") {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::kRadius;
        return n;
      }
      if (word.size() > 1 && word[0] == 'x' &&
          word.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int k = std::stoi(word.substr(1));
        if (k < 1) Fail("coordinates are numbered from 1");
        auto n = std::make_shared<Node>();
        n->op = Node::Op::kCoord;
        n->index = k - 1;
        max_coord_ = std::max(max_coord_, k);
        return n;
      }
      Node::Op op;
      if (word == "abs") {
        op = Node::Op::kAbs;
      } else if (word == "log") {
        op = Node::Op::kLog;
      } else if (word == "max") {
        op = Node::Op::kMax;
      } else {
        pos_ = start;
        Fail("unknown identifier '" + word + "'");
      }
      Expect('(');
      std::vector<NodePtr> args = {ParseExpr()};
      while (Accept(',')) args.push_back(ParseExpr());
      Expect(')');
      if (op != Node::Op::kMax && args.size() != 1) {
        Fail(word + " takes one argument");
      }
      if (op == Node::Op::kMax && args.size() < 2) {
        Fail("max takes at least two arguments");
      }
      return Make(op, std::move(args));
    }
    Fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int max_coord_ = 0;
};

double Eval(const Node& n, const Vector& x) {
  switch (n.op) {
    case Node::Op::kNumber: return n.value;
    case Node::Op::kCoord: return x(n.index);
    case Node::Op::kRadius: return x.norm();
    case Node::Op::kAdd: return Eval(*n.args[0], x) + Eval(*n.args[1], x);
    case Node::Op::kSub: return Eval(*n.args[0], x) - Eval(*n.args[1], x);
    case Node::Op::kMul: return Eval(*n.args[0], x) * Eval(*n.args[1], x);
    case Node::Op::kDiv: return Eval(*n.args[0], x) / Eval(*n.args[1], x);
    case Node::Op::kNeg: return -Eval(*n.args[0], x);
    case Node::Op::kPow:
      return std::pow(Eval(*n.args[0], x), Eval(*n.args[1], x));
    case Node::Op::kAbs: return std::abs(Eval(*n.args[0], x));
    case Node::Op::kLog: {
      const double v = Eval(*n.args[0], x);
      return v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v);
    }
    case Node::Op::kMax: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& a : n.args) best = std::max(best, Eval(*a, x));
      return best;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Expression Expression::Parse(const std::string& text) {
  Parser parser(text);
  Expression e;
  e.root_ = parser.ParseAll();
  e.text_ = text;
  e.max_coordinate_ = parser.max_coordinate();
  return e;
}

double Expression::Evaluate(const Vector& x) const {
  if (max_coordinate_ > x.size()) {
    throw std::invalid_argument("expression: coordinate x" +
                                std::to_string(max_coordinate_) +
                                " exceeds the dimension");
  }
  return Eval(*root_, x);
}

}  // namespace riesz
