#include "fuzzydyn/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace fuzzydyn {

namespace {

enum class Op {
  Literal,
  VarT,
  VarW,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Abs,
  Atan,
  Min,
  Max,
};

struct FnInfo {
  Op op;
  int arity;
};

const std::map<std::string, FnInfo, std::less<>>& function_table() {
  static const std::map<std::string, FnInfo, std::less<>> table = {
      {"sin", {Op::Sin, 1}},  {"cos", {Op::Cos, 1}},  {"exp", {Op::Exp, 1}},
      {"log", {Op::Log, 1}},  {"sqrt", {Op::Sqrt, 1}}, {"abs", {Op::Abs, 1}},
      {"atan", {Op::Atan, 1}}, {"min", {Op::Min, 2}},  {"max", {Op::Max, 2}},
      {"pow", {Op::Pow, 2}},
  };
  return table;
}

}  // namespace

struct ScalarFn::Node {
  Op op;
  double value = 0.0;  // Literal only
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ScalarFn::Node>;

NodePtr make_node(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ScalarFn::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_literal(double v) {
  auto n = std::make_shared<ScalarFn::Node>();
  n->op = Op::Literal;
  n->value = v;
  return n;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  TokKind kind;
  std::size_t offset;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Result<Token, ParseError> next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return Token{TokKind::End, start};
    const char c = text_[pos_];
    switch (c) {
      case '+': ++pos_; return Token{TokKind::Plus, start};
      case '-': ++pos_; return Token{TokKind::Minus, start};
      case '*': ++pos_; return Token{TokKind::Star, start};
      case '/': ++pos_; return Token{TokKind::Slash, start};
      case '^': ++pos_; return Token{TokKind::Caret, start};
      case '(': ++pos_; return Token{TokKind::LParen, start};
      case ')': ++pos_; return Token{TokKind::RParen, start};
      case ',': ++pos_; return Token{TokKind::Comma, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      Token tok{TokKind::Ident, start};
      tok.ident = std::string(text_.substr(start, end - start));
      pos_ = end;
      return tok;
    }
    return ParseError{start, "unexpected character", {"number", "identifier", "operator"}};
  }

 private:
  Result<Token, ParseError> lex_number(std::size_t start) {
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
      if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        ++exp;
        while (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) ++exp;
        end = exp;
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + end;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
      return ParseError{start, "malformed number literal", {"number"}};
    Token tok{TokKind::Number, start};
    tok.number = value;
    pos_ = end;
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Pratt parser.  Binding powers: + - (10) < * / (20) < unary - (25) < ^ (30,
// right associative).
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {}

  Result<NodePtr, ParseError> run() {
    if (auto err = advance()) return *err;
    if (current_.kind == TokKind::End)
      return ParseError{0, "empty input", {"expression"}};
    auto expr = parse_expr(0);
    if (!expr) return expr.error();
    if (current_.kind != TokKind::End)
      return ParseError{current_.offset, "unexpected trailing input", {"end of input", "operator"}};
    return expr.value();
  }

 private:
  static constexpr int kUnaryBp = 25;

  std::optional<ParseError> advance() {
    auto tok = lexer_.next();
    if (!tok) return tok.error();
    current_ = tok.value();
    return std::nullopt;
  }

  Result<NodePtr, ParseError> parse_expr(int min_bp) {
    auto lhs = parse_prefix();
    if (!lhs) return lhs.error();
    NodePtr node = lhs.value();
    for (;;) {
      Op op;
      int bp;
      bool right_assoc = false;
      switch (current_.kind) {
        case TokKind::Plus: op = Op::Add; bp = 10; break;
        case TokKind::Minus: op = Op::Sub; bp = 10; break;
        case TokKind::Star: op = Op::Mul; bp = 20; break;
        case TokKind::Slash: op = Op::Div; bp = 20; break;
        case TokKind::Caret: op = Op::Pow; bp = 30; right_assoc = true; break;
        default: return node;
      }
      if (bp < min_bp) return node;
      if (auto err = advance()) return *err;
      auto rhs = parse_expr(right_assoc ? bp : bp + 1);
      if (!rhs) return rhs.error();
      node = make_node(op, node, rhs.value());
    }
  }

  Result<NodePtr, ParseError> parse_prefix() {
    const Token tok = current_;
    switch (tok.kind) {
      case TokKind::Number: {
        if (auto err = advance()) return *err;
        return make_literal(tok.number);
      }
      case TokKind::Minus: {
        if (auto err = advance()) return *err;
        auto operand = parse_expr(kUnaryBp);
        if (!operand) return operand.error();
        return make_node(Op::Neg, operand.value());
      }
      case TokKind::Plus: {
        if (auto err = advance()) return *err;
        return parse_expr(kUnaryBp);
      }
      case TokKind::LParen: {
        if (auto err = advance()) return *err;
        auto inner = parse_expr(0);
        if (!inner) return inner.error();
        if (current_.kind != TokKind::RParen)
          return ParseError{current_.offset, "unbalanced parenthesis", {")"}};
        if (auto err = advance()) return *err;
        return inner.value();
      }
      case TokKind::Ident:
        return parse_ident(tok);
      case TokKind::End:
        return ParseError{tok.offset, "unexpected end of input", {"expression"}};
      default:
        return ParseError{tok.offset, "expected an expression", {"number", "identifier", "(", "-"}};
    }
  }

  Result<NodePtr, ParseError> parse_ident(const Token& tok) {
    if (auto err = advance()) return *err;
    if (tok.ident == "t") return make_node(Op::VarT);
    if (tok.ident == "w") return make_node(Op::VarW);
    const auto& fns = function_table();
    const auto it = fns.find(tok.ident);
    if (it == fns.end()) {
      std::vector<std::string> expected = {"t", "w"};
      for (const auto& [name, _] : fns) expected.push_back(name);
      return ParseError{tok.offset, "unknown identifier '" + tok.ident + "'", std::move(expected)};
    }
    if (current_.kind != TokKind::LParen)
      return ParseError{current_.offset, "function '" + tok.ident + "' needs an argument list", {"("}};
    if (auto err = advance()) return *err;
    std::vector<NodePtr> args;
    for (;;) {
      auto arg = parse_expr(0);
      if (!arg) return arg.error();
      args.push_back(arg.value());
      if (current_.kind == TokKind::Comma) {
        if (auto err = advance()) return *err;
        continue;
      }
      break;
    }
    if (current_.kind != TokKind::RParen)
      return ParseError{current_.offset, "unbalanced parenthesis in call", {")", ","}};
    if (auto err = advance()) return *err;
    if (static_cast<int>(args.size()) != it->second.arity) {
      return ParseError{tok.offset,
                        "function '" + tok.ident + "' expects " +
                            std::to_string(it->second.arity) + " argument(s)",
                        {}};
    }
    if (it->second.arity == 1) return make_node(it->second.op, args[0]);
    return make_node(it->second.op, args[0], args[1]);
  }

  Lexer lexer_;
  Token current_{TokKind::End, 0};
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Result<double, EvalError> finite_or_overflow(double v) {
  if (!std::isfinite(v)) return EvalError{EvalError::Kind::Overflow, v};
  return v;
}

Result<double, EvalError> eval_node(const ScalarFn::Node& n, double t, double w) {
  switch (n.op) {
    case Op::Literal: return n.value;
    case Op::VarT: return t;
    case Op::VarW: return w;
    default: break;
  }
  auto lhs = eval_node(*n.a, t, w);
  if (!lhs) return lhs.error();
  const double a = lhs.value();
  switch (n.op) {
    case Op::Neg: return -a;
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Atan: return std::atan(a);
    case Op::Abs: return std::abs(a);
    case Op::Exp: return finite_or_overflow(std::exp(a));
    case Op::Log:
      if (a <= 0.0) return EvalError{EvalError::Kind::LogDomain, a};
      return std::log(a);
    case Op::Sqrt:
      if (a < 0.0) return EvalError{EvalError::Kind::SqrtDomain, a};
      return std::sqrt(a);
    default: break;
  }
  auto rhs = eval_node(*n.b, t, w);
  if (!rhs) return rhs.error();
  const double b = rhs.value();
  switch (n.op) {
    case Op::Add: return finite_or_overflow(a + b);
    case Op::Sub: return finite_or_overflow(a - b);
    case Op::Mul: return finite_or_overflow(a * b);
    case Op::Div:
      if (b == 0.0) return EvalError{EvalError::Kind::DivByZero, b};
      return finite_or_overflow(a / b);
    case Op::Pow: {
      const double v = std::pow(a, b);
      if (std::isnan(v)) return EvalError{EvalError::Kind::PowDomain, a};
      return finite_or_overflow(v);
    }
    case Op::Min: return std::min(a, b);
    case Op::Max: return std::max(a, b);
    default: break;
  }
  return EvalError{EvalError::Kind::Overflow, 0.0};  // unreachable
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string format_literal(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void print_node(const ScalarFn::Node& n, std::string& out) {
  const auto binary = [&](const char* sym) {
    out += '(';
    print_node(*n.a, out);
    out += ' ';
    out += sym;
    out += ' ';
    print_node(*n.b, out);
    out += ')';
  };
  const auto call = [&](const char* name, bool two_args) {
    out += name;
    out += '(';
    print_node(*n.a, out);
    if (two_args) {
      out += ", ";
      print_node(*n.b, out);
    }
    out += ')';
  };
  switch (n.op) {
    case Op::Literal: out += format_literal(n.value); return;
    case Op::VarT: out += 't'; return;
    case Op::VarW: out += 'w'; return;
    case Op::Add: binary("+"); return;
    case Op::Sub: binary("-"); return;
    case Op::Mul: binary("*"); return;
    case Op::Div: binary("/"); return;
    case Op::Pow: binary("^"); return;
    case Op::Neg:
      out += "(-";
      print_node(*n.a, out);
      out += ')';
      return;
    case Op::Sin: call("sin", false); return;
    case Op::Cos: call("cos", false); return;
    case Op::Exp: call("exp", false); return;
    case Op::Log: call("log", false); return;
    case Op::Sqrt: call("sqrt", false); return;
    case Op::Abs: call("abs", false); return;
    case Op::Atan: call("atan", false); return;
    case Op::Min: call("min", true); return;
    case Op::Max: call("max", true); return;
  }
}

bool nodes_equal(const ScalarFn::Node* a, const ScalarFn::Node* b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::Literal && a->value != b->value) return false;
  return nodes_equal(a->a.get(), b->a.get()) && nodes_equal(a->b.get(), b->b.get());
}

bool references(const ScalarFn::Node* n, Op var) {
  if (n == nullptr) return false;
  if (n->op == var) return true;
  return references(n->a.get(), var) || references(n->b.get(), var);
}

}  // namespace

std::string to_string(EvalError::Kind kind) {
  switch (kind) {
    case EvalError::Kind::DivByZero: return "division by zero";
    case EvalError::Kind::LogDomain: return "log of a non-positive value";
    case EvalError::Kind::SqrtDomain: return "sqrt of a negative value";
    case EvalError::Kind::PowDomain: return "pow outside its real domain";
    case EvalError::Kind::Overflow: return "non-finite result";
  }
  return "unknown evaluation error";
}

ExprEvalException::ExprEvalException(EvalError e)
    : std::runtime_error("expression evaluation failed: " + to_string(e.kind)),
      error(e) {}

ScalarFn::ScalarFn(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

Result<ScalarFn, ParseError> ScalarFn::parse(std::string_view text) {
  Parser parser(text);
  auto root = parser.run();
  if (!root) return root.error();
  return ScalarFn(root.value());
}

ScalarFn ScalarFn::parse_or_throw(std::string_view text) {
  auto r = parse(text);
  if (!r) {
    throw std::invalid_argument("ScalarFn: parse failed at offset " +
                                std::to_string(r.error().offset) + ": " +
                                r.error().message);
  }
  return r.value();
}

Result<double, EvalError> ScalarFn::eval(double t, double w) const {
  return eval_node(*root_, t, w);
}

double ScalarFn::eval_or_throw(double t, double w) const {
  auto r = eval(t, w);
  if (!r) throw ExprEvalException(r.error());
  return r.value();
}

std::string ScalarFn::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool ScalarFn::same_structure(const ScalarFn& other) const {
  return nodes_equal(root_.get(), other.root_.get());
}

bool ScalarFn::references_t() const { return references(root_.get(), Op::VarT); }
bool ScalarFn::references_w() const { return references(root_.get(), Op::VarW); }

std::string to_string(const NotClassK& v) {
  switch (v.kind) {
    case NotClassK::Kind::ReferencesT:
      return "envelope must be a function of w alone";
    case NotClassK::Kind::NonzeroAtOrigin:
      return "envelope is nonzero at the origin";
    case NotClassK::Kind::EvalFailed:
      return "envelope evaluation failed on the sample grid";
    case NotClassK::Kind::NotIncreasing: {
      std::ostringstream os;
      os << "envelope not increasing: f(" << v.w_lo << ") = " << v.f_lo
         << " vs f(" << v.w_hi << ") = " << v.f_hi;
      return os.str();
    }
  }
  return "envelope violates class-K requirements";
}

namespace {

Result<ClassK, NotClassK> check_class_k_impl(const ScalarFn& fn, double t,
                                             double w_max, std::size_t samples,
                                             bool allow_t) {
  if (w_max <= 0.0) throw std::invalid_argument("check_class_k: w_max must be positive");
  if (samples < 2) throw std::invalid_argument("check_class_k: needs at least two samples");
  if (!allow_t && fn.references_t())
    return NotClassK{NotClassK::Kind::ReferencesT};
  const auto at = [&](double w) { return fn.eval(t, w); };
  auto origin = at(0.0);
  if (!origin) return NotClassK{NotClassK::Kind::EvalFailed};
  if (std::abs(origin.value()) > 1e-12)
    return NotClassK{NotClassK::Kind::NonzeroAtOrigin, 0, 0, origin.value(), 0};
  double prev_w = 0.0;
  double prev_f = origin.value();
  for (std::size_t k = 1; k < samples; ++k) {
    const double w = w_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    auto f = at(w);
    if (!f) return NotClassK{NotClassK::Kind::EvalFailed, prev_w, w};
    if (!(f.value() > prev_f))
      return NotClassK{NotClassK::Kind::NotIncreasing, prev_w, w, prev_f, f.value()};
    prev_w = w;
    prev_f = f.value();
  }
  return ClassK{fn, w_max};
}

}  // namespace

Result<ClassK, NotClassK> check_class_k(const ScalarFn& fn, double w_max,
                                        std::size_t samples) {
  return check_class_k_impl(fn, 0.0, w_max, samples, /*allow_t=*/false);
}

Result<ClassK, NotClassK> check_class_k_at(const ScalarFn& fn, double t,
                                           double w_max, std::size_t samples) {
  return check_class_k_impl(fn, t, w_max, samples, /*allow_t=*/true);
}

}  // namespace fuzzydyn
