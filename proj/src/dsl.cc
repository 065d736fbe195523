// Copyright 2026 The LAWNSec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lawnsec/dsl.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <set>
#include <utility>

#include "lawnsec/errors.h"

namespace lawnsec::dsl {
namespace {

using Kind = ExprError::Kind;
constexpr SlotKind S = SlotKind::kScalar;
constexpr SlotKind V = SlotKind::kVector;

const std::vector<BuiltinInfo> kBuiltins = {
    {Builtin::kAdd, "add", 2, {S, S, S}},
    {Builtin::kSub, "sub", 2, {S, S, S}},
    {Builtin::kMul, "mul", 2, {S, S, S}},
    {Builtin::kDiv, "div", 2, {S, S, S}},
    {Builtin::kNeg, "neg", 1, {S, S, S}},
    {Builtin::kAbs, "abs", 1, {S, S, S}},
    {Builtin::kMin, "min", 2, {S, S, S}},
    {Builtin::kMax, "max", 2, {S, S, S}},
    {Builtin::kClip, "clip", 3, {S, S, S}},
    {Builtin::kSqrt, "sqrt", 1, {S, S, S}},
    {Builtin::kLog, "log", 1, {S, S, S}},
    {Builtin::kExp, "exp", 1, {S, S, S}},
    {Builtin::kSin, "sin", 1, {S, S, S}},
    {Builtin::kCos, "cos", 1, {S, S, S}},
    {Builtin::kAtan2, "atan2", 2, {S, S, S}},
    {Builtin::kDot, "dot", 2, {V, V, S}},
    {Builtin::kNorm, "norm", 1, {V, S, S}},
    {Builtin::kDist, "dist", 2, {V, V, S}},
    {Builtin::kAngleBetween, "angle_between", 2, {V, V, S}},
};

bool IsIdentStart(char c) { return c >= 'a' && c <= 'z'; }
bool IsIdentChar(char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9') || c == '_';
}
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr Run() {
    Expr e = ParseExpr(1);
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg, Kind kind = Kind::kSyntax) {
    throw ExprError(kind,
                    msg + " at byte " + std::to_string(pos_), pos_);
  }

  void SkipSpace() {
    while (pos_ < text_.size() && IsSpace(text_[pos_])) ++pos_;
  }

  void CountNode() {
    if (++nodes_ > kMaxNodes) {
      Fail("expression exceeds " + std::to_string(kMaxNodes) + " nodes",
           Kind::kLimit);
    }
  }

  Expr ParseExpr(int depth) {
    if (depth > kMaxDepth) {
      Fail("expression exceeds depth " + std::to_string(kMaxDepth),
           Kind::kLimit);
    }
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    const char c = text_[pos_];
    if (IsIdentStart(c)) return ParseIdent(depth);
    if (IsDigit(c) || c == '-' || c == '+' || c == '.') return ParseNumber();
    Fail(std::string("unexpected character '") + c + "'");
  }

  Expr ParseNumber() {
    const std::size_t start = pos_;
    std::size_t i = pos_;
    if (text_[i] == '-' || text_[i] == '+') ++i;
    const std::size_t digits_start = i;
    while (i < text_.size() && IsDigit(text_[i])) ++i;
    bool any_digits = i > digits_start;
    if (i < text_.size() && text_[i] == '.') {
      ++i;
      const std::size_t frac_start = i;
      while (i < text_.size() && IsDigit(text_[i])) ++i;
      any_digits = any_digits || i > frac_start;
    }
    if (!any_digits) Fail("malformed number");
    if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
      ++i;
      if (i < text_.size() && (text_[i] == '-' || text_[i] == '+')) ++i;
      const std::size_t exp_start = i;
      while (i < text_.size() && IsDigit(text_[i])) ++i;
      if (i == exp_start) {
        pos_ = i;
        Fail("malformed exponent");
      }
    }
    // from_chars rejects a leading '+'.
    const std::size_t parse_from = text_[start] == '+' ? start + 1 : start;
    double value = 0.0;
    const auto res =
        std::from_chars(text_.data() + parse_from, text_.data() + i, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + i ||
        !std::isfinite(value)) {
      Fail("number out of range");
    }
    CountNode();
    pos_ = i;
    return Expr::Literal(value);
  }

  Expr ParseIdent(int depth) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    CountNode();
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != '(') {
      return Expr::Variable(std::move(name));
    }
    const auto op = LookupBuiltin(name);
    if (!op) {
      pos_ = start;
      Fail("unknown function '" + name + "'", Kind::kUnknownFunction);
    }
    ++pos_;  // '('
    std::vector<Expr> args;
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
    } else {
      while (true) {
        args.push_back(ParseExpr(depth + 1));
        SkipSpace();
        if (pos_ >= text_.size()) Fail("unterminated argument list");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        Fail("expected ',' or ')'");
      }
    }
    const int arity = Info(*op).arity;
    if (static_cast<int>(args.size()) != arity) {
      throw ExprError(Kind::kArity,
                      "function '" + name + "' expects " +
                          std::to_string(arity) + " argument(s), got " +
                          std::to_string(args.size()),
                      start);
    }
    return Expr::Call(*op, std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int nodes_ = 0;
};

void PrintTo(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::kLiteral: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof(buf), e.value);
      out.append(buf, res.ptr);
      return;
    }
    case Expr::Kind::kVariable:
      out += e.name;
      return;
    case Expr::Kind::kCall:
      out += Info(e.op).name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i > 0) out += ", ";
        PrintTo(e.args[i], out);
      }
      out += ')';
      return;
  }
}

void CollectVariables(const Expr& e, std::set<std::string>& names) {
  if (e.kind == Expr::Kind::kVariable) names.insert(e.name);
  for (const Expr& a : e.args) CollectVariables(a, names);
}

void ValidateNode(const Expr& e, SlotKind expected, const VarSchema& schema,
                  std::vector<ValidationIssue>& issues) {
  switch (e.kind) {
    case Expr::Kind::kLiteral:
      if (expected == SlotKind::kVector) {
        issues.push_back({Kind::kType, "literal " + Print(e) +
                                           " used where a vector is expected"});
      }
      return;
    case Expr::Kind::kVariable: {
      const auto dim = schema.Dimension(e.name);
      if (!dim) {
        issues.push_back(
            {Kind::kUnknownVariable, "unknown variable '" + e.name + "'"});
        return;
      }
      const bool is_vector = *dim > 0;
      if (is_vector && expected == SlotKind::kScalar) {
        issues.push_back({Kind::kType, "vector '" + e.name +
                                           "' used where a scalar is expected"});
      } else if (!is_vector && expected == SlotKind::kVector) {
        issues.push_back({Kind::kType, "scalar '" + e.name +
                                           "' used where a vector is expected"});
      }
      return;
    }
    case Expr::Kind::kCall: {
      const BuiltinInfo& info = Info(e.op);
      if (expected == SlotKind::kVector) {
        issues.push_back({Kind::kType, "call " + std::string(info.name) +
                                           "(...) used where a vector is "
                                           "expected"});
      }
      if (static_cast<int>(e.args.size()) != info.arity) {
        issues.push_back({Kind::kArity, "function '" + std::string(info.name) +
                                            "' has wrong arity"});
        return;
      }
      for (int i = 0; i < info.arity; ++i) {
        ValidateNode(e.args[i], info.slots[i], schema, issues);
      }
      if (info.arity == 2 && info.slots[0] == SlotKind::kVector) {
        const auto& a = e.args[0];
        const auto& b = e.args[1];
        if (a.kind == Expr::Kind::kVariable &&
            b.kind == Expr::Kind::kVariable) {
          const auto da = schema.Dimension(a.name);
          const auto db = schema.Dimension(b.name);
          if (da && db && *da > 0 && *db > 0 && *da != *db) {
            issues.push_back({Kind::kType, "dimension mismatch in " +
                                               Print(e)});
          }
        }
      }
      return;
    }
  }
}

[[noreturn]] void DomainFail(const Expr& e, const std::string& why) {
  throw ExprError(Kind::kDomain, why + " in " + Print(e));
}

const std::vector<double>& VectorArg(const Expr& arg, const Binding& b) {
  if (arg.kind != Expr::Kind::kVariable) {
    throw ExprError(Kind::kType, "vector slot requires a vector variable, got " +
                                     Print(arg));
  }
  const auto* v = b.FindVector(arg.name);
  if (v == nullptr) {
    throw ExprError(Kind::kUnknownVariable,
                    "unbound vector variable '" + arg.name + "'");
  }
  return *v;
}

double DotProduct(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double EvalNode(const Expr& e, const Binding& b) {
  switch (e.kind) {
    case Expr::Kind::kLiteral:
      return e.value;
    case Expr::Kind::kVariable: {
      const double* v = b.FindScalar(e.name);
      if (v == nullptr) {
        throw ExprError(Kind::kUnknownVariable,
                        "unbound scalar variable '" + e.name + "'");
      }
      return *v;
    }
    case Expr::Kind::kCall:
      break;
  }

  const BuiltinInfo& info = Info(e.op);
  if (static_cast<int>(e.args.size()) != info.arity) {
    throw ExprError(Kind::kArity, "wrong arity in " + Print(e));
  }

  double result = 0.0;
  if (info.slots[0] == SlotKind::kVector) {
    const auto& a = VectorArg(e.args[0], b);
    if (e.op == Builtin::kNorm) {
      result = std::sqrt(DotProduct(a, a));
    } else {
      const auto& c = VectorArg(e.args[1], b);
      if (a.size() != c.size()) DomainFail(e, "vector dimension mismatch");
      switch (e.op) {
        case Builtin::kDot:
          result = DotProduct(a, c);
          break;
        case Builtin::kDist: {
          double s = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - c[i];
            s += d * d;
          }
          result = std::sqrt(s);
          break;
        }
        case Builtin::kAngleBetween: {
          const double na = std::sqrt(DotProduct(a, a));
          const double nc = std::sqrt(DotProduct(c, c));
          if (na < kDivisionFloor || nc < kDivisionFloor) {
            DomainFail(e, "zero-length vector");
          }
          result = std::acos(std::clamp(DotProduct(a, c) / (na * nc), -1.0,
                                        1.0));
          break;
        }
        default:
          DomainFail(e, "internal: unexpected vector builtin");
      }
    }
  } else {
    double x[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < info.arity; ++i) x[i] = EvalNode(e.args[i], b);
    switch (e.op) {
      case Builtin::kAdd:
        result = x[0] + x[1];
        break;
      case Builtin::kSub:
        result = x[0] - x[1];
        break;
      case Builtin::kMul:
        result = x[0] * x[1];
        break;
      case Builtin::kDiv:
        if (std::abs(x[1]) < kDivisionFloor) DomainFail(e, "division by ~0");
        result = x[0] / x[1];
        break;
      case Builtin::kNeg:
        result = -x[0];
        break;
      case Builtin::kAbs:
        result = std::abs(x[0]);
        break;
      case Builtin::kMin:
        result = std::min(x[0], x[1]);
        break;
      case Builtin::kMax:
        result = std::max(x[0], x[1]);
        break;
      case Builtin::kClip:
        if (x[1] > x[2]) DomainFail(e, "clip with lo > hi");
        result = std::clamp(x[0], x[1], x[2]);
        break;
      case Builtin::kSqrt:
        if (x[0] < 0.0) DomainFail(e, "sqrt of negative value");
        result = std::sqrt(x[0]);
        break;
      case Builtin::kLog:
        if (x[0] <= 0.0) DomainFail(e, "log of non-positive value");
        result = std::log(x[0]);
        break;
      case Builtin::kExp:
        result = std::exp(x[0]);
        break;
      case Builtin::kSin:
        result = std::sin(x[0]);
        break;
      case Builtin::kCos:
        result = std::cos(x[0]);
        break;
      case Builtin::kAtan2:
        result = std::atan2(x[0], x[1]);
        break;
      default:
        DomainFail(e, "internal: unexpected scalar builtin");
    }
  }
  if (!std::isfinite(result)) DomainFail(e, "non-finite result");
  return result;
}

}  // namespace

const std::vector<BuiltinInfo>& Builtins() { return kBuiltins; }

const BuiltinInfo& Info(Builtin op) {
  return kBuiltins[static_cast<std::size_t>(op)];
}

std::optional<Builtin> LookupBuiltin(std::string_view name) {
  for (const auto& info : kBuiltins) {
    if (info.name == name) return info.op;
  }
  return std::nullopt;
}

Expr Expr::Literal(double v) {
  Expr e;
  e.kind = Kind::kLiteral;
  e.value = v;
  return e;
}

Expr Expr::Variable(std::string name) {
  Expr e;
  e.kind = Kind::kVariable;
  e.name = std::move(name);
  return e;
}

Expr Expr::Call(Builtin op, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::kCall;
  e.op = op;
  e.args = std::move(args);
  return e;
}

int Expr::NodeCount() const {
  int n = 1;
  for (const Expr& a : args) n += a.NodeCount();
  return n;
}

int Expr::Depth() const {
  int d = 0;
  for (const Expr& a : args) d = std::max(d, a.Depth());
  return d + 1;
}

std::vector<std::string> Expr::Variables() const {
  std::set<std::string> names;
  CollectVariables(*this, names);
  return {names.begin(), names.end()};
}

bool Expr::operator==(const Expr& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::kLiteral:
      return std::bit_cast<std::uint64_t>(value) ==
             std::bit_cast<std::uint64_t>(other.value);
    case Kind::kVariable:
      return name == other.name;
    case Kind::kCall:
      return op == other.op && args == other.args;
  }
  return false;
}

Expr Parse(std::string_view text) {
  if (text.size() > kMaxSourceBytes) {
    throw ExprError(Kind::kLimit, "expression text exceeds " +
                                      std::to_string(kMaxSourceBytes) +
                                      " bytes");
  }
  return Parser(text).Run();
}

std::string Print(const Expr& expr) {
  std::string out;
  PrintTo(expr, out);
  return out;
}

bool IsValidName(std::string_view name) {
  if (name.empty() || !IsIdentStart(name.front())) return false;
  return std::all_of(name.begin(), name.end(), IsIdentChar);
}

void VarSchema::CheckNew(const std::string& name) const {
  if (!IsValidName(name)) {
    throw InputError("invalid variable name '" + name + "'");
  }
  if (index_.count(name) != 0) {
    throw InputError("duplicate variable name '" + name + "'");
  }
}

void VarSchema::AddScalar(const std::string& name) {
  CheckNew(name);
  scalars_.push_back(name);
  index_.emplace(name, 0);
}

void VarSchema::AddVector(const std::string& name, int dim) {
  CheckNew(name);
  if (dim < 1) throw InputError("vector dimension must be >= 1");
  vectors_.emplace_back(name, dim);
  index_.emplace(name, dim);
}

bool VarSchema::Contains(std::string_view name) const {
  return index_.find(name) != index_.end();
}

std::optional<int> VarSchema::Dimension(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<ValidationIssue> Validate(const Expr& expr,
                                      const VarSchema& schema) {
  std::vector<ValidationIssue> issues;
  if (expr.Depth() > kMaxDepth || expr.NodeCount() > kMaxNodes) {
    issues.push_back({Kind::kLimit, "expression exceeds size limits"});
    return issues;
  }
  ValidateNode(expr, SlotKind::kScalar, schema, issues);
  return issues;
}

void Binding::SetScalar(const std::string& name, double value) {
  if (!std::isfinite(value)) {
    throw InputError("binding '" + name + "' must be finite");
  }
  scalars_[name] = value;
}

void Binding::SetVector(const std::string& name, std::vector<double> value) {
  for (double v : value) {
    if (!std::isfinite(v)) {
      throw InputError("binding '" + name + "' must be finite");
    }
  }
  vectors_[name] = std::move(value);
}

const double* Binding::FindScalar(std::string_view name) const {
  const auto it = scalars_.find(name);
  return it == scalars_.end() ? nullptr : &it->second;
}

const std::vector<double>* Binding::FindVector(std::string_view name) const {
  const auto it = vectors_.find(name);
  return it == vectors_.end() ? nullptr : &it->second;
}

double Eval(const Expr& expr, const Binding& binding) {
  return EvalNode(expr, binding);
}

double GuardedEval(const Expr& expr, const Binding& binding, double fallback,
                   EvalDiagnostics* diagnostics) {
  if (!std::isfinite(fallback)) throw InputError("fallback must be finite");
  try {
    return EvalNode(expr, binding);
  } catch (const ExprError& err) {
    if (diagnostics != nullptr) {
      ++diagnostics->error_count;
      diagnostics->last_error = err.what();
    }
    return fallback;
  }
}

}  // namespace lawnsec::dsl
