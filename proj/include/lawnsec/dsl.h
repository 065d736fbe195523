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

// Feature expression language for LLM-authored state features and
// intrinsic rewards.
//
// Grammar (prefix calls only):
//   expr    := number | ident | ident '(' expr (',' expr)* ')'
//   ident   := [a-z][a-z0-9_]*
//   number  := [+-]? digits ('.' digits?)? ([eE] [+-]? digits)?
//
// Function names come from a closed builtin table. Vector-typed variables
// may only appear as direct arguments of dot, norm, dist and angle_between;
// every expression evaluates to a scalar. Trees are limited to depth 32 and
// 512 nodes, and source text to 4096 bytes.

#ifndef LAWNSEC_DSL_H_
#define LAWNSEC_DSL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lawnsec::dsl {

inline constexpr int kMaxDepth = 32;
inline constexpr int kMaxNodes = 512;
inline constexpr std::size_t kMaxSourceBytes = 4096;
inline constexpr double kDivisionFloor = 1e-12;

enum class Builtin : std::uint8_t {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kAbs,
  kMin,
  kMax,
  kClip,
  kSqrt,
  kLog,
  kExp,
  kSin,
  kCos,
  kAtan2,
  kDot,
  kNorm,
  kDist,
  kAngleBetween,
};

enum class SlotKind : std::uint8_t { kScalar, kVector };

struct BuiltinInfo {
  Builtin op;
  std::string_view name;
  int arity;
  SlotKind slots[3];
};

const std::vector<BuiltinInfo>& Builtins();
const BuiltinInfo& Info(Builtin op);
std::optional<Builtin> LookupBuiltin(std::string_view name);

struct Expr {
  enum class Kind : std::uint8_t { kLiteral, kVariable, kCall };

  Kind kind = Kind::kLiteral;
  double value = 0.0;  // kLiteral
  std::string name;    // kVariable
  Builtin op = Builtin::kAdd;  // kCall
  std::vector<Expr> args;      // kCall

  static Expr Literal(double v);
  static Expr Variable(std::string name);
  static Expr Call(Builtin op, std::vector<Expr> args);

  int NodeCount() const;
  int Depth() const;
  // Sorted, de-duplicated variable names referenced anywhere in the tree.
  std::vector<std::string> Variables() const;

  // Structural equality; literals compare bit-for-bit.
  bool operator==(const Expr& other) const;
};

class ExprError : public std::runtime_error {
 public:
  enum class Kind {
    kSyntax,
    kUnknownFunction,
    kArity,
    kLimit,
    kUnknownVariable,
    kType,
    kDomain,
  };

  ExprError(Kind kind, const std::string& what, std::size_t offset = 0)
      : std::runtime_error(what), kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  // Byte offset into the source text for parse errors.
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

Expr Parse(std::string_view text);

// Canonical text; Parse(Print(e)) == e.
std::string Print(const Expr& expr);

bool IsValidName(std::string_view name);

// Declared variables: scalars, and vectors with a fixed dimension.
class VarSchema {
 public:
  void AddScalar(const std::string& name);
  void AddVector(const std::string& name, int dim);

  bool Contains(std::string_view name) const;
  // 0 for scalars, the dimension for vectors, nullopt when undeclared.
  std::optional<int> Dimension(std::string_view name) const;

  const std::vector<std::string>& scalars() const { return scalars_; }
  const std::vector<std::pair<std::string, int>>& vectors() const {
    return vectors_;
  }

 private:
  void CheckNew(const std::string& name) const;

  std::vector<std::string> scalars_;
  std::vector<std::pair<std::string, int>> vectors_;
  std::map<std::string, int, std::less<>> index_;
};

struct ValidationIssue {
  ExprError::Kind kind;
  std::string message;
};

// Empty result means the expression is well-typed against the schema.
std::vector<ValidationIssue> Validate(const Expr& expr,
                                      const VarSchema& schema);

class Binding {
 public:
  void SetScalar(const std::string& name, double value);
  void SetVector(const std::string& name, std::vector<double> value);

  const double* FindScalar(std::string_view name) const;
  const std::vector<double>* FindVector(std::string_view name) const;

 private:
  std::map<std::string, double, std::less<>> scalars_;
  std::map<std::string, std::vector<double>, std::less<>> vectors_;
};

// Throws ExprError(kDomain) naming the offending subexpression on
// division by |x| < 1e-12, log of x <= 0, sqrt of x < 0, a zero vector in
// angle_between, clip with lo > hi, or any non-finite intermediate.
double Eval(const Expr& expr, const Binding& binding);

struct EvalDiagnostics {
  std::int64_t error_count = 0;
  std::string last_error;
};

// Eval, or `fallback` on any ExprError. Never returns a non-finite value.
double GuardedEval(const Expr& expr, const Binding& binding, double fallback,
                   EvalDiagnostics* diagnostics = nullptr);

}  // namespace lawnsec::dsl

#endif  // LAWNSEC_DSL_H_
