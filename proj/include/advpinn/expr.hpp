// Copyright 2026 The advpinn Authors.
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

#pragma once

#include <string>
#include <vector>

namespace advpinn {

/// Value together with its derivative with respect to u.
struct Dual {
    double v = 0.0;
    double du = 0.0;
};

/// Compiled arithmetic expression in the variables x, t, u.
///
/// Grammar: + - * / ^, unary minus, parentheses, numbers, the constant pi and
/// the functions sin cos exp sqrt abs tanh. The source text is kept verbatim so
/// that configs round-trip losslessly.
class Expr {
public:
    Expr() : Expr(0.0) {}
    explicit Expr(double constant);
    /// Throws ConfigError (with the 1-based column) on malformed input.
    static Expr parse(const std::string& source);

    double operator()(double x, double t, double u = 0.0) const;
    Dual eval_du(double x, double t, double u) const;

    const std::string& source() const noexcept { return source_; }
    bool uses_x() const noexcept { return uses_x_; }
    bool uses_t() const noexcept { return uses_t_; }
    bool uses_u() const noexcept { return uses_u_; }
    bool is_constant() const noexcept { return !uses_x_ && !uses_t_ && !uses_u_; }

    bool operator==(const Expr& o) const { return source_ == o.source_; }

    enum class Op : unsigned char { Const, X, T, U, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt, Abs, Tanh };
    struct Instr {
        Op op;
        double value = 0.0;
    };

private:
    std::string source_;
    std::vector<Instr> code_;
    bool uses_x_ = false;
    bool uses_t_ = false;
    bool uses_u_ = false;
    int max_depth_ = 1;

    friend class ExprParser;
};

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

} // namespace advpinn
