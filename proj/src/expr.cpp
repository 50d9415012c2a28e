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

#include "advpinn/expr.hpp"

#include "advpinn/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace advpinn {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : src_(s) {}

    Expr run() {
        Expr e;
        e.source_ = src_;
        e.code_.clear();
        out_ = &e.code_;
        expression();
        skip_ws();
        if (pos_ != src_.size())
            fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        if (out_->empty())
            fail("empty expression");
        int depth = 0;
        for (const auto& in : e.code_) {
            switch (in.op) {
            case Expr::Op::Const:
            case Expr::Op::X:
            case Expr::Op::T:
            case Expr::Op::U:
                ++depth;
                break;
            case Expr::Op::Add:
            case Expr::Op::Sub:
            case Expr::Op::Mul:
            case Expr::Op::Div:
            case Expr::Op::Pow:
                --depth;
                break;
            default:
                break;
            }
            e.max_depth_ = std::max(e.max_depth_, depth);
            e.uses_x_ |= in.op == Expr::Op::X;
            e.uses_t_ |= in.op == Expr::Op::T;
            e.uses_u_ |= in.op == Expr::Op::U;
        }
        return e;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;
    std::vector<Expr::Instr>* out_ = nullptr;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression '" + src_ + "': " + msg + " at column " + std::to_string(pos_ + 1));
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void emit(Expr::Op op, double v = 0.0) { out_->push_back({op, v}); }

    void expression() {
        term();
        for (;;) {
            if (accept('+')) {
                term();
                emit(Expr::Op::Add);
            } else if (accept('-')) {
                term();
                emit(Expr::Op::Sub);
            } else {
                return;
            }
        }
    }

    void term() {
        unary();
        for (;;) {
            if (accept('*')) {
                unary();
                emit(Expr::Op::Mul);
            } else if (accept('/')) {
                unary();
                emit(Expr::Op::Div);
            } else {
                return;
            }
        }
    }

    void unary() {
        if (accept('-')) {
            unary();
            emit(Expr::Op::Neg);
        } else if (accept('+')) {
            unary();
        } else {
            power();
        }
    }

    void power() {
        primary();
        if (accept('^')) {
            unary(); // right associative: 2^-x^2 == 2^(-(x^2))
            emit(Expr::Op::Pow);
        }
    }

    void primary() {
        skip_ws();
        if (pos_ >= src_.size())
            fail("unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
            if (ec != std::errc())
                fail("bad number");
            pos_ = static_cast<std::size_t>(ptr - src_.data());
            emit(Expr::Op::Const, v);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string name = src_.substr(start, pos_ - start);
            if (name == "x")
                return emit(Expr::Op::X);
            if (name == "t")
                return emit(Expr::Op::T);
            if (name == "u")
                return emit(Expr::Op::U);
            if (name == "pi")
                return emit(Expr::Op::Const, std::numbers::pi);
            static const std::array<std::pair<const char*, Expr::Op>, 6> funcs{{{"sin", Expr::Op::Sin},
                                                                                 {"cos", Expr::Op::Cos},
                                                                                 {"exp", Expr::Op::Exp},
                                                                                 {"sqrt", Expr::Op::Sqrt},
                                                                                 {"abs", Expr::Op::Abs},
                                                                                 {"tanh", Expr::Op::Tanh}}};
            for (const auto& [fname, op] : funcs) {
                if (name == fname) {
                    if (!accept('('))
                        fail("expected '(' after " + name);
                    expression();
                    if (!accept(')'))
                        fail("expected ')'");
                    emit(op);
                    return;
                }
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (accept('(')) {
            expression();
            if (!accept(')'))
                fail("expected ')'");
            return;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

Expr::Expr(double constant) : source_(format_double(constant)), code_{{Op::Const, constant}} {}

Expr Expr::parse(const std::string& source) { return ExprParser(source).run(); }

namespace {

constexpr int kStackLimit = 64;

} // namespace

double Expr::operator()(double x, double t, double u) const {
    if (max_depth_ > kStackLimit)
        throw Error("expression too deeply nested: " + source_);
    std::array<double, kStackLimit> st;
    int sp = 0;
    for (const auto& in : code_) {
        switch (in.op) {
        case Op::Const: st[sp++] = in.value; break;
        case Op::X: st[sp++] = x; break;
        case Op::T: st[sp++] = t; break;
        case Op::U: st[sp++] = u; break;
        case Op::Add: --sp; st[sp - 1] += st[sp]; break;
        case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
        case Op::Pow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
        case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
        case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
        case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
        case Op::Sqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
        case Op::Abs: st[sp - 1] = std::abs(st[sp - 1]); break;
        case Op::Tanh: st[sp - 1] = std::tanh(st[sp - 1]); break;
        }
    }
    return st[0];
}

Dual Expr::eval_du(double x, double t, double u) const {
    if (max_depth_ > kStackLimit)
        throw Error("expression too deeply nested: " + source_);
    std::array<Dual, kStackLimit> st;
    int sp = 0;
    for (const auto& in : code_) {
        switch (in.op) {
        case Op::Const: st[sp++] = {in.value, 0.0}; break;
        case Op::X: st[sp++] = {x, 0.0}; break;
        case Op::T: st[sp++] = {t, 0.0}; break;
        case Op::U: st[sp++] = {u, 1.0}; break;
        case Op::Add: {
            --sp;
            st[sp - 1] = {st[sp - 1].v + st[sp].v, st[sp - 1].du + st[sp].du};
            break;
        }
        case Op::Sub: {
            --sp;
            st[sp - 1] = {st[sp - 1].v - st[sp].v, st[sp - 1].du - st[sp].du};
            break;
        }
        case Op::Mul: {
            --sp;
            const Dual a = st[sp - 1], b = st[sp];
            st[sp - 1] = {a.v * b.v, a.du * b.v + a.v * b.du};
            break;
        }
        case Op::Div: {
            --sp;
            const Dual a = st[sp - 1], b = st[sp];
            st[sp - 1] = {a.v / b.v, (a.du * b.v - a.v * b.du) / (b.v * b.v)};
            break;
        }
        case Op::Pow: {
            --sp;
            const Dual a = st[sp - 1], b = st[sp];
            const double v = std::pow(a.v, b.v);
            double d = 0.0;
            if (a.du != 0.0)
                d += b.v * std::pow(a.v, b.v - 1.0) * a.du;
            if (b.du != 0.0)
                d += v * std::log(a.v) * b.du;
            st[sp - 1] = {v, d};
            break;
        }
        case Op::Neg: st[sp - 1] = {-st[sp - 1].v, -st[sp - 1].du}; break;
        case Op::Sin: {
            const Dual a = st[sp - 1];
            st[sp - 1] = {std::sin(a.v), std::cos(a.v) * a.du};
            break;
        }
        case Op::Cos: {
            const Dual a = st[sp - 1];
            st[sp - 1] = {std::cos(a.v), -std::sin(a.v) * a.du};
            break;
        }
        case Op::Exp: {
            const double e = std::exp(st[sp - 1].v);
            st[sp - 1] = {e, e * st[sp - 1].du};
            break;
        }
        case Op::Sqrt: {
            const double r = std::sqrt(st[sp - 1].v);
            st[sp - 1] = {r, st[sp - 1].du / (2.0 * r)};
            break;
        }
        case Op::Abs: {
            const Dual a = st[sp - 1];
            st[sp - 1] = {std::abs(a.v), a.v < 0.0 ? -a.du : a.du};
            break;
        }
        case Op::Tanh: {
            const double th = std::tanh(st[sp - 1].v);
            st[sp - 1] = {th, (1.0 - th * th) * st[sp - 1].du};
            break;
        }
        }
    }
    return st[0];
}

std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw Error("cannot format number");
    return std::string(buf.data(), ptr);
}

} // namespace advpinn
