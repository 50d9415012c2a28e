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


#include "advpinn/config.hpp"

#include "advpinn/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace advpinn {

namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
    const auto m = n.Mark();
    if (m.is_null())
        throw ConfigError(what);
    throw ConfigError(what, m.line + 1, m.column + 1);
}

/// Runs f, attaching the node position to position-less ConfigErrors.
template <class F>
auto located(const YAML::Node& n, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError& e) {
        if (e.line() >= 0)
            throw;
        fail(n, e.what());
    }
}

void require_map(const YAML::Node& n, const std::string& what) {
    if (!n.IsMap())
        fail(n, what + " must be a mapping");
}

void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& section) {
    require_map(n, section);
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            std::string list;
            for (const auto& a : allowed)
                list += (list.empty() ? "" : ", ") + a;
            fail(kv.first, "unknown key '" + key + "' in " + section + " (allowed: " + list + ")");
        }
    }
}

std::string scalar(const YAML::Node& n) {
    if (!n.IsScalar())
        fail(n, "expected a scalar");
    return n.Scalar();
}

double to_double(const YAML::Node& n) {
    const std::string s = scalar(n);
    if (s == ".inf" || s == ".Inf" || s == "+.inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-.inf" || s == "-.Inf")
        return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || std::isnan(v))
        fail(n, "expected a number, got '" + s + "'");
    return v;
}

long long to_integer(const YAML::Node& n) {
    const std::string s = scalar(n);
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0')
        fail(n, "expected an integer, got '" + s + "'");
    return v;
}

std::size_t to_count(const YAML::Node& n) {
    const auto v = to_integer(n);
    if (v < 0)
        fail(n, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

int to_int(const YAML::Node& n) {
    const auto v = to_integer(n);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        fail(n, "integer out of range");
    return static_cast<int>(v);
}

bool to_bool(const YAML::Node& n) {
    const std::string s = scalar(n);
    if (s == "true")
        return true;
    if (s == "false")
        return false;
    fail(n, "expected true or false, got '" + s + "'");
}

Expr to_expr(const YAML::Node& n) {
    return located(n, [&] { return Expr::parse(scalar(n)); });
}

template <class T, class F>
void opt(const YAML::Node& map, const char* key, T& field, F convert) {
    if (const auto n = map[key])
        field = convert(n);
}

std::string num(double v) {
    if (std::isinf(v))
        return v > 0 ? ".inf" : "-.inf";
    return format_double(v);
}

// ---- problem ----------------------------------------------------------------

Interval parse_interval(const YAML::Node& n) {
    const bool ball = n["center"] || n["radius"];
    const bool range = n["lo"] || n["hi"];
    if (ball == range)
        fail(n, "piece needs either center/radius or lo/hi");
    if (ball) {
        if (!n["center"] || !n["radius"])
            fail(n, "piece needs both center and radius");
        return Interval::ball(to_double(n["center"]), to_double(n["radius"]));
    }
    const double lo = n["lo"] ? to_double(n["lo"]) : -std::numeric_limits<double>::infinity();
    const double hi = n["hi"] ? to_double(n["hi"]) : std::numeric_limits<double>::infinity();
    return Interval::range(lo, hi);
}

PiecewiseFunction parse_piecewise(const YAML::Node& n, PiecewiseFunction::Axis axis) {
    PiecewiseFunction f;
    f.axis = axis;
    if (n.IsScalar()) {
        f.otherwise = to_expr(n);
        return f;
    }
    check_keys(n, {"pieces", "otherwise"}, "piecewise data");
    if (const auto pieces = n["pieces"]) {
        if (!pieces.IsSequence())
            fail(pieces, "pieces must be a list");
        for (const auto& p : pieces) {
            check_keys(p, {"center", "radius", "lo", "hi", "value"}, "piece");
            if (!p["value"])
                fail(p, "piece needs a value");
            f.pieces.push_back({parse_interval(p), to_expr(p["value"])});
        }
    }
    opt(n, "otherwise", f.otherwise, to_expr);
    return f;
}

SpeedSpec::Kind parse_speed_kind(const YAML::Node& n) {
    const auto s = scalar(n);
    if (s == "constant")
        return SpeedSpec::Kind::constant;
    if (s == "spacetime")
        return SpeedSpec::Kind::spacetime;
    if (s == "factored")
        return SpeedSpec::Kind::factored;
    if (s == "general")
        return SpeedSpec::Kind::general;
    fail(n, "unknown speed kind '" + s + "'; valid: constant, spacetime, factored, general");
}

const char* speed_kind_name(SpeedSpec::Kind k) {
    switch (k) {
    case SpeedSpec::Kind::constant: return "constant";
    case SpeedSpec::Kind::spacetime: return "spacetime";
    case SpeedSpec::Kind::factored: return "factored";
    case SpeedSpec::Kind::general: return "general";
    }
    return "";
}

BoundaryCondition parse_bc(const YAML::Node& n) {
    check_keys(n, {"side", "type", "alpha", "beta", "data"}, "bc entry");
    BoundaryCondition b;
    if (!n["side"])
        fail(n, "bc entry needs a side");
    const auto side = scalar(n["side"]);
    if (side == "left")
        b.side = Side::left;
    else if (side == "right")
        b.side = Side::right;
    else
        fail(n["side"], "side must be left or right");
    if (const auto t = n["type"]) {
        const auto s = scalar(t);
        if (s == "dirichlet")
            b.type = BoundaryCondition::Type::dirichlet;
        else if (s == "robin")
            b.type = BoundaryCondition::Type::robin;
        else
            fail(t, "bc type must be dirichlet or robin");
    }
    if (b.type == BoundaryCondition::Type::dirichlet && (n["alpha"] || n["beta"]))
        fail(n, "alpha and beta apply to robin conditions only");
    opt(n, "alpha", b.alpha, to_double);
    opt(n, "beta", b.beta, to_double);
    if (const auto d = n["data"])
        b.data = parse_piecewise(d, PiecewiseFunction::Axis::t);
    return b;
}

AdvectionProblem parse_problem(const YAML::Node& n) {
    if (n.IsScalar())
        return located(n, [&] { return catalog(n.Scalar()); });
    check_keys(n, {"name", "domain", "speed", "source", "ic", "bc", "bounds"}, "problem");
    AdvectionProblem p;
    opt(n, "name", p.name, scalar);
    const auto d = n["domain"];
    if (!d)
        fail(n, "problem needs a domain");
    check_keys(d, {"x_min", "x_max", "t_max"}, "domain");
    for (const char* k : {"x_min", "x_max", "t_max"})
        if (!d[k])
            fail(d, std::string("domain needs ") + k);
    p.x_min = to_double(d["x_min"]);
    p.x_max = to_double(d["x_max"]);
    p.t_max = to_double(d["t_max"]);
    const auto s = n["speed"];
    if (!s)
        fail(n, "problem needs a speed");
    check_keys(s, {"kind", "expr"}, "speed");
    if (!s["kind"] || !s["expr"])
        fail(s, "speed needs kind and expr");
    p.speed = {parse_speed_kind(s["kind"]), to_expr(s["expr"])};
    opt(n, "source", p.source, to_expr);
    if (!n["ic"])
        fail(n, "problem needs an ic");
    p.ic = parse_piecewise(n["ic"], PiecewiseFunction::Axis::x);
    if (const auto bc = n["bc"]) {
        if (!bc.IsSequence())
            fail(bc, "bc must be a list");
        for (const auto& e : bc)
            p.bc.push_back(parse_bc(e));
    }
    if (const auto b = n["bounds"]) {
        check_keys(b, {"lo", "hi"}, "bounds");
        if (!b["lo"] || !b["hi"])
            fail(b, "bounds need lo and hi");
        p.bounds = Bounds{to_double(b["lo"]), to_double(b["hi"])};
    }
    located(n, [&] { p.validate(); });
    return p;
}

void emit_piecewise(YAML::Emitter& out, const PiecewiseFunction& f) {
    out << YAML::BeginMap << YAML::Key << "pieces" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : f.pieces) {
        out << YAML::Flow << YAML::BeginMap;
        if (p.where.kind == Interval::Kind::ball)
            out << YAML::Key << "center" << YAML::Value << num(p.where.a) << YAML::Key << "radius" << YAML::Value
                << num(p.where.b);
        else
            out << YAML::Key << "lo" << YAML::Value << num(p.where.a) << YAML::Key << "hi" << YAML::Value
                << num(p.where.b);
        out << YAML::Key << "value" << YAML::Value << YAML::DoubleQuoted << p.value.source() << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "otherwise" << YAML::Value << YAML::DoubleQuoted << f.otherwise.source() << YAML::EndMap;
}

void emit_problem(YAML::Emitter& out, const AdvectionProblem& p) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << p.name;
    out << YAML::Key << "domain" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "x_min" << YAML::Value << num(p.x_min) << YAML::Key << "x_max" << YAML::Value << num(p.x_max)
        << YAML::Key << "t_max" << YAML::Value << num(p.t_max) << YAML::EndMap;
    out << YAML::Key << "speed" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << speed_kind_name(p.speed.kind) << YAML::Key << "expr" << YAML::Value
        << YAML::DoubleQuoted << p.speed.expr.source() << YAML::EndMap;
    out << YAML::Key << "source" << YAML::Value << YAML::DoubleQuoted << p.source.source();
    out << YAML::Key << "ic" << YAML::Value;
    emit_piecewise(out, p.ic);
    out << YAML::Key << "bc" << YAML::Value << YAML::BeginSeq;
    for (const auto& b : p.bc) {
        out << YAML::BeginMap;
        out << YAML::Key << "side" << YAML::Value << (b.side == Side::left ? "left" : "right");
        out << YAML::Key << "type" << YAML::Value
            << (b.type == BoundaryCondition::Type::dirichlet ? "dirichlet" : "robin");
        if (b.type == BoundaryCondition::Type::robin)
            out << YAML::Key << "alpha" << YAML::Value << num(b.alpha) << YAML::Key << "beta" << YAML::Value
                << num(b.beta);
        out << YAML::Key << "data" << YAML::Value;
        emit_piecewise(out, b.data);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    if (p.bounds)
        out << YAML::Key << "bounds" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "lo" << YAML::Value
            << num(p.bounds->lo) << YAML::Key << "hi" << YAML::Value << num(p.bounds->hi) << YAML::EndMap;
    out << YAML::EndMap;
}

YAML::Node load(const std::string& text) {
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("malformed config: " + e.msg, e.mark.line + 1, e.mark.column + 1);
    }
}

// ---- run config -------------------------------------------------------------

void parse_model(const YAML::Node& n, Architecture& a, const AdvectionProblem& problem) {
    check_keys(n, {"fourier_pairs", "sigma", "fourier_trainable", "hidden", "activation", "output"}, "model");
    opt(n, "fourier_pairs", a.fourier_pairs, to_int);
    opt(n, "sigma", a.sigma, to_double);
    opt(n, "fourier_trainable", a.fourier_trainable, to_bool);
    if (const auto h = n["hidden"]) {
        if (!h.IsSequence())
            fail(h, "hidden must be a list of widths");
        a.hidden.clear();
        for (const auto& w : h)
            a.hidden.push_back(to_int(w));
    }
    if (const auto act = n["activation"])
        if (scalar(act) != "tanh")
            fail(act, "unknown activation '" + act.Scalar() + "'; valid: tanh");
    if (const auto o = n["output"]) {
        const YAML::Node kind = o.IsScalar() ? o : o["kind"];
        if (!o.IsScalar())
            check_keys(o, {"kind", "lo", "hi"}, "output");
        if (!kind)
            fail(o, "output needs a kind");
        const auto k = scalar(kind);
        if (k == "identity") {
            a.output = OutputMap::identity();
        } else if (k == "bounded") {
            if (!o.IsScalar() && o["lo"] && o["hi"]) {
                const double lo = to_double(o["lo"]), hi = to_double(o["hi"]);
                a.output = located(o, [&] { return OutputMap::bounded(lo, hi); });
            } else if (problem.bounds) {
                a.output = OutputMap::bounded(problem.bounds->lo, problem.bounds->hi);
            } else {
                fail(o, "bounded output needs lo/hi or problem bounds");
            }
        } else {
            fail(kind, "unknown output kind '" + k + "'; valid: identity, bounded");
        }
    }
    located(n, [&] { a.validate(); });
}

Phase parse_phase(const YAML::Node& n) {
    check_keys(n, {"optimizer", "iters", "lr", "beta1", "beta2", "eps", "memory", "max_line_search"}, "phase");
    Phase p;
    if (!n["optimizer"])
        fail(n, "phase needs an optimizer");
    const auto o = scalar(n["optimizer"]);
    if (o == "adam")
        p.kind = Phase::Kind::adam;
    else if (o == "lbfgs")
        p.kind = Phase::Kind::lbfgs;
    else
        fail(n["optimizer"], "optimizer must be adam or lbfgs");
    const bool adam = p.kind == Phase::Kind::adam;
    for (const char* k : {"lr", "beta1", "beta2", "eps"})
        if (!adam && n[k])
            fail(n[k], std::string(k) + " applies to adam phases only");
    for (const char* k : {"memory", "max_line_search"})
        if (adam && n[k])
            fail(n[k], std::string(k) + " applies to lbfgs phases only");
    opt(n, "iters", p.max_iters, to_int);
    opt(n, "lr", p.adam.lr, to_double);
    opt(n, "beta1", p.adam.beta1, to_double);
    opt(n, "beta2", p.adam.beta2, to_double);
    opt(n, "eps", p.adam.eps, to_double);
    opt(n, "memory", p.lbfgs.memory, to_int);
    opt(n, "max_line_search", p.lbfgs.max_line_search, to_int);
    return p;
}

void parse_stage(const YAML::Node& n, StageConfig& s, const std::string& section) {
    check_keys(n, {"target", "weight_mode", "weights", "gradnorm_every", "phases", "stop"}, section);
    if (const auto t = n["target"])
        s.target = located(t, [&] { return parse_target(scalar(t)); });
    if (const auto m = n["weight_mode"]) {
        const auto v = scalar(m);
        if (v == "fixed")
            s.weight_mode = WeightMode::fixed;
        else if (v == "gradnorm")
            s.weight_mode = WeightMode::gradnorm;
        else
            fail(m, "weight_mode must be fixed or gradnorm");
    }
    if (const auto w = n["weights"]) {
        check_keys(w, {"pde", "ic", "bc"}, "weights");
        opt(w, "pde", s.weights.pde, to_double);
        opt(w, "ic", s.weights.ic, to_double);
        opt(w, "bc", s.weights.bc, to_double);
    }
    opt(n, "gradnorm_every", s.gradnorm_every, to_int);
    if (const auto ph = n["phases"]) {
        if (!ph.IsSequence())
            fail(ph, "phases must be a list");
        s.phases.clear();
        for (const auto& p : ph)
            s.phases.push_back(parse_phase(p));
    }
    if (const auto st = n["stop"]) {
        if (st.IsNull()) {
            s.stop.reset();
        } else {
            check_keys(st, {"watch", "window", "rel_tol", "hard_cap"}, "stop");
            BStopRule r = s.stop.value_or(BStopRule{});
            if (const auto w = st["watch"]) {
                const auto v = scalar(w);
                if (v == "mean_abs")
                    r.watch = BStopRule::Watch::mean_abs;
                else if (v == "max_abs")
                    r.watch = BStopRule::Watch::max_abs;
                else
                    fail(w, "watch must be mean_abs or max_abs");
            }
            opt(st, "window", r.plateau_window, to_int);
            opt(st, "rel_tol", r.plateau_rel_tol, to_double);
            if (const auto c = st["hard_cap"])
                r.hard_cap = c.IsNull() ? std::nullopt : std::optional<double>(to_double(c));
            s.stop = r;
        }
    }
    located(n, [&] { s.validate(); });
}

void emit_stage(YAML::Emitter& out, const StageConfig& s) {
    out << YAML::BeginMap;
    out << YAML::Key << "target" << YAML::Value << to_string(s.target);
    out << YAML::Key << "weight_mode" << YAML::Value << (s.weight_mode == WeightMode::fixed ? "fixed" : "gradnorm");
    out << YAML::Key << "weights" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "pde" << YAML::Value
        << num(s.weights.pde) << YAML::Key << "ic" << YAML::Value << num(s.weights.ic) << YAML::Key << "bc"
        << YAML::Value << num(s.weights.bc) << YAML::EndMap;
    out << YAML::Key << "gradnorm_every" << YAML::Value << s.gradnorm_every;
    out << YAML::Key << "phases" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : s.phases) {
        out << YAML::Flow << YAML::BeginMap;
        if (p.kind == Phase::Kind::adam) {
            out << YAML::Key << "optimizer" << YAML::Value << "adam" << YAML::Key << "iters" << YAML::Value
                << p.max_iters;
            out << YAML::Key << "lr" << YAML::Value << num(p.adam.lr) << YAML::Key << "beta1" << YAML::Value
                << num(p.adam.beta1) << YAML::Key << "beta2" << YAML::Value << num(p.adam.beta2) << YAML::Key << "eps"
                << YAML::Value << num(p.adam.eps);
        } else {
            out << YAML::Key << "optimizer" << YAML::Value << "lbfgs" << YAML::Key << "iters" << YAML::Value
                << p.max_iters;
            out << YAML::Key << "memory" << YAML::Value << p.lbfgs.memory << YAML::Key << "max_line_search"
                << YAML::Value << p.lbfgs.max_line_search;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "stop" << YAML::Value;
    if (s.stop) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "watch" << YAML::Value
            << (s.stop->watch == BStopRule::Watch::mean_abs ? "mean_abs" : "max_abs");
        out << YAML::Key << "window" << YAML::Value << s.stop->plateau_window;
        out << YAML::Key << "rel_tol" << YAML::Value << num(s.stop->plateau_rel_tol);
        out << YAML::Key << "hard_cap" << YAML::Value;
        if (s.stop->hard_cap)
            out << num(*s.stop->hard_cap);
        else
            out << YAML::Null;
        out << YAML::EndMap;
    } else {
        out << YAML::Null;
    }
    out << YAML::EndMap;
}

} // namespace

AdvectionProblem parse_problem_config(const std::string& text) {
    const auto root = load(text);
    if (!root || root.IsNull())
        throw ConfigError("empty problem config");
    return parse_problem(root);
}

std::string emit_problem_config(const AdvectionProblem& problem) {
    YAML::Emitter out;
    emit_problem(out, problem);
    return std::string(out.c_str()) + "\n";
}

RunConfig parse_run_config(const std::string& text) {
    const auto root = load(text);
    if (!root || root.IsNull())
        throw ConfigError("empty run config");
    check_keys(root,
               {"problem", "model", "loss", "stage1", "stage2", "collocation", "postprocess", "oracle", "seeds",
                "output"},
               "run config");
    RunConfig c;
    if (!root["problem"])
        fail(root, "run config needs a problem");
    c.problem = parse_problem(root["problem"]);
    if (const auto m = root["model"])
        parse_model(m, c.model, c.problem);
    if (const auto l = root["loss"]) {
        check_keys(l, {"variant", "h", "alpha"}, "loss");
        if (const auto v = l["variant"])
            c.variant = located(v, [&] { return parse_loss_variant(scalar(v)); });
        opt(l, "h", c.upwind.h, to_double);
        opt(l, "alpha", c.upwind.alpha, to_double);
        located(l, [&] {
            c.upwind.validate();
            check_variant(c.problem, c.variant);
        });
    }
    if (const auto s = root["stage1"])
        parse_stage(s, c.stage1, "stage1");
    if (const auto s = root["stage2"])
        parse_stage(s, c.stage2, "stage2");
    if (const auto col = root["collocation"]) {
        check_keys(col, {"n_pde", "n_ic", "n_bc", "seed", "sampling"}, "collocation");
        opt(col, "n_pde", c.collocation.n_pde, to_count);
        opt(col, "n_ic", c.collocation.n_ic, to_count);
        opt(col, "n_bc", c.collocation.n_bc, to_count);
        opt(col, "seed", c.collocation.seed, to_count);
        if (const auto s = col["sampling"])
            c.collocation.sampling = located(s, [&] { return parse_sampling(scalar(s)); });
    }
    if (const auto p = root["postprocess"]) {
        check_keys(p, {"k", "margin", "n_x", "skip_boundaries", "times"}, "postprocess");
        opt(p, "k", c.filter.k, to_int);
        opt(p, "margin", c.filter.margin, to_int);
        opt(p, "n_x", c.filter.n_x, to_int);
        opt(p, "skip_boundaries", c.filter.skip_boundaries, to_bool);
        if (const auto t = p["times"]) {
            if (!t.IsSequence())
                fail(t, "times must be a list");
            c.slice_times.clear();
            for (const auto& e : t)
                c.slice_times.push_back(to_double(e));
        }
        located(p, [&] { c.filter.validate(); });
    }
    if (const auto o = root["oracle"]) {
        check_keys(o, {"method", "dx", "cfl", "dt_ode"}, "oracle");
        if (const auto m = o["method"]) {
            const auto s = scalar(m);
            c.oracle.method = s == "auto" ? std::nullopt
                                          : std::optional<OracleMethod>(located(m, [&] { return parse_oracle_method(s); }));
        }
        opt(o, "dx", c.oracle.dx, to_double);
        opt(o, "cfl", c.oracle.cfl, to_double);
        opt(o, "dt_ode", c.oracle.dt_ode, to_double);
    }
    if (const auto s = root["seeds"]) {
        if (!s.IsSequence())
            fail(s, "seeds must be a list");
        c.seeds.clear();
        for (const auto& e : s)
            c.seeds.push_back(to_count(e));
    }
    opt(root, "output", c.output, scalar);
    located(root, [&] { c.validate(); });
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string emit_run_config(const RunConfig& c) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "problem" << YAML::Value;
    emit_problem(out, c.problem);

    const auto& a = c.model;
    out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "fourier_pairs" << YAML::Value << a.fourier_pairs;
    out << YAML::Key << "sigma" << YAML::Value << num(a.sigma);
    out << YAML::Key << "fourier_trainable" << YAML::Value << (a.fourier_trainable ? "true" : "false");
    out << YAML::Key << "hidden" << YAML::Value << YAML::Flow << a.hidden;
    out << YAML::Key << "activation" << YAML::Value << "tanh";
    out << YAML::Key << "output" << YAML::Value << YAML::Flow << YAML::BeginMap;
    if (a.output.kind == OutputMap::Kind::identity)
        out << YAML::Key << "kind" << YAML::Value << "identity";
    else
        out << YAML::Key << "kind" << YAML::Value << "bounded" << YAML::Key << "lo" << YAML::Value << num(a.output.lo)
            << YAML::Key << "hi" << YAML::Value << num(a.output.hi);
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "loss" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "variant" << YAML::Value << to_string(c.variant) << YAML::Key << "h" << YAML::Value
        << num(c.upwind.h) << YAML::Key << "alpha" << YAML::Value << num(c.upwind.alpha) << YAML::EndMap;

    out << YAML::Key << "stage1" << YAML::Value;
    emit_stage(out, c.stage1);
    out << YAML::Key << "stage2" << YAML::Value;
    emit_stage(out, c.stage2);

    out << YAML::Key << "collocation" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "n_pde" << YAML::Value << c.collocation.n_pde << YAML::Key << "n_ic" << YAML::Value
        << c.collocation.n_ic << YAML::Key << "n_bc" << YAML::Value << c.collocation.n_bc << YAML::Key << "seed"
        << YAML::Value << c.collocation.seed << YAML::Key << "sampling" << YAML::Value
        << to_string(c.collocation.sampling) << YAML::EndMap;

    out << YAML::Key << "postprocess" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "k" << YAML::Value << c.filter.k << YAML::Key << "margin" << YAML::Value << c.filter.margin
        << YAML::Key << "n_x" << YAML::Value << c.filter.n_x << YAML::Key << "skip_boundaries" << YAML::Value
        << (c.filter.skip_boundaries ? "true" : "false");
    out << YAML::Key << "times" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double t : c.slice_times)
        out << num(t);
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "oracle" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "method" << YAML::Value << (c.oracle.method ? to_string(*c.oracle.method) : "auto");
    out << YAML::Key << "dx" << YAML::Value << num(c.oracle.dx) << YAML::Key << "cfl" << YAML::Value
        << num(c.oracle.cfl) << YAML::Key << "dt_ode" << YAML::Value << num(c.oracle.dt_ode) << YAML::EndMap;

    out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << c.seeds;
    out << YAML::Key << "output" << YAML::Value << YAML::DoubleQuoted << c.output;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace advpinn
