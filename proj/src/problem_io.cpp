#include "halfline/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "halfline/errors.hpp"
#include "json.hpp"

namespace halfline {

namespace {

using nlohmann::json;

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ProblemFormatError(path_, msg); }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node child(const char* key) const {
    if (!has(key)) throw ProblemFormatError(path_ + "." + key, "required field missing");
    return Node(j_.at(key), path_ + "." + key);
  }

  Node object(const char* key) const {
    Node c = child(key);
    if (!c.j_.is_object()) c.fail("expected an object");
    return c;
  }

  double number(const char* key) const {
    Node c = child(key);
    if (!c.j_.is_number()) c.fail("expected a number");
    const double v = c.j_.get<double>();
    if (!std::isfinite(v)) c.fail("expected a finite number");
    return v;
  }

  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::size_t count(const char* key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    Node c = child(key);
    if (!c.j_.is_number_integer() || c.j_.get<long long>() < 0) c.fail("expected a nonnegative integer");
    return static_cast<std::size_t>(c.j_.get<long long>());
  }

  std::string string(const char* key) const {
    Node c = child(key);
    if (!c.j_.is_string()) c.fail("expected a string");
    return c.j_.get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    Node c = child(key);
    if (!c.j_.is_array()) c.fail("expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < c.j_.size(); ++i) {
      const json& e = c.j_[i];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        throw ProblemFormatError(c.path_ + "[" + std::to_string(i) + "]", "expected a finite number");
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!allowed.count(it.key())) throw ProblemFormatError(path_ + "." + it.key(), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
};

/// {"model": name, "params": {...}} with params defaulting to {}.
std::pair<std::string, Node> model_of(const Node& n) {
  n.only({"model", "params"});
  static const json empty = json::object();
  if (n.has("params")) return {n.string("model"), n.object("params")};
  return {n.string("model"), Node(empty, n.path() + ".params")};
}

int state_index(const Node& params) {
  const std::string s = params.string("state");
  if (s == "u") return 0;
  if (s == "v") return 1;
  params.child("state").fail("expected \"u\" or \"v\"");
}

RhsFunction read_rhs(const Node& n) {
  auto [model, params] = model_of(n);
  RhsFunction r;
  r.name = model;
  if (model == "zero") {
    params.only({});
    return RhsFunction::zero();
  }
  if (model == "constant") {
    params.only({"value"});
    const double c = params.number("value");
    r.eval = [c](double, double, double, double, double) { return c; };
  } else if (model == "exp-decay") {
    params.only({"amplitude", "rate"});
    const double a = params.number("amplitude"), k = params.number("rate");
    r.eval = [a, k](double t, double, double, double, double) { return a * std::exp(-k * t); };
  } else if (model == "exp-sin" || model == "exp-linear") {
    params.only({"coefficient", "rate", "state"});
    const double c = params.number("coefficient"), k = params.number("rate");
    const int idx = state_index(params);
    const bool sine = model == "exp-sin";
    r.eval = [c, k, idx, sine](double t, double x, double y, double, double) {
      const double s = idx == 0 ? x : y;
      return c * std::exp(-k * t) * (sine ? std::sin(s) : s);
    };
  } else {
    n.child("model").fail("unknown right-hand side model '" + model + "'");
  }
  return r;
}

ImpulseMap read_map(const Node& n) {
  auto [model, params] = model_of(n);
  ImpulseMap m;
  m.name = model;
  if (model == "zero") {
    params.only({});
    return ImpulseMap::zero();
  }
  if (model == "constant") {
    params.only({"value"});
    const double c = params.number("value");
    m.eval = [c](std::size_t, double, double, double) { return c; };
  } else if (model == "table") {
    params.only({"values"});
    const std::vector<double> v = params.numbers("values");
    m.eval = [v](std::size_t k, double, double, double) { return k >= 1 && k <= v.size() ? v[k - 1] : 0.0; };
  } else if (model == "linear-decay") {
    params.only({"a", "b", "exponent"});
    const double a = params.number("a"), b = params.number("b"), e = params.number("exponent");
    m.eval = [a, b, e](std::size_t k, double, double x, double dx) {
      return (a * x + b * dx) / std::pow(static_cast<double>(k), e);
    };
  } else {
    n.child("model").fail("unknown impulse map model '" + model + "'");
  }
  return m;
}

void read_bound_function(const Node& n, BoundFunction& fn, IntegralTailBound& tail) {
  auto [model, params] = model_of(n);
  if (model == "zero") {
    params.only({});
    fn = [](double, double) { return 0.0; };
    tail = [](double, double) { return 0.0; };
  } else if (model == "constant") {
    params.only({"value"});
    const double c = std::abs(params.number("value"));
    fn = [c](double, double) { return c; };
    tail = [c](double, double) { return c == 0.0 ? 0.0 : std::numeric_limits<double>::infinity(); };
  } else if (model == "exp-decay") {
    params.only({"amplitude", "rate"});
    const double a = std::abs(params.number("amplitude")), k = params.number("rate");
    if (!(k > 0.0)) params.child("rate").fail("rate must be positive");
    fn = [a, k](double, double t) { return a * std::exp(-k * t); };
    tail = [a, k](double, double t) { return a / k * std::exp(-k * t); };
  } else if (model == "exp-decay-linear") {
    params.only({"coefficient", "rate"});
    const double c = std::abs(params.number("coefficient")), k = params.number("rate");
    if (!(k > 0.0)) params.child("rate").fail("rate must be positive");
    fn = [c, k](double rho, double t) { return c * rho * (1.0 + t) * std::exp(-k * t); };
    tail = [c, k](double rho, double t) { return c * rho * std::exp(-k * t) * ((1.0 + t) / k + 1.0 / (k * k)); };
  } else {
    n.child("model").fail("unknown bound function model '" + model + "'");
  }
}

void read_bound_sequence(const Node& n, BoundSequence& seq, SequenceTailBound& tail) {
  auto [model, params] = model_of(n);
  if (model == "zero") {
    params.only({});
    seq = [](double, std::size_t) { return 0.0; };
    tail = [](double, std::size_t) { return 0.0; };
  } else if (model == "power-law") {
    params.only({"a", "b", "exponent"});
    const double a = params.number("a"), b = params.number("b"), e = params.number("exponent");
    seq = power_law_sequence(a, b, e);
    if (e > 2.0) tail = power_law_tail(a, b, e);
  } else if (model == "inverse-power") {
    params.only({"c", "exponent"});
    const double c = std::abs(params.number("c")), e = params.number("exponent");
    seq = [c, e](double, std::size_t k) { return c / std::pow(static_cast<double>(k), e); };
    if (e > 1.0) {
      tail = [c, e](double, std::size_t K) {
        if (K == 0) return std::numeric_limits<double>::infinity();
        return c / ((e - 1.0) * std::pow(static_cast<double>(K), e - 1.0));
      };
    }
  } else if (model == "table") {
    params.only({"values"});
    std::vector<double> v = params.numbers("values");
    for (double& x : v) x = std::abs(x);
    seq = [v](double, std::size_t k) { return k >= 1 && k <= v.size() ? v[k - 1] : 0.0; };
    tail = [v](double, std::size_t K) {
      double s = 0.0;
      for (std::size_t k = K + 1; k <= v.size(); ++k) s += v[k - 1];
      return s;
    };
  } else {
    n.child("model").fail("unknown bound sequence model '" + model + "'");
  }
}

ImpulseSchedule read_schedule(const Node& n) {
  if (n.has("points") && n.has("rule")) n.fail("give either 'points' or 'rule', not both");
  if (n.has("points")) return ImpulseSchedule::from_points(n.numbers("points"));
  if (n.has("rule")) {
    const Node r = n.object("rule");
    r.only({"type", "start", "step"});
    const std::string type = r.string("type");
    if (type != "arithmetic") r.child("type").fail("unknown rule type '" + type + "'");
    try {
      return ImpulseSchedule::arithmetic(r.number("start"), r.number("step"));
    } catch (const ValidationError& e) {
      r.fail(e.what());
    }
  }
  return ImpulseSchedule::none();
}

void read_solver(const Node& n, SolverConfig& sc) {
  n.only({"max_iter", "tol", "damping", "anderson"});
  sc.max_iter = n.count("max_iter", sc.max_iter);
  sc.tol = n.number("tol", sc.tol);
  sc.damping = n.number("damping", sc.damping);
  sc.anderson_depth = n.count("anderson", sc.anderson_depth);
}

void read_quadrature(const Node& n, QuadratureConfig& q) {
  n.only({"horizon", "panels_per_piece", "max_step", "gauss_points", "abs_tol"});
  q.horizon = n.number("horizon", q.horizon);
  q.panels_per_piece = n.count("panels_per_piece", q.panels_per_piece);
  q.max_step = n.number("max_step", q.max_step);
  q.gauss_points = n.count("gauss_points", q.gauss_points);
  q.abs_tol = n.number("abs_tol", q.abs_tol);
}

PendulumParams read_pendulum(const Node& params) {
  params.only({"m", "k", "g", "l0", "alpha", "beta", "gamma", "B1", "B2", "t0", "l_min"});
  PendulumParams pp;
  pp.m = params.number("m", pp.m);
  pp.k = params.number("k", pp.k);
  pp.g = params.number("g", pp.g);
  pp.l0 = params.number("l0", pp.l0);
  if (params.has("alpha")) {
    const Node a = params.child("alpha");
    if (a.raw().is_number()) {
      pp.alpha.fill(params.number("alpha"));
    } else {
      const std::vector<double> v = params.numbers("alpha");
      if (v.size() != 8) a.fail("expected 8 coefficients or a single number");
      std::copy(v.begin(), v.end(), pp.alpha.begin());
    }
  }
  pp.beta = params.number("beta", pp.beta);
  pp.gamma = params.number("gamma", pp.gamma);
  pp.B1 = params.number("B1", pp.B1);
  pp.B2 = params.number("B2", pp.B2);
  pp.t0 = params.number("t0", pp.t0);
  pp.l_min = params.number("l_min", pp.l_min);
  return pp;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

ProblemFile parse_problem(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "syntax error at line " << line_of(text, e.byte) << ": " << e.what();
    throw ProblemFormatError("$", msg.str());
  }
  const Node root(doc, "$");
  if (!doc.is_object()) root.fail("expected a JSON object");

  ProblemFile out;
  out.source = source;
  if (root.has("solver")) read_solver(root.object("solver"), out.solver);
  if (root.has("quadrature")) read_quadrature(root.object("quadrature"), out.quadrature);

  if (root.has("model")) {
    root.only({"name", "model", "params", "solver", "quadrature"});
    const std::string model = root.string("model");
    if (model != "spring-pendulum") root.child("model").fail("unknown problem model '" + model + "'");
    static const json empty = json::object();
    const Node params = root.has("params") ? root.object("params") : Node(empty, "$.params");
    try {
      out.pendulum = read_pendulum(params);
      out.problem = build_pendulum_problem(*out.pendulum);
      out.u_floor = out.pendulum->l_min;
    } catch (const ValidationError& e) {
      params.fail(e.what());
    }
    if (root.has("name")) out.problem.name = root.string("name");
    return out;
  }

  root.only({"name", "t0", "boundary", "f", "h", "impulses", "bounds", "solver", "quadrature"});
  ImpulsiveCoupledBVP& p = out.problem;
  if (root.has("name")) p.name = root.string("name");
  p.t0 = root.number("t0", 0.0);
  if (root.has("boundary")) {
    const Node b = root.object("boundary");
    b.only({"A1", "A2", "B1", "B2"});
    p.boundary = {b.number("A1", 0.0), b.number("A2", 0.0), b.number("B1", 0.0), b.number("B2", 0.0)};
  }
  if (root.has("f")) p.f = read_rhs(root.object("f"));
  if (root.has("h")) p.h = read_rhs(root.object("h"));

  if (root.has("impulses")) {
    const Node imp = root.object("impulses");
    imp.only({"u", "v"});
    if (imp.has("u")) {
      const Node u = imp.object("u");
      u.only({"points", "rule", "I0", "I1"});
      p.u_schedule = read_schedule(u);
      if (u.has("I0")) p.I0 = read_map(u.object("I0"));
      if (u.has("I1")) p.I1 = read_map(u.object("I1"));
    }
    if (imp.has("v")) {
      const Node v = imp.object("v");
      v.only({"points", "rule", "J0", "J1"});
      p.v_schedule = read_schedule(v);
      if (v.has("J0")) p.J0 = read_map(v.object("J0"));
      if (v.has("J1")) p.J1 = read_map(v.object("J1"));
    }
  }

  if (root.has("bounds")) {
    const Node bn = root.object("bounds");
    bn.only({"Phi", "Psi", "phi_seq", "psi_seq", "phij_seq", "thetaj_seq", "x_min"});
    auto b = std::make_shared<CaratheodoryBounds>();
    if (bn.has("Phi")) read_bound_function(bn.object("Phi"), b->Phi, b->Phi_tail);
    if (bn.has("Psi")) read_bound_function(bn.object("Psi"), b->Psi, b->Psi_tail);
    if (bn.has("phi_seq")) read_bound_sequence(bn.object("phi_seq"), b->phi_seq, b->phi_tail);
    if (bn.has("psi_seq")) read_bound_sequence(bn.object("psi_seq"), b->psi_seq, b->psi_tail);
    if (bn.has("phij_seq")) read_bound_sequence(bn.object("phij_seq"), b->phij_seq, b->phij_tail);
    if (bn.has("thetaj_seq")) read_bound_sequence(bn.object("thetaj_seq"), b->thetaj_seq, b->thetaj_tail);
    if (bn.has("x_min")) {
      const double x_min = bn.number("x_min");
      b->admissible = [x_min](double, double x, double, double, double) { return x >= x_min; };
      b->admissible_description = "x >= " + std::to_string(x_min);
      out.u_floor = x_min;
    }
    p.bounds = std::move(b);
  }
  return out;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemFormatError("$", "cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path);
}

}  // namespace halfline
