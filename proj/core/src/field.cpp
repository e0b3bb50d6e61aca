#include "shs/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace shs {

std::vector<double> PhasePoint::stacked() const {
  std::vector<double> z;
  z.reserve(q.size() + p.size());
  z.insert(z.end(), q.begin(), q.end());
  z.insert(z.end(), p.begin(), p.end());
  return z;
}

PhasePoint PhasePoint::from_stacked(std::span<const double> z) {
  const std::size_t d = z.size() / 2;
  return {std::vector<double>(z.begin(), z.begin() + d),
          std::vector<double>(z.begin() + d, z.end())};
}

SymbolTable field_symbols(int d, const std::vector<std::pair<std::string, double>>& params) {
  std::vector<std::string> vars;
  vars.reserve(2 * d);
  for (int i = 0; i < d; ++i) vars.push_back("q" + std::to_string(i));
  for (int i = 0; i < d; ++i) vars.push_back("p" + std::to_string(i));
  std::vector<std::string> names;
  names.reserve(params.size());
  for (const auto& [name, value] : params) names.push_back(name);
  return SymbolTable(std::move(vars), std::move(names));
}

EvalEnv StochasticField::make_env() const {
  EvalEnv env(symbols);
  for (const auto& [name, value] : params) env.set(name, value);
  return env;
}

void StochasticField::load_point(EvalEnv& env, const PhasePoint& z) const {
  for (int i = 0; i < d; ++i) {
    env[i] = z.q[i];
    env[d + i] = z.p[i];
  }
}

// ---------------------------------------------------------------------------
// Field-definition file format

namespace {

struct Line {
  int number;
  std::string text;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  throw FieldFormatError(origin + ":" + std::to_string(line) + ": " + message);
}

std::string strip(std::string s) {
  const auto hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Parses "NAME[i]" or "NAME[i][j]" heads of component assignments.
bool parse_indices(std::string_view head, std::string_view name, int want,
                   int& i, int& j) {
  if (head.substr(0, name.size()) != name) return false;
  std::size_t pos = name.size();
  int out[2] = {0, 0};
  for (int k = 0; k < want; ++k) {
    if (pos >= head.size() || head[pos] != '[') return false;
    ++pos;
    const auto close = head.find(']', pos);
    if (close == std::string::npos) return false;
    const auto res = std::from_chars(head.data() + pos, head.data() + close, out[k]);
    if (res.ec != std::errc{} || res.ptr != head.data() + close) return false;
    pos = close + 1;
  }
  if (pos != head.size()) return false;
  i = out[0];
  j = out[1];
  return true;
}

double parse_real(const std::string& origin, int line, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(origin, line, "malformed real value '" + text + "'");
  return v;
}

}  // namespace

StochasticField parse_field(std::string_view text, const std::string& origin,
                            std::string label) {
  std::vector<Line> lines;
  {
    std::string row;
    std::istringstream stream{std::string(text)};
    int number = 0;
    while (std::getline(stream, row)) {
      ++number;
      std::string body = strip(row);
      if (!body.empty()) lines.push_back({number, std::move(body)});
    }
  }

  // Pass 1: dimensions, parameters, label.
  int d = -1;
  int n = 0;
  bool has_noise = false;
  std::vector<std::pair<std::string, double>> params;
  for (const auto& [number, body] : lines) {
    std::istringstream in(body);
    std::string head;
    in >> head;
    if (head == "dim") {
      if (d >= 0) fail(origin, number, "duplicate 'dim' directive");
      if (!(in >> d) || d < 1) fail(origin, number, "'dim' needs a positive integer");
    } else if (head == "noise") {
      if (has_noise) fail(origin, number, "duplicate 'noise' directive");
      has_noise = true;
      if (!(in >> n) || n < 0) fail(origin, number, "'noise' needs a non-negative integer");
    } else if (head == "label") {
      std::string rest;
      std::getline(in, rest);
      label = strip(rest);
      if (label.empty()) fail(origin, number, "'label' needs a value");
    } else if (head == "param") {
      std::string name, eq, value;
      in >> name >> eq >> value;
      if (name.empty() || eq != "=" || value.empty())
        fail(origin, number, "expected 'param <name> = <real>'");
      for (const auto& [existing, v] : params)
        if (existing == name) fail(origin, number, "duplicate parameter '" + name + "'");
      params.emplace_back(name, parse_real(origin, number, value));
    }
  }
  if (d < 0) fail(origin, lines.empty() ? 1 : lines.back().number, "missing 'dim' directive");

  StochasticField f;
  f.d = d;
  f.n = n;
  f.label = std::move(label);
  f.params = std::move(params);
  f.symbols = field_symbols(d, f.params);
  for (const auto& [name, value] : f.params)
    if (f.symbols.slot_of(name) < f.symbols.variable_count())
      throw FieldFormatError(origin + ": parameter '" + name + "' shadows a coordinate");

  f.x_qd.resize(d);
  f.x_pd.resize(d);
  const ExprPtr zero = Expr::number(0.0);
  f.x_qs.assign(d, std::vector<ExprPtr>(n, zero));
  f.x_ps.assign(d, std::vector<ExprPtr>(n, zero));

  // Pass 2: component assignments.
  for (const auto& [number, body] : lines) {
    const auto eq = body.find('=');
    std::string head = strip(body.substr(0, eq == std::string::npos ? body.size() : eq));
    if (head.rfind("QD", 0) != 0 && head.rfind("PD", 0) != 0 &&
        head.rfind("QS", 0) != 0 && head.rfind("PS", 0) != 0) {
      std::istringstream in(body);
      std::string word;
      in >> word;
      if (word == "dim" || word == "noise" || word == "label" || word == "param") continue;
      fail(origin, number, "unrecognized directive '" + word + "'");
    }
    if (eq == std::string::npos) fail(origin, number, "expected '=' in component assignment");
    const std::string source = strip(body.substr(eq + 1));
    if (source.empty()) fail(origin, number, "empty expression");

    ExprPtr e;
    try {
      e = bind_symbols(parse(source), f.symbols);
    } catch (const ParseError& err) {
      fail(origin, number, err.what());
    } catch (const UnknownSymbolError& err) {
      fail(origin, number, "undeclared symbol '" + err.name() + "'");
    }

    int i = 0, j = 0;
    if (parse_indices(head, "QD", 1, i, j) || parse_indices(head, "PD", 1, i, j)) {
      if (i < 0 || i >= d)
        fail(origin, number, "component index " + std::to_string(i) + " out of range for dim " +
                                 std::to_string(d));
      auto& slot = head[0] == 'Q' ? f.x_qd[i] : f.x_pd[i];
      if (slot) fail(origin, number, "duplicate assignment of " + head);
      slot = e;
    } else if (parse_indices(head, "QS", 2, i, j) || parse_indices(head, "PS", 2, i, j)) {
      if (i < 0 || i >= d)
        fail(origin, number, "component index " + std::to_string(i) + " out of range for dim " +
                                 std::to_string(d));
      if (j < 0 || j >= n)
        fail(origin, number, "channel index " + std::to_string(j) + " out of range for noise " +
                                 std::to_string(n));
      auto& slot = head[0] == 'Q' ? f.x_qs[i][j] : f.x_ps[i][j];
      if (slot != zero) fail(origin, number, "duplicate assignment of " + head);
      slot = e;
    } else {
      fail(origin, number, "malformed component '" + head + "'");
    }
  }

  for (int i = 0; i < d; ++i) {
    if (!f.x_qd[i]) throw FieldFormatError(origin + ": missing QD[" + std::to_string(i) + "]");
    if (!f.x_pd[i]) throw FieldFormatError(origin + ": missing PD[" + std::to_string(i) + "]");
  }
  return f;
}

StochasticField load_field(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FieldFormatError("cannot open field file '" + file.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_field(buffer.str(), file.string(), file.stem().string());
}

// ---------------------------------------------------------------------------
// Evaluation

FieldValues eval_field(const StochasticField& f, const PhasePoint& z) {
  EvalEnv env = f.make_env();
  f.load_point(env, z);
  FieldValues out;
  out.drift.resize(2 * f.d);
  out.diffusion.assign(2 * f.d, std::vector<double>(f.n));
  for (int i = 0; i < f.d; ++i) {
    out.drift[i] = eval(f.x_qd[i], env);
    out.drift[f.d + i] = eval(f.x_pd[i], env);
    for (int j = 0; j < f.n; ++j) {
      out.diffusion[i][j] = eval(f.x_qs[i][j], env);
      out.diffusion[f.d + i][j] = eval(f.x_ps[i][j], env);
    }
  }
  return out;
}

FieldJacobians jacobians(const StochasticField& f, const PhasePoint& z) {
  EvalEnv env = f.make_env();
  f.load_point(env, z);
  const int d = f.d, n = f.n;

  FieldJacobians J;
  auto square = [d] { return std::vector<std::vector<double>>(d, std::vector<double>(d)); };
  auto tensor = [d, n] {
    return std::vector<std::vector<std::vector<double>>>(
        d, std::vector<std::vector<double>>(n, std::vector<double>(d)));
  };
  J.dQD_dQ = square();
  J.dQD_dP = square();
  J.dPD_dQ = square();
  J.dPD_dP = square();
  J.dQS_dQ = tensor();
  J.dQS_dP = tensor();
  J.dPS_dQ = tensor();
  J.dPS_dP = tensor();

  // One dual sweep per coordinate direction: slots 0..d-1 are q, d..2d-1 are p.
  for (int k = 0; k < 2 * d; ++k) {
    const bool wrt_q = k < d;
    const int col = wrt_q ? k : k - d;
    for (int i = 0; i < d; ++i) {
      (wrt_q ? J.dQD_dQ : J.dQD_dP)[i][col] = eval_dual(f.x_qd[i], env, k).deriv;
      (wrt_q ? J.dPD_dQ : J.dPD_dP)[i][col] = eval_dual(f.x_pd[i], env, k).deriv;
      for (int j = 0; j < n; ++j) {
        (wrt_q ? J.dQS_dQ : J.dQS_dP)[i][j][col] = eval_dual(f.x_qs[i][j], env, k).deriv;
        (wrt_q ? J.dPS_dQ : J.dPS_dP)[i][j][col] = eval_dual(f.x_ps[i][j], env, k).deriv;
      }
    }
  }
  return J;
}

// ---------------------------------------------------------------------------
// Generation from a Hamiltonian pair

StochasticField field_from_hamiltonian(const ExprPtr& h_d, const std::vector<ExprPtr>& h_s,
                                       int d, std::vector<std::pair<std::string, double>> params,
                                       std::string label) {
  StochasticField f;
  f.d = d;
  f.n = static_cast<int>(h_s.size());
  f.label = std::move(label);
  f.params = std::move(params);
  f.symbols = field_symbols(d, f.params);

  const ExprPtr hd = bind_symbols(h_d, f.symbols);
  std::vector<ExprPtr> hs;
  hs.reserve(h_s.size());
  for (const auto& e : h_s) hs.push_back(bind_symbols(e, f.symbols));

  f.x_qd.resize(d);
  f.x_pd.resize(d);
  f.x_qs.assign(d, std::vector<ExprPtr>(f.n));
  f.x_ps.assign(d, std::vector<ExprPtr>(f.n));
  for (int i = 0; i < d; ++i) {
    const std::string qi = "q" + std::to_string(i);
    const std::string pi = "p" + std::to_string(i);
    f.x_qd[i] = differentiate(hd, pi);
    f.x_pd[i] = Expr::neg(differentiate(hd, qi));
    for (int j = 0; j < f.n; ++j) {
      f.x_qs[i][j] = differentiate(hs[j], pi);
      f.x_ps[i][j] = Expr::neg(differentiate(hs[j], qi));
    }
  }
  return f;
}

StochasticField field_from_hamiltonian(const std::string& h_d, const std::vector<std::string>& h_s,
                                       int d, std::vector<std::pair<std::string, double>> params,
                                       std::string label) {
  std::vector<ExprPtr> hs;
  hs.reserve(h_s.size());
  for (const auto& s : h_s) hs.push_back(parse(s));
  return field_from_hamiltonian(parse(h_d), hs, d, std::move(params), std::move(label));
}

// ---------------------------------------------------------------------------
// Ito correction

std::vector<double> ito_drift_correction(const StochasticField& f, const PhasePoint& z) {
  const int d = f.d, n = f.n;
  std::vector<double> mu(2 * d, 0.0);
  if (n == 0) return mu;

  const FieldValues values = eval_field(f, z);
  const FieldJacobians J = jacobians(f, z);

  // sigma_ij partial with respect to state coordinate k (stacked layout).
  auto dsigma = [&](int i, int j, int k) {
    const bool row_q = i < d;
    const bool col_q = k < d;
    const int r = row_q ? i : i - d;
    const int c = col_q ? k : k - d;
    if (row_q) return col_q ? J.dQS_dQ[r][j][c] : J.dQS_dP[r][j][c];
    return col_q ? J.dPS_dQ[r][j][c] : J.dPS_dP[r][j][c];
  };

  for (int i = 0; i < 2 * d; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < 2 * d; ++k) acc += dsigma(i, j, k) * values.diffusion[k][j];
    mu[i] = 0.5 * acc;
  }
  return mu;
}

}  // namespace shs
