#include "discocirc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "discocirc/errors.hpp"
#include "json_util.hpp"

namespace discocirc {

using namespace detail;

Matrix Matrix::identity(std::size_t d) {
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  Matrix out(x.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t k = 0; k < x.dim; ++k) {
      const Amplitude xik = x(i, k);
      if (xik == Amplitude{}) continue;
      for (std::size_t j = 0; j < x.dim; ++j) out(i, j) += xik * y(k, j);
    }
  return out;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.dim * y.dim);
  for (std::size_t a = 0; a < x.dim; ++a)
    for (std::size_t b = 0; b < x.dim; ++b)
      for (std::size_t c = 0; c < y.dim; ++c)
        for (std::size_t d = 0; d < y.dim; ++d) out(a * y.dim + c, b * y.dim + d) = x(a, b) * y(c, d);
  return out;
}

Matrix adjoint(const Matrix& m) {
  Matrix out(m.dim);
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) out(i, j) = std::conj(m(j, i));
  return out;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
  double d = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
  return d;
}

Matrix gate_matrix(const std::string& name, double theta) {
  using namespace std::complex_literals;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix m(2);
  if (name == "H") {
    const double r = 1 / std::numbers::sqrt2;
    m.a = {r, r, r, -r};
  } else if (name == "Rx") {
    m.a = {c, -1i * s, -1i * s, c};
  } else if (name == "Ry") {
    m.a = {c, -s, s, c};
  } else if (name == "Rz") {
    m.a = {std::exp(-0.5i * theta), 0, 0, std::exp(0.5i * theta)};
  } else if (name == "SWAP") {
    m = Matrix(4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  } else if (name == "CX") {
    m = Matrix(4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  } else if (name == "CRx" || name == "CRz") {
    const Matrix t = gate_matrix(name.substr(1), theta);
    m = Matrix::identity(4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m(2 + i, 2 + j) = t(i, j);
  } else {
    throw InvalidDiagram("unknown gate " + name);
  }
  return m;
}

StateVector::StateVector(int qubits) : n(qubits), amps(std::size_t{1} << qubits) { amps[0] = 1.0; }

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::apply(const Gate& g, double theta) {
  const Matrix m = gate_matrix(g.name, theta);
  const std::size_t size = amps.size();
  if (g.qubits.size() == 1) {
    const std::size_t bit = std::size_t{1} << g.qubits[0];
    for (std::size_t i = 0; i < size; ++i) {
      if (i & bit) continue;
      const Amplitude a0 = amps[i], a1 = amps[i | bit];
      amps[i] = m(0, 0) * a0 + m(0, 1) * a1;
      amps[i | bit] = m(1, 0) * a0 + m(1, 1) * a1;
    }
    return;
  }
  const std::size_t hi = std::size_t{1} << g.qubits[0];
  const std::size_t lo = std::size_t{1} << g.qubits[1];
  for (std::size_t i = 0; i < size; ++i) {
    if (i & (hi | lo)) continue;
    const std::size_t idx[4] = {i, i | lo, i | hi, i | hi | lo};
    Amplitude in[4], out[4];
    for (int k = 0; k < 4; ++k) in[k] = amps[idx[k]];
    for (std::size_t r = 0; r < 4; ++r) {
      out[r] = 0;
      for (std::size_t k = 0; k < 4; ++k) out[r] += m(r, k) * in[k];
    }
    for (int k = 0; k < 4; ++k) amps[idx[k]] = out[k];
  }
}

std::vector<double> gate_angles(const Circuit& c, const Params& params) {
  std::vector<double> out;
  out.reserve(c.gates.size());
  for (const auto& g : c.gates) {
    if (g.symbol.empty()) {
      out.push_back(g.value);
      continue;
    }
    auto it = params.find(g.symbol);
    if (it == params.end()) throw UnboundSymbol("no value for symbol " + g.symbol);
    out.push_back(it->second);
  }
  return out;
}

namespace {

void check_cap(const Circuit& c, int cap) {
  if (cap > 0 && c.n_qubits > cap)
    throw CapExceeded("circuit has " + std::to_string(c.n_qubits) + " qubits, cap is " + std::to_string(cap));
}

// Unnormalised probabilities of each output outcome after projecting the
// postselected qubits.
std::vector<double> raw_distribution(const Circuit& c, const std::vector<double>& angles) {
  StateVector psi(c.n_qubits);
  for (std::size_t i = 0; i < c.gates.size(); ++i) psi.apply(c.gates[i], angles[i]);
  std::size_t mask = 0, want = 0;
  for (const auto& [q, b] : c.postselect) {
    mask |= std::size_t{1} << q;
    if (b) want |= std::size_t{1} << q;
  }
  const std::size_t m = c.outputs.size();
  std::vector<double> out(std::size_t{1} << m, 0.0);
  for (std::size_t i = 0; i < psi.amps.size(); ++i) {
    if ((i & mask) != want) continue;
    std::size_t k = 0;
    for (std::size_t j = 0; j < m; ++j) k = (k << 1) | ((i >> c.outputs[j]) & 1);
    out[k] += std::norm(psi.amps[i]);
  }
  return out;
}

SimResult normalise(std::vector<double> p) {
  SimResult r;
  r.success_probability = 0;
  for (double x : p) r.success_probability += x;
  if (!(r.success_probability >= 1e-30))
    throw ZeroNorm("postselection probability " + std::to_string(r.success_probability));
  for (auto& x : p) x /= r.success_probability;
  r.distribution = std::move(p);
  return r;
}

}  // namespace

SimResult simulate_angles(const Circuit& c, const std::vector<double>& angles, int cap) {
  check_cap(c, cap);
  return normalise(raw_distribution(c, angles));
}

SimResult simulate(const Circuit& c, const Params& params, int cap) {
  return simulate_angles(c, gate_angles(c, params), cap);
}

Matrix circuit_unitary(const Circuit& c, const Params& params) {
  const auto angles = gate_angles(c, params);
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  Matrix u(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    StateVector psi(c.n_qubits);
    psi.amps[0] = 0;
    psi.amps[j] = 1;
    for (std::size_t i = 0; i < c.gates.size(); ++i) psi.apply(c.gates[i], angles[i]);
    for (std::size_t r = 0; r < dim; ++r) u(r, j) = psi.amps[r];
  }
  return u;
}

Matrix oracle_unitary(const Circuit& c, const Params& params) {
  const auto angles = gate_angles(c, params);
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  Matrix u = Matrix::identity(dim);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    const Matrix small = gate_matrix(g.name, angles[i]);
    Matrix full;
    if (g.qubits.size() == 1) {
      // Highest qubit is the leftmost tensor factor.
      full = Matrix::identity(1);
      for (int q = c.n_qubits - 1; q >= 0; --q) full = kron(full, q == g.qubits[0] ? small : Matrix::identity(2));
    } else {
      full = Matrix(dim);
      const int q0 = g.qubits[0], q1 = g.qubits[1];
      const std::size_t rest = ~((std::size_t{1} << q0) | (std::size_t{1} << q1));
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t col = 0; col < dim; ++col) {
          if ((r & rest) != (col & rest)) continue;
          const std::size_t a = (((r >> q0) & 1) << 1) | ((r >> q1) & 1);
          const std::size_t b = (((col >> q0) & 1) << 1) | ((col >> q1) & 1);
          full(r, col) = small(a, b);
        }
    }
    u = full * u;
  }
  return u;
}

Params gradient(const Circuit& c, const Params& params, const LossFn& loss, GradientMethod m, int cap) {
  check_cap(c, cap);
  auto angles = gate_angles(c, params);
  Params out;
  for (const auto& g : c.gates)
    if (!g.symbol.empty()) out[g.symbol] = 0.0;

  if (m == GradientMethod::finite_diff) {
    const double h = 1e-6;
    for (auto& [sym, grad] : out) {
      auto plus = params, minus = params;
      plus[sym] += h;
      minus[sym] -= h;
      grad = (loss(simulate(c, plus, cap)) - loss(simulate(c, minus, cap))) / (2 * h);
    }
    return out;
  }

  // Shift rules give exact derivatives of the outcome probabilities; the
  // loss is chained on classically.
  const auto base = raw_distribution(c, angles);
  std::vector<double> dl(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    const double h = 1e-7;
    auto up = base, down = base;
    up[k] += h;
    down[k] -= h;
    dl[k] = (loss(normalise(up)) - loss(normalise(down))) / (2 * h);
  }
  auto shifted = [&](std::size_t i, double delta) {
    const double keep = angles[i];
    angles[i] = keep + delta;
    auto p = raw_distribution(c, angles);
    angles[i] = keep;
    double s = 0;
    for (std::size_t k = 0; k < p.size(); ++k) s += dl[k] * p[k];
    return s;
  };
  constexpr double half_pi = std::numbers::pi / 2;
  const double d1 = (std::numbers::sqrt2 + 1) / (4 * std::numbers::sqrt2);
  const double d2 = (std::numbers::sqrt2 - 1) / (4 * std::numbers::sqrt2);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    if (g.symbol.empty()) continue;
    double d;
    if (g.name == "CRx" || g.name == "CRz")
      d = d1 * (shifted(i, half_pi) - shifted(i, -half_pi)) - d2 * (shifted(i, 3 * half_pi) - shifted(i, -3 * half_pi));
    else
      d = 0.5 * (shifted(i, half_pi) - shifted(i, -half_pi));
    out[g.symbol] += d;
  }
  return out;
}

double bce_loss(const SimResult& r, int label) {
  if (r.distribution.size() != 2)
    throw TrainingError("expected a single output qubit, got " + std::to_string(r.distribution.size()) + " outcomes");
  const double p = std::clamp(r.distribution[1], 1e-12, 1 - 1e-12);
  return label ? -std::log(p) : -std::log(1 - p);
}

void TrainConfig::validate() const {
  if (epochs < 1) throw TrainingError("epochs must be at least 1");
  if (batch_size < 1) throw TrainingError("batch size must be at least 1");
  if (!(learning_rate >= 0)) throw TrainingError("learning rate must not be negative");
  if (!(test_fraction >= 0 && test_fraction < 1)) throw TrainingError("test fraction must lie in [0, 1)");
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

double predict(const Circuit& c, const Params& params, int cap) {
  auto r = simulate(c, params, cap);
  if (r.distribution.size() != 2) throw TrainingError("expected a single output qubit");
  return r.distribution[1];
}

namespace {

// Runs f(0..n-1) on up to `threads` workers.  Each index is handled once.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

TrainResult train(const std::vector<Example>& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) throw TrainingError("empty dataset");
  const int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  TrainResult res;
  for (const auto& ex : data) {
    if (ex.label != 0 && ex.label != 1) throw TrainingError("labels must be 0 or 1");
    for (const auto& [s, v] : ex.circuit.symbols) res.params.emplace(s, v);
  }
  std::vector<std::string> names;
  for (const auto& [s, v] : res.params) names.push_back(s);
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < names.size(); ++i) slot[names[i]] = i;

  auto order = shuffled_indices(data.size(), cfg.seed);
  const auto n_test = static_cast<std::size_t>(std::floor(cfg.test_fraction * static_cast<double>(data.size())));
  res.test_index.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  res.train_index.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  if (res.train_index.empty()) throw TrainingError("no training examples after the split");

  std::vector<double> m(names.size(), 0.0), v(names.size(), 0.0);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  long step = 0;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  auto evaluate = [&](const std::vector<std::size_t>& idx, double* loss, double* acc) {
    std::vector<double> l(idx.size()), ok(idx.size());
    parallel_for(idx.size(), threads, [&](std::size_t i) {
      const auto& ex = data[idx[i]];
      auto r = simulate(ex.circuit, res.params, cfg.cap);
      l[i] = bce_loss(r, ex.label);
      ok[i] = (r.distribution[1] > 0.5) == (ex.label == 1) ? 1.0 : 0.0;
    });
    double sl = 0, sa = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) sl += l[i], sa += ok[i];
    if (loss) *loss = idx.empty() ? 0.0 : sl / static_cast<double>(idx.size());
    if (acc) *acc = idx.empty() ? 0.0 : sa / static_cast<double>(idx.size());
  };

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    auto batch_order = res.train_index;
    for (std::size_t i = batch_order.size(); i > 1; --i)
      std::swap(batch_order[i - 1], batch_order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);

    for (std::size_t start = 0; start < batch_order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(batch_order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<Params> grads(end - start);
      parallel_for(grads.size(), threads, [&](std::size_t i) {
        const auto& ex = data[batch_order[start + i]];
        grads[i] = gradient(
            ex.circuit, res.params, [&](const SimResult& r) { return bce_loss(r, ex.label); }, cfg.gradient, cfg.cap);
      });
      std::vector<double> g(names.size(), 0.0);
      for (const auto& gi : grads)
        for (const auto& [s, d] : gi) g[slot.at(s)] += d;
      ++step;
      const double scale = 1.0 / static_cast<double>(grads.size());
      for (std::size_t k = 0; k < names.size(); ++k) {
        const double gk = g[k] * scale;
        m[k] = b1 * m[k] + (1 - b1) * gk;
        v[k] = b2 * v[k] + (1 - b2) * gk * gk;
        const double mh = m[k] / (1 - std::pow(b1, static_cast<double>(step)));
        const double vh = v[k] / (1 - std::pow(b2, static_cast<double>(step)));
        res.params[names[k]] -= cfg.learning_rate * mh / (std::sqrt(vh) + eps);
      }
    }

    EpochStats st;
    st.epoch = epoch;
    evaluate(res.train_index, &st.train_loss, &st.train_acc);
    evaluate(res.test_index, nullptr, &st.test_acc);
    if (!std::isfinite(st.train_loss)) throw TrainingError("loss diverged at epoch " + std::to_string(epoch));
    res.history.push_back(st);
  }
  return res;
}

std::string history_csv(const std::vector<EpochStats>& h) {
  std::ostringstream os;
  os.precision(10);
  os << "epoch,train_loss,train_acc,test_acc\n";
  for (const auto& e : h) os << e.epoch << ',' << e.train_loss << ',' << e.train_acc << ',' << e.test_acc << '\n';
  return os.str();
}

std::vector<Example> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad(path, "cannot open dataset");
  const auto base = std::filesystem::path(path).parent_path();
  std::vector<Example> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      bad(where, e.what());
    }
    Example ex;
    try {
      ex.label = j.at("label").get<int>();
      if (j.contains("circuit")) {
        ex.circuit = circuit_from_json(j["circuit"].dump());
      } else {
        auto p = std::filesystem::path(j.at("circuit_path").get<std::string>());
        if (p.is_relative()) p = base / p;
        std::ifstream cf(p);
        if (!cf) bad(where, "cannot open " + p.string());
        ex.circuit = circuit_from_json(slurp(cf));
      }
    } catch (const json::exception& e) {
      bad(where, e.what());
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace discocirc
