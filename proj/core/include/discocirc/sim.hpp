#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "discocirc/ansatz.hpp"

namespace discocirc {

using Amplitude = std::complex<double>;
using Params = std::map<std::string, double>;

/// Dense square matrix, row major.
struct Matrix {
  std::size_t dim = 0;
  std::vector<Amplitude> a;

  Matrix() = default;
  explicit Matrix(std::size_t d) : dim(d), a(d * d) {}
  static Matrix identity(std::size_t d);
  Amplitude& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  Amplitude operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

Matrix operator*(const Matrix& x, const Matrix& y);
Matrix kron(const Matrix& x, const Matrix& y);
Matrix adjoint(const Matrix& m);
double max_abs_diff(const Matrix& x, const Matrix& y);

/// 2x2 or 4x4 matrix of a gate at angle theta.  Two-qubit matrices use the
/// basis |q0 q1> with the first listed qubit as the high bit.
Matrix gate_matrix(const std::string& name, double theta);

/// Qubit q is bit q of an amplitude index.
struct StateVector {
  int n = 0;
  std::vector<Amplitude> amps;

  explicit StateVector(int qubits);  // |0...0>
  double norm() const;
  void apply(const Gate& g, double theta);
};

struct SimResult {
  std::vector<double> distribution;  // over outputs, first output is the high bit
  double success_probability = 1.0;
};

constexpr int default_qubit_cap = 14;

/// Angle of every gate, looked up in `params` (symbols) or taken literally.
/// Throws UnboundSymbol.
std::vector<double> gate_angles(const Circuit& c, const Params& params);

SimResult simulate(const Circuit& c, const Params& params, int cap = default_qubit_cap);
/// Same, with explicit per-gate angles.
SimResult simulate_angles(const Circuit& c, const std::vector<double>& angles, int cap = default_qubit_cap);

/// Unitary of the gate list (postselection ignored), column j = image of |j>.
Matrix circuit_unitary(const Circuit& c, const Params& params);
/// Same, built by multiplying full-size gate matrices.
Matrix oracle_unitary(const Circuit& c, const Params& params);

enum class GradientMethod { finite_diff, parameter_shift };

using LossFn = std::function<double(const SimResult&)>;

/// d loss / d symbol for every symbol of `params` used by the circuit.
Params gradient(const Circuit& c, const Params& params, const LossFn& loss, GradientMethod m,
                int cap = default_qubit_cap);

/// Binary cross entropy of the 2-outcome distribution, probabilities clamped.
double bce_loss(const SimResult& r, int label);

struct TrainConfig {
  int epochs = 60;
  int batch_size = 10;
  double learning_rate = 0.01;
  GradientMethod gradient = GradientMethod::parameter_shift;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  int threads = 0;  // 0 = hardware concurrency
  int cap = default_qubit_cap;

  /// Throws TrainingError.
  void validate() const;
};

struct Example {
  Circuit circuit;
  int label = 0;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0;
  double train_acc = 0;
  double test_acc = 0;

  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

struct TrainResult {
  Params params;
  std::vector<EpochStats> history;
  std::vector<std::size_t> train_index, test_index;
};

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

/// Predicted probability of label 1.
double predict(const Circuit& c, const Params& params, int cap = default_qubit_cap);

/// Adam on mean BCE.  Starting values come from the circuits' symbol tables,
/// first circuit wins.
TrainResult train(const std::vector<Example>& data, const TrainConfig& cfg);

/// "epoch,train_loss,train_acc,test_acc" plus one row per epoch.
std::string history_csv(const std::vector<EpochStats>& h);

/// JSON lines: {"text_id", "label", "circuit_path" | "circuit"}.  Relative
/// circuit paths resolve against the dataset file's directory.
std::vector<Example> load_dataset(const std::string& path);

}  // namespace discocirc
