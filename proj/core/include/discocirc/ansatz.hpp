#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "discocirc/compose.hpp"

namespace discocirc {

enum class AnsatzKind { iqp, sim4 };

std::string ansatz_name(AnsatzKind k);
AnsatzKind parse_ansatz(const std::string& s);  // FormatError on unknown names

struct AnsatzConfig {
  AnsatzKind kind = AnsatzKind::sim4;
  int qubits_per_wire = 1;
  int layers = 1;
  bool share_parameters = true;
  std::uint64_t seed = 0;
  int qubit_cap = 14;  // 0 disables the check

  /// Throws FormatError for q < 1 or L < 1.
  void validate() const;
};

/// A gate is parameterised when `symbol` is non-empty; otherwise `value`
/// holds the literal angle (ignored by H, CX and SWAP).
struct Gate {
  std::string name;
  std::vector<int> qubits;
  std::string symbol;
  double value = 0.0;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<std::pair<int, int>> postselect;  // (qubit, required bit)
  std::map<std::string, double> symbols;        // initial values
  std::vector<int> outputs;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Gates on qubits 0..n-1; symbols are `prefix` followed by the parameter index.
std::vector<Gate> iqp_block(int n, int layers, const std::string& prefix = "");
std::vector<Gate> sim4_block(int n, int layers, const std::string& prefix = "");
std::vector<Gate> ansatz_block(AnsatzKind k, int n, int layers, const std::string& prefix = "");
/// Distinct symbols of a gate list.
std::size_t parameter_count(const std::vector<Gate>& gates);

/// Deterministic initial value in [0, 2pi) for a symbol.
double initial_value(std::uint64_t seed, const std::string& symbol);

/// Adds a "merge_w" box over all w output wires.
TextDiagram append_merge_box(const TextDiagram& d);
bool is_merge_box(const DiagramElement& e);

/// Lowers a frame-free text diagram.  Throws UnexpandedFrame, CapExceeded.
Circuit compile(const TextDiagram& d, const AnsatzConfig& cfg);

/// Checks qubit ranges, symbols and postselect/output overlap; InvalidDiagram.
void check_circuit(const Circuit& c);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& json_text);
/// One gate per line: "CRx 0 1 loves__2__4", literals printed with %.17g.
std::string circuit_to_text(const Circuit& c);

}  // namespace discocirc
