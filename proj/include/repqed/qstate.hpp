// Copyright 2026 The repqed Authors
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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace repqed {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using QubitList = std::vector<std::size_t>;

/// Physicality checks (hermiticity, trace, positivity).
inline constexpr double kPhysicalTol = 1e-9;
/// Unitarity and normalization checks.
inline constexpr double kUnitaryTol = 1e-10;

/// Raised when a state or map violates a physicality invariant.
class PhysicalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pure state on n qubits. Basis index bit (n-1-q) holds qubit q, i.e. qubit 0
/// is the most significant bit of the basis label.
class PureState {
 public:
  PureState(std::size_t n_qubits, Vector amplitudes, double tol = kUnitaryTol);

  static PureState basis(std::size_t n_qubits, std::size_t index);
  /// a ⊗ b, with a on the leading (most significant) qubits.
  static PureState tensor(const PureState& a, const PureState& b);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  std::size_t n_qubits_;
  Vector amplitudes_;
};

/// Density matrix on n qubits. Construction checks shape and hermiticity only;
/// unnormalized matrices (trace = branch weight) are allowed and report
/// normalized() == false. Use check_physical() for the full set of checks.
class DensityMatrix {
 public:
  DensityMatrix(std::size_t n_qubits, Matrix entries, double tol = kPhysicalTol);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix zero_state(std::size_t n_qubits);
  static DensityMatrix maximally_mixed(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  double trace() const { return entries_.trace().real(); }
  bool normalized(double tol = kPhysicalTol) const;

  /// Returns ρ / Tr ρ. Throws PhysicalityError when the trace vanishes.
  DensityMatrix normalized_copy() const;
  DensityMatrix scaled(double factor) const;
  /// this ⊗ other, with this on the leading qubits.
  DensityMatrix tensor(const DensityMatrix& other) const;

 private:
  std::size_t n_qubits_;
  Matrix entries_;
};

/// Hermitian within tol, trace equal to expected_trace within tol, and no
/// eigenvalue below -tol. Throws PhysicalityError with the failing condition.
void check_physical(const DensityMatrix& rho, double expected_trace = 1.0,
                    double tol = kPhysicalTol);

/// Square operator on `arity` qubits. When unitary is set the matrix is
/// checked against U†U = I at construction.
class Operator {
 public:
  Operator(std::size_t arity, Matrix entries, bool unitary = false,
           double tol = kUnitaryTol);

  static Operator identity(std::size_t arity);

  std::size_t arity() const { return arity_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  bool is_unitary() const { return unitary_; }
  bool is_hermitian(double tol = kPhysicalTol) const;

  Operator adjoint() const;
  /// Matrix product; the result is flagged unitary only if both factors are.
  Operator operator*(const Operator& rhs) const;
  /// this ⊗ rhs.
  Operator kron(const Operator& rhs) const;

 private:
  std::size_t arity_;
  Matrix entries_;
  bool unitary_;
};

/// Completely positive map given by Kraus operators on `arity` qubits.
/// Construction enforces Σ K†K = I.
class KrausChannel {
 public:
  KrausChannel(std::size_t arity, std::vector<Operator> kraus_ops,
               double tol = kPhysicalTol);

  std::size_t arity() const { return arity_; }
  const std::vector<Operator>& kraus_ops() const { return ops_; }

  /// Applies `after` following this channel (Kraus product set).
  KrausChannel then(const KrausChannel& after) const;

 private:
  std::size_t arity_;
  std::vector<Operator> ops_;
};

/// Lifts op acting on `targets` (in the order given) into the n-qubit space.
Operator embed(const Operator& op, const QubitList& targets, std::size_t n);

/// K ρ K† with K acting on `targets`, computed on the target subspace without
/// building the full operator. rho may be unnormalized.
Matrix conjugate(const Matrix& rho, const Operator& k, const QubitList& targets);

/// Σ_K K ρ K† on `targets`, applied block-wise through the channel's
/// superoperator. rho may be unnormalized.
Matrix channel_map(const Matrix& rho, const KrausChannel& ch, const QubitList& targets);

DensityMatrix apply_unitary(const DensityMatrix& rho, const Operator& op,
                            const QubitList& targets);
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            const QubitList& targets);
/// K ρ K† for an arbitrary operator (projectors, Pauli frames). The result is
/// left unnormalized.
DensityMatrix apply_operator(const DensityMatrix& rho, const Operator& op,
                             const QubitList& targets);

/// Reduced state on `keep`; the kept qubits take the order given.
DensityMatrix partial_trace(const DensityMatrix& rho, const QubitList& keep);

/// Tr(ρ·obs) for Hermitian obs.
double expectation(const DensityMatrix& rho, const Operator& obs);

/// ⟨t|ρ|t⟩.
double fidelity_to_pure(const DensityMatrix& rho, const PureState& target);

namespace gates {
Operator I();
Operator X();
Operator Y();
Operator Z();
Operator H();
/// Tensor product of Paulis, e.g. "XYZ" (leftmost letter on the first qubit).
Operator pauli_string(std::string_view letters);
}  // namespace gates

namespace channels {
KrausChannel bit_flip(double p);
KrausChannel amplitude_damping(double gamma);
/// Off-diagonal elements scale by (1 - 2q).
KrausChannel phase_flip(double q);
}  // namespace channels

}  // namespace repqed
