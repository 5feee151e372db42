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

#include "repqed/qstate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

namespace repqed {

namespace {

std::size_t dim_for(std::size_t n) { return std::size_t{1} << n; }

std::size_t bit_of(std::size_t index, std::size_t qubit, std::size_t n) {
  return (index >> (n - 1 - qubit)) & 1U;
}

void check_square(const Matrix& m, std::size_t n, const char* what) {
  const auto d = static_cast<Eigen::Index>(dim_for(n));
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument(fmt::format(
        "{}: expected {}x{} matrix for {} qubits, got {}x{}", what, d, d, n,
        m.rows(), m.cols()));
  }
}

void check_targets(const QubitList& targets, std::size_t n) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= n) {
      throw std::invalid_argument(fmt::format(
          "target qubit {} out of range for a {}-qubit register", targets[i], n));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[j] == targets[i]) {
        throw std::invalid_argument(
            fmt::format("duplicate target qubit {}", targets[i]));
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(std::size_t n_qubits, Vector amplitudes, double tol)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != dim_for(n_qubits_)) {
    throw std::invalid_argument(
        fmt::format("pure state on {} qubits needs {} amplitudes, got {}",
                    n_qubits_, dim_for(n_qubits_), amplitudes_.size()));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol) {
    throw PhysicalityError(fmt::format("pure state norm {} differs from 1", norm));
  }
}

PureState PureState::basis(std::size_t n_qubits, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim_for(n_qubits)));
  if (index >= dim_for(n_qubits)) {
    throw std::invalid_argument(fmt::format(
        "basis index {} out of range for {} qubits", index, n_qubits));
  }
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(n_qubits, std::move(v));
}

PureState PureState::tensor(const PureState& a, const PureState& b) {
  Vector v(static_cast<Eigen::Index>(a.dim() * b.dim()));
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) =
        a.amplitudes()(i) * b.amplitudes();
  }
  return PureState(a.n_qubits() + b.n_qubits(), std::move(v));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(std::size_t n_qubits, Matrix entries, double tol)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  check_square(entries_, n_qubits_, "density matrix");
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw PhysicalityError(
        fmt::format("density matrix is not Hermitian (max deviation {:.3e})", asym));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.n_qubits(),
                       psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::zero_state(std::size_t n_qubits) {
  return from_pure(PureState::basis(n_qubits, 0));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_for(n_qubits));
  return DensityMatrix(n_qubits, Matrix::Identity(d, d) / static_cast<double>(d));
}

bool DensityMatrix::normalized(double tol) const {
  return std::abs(trace() - 1.0) <= tol;
}

DensityMatrix DensityMatrix::normalized_copy() const {
  const double tr = trace();
  if (!(tr > 0.0)) {
    throw PhysicalityError("cannot normalize a density matrix with zero trace");
  }
  return DensityMatrix(n_qubits_, entries_ / tr);
}

DensityMatrix DensityMatrix::scaled(double factor) const {
  return DensityMatrix(n_qubits_, entries_ * factor);
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  const auto da = entries_.rows();
  const auto db = other.entries_.rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = entries_(i, j) * other.entries_;
    }
  }
  return DensityMatrix(n_qubits_ + other.n_qubits_, std::move(out));
}

void check_physical(const DensityMatrix& rho, double expected_trace, double tol) {
  const Matrix& m = rho.matrix();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw PhysicalityError(fmt::format("not Hermitian: max |ρ - ρ†| = {:.3e}", asym));
  }
  if (std::abs(rho.trace() - expected_trace) > tol) {
    throw PhysicalityError(fmt::format("trace {:.12f} differs from expected {:.12f}",
                                       rho.trace(), expected_trace));
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    throw PhysicalityError(fmt::format("negative eigenvalue {:.3e}", min_eig));
  }
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(std::size_t arity, Matrix entries, bool unitary, double tol)
    : arity_(arity), entries_(std::move(entries)), unitary_(unitary) {
  check_square(entries_, arity_, "operator");
  if (unitary_) {
    const auto d = entries_.rows();
    const double dev =
        (entries_.adjoint() * entries_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > tol) {
      throw PhysicalityError(
          fmt::format("operator flagged unitary but |U†U - I| = {:.3e}", dev));
    }
  }
}

Operator Operator::identity(std::size_t arity) {
  const auto d = static_cast<Eigen::Index>(dim_for(arity));
  return Operator(arity, Matrix::Identity(d, d), true);
}

bool Operator::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::adjoint() const {
  return Operator(arity_, entries_.adjoint(), unitary_);
}

Operator Operator::operator*(const Operator& rhs) const {
  if (rhs.arity_ != arity_) {
    throw std::invalid_argument(fmt::format(
        "operator product arity mismatch: {} vs {}", arity_, rhs.arity_));
  }
  return Operator(arity_, entries_ * rhs.entries_, unitary_ && rhs.unitary_);
}

Operator Operator::kron(const Operator& rhs) const {
  const auto da = entries_.rows();
  const auto db = rhs.entries_.rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = entries_(i, j) * rhs.entries_;
    }
  }
  return Operator(arity_ + rhs.arity_, std::move(out), unitary_ && rhs.unitary_);
}

// ---------------------------------------------------------------------------
// KrausChannel

KrausChannel::KrausChannel(std::size_t arity, std::vector<Operator> kraus_ops,
                           double tol)
    : arity_(arity), ops_(std::move(kraus_ops)) {
  if (ops_.empty()) {
    throw std::invalid_argument("Kraus channel needs at least one operator");
  }
  const auto d = static_cast<Eigen::Index>(dim_for(arity_));
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : ops_) {
    if (k.arity() != arity_) {
      throw std::invalid_argument(fmt::format(
          "Kraus operator arity {} does not match channel arity {}", k.arity(), arity_));
    }
    sum += k.matrix().adjoint() * k.matrix();
  }
  const double dev = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw PhysicalityError(
        fmt::format("channel is not trace preserving: |ΣK†K - I| = {:.3e}", dev));
  }
}

KrausChannel KrausChannel::then(const KrausChannel& after) const {
  std::vector<Operator> ops;
  ops.reserve(ops_.size() * after.ops_.size());
  for (const auto& b : after.ops_) {
    for (const auto& a : ops_) {
      ops.push_back(b * a);
    }
  }
  return KrausChannel(arity_, std::move(ops));
}

// ---------------------------------------------------------------------------
// Maps

Operator embed(const Operator& op, const QubitList& targets, std::size_t n) {
  check_targets(targets, n);
  if (op.arity() != targets.size()) {
    throw std::invalid_argument(fmt::format(
        "operator arity {} does not match {} targets", op.arity(), targets.size()));
  }
  const std::size_t d = dim_for(n);
  const std::size_t k = targets.size();

  std::size_t target_mask = 0;
  for (auto q : targets) target_mask |= std::size_t{1} << (n - 1 - q);

  auto sub_index = [&](std::size_t full) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      s = (s << 1) | bit_of(full, targets[i], n);
    }
    return s;
  };

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const Matrix& m = op.matrix();
  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t sr = sub_index(r);
    for (std::size_t c = 0; c < d; ++c) {
      if ((r & ~target_mask) != (c & ~target_mask)) continue;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(static_cast<Eigen::Index>(sr), static_cast<Eigen::Index>(sub_index(c)));
    }
  }
  return Operator(n, std::move(out), op.is_unitary());
}

namespace {

// out = K_full · m, where K_full is K on `targets` and identity elsewhere.
Matrix left_apply(const Matrix& k, const Matrix& m, const QubitList& targets, std::size_t n) {
  const std::size_t kd = std::size_t{1} << targets.size();
  std::vector<std::size_t> offsets(kd, 0);
  std::size_t target_mask = 0;
  for (std::size_t s = 0; s < kd; ++s) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const std::size_t bit = (s >> (targets.size() - 1 - i)) & 1U;
      offsets[s] |= bit << (n - 1 - targets[i]);
    }
  }
  for (auto q : targets) target_mask |= std::size_t{1} << (n - 1 - q);

  Matrix out(m.rows(), m.cols());
  std::vector<cplx> gathered(kd);
  const auto d = static_cast<std::size_t>(m.rows());
  for (std::size_t base = 0; base < d; ++base) {
    if (base & target_mask) continue;
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      for (std::size_t s = 0; s < kd; ++s) {
        gathered[s] = m(static_cast<Eigen::Index>(base | offsets[s]), col);
      }
      for (std::size_t r = 0; r < kd; ++r) {
        cplx acc = 0.0;
        for (std::size_t s = 0; s < kd; ++s) {
          acc += k(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * gathered[s];
        }
        out(static_cast<Eigen::Index>(base | offsets[r]), col) = acc;
      }
    }
  }
  return out;
}

std::size_t qubits_for_dim(Eigen::Index d) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  if ((Eigen::Index{1} << n) != d) {
    throw std::invalid_argument(fmt::format("matrix dimension {} is not a power of two", d));
  }
  return n;
}

}  // namespace

Matrix conjugate(const Matrix& rho, const Operator& k, const QubitList& targets) {
  const std::size_t n = qubits_for_dim(rho.rows());
  check_targets(targets, n);
  if (k.arity() != targets.size()) {
    throw std::invalid_argument(fmt::format(
        "operator arity {} does not match {} targets", k.arity(), targets.size()));
  }
  // (K (K ρ)†)† = K ρ K†
  const Matrix half = left_apply(k.matrix(), rho, targets, n);
  return left_apply(k.matrix(), half.adjoint(), targets, n).adjoint();
}

Matrix channel_map(const Matrix& rho, const KrausChannel& ch, const QubitList& targets) {
  const std::size_t n = qubits_for_dim(rho.rows());
  check_targets(targets, n);
  if (ch.arity() != targets.size()) {
    throw std::invalid_argument(fmt::format(
        "channel arity {} does not match {} targets", ch.arity(), targets.size()));
  }
  const std::size_t kd = std::size_t{1} << targets.size();
  const std::size_t kd2 = kd * kd;

  // super[(r, c), (r', c')] = Σ_K K[r, r'] conj(K[c, c'])
  std::vector<cplx> super(kd2 * kd2, 0.0);
  for (const auto& op : ch.kraus_ops()) {
    const Matrix& k = op.matrix();
    for (std::size_t r = 0; r < kd; ++r)
      for (std::size_t c = 0; c < kd; ++c)
        for (std::size_t rp = 0; rp < kd; ++rp)
          for (std::size_t cp = 0; cp < kd; ++cp) {
            super[(r * kd + c) * kd2 + rp * kd + cp] +=
                k(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rp)) *
                std::conj(k(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(cp)));
          }
  }

  std::vector<std::size_t> offsets(kd, 0);
  std::size_t target_mask = 0;
  for (std::size_t s = 0; s < kd; ++s) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      offsets[s] |= ((s >> (targets.size() - 1 - i)) & 1U) << (n - 1 - targets[i]);
    }
  }
  for (auto q : targets) target_mask |= std::size_t{1} << (n - 1 - q);

  const auto d = static_cast<std::size_t>(rho.rows());
  Matrix out(rho.rows(), rho.cols());
  std::vector<cplx> block(kd2);
  for (std::size_t rb = 0; rb < d; ++rb) {
    if (rb & target_mask) continue;
    for (std::size_t cb = 0; cb < d; ++cb) {
      if (cb & target_mask) continue;
      for (std::size_t rp = 0; rp < kd; ++rp)
        for (std::size_t cp = 0; cp < kd; ++cp)
          block[rp * kd + cp] = rho(static_cast<Eigen::Index>(rb | offsets[rp]),
                                    static_cast<Eigen::Index>(cb | offsets[cp]));
      for (std::size_t r = 0; r < kd; ++r)
        for (std::size_t c = 0; c < kd; ++c) {
          cplx acc = 0.0;
          const cplx* row = &super[(r * kd + c) * kd2];
          for (std::size_t j = 0; j < kd2; ++j) acc += row[j] * block[j];
          out(static_cast<Eigen::Index>(rb | offsets[r]), static_cast<Eigen::Index>(cb | offsets[c])) = acc;
        }
    }
  }
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Operator& op,
                            const QubitList& targets) {
  if (!op.is_unitary()) {
    throw PhysicalityError("apply_unitary requires an operator flagged unitary");
  }
  return apply_operator(rho, op, targets);
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            const QubitList& targets) {
  return DensityMatrix(rho.n_qubits(), channel_map(rho.matrix(), ch, targets));
}

DensityMatrix apply_operator(const DensityMatrix& rho, const Operator& op,
                             const QubitList& targets) {
  return DensityMatrix(rho.n_qubits(), conjugate(rho.matrix(), op, targets));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const QubitList& keep) {
  const std::size_t n = rho.n_qubits();
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: keep list must be nonempty");
  }
  check_targets(keep, n);

  QubitList traced;
  for (std::size_t q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }

  const std::size_t dk = dim_for(keep.size());
  const std::size_t dt = dim_for(traced.size());

  // Full-register index for (kept index, traced index).
  auto compose = [&](std::size_t kept, std::size_t tr) {
    std::size_t full = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      const std::size_t bit = (kept >> (keep.size() - 1 - i)) & 1U;
      full |= bit << (n - 1 - keep[i]);
    }
    for (std::size_t i = 0; i < traced.size(); ++i) {
      const std::size_t bit = (tr >> (traced.size() - 1 - i)) & 1U;
      full |= bit << (n - 1 - traced[i]);
    }
    return static_cast<Eigen::Index>(full);
  };

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const Matrix& m = rho.matrix();
  for (std::size_t r = 0; r < dk; ++r) {
    for (std::size_t c = 0; c < dk; ++c) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) acc += m(compose(r, t), compose(c, t));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return DensityMatrix(keep.size(), std::move(out));
}

double expectation(const DensityMatrix& rho, const Operator& obs) {
  if (obs.arity() != rho.n_qubits()) {
    throw std::invalid_argument(fmt::format(
        "observable on {} qubits applied to {}-qubit state", obs.arity(), rho.n_qubits()));
  }
  if (!obs.is_hermitian()) {
    throw std::invalid_argument("expectation requires a Hermitian observable");
  }
  const cplx value = (rho.matrix() * obs.matrix()).trace();
  if (std::abs(value.imag()) > kPhysicalTol) {
    throw PhysicalityError(
        fmt::format("expectation has imaginary residue {:.3e}", value.imag()));
  }
  return value.real();
}

double fidelity_to_pure(const DensityMatrix& rho, const PureState& target) {
  if (target.n_qubits() != rho.n_qubits()) {
    throw std::invalid_argument(fmt::format(
        "fidelity target has {} qubits, state has {}", target.n_qubits(), rho.n_qubits()));
  }
  const Vector& t = target.amplitudes();
  return (t.adjoint() * rho.matrix() * t)(0, 0).real();
}

// ---------------------------------------------------------------------------
// Standard operators and channels

namespace gates {

Operator I() { return Operator::identity(1); }

Operator X() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(1, m, true);
}

Operator Y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return Operator(1, m, true);
}

Operator Z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(1, m, true);
}

Operator H() {
  Matrix m(2, 2);
  m << 1, 1, 1, -1;
  return Operator(1, m / std::sqrt(2.0), true);
}

Operator pauli_string(std::string_view letters) {
  if (letters.empty()) {
    throw std::invalid_argument("pauli_string: empty string");
  }
  auto single = [](char c) {
    switch (c) {
      case 'I': return I();
      case 'X': return X();
      case 'Y': return Y();
      case 'Z': return Z();
      default:
        throw std::invalid_argument(fmt::format("pauli_string: bad letter '{}'", c));
    }
  };
  Operator out = single(letters.front());
  for (std::size_t i = 1; i < letters.size(); ++i) out = out.kron(single(letters[i]));
  return out;
}

}  // namespace gates

namespace channels {

namespace {
void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(fmt::format("{} must lie in [0, 1], got {}", what, p));
  }
}
}  // namespace

KrausChannel bit_flip(double p) {
  check_probability(p, "bit-flip probability");
  Matrix k0 = Matrix::Identity(2, 2) * std::sqrt(1.0 - p);
  Matrix k1 = gates::X().matrix() * std::sqrt(p);
  return KrausChannel(1, {Operator(1, k0), Operator(1, k1)});
}

KrausChannel amplitude_damping(double gamma) {
  check_probability(gamma, "damping gamma");
  Matrix k0(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  Matrix k1(2, 2);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return KrausChannel(1, {Operator(1, k0), Operator(1, k1)});
}

KrausChannel phase_flip(double q) {
  check_probability(q, "phase-flip probability");
  Matrix k0 = Matrix::Identity(2, 2) * std::sqrt(1.0 - q);
  Matrix k1 = gates::Z().matrix() * std::sqrt(q);
  return KrausChannel(1, {Operator(1, k0), Operator(1, k1)});
}

}  // namespace channels

}  // namespace repqed
