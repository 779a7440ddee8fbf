// Copyright 2026 The ddregister Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ddreg/spin_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddreg {

namespace {

constexpr cplx kI{0.0, 1.0};

int log2_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) {
    ++n;
  }
  if ((Eigen::Index{1} << n) != dim) {
    throw ValidationError("dimension " + std::to_string(dim) + " is not a power of 2");
  }
  return n;
}

Mat psd_sqrt(const Mat &m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, -kI, kI, 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

Mat2 pauli(int k) {
  switch (k) {
    case 0:
      return Mat2::Identity();
    case 1:
      return pauli_x();
    case 2:
      return pauli_y();
    case 3:
      return pauli_z();
    default:
      throw ValidationError("pauli index must be 0..3");
  }
}

Mat2 rotation_matrix(const RotationOp &r) {
  double norm = r.axis.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "rotation axis must be a unit vector (|axis| = " << norm << ")";
    throw ValidationError(os.str());
  }
  double c = std::cos(r.angle / 2);
  double s = std::sin(r.angle / 2);
  Vec3 n = r.axis;
  Mat2 m;
  m << cplx(c, -s * n.z()), cplx(-s * n.y(), -s * n.x()),
      cplx(s * n.y(), -s * n.x()), cplx(c, s * n.z());
  return m;
}

Mat2 rotation_matrix(const Vec3 &axis, double angle) {
  return rotation_matrix(RotationOp{axis, angle});
}

Mat2 rot_x(double angle) { return rotation_matrix(Vec3::UnitX(), angle); }
Mat2 rot_y(double angle) { return rotation_matrix(Vec3::UnitY(), angle); }
Mat2 rot_z(double angle) { return rotation_matrix(Vec3::UnitZ(), angle); }

Mat kron(const Mat &a, const Mat &b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat tensor(const std::vector<Mat> &ops) {
  if (ops.empty()) {
    return Mat::Identity(1, 1);
  }
  Mat out = ops.front();
  for (size_t k = 1; k < ops.size(); ++k) {
    out = kron(out, ops[k]);
  }
  return out;
}

Mat embed(const Mat2 &op, int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw ValidationError("qubit index out of range");
  }
  Mat left = Mat::Identity(Eigen::Index{1} << qubit, Eigen::Index{1} << qubit);
  int right_n = num_qubits - qubit - 1;
  Mat right = Mat::Identity(Eigen::Index{1} << right_n, Eigen::Index{1} << right_n);
  return kron(kron(left, op), right);
}

AxisAngle axis_angle(const Mat2 &u) {
  AxisAngle out;
  double c = std::clamp(u.trace().real() / 2.0, -1.0, 1.0);
  out.angle = 2.0 * std::acos(c);
  double s = std::sin(out.angle / 2.0);
  if (std::abs(s) < 1e-12) {
    out.degenerate = true;
    out.axis = Vec3::UnitZ();
    return out;
  }
  // tr(sigma_k R) = -2i sin(angle/2) n_k
  for (int k = 0; k < 3; ++k) {
    cplx t = (pauli(k + 1) * u).trace();
    out.axis(k) = (t / (-2.0 * kI * s)).real();
  }
  out.axis.normalize();
  return out;
}

Mat2 canonical_su2(const Mat2 &u) {
  if (u.trace().real() < 0) {
    return -u;
  }
  return u;
}

DensityState::DensityState(Mat rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) {
    throw ValidationError("density matrix must be square");
  }
  num_qubits_ = log2_dim(rho_.rows());
}

DensityState DensityState::pure(const Vec &psi) {
  double n = psi.norm();
  if (n < 1e-15) {
    throw ValidationError("zero state vector");
  }
  Vec v = psi / n;
  return DensityState(v * v.adjoint());
}

DensityState DensityState::basis(int num_qubits, unsigned index) {
  Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (static_cast<Eigen::Index>(index) >= dim) {
    throw ValidationError("basis index out of range");
  }
  Mat rho = Mat::Zero(dim, dim);
  rho(index, index) = 1.0;
  return DensityState(rho);
}

DensityState DensityState::product(const std::vector<Mat> &single_qubit_states) {
  return DensityState(tensor(single_qubit_states));
}

DensityState DensityState::maximally_mixed(int num_qubits) {
  Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return DensityState(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

void DensityState::validate(double tol) const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw ValidationError("density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace() - 1.0) > tol) {
    throw ValidationError("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw ValidationError("density matrix has a negative eigenvalue");
  }
}

double DensityState::expectation(const Mat &op) const {
  return (rho_ * op).trace().real();
}

DensityState partial_trace(const DensityState &s, const std::vector<int> &keep) {
  int n = s.num_qubits();
  if (keep.empty()) {
    throw ValidationError("partial_trace: keep set is empty");
  }
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw ValidationError("partial_trace: duplicate qubit index");
  }
  for (int q : kept) {
    if (q < 0 || q >= n) {
      throw ValidationError("partial_trace: qubit index out of range");
    }
  }
  // Bit for qubit q sits at position (n - 1 - q); qubit 0 is most significant.
  unsigned kept_mask = 0;
  for (int q : kept) {
    kept_mask |= 1u << (n - 1 - q);
  }
  auto compress = [&](unsigned i) {
    unsigned r = 0;
    for (int q : kept) {
      r = (r << 1) | ((i >> (n - 1 - q)) & 1u);
    }
    return r;
  };
  int k = static_cast<int>(kept.size());
  Mat out = Mat::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  const Mat &rho = s.matrix();
  unsigned dim = 1u << n;
  for (unsigned i = 0; i < dim; ++i) {
    unsigned ri = compress(i);
    for (unsigned j = 0; j < dim; ++j) {
      if ((i & ~kept_mask) != (j & ~kept_mask)) {
        continue;
      }
      out(ri, compress(j)) += rho(i, j);
    }
  }
  return DensityState(out);
}

double state_fidelity_uhlmann(const DensityState &a, const DensityState &b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("state_fidelity_uhlmann: dimension mismatch");
  }
  // tr|sqrt(a) sqrt(b)| is the same trace without a square root of the
  // near-singular sqrt(a) b sqrt(a), which loses half the digits on pure states.
  Mat prod = psd_sqrt(a.matrix()) * psd_sqrt(b.matrix());
  double tr = Eigen::JacobiSVD<Mat>(prod).singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

bool is_unitary(const Mat &u, double tol) {
  if (u.rows() != u.cols()) {
    return false;
  }
  Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() < tol;
}

double process_fidelity(const Mat &u, const Mat &v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw ValidationError("process_fidelity: dimension mismatch");
  }
  if (!is_unitary(u, 1e-8) || !is_unitary(v, 1e-8)) {
    throw ValidationError("process_fidelity: inputs must be unitary");
  }
  double d = static_cast<double>(u.rows());
  double o = std::abs((u.adjoint() * v).trace());
  return std::clamp(o * o / (d * d), 0.0, 1.0);
}

double phase_distance(const Mat &u, const Mat &v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw ValidationError("phase_distance: dimension mismatch");
  }
  cplx t = (v.adjoint() * u).trace();
  cplx phase = std::abs(t) > 1e-300 ? t / std::abs(t) : cplx(1.0, 0.0);
  return (u - phase * v).cwiseAbs().maxCoeff();
}

Mat2 bloch_state(const Vec3 &r) {
  Mat2 rho = Mat2::Identity();
  rho += r.x() * pauli_x() + r.y() * pauli_y() + r.z() * pauli_z();
  return rho / 2.0;
}

}  // namespace ddreg
