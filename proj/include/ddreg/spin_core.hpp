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

#ifndef DDREG_SPIN_CORE_HPP
#define DDREG_SPIN_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ddreg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Bad input: malformed config, out-of-range parameter, inconsistent dimensions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Well-formed request with no physical solution (e.g. no common entangling window).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
/// k = 0..3 -> I, X, Y, Z.
Mat2 pauli(int k);

struct RotationOp {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
};

/// exp(-i angle (axis . sigma) / 2). Throws ValidationError for a non-unit axis.
Mat2 rotation_matrix(const RotationOp &r);
Mat2 rotation_matrix(const Vec3 &axis, double angle);
Mat2 rot_x(double angle);
Mat2 rot_y(double angle);
Mat2 rot_z(double angle);

/// Kronecker product in list order (first entry is the most significant qubit).
Mat tensor(const std::vector<Mat> &ops);
Mat kron(const Mat &a, const Mat &b);

/// Single-qubit operator acting on `qubit` of an n-qubit register.
Mat embed(const Mat2 &op, int qubit, int num_qubits);

/// Axis/angle form of an SU(2)-like 2x2 unitary. angle in [0, 2pi].
struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
  bool degenerate = false;
};
AxisAngle axis_angle(const Mat2 &u);

/// Same rotation, sign-fixed so that Re tr(u) >= 0; angle lands in [0, pi].
Mat2 canonical_su2(const Mat2 &u);

class DensityState {
 public:
  DensityState() = default;
  explicit DensityState(Mat rho);

  static DensityState pure(const Vec &psi);
  static DensityState basis(int num_qubits, unsigned index);
  static DensityState product(const std::vector<Mat> &single_qubit_states);
  static DensityState maximally_mixed(int num_qubits);

  const Mat &matrix() const { return rho_; }
  int num_qubits() const { return num_qubits_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  /// Throws ValidationError unless Hermitian, unit trace and positive within tol.
  void validate(double tol = 1e-9) const;

  double expectation(const Mat &op) const;

 private:
  Mat rho_;
  int num_qubits_ = 0;
};

DensityState partial_trace(const DensityState &s, const std::vector<int> &keep);

/// (tr sqrt(sqrt(a) b sqrt(a)))^2
double state_fidelity_uhlmann(const DensityState &a, const DensityState &b);

/// |tr(u^dag v)|^2 / d^2
double process_fidelity(const Mat &u, const Mat &v);

/// max-entry distance after removing the best global phase.
double phase_distance(const Mat &u, const Mat &v);

bool is_unitary(const Mat &u, double tol = 1e-9);

/// Pure qubit density matrix with Bloch vector r (|r| <= 1).
Mat2 bloch_state(const Vec3 &r);

}  // namespace ddreg

#endif
