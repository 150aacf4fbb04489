#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "hwsim/rng.hpp"

namespace hwsim::qstate {

using Amplitude = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Global numerical tolerance for state comparisons and validity checks.
inline constexpr double kTol = 1e-9;

/// Measurement bases. X is fixed to the Hadamard convention
/// |up_x> = (|up>+|down>)/sqrt2, |down_x> = (|up>-|down>)/sqrt2.
enum class Basis { Z, X };

/// Bell states on two qubits, Psi+- = (ud +- du)/sqrt2, Phi+- = (uu +- dd)/sqrt2.
enum class BellOutcome { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

/// Pure state on num_qubits qubits. Index convention: qubit k occupies bit
/// (n-1-k) of the amplitude index, and index bit 0 means spin up, so
/// |up> = (1,0) and tensor(|up>,|down>) has amplitude 1 at index 1.
class StateVector {
 public:
  explicit StateVector(int num_qubits);
  StateVector(int num_qubits, Vec amplitudes);

  static StateVector basis_state(int num_qubits, Eigen::Index index);
  static StateVector up() { return basis_state(1, 0); }
  static StateVector down() { return basis_state(1, 1); }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amp_.size(); }
  const Vec& amplitudes() const { return amp_; }
  Vec& amplitudes() { return amp_; }
  Amplitude operator[](Eigen::Index i) const { return amp_[i]; }
  Amplitude& operator[](Eigen::Index i) { return amp_[i]; }

  double norm() const { return amp_.norm(); }
  StateVector& normalize();
  /// <this|other>
  Amplitude inner(const StateVector& other) const;

  bool approx_equal(const StateVector& other, double tol = kTol) const;
  /// True when other = phase * this for some unit phase (reported if wanted).
  bool equal_up_to_phase(const StateVector& other, double tol = kTol,
                         Amplitude* phase = nullptr) const;

 private:
  int num_qubits_;
  Vec amp_;
};

class DensityOperator {
 public:
  explicit DensityOperator(int num_qubits);
  DensityOperator(int num_qubits, Mat m);

  static DensityOperator from_pure(const StateVector& psi);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Mat& matrix() const { return m_; }
  Mat& matrix() { return m_; }

  double trace_real() const { return m_.trace().real(); }
  bool is_hermitian(double tol = kTol) const;
  double min_eigenvalue() const;
  /// Hermitian, unit trace, eigenvalues >= -tol. Throws std::runtime_error.
  void validate(double tol = kTol) const;

 private:
  int num_qubits_;
  Mat m_;
};

StateVector tensor(const StateVector& lhs, const StateVector& rhs);
DensityOperator tensor(const DensityOperator& lhs, const DensityOperator& rhs);

/// Apply a 2x2 operator to one qubit of an n-qubit vector.
void apply_single_qubit(Vec& v, const Eigen::Matrix2cd& op, int qubit, int num_qubits);

/// Per-qubit basis change: applies H to every qubit labeled X.
StateVector change_basis(const StateVector& state, std::span<const Basis> per_qubit);
DensityOperator change_basis(const DensityOperator& rho, std::span<const Basis> per_qubit);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);

/// Zero the matrix elements that connect different values of `qubit`.
DensityOperator dephase_qubit(const DensityOperator& rho, int qubit);

/// Reorder qubits: new qubit k is old qubit perm[k].
StateVector permute_qubits(const StateVector& psi, std::span<const int> perm);

/// tr(P_i rho) for a projector family that resolves the identity.
std::vector<double> outcome_distribution(const DensityOperator& rho,
                                         std::span<const Mat> projectors);

/// Born-rule sampling with state update: returns (outcome, post-state).
std::pair<int, DensityOperator> measure_projective(const DensityOperator& rho,
                                                   std::span<const Mat> projectors,
                                                   Rng& rng);

/// Diagonal of rho in an orthonormal basis given as state vectors.
std::vector<double> diagonal_in_basis(const DensityOperator& rho,
                                      std::span<const StateVector> basis);

// -- fixed families ---------------------------------------------------------

StateVector bell_state(BellOutcome which);
/// (|up down> - |down up>)/sqrt2
StateVector singlet();

/// Four Bell projectors on 2 qubits, ordered Psi+, Psi-, Phi+, Phi-.
std::vector<Mat> bell_projectors();
/// Four rank-1 projectors |r1 r2><r1 r2| in the given basis; outcome code
/// (r1_down << 1) | r2_down, i.e. 0 = up/up ... 3 = down/down.
std::vector<Mat> pair_projectors(Basis basis);
/// {P_up, P_down} for one qubit in the given basis.
std::vector<Mat> single_qubit_projectors(Basis basis);
/// Bell on qubits (0,1) tensor Z on qubit 2: 8 outcomes, Bell-major order.
std::vector<Mat> bell_z_family();
/// Orthonormal basis |bell_(01)> tensor |z_2> as 3-qubit states, Bell-major.
std::vector<StateVector> bell_z_basis();
/// Product basis of an n-qubit space in the given per-qubit bases.
std::vector<StateVector> product_basis(std::span<const Basis> per_qubit);

/// 4-qubit computational-pattern ket for a hex digit. MSB of the digit is
/// timeslot 1 and a set bit means spin up, so hex C = |up up down down>.
StateVector hex_ket(int digit, Basis basis = Basis::Z);

/// Spin sum (+1 per up, -1 per down) of the pattern a hex digit encodes.
int hex_spin_sum(int digit);

/// Hex digit (bit = up) for an amplitude index of a 4-qubit state.
int index_to_hex(int index);

}  // namespace hwsim::qstate
