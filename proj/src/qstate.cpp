#include "hwsim/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwsim::qstate {

namespace {

Eigen::Index check_dim(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 12)
    throw std::invalid_argument("qstate: num_qubits must be in [1, 12]");
  return Eigen::Index{1} << num_qubits;
}

const Eigen::Matrix2cd& hadamard() {
  static const Eigen::Matrix2cd h = [] {
    Eigen::Matrix2cd m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
  }();
  return h;
}

}  // namespace

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits), amp_(Vec::Zero(check_dim(num_qubits))) {}

StateVector::StateVector(int num_qubits, Vec amplitudes)
    : num_qubits_(num_qubits), amp_(std::move(amplitudes)) {
  if (amp_.size() != check_dim(num_qubits))
    throw std::invalid_argument("StateVector: amplitude length != 2^n");
}

StateVector StateVector::basis_state(int num_qubits, Eigen::Index index) {
  StateVector s(num_qubits);
  if (index < 0 || index >= s.dim())
    throw std::invalid_argument("basis_state: index out of range");
  s.amp_[index] = 1.0;
  return s;
}

StateVector& StateVector::normalize() {
  const double n = amp_.norm();
  if (n < 1e-12) throw std::runtime_error("normalize: zero vector");
  amp_ /= n;
  return *this;
}

Amplitude StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("inner: dimension mismatch");
  return amp_.dot(other.amp_);  // Eigen dot conjugates the left operand
}

bool StateVector::approx_equal(const StateVector& other, double tol) const {
  return other.dim() == dim() && (amp_ - other.amp_).cwiseAbs().maxCoeff() < tol;
}

bool StateVector::equal_up_to_phase(const StateVector& other, double tol,
                                    Amplitude* phase) const {
  if (other.dim() != dim()) return false;
  const Amplitude ip = inner(other);
  const double na = norm(), nb = other.norm();
  if (na < 1e-12 || nb < 1e-12) return false;
  if (std::abs(std::abs(ip) - na * nb) > tol * na * nb) return false;
  const Amplitude ph = ip / std::abs(ip);
  if (phase) *phase = ph;
  return (other.amp_ - ph * amp_).cwiseAbs().maxCoeff() < tol * std::max(1.0, na);
}

DensityOperator::DensityOperator(int num_qubits)
    : num_qubits_(num_qubits),
      m_(Mat::Zero(check_dim(num_qubits), check_dim(num_qubits))) {}

DensityOperator::DensityOperator(int num_qubits, Mat m)
    : num_qubits_(num_qubits), m_(std::move(m)) {
  if (m_.rows() != check_dim(num_qubits) || m_.cols() != m_.rows())
    throw std::invalid_argument("DensityOperator: bad matrix shape");
}

DensityOperator DensityOperator::from_pure(const StateVector& psi) {
  return DensityOperator(psi.num_qubits(),
                         psi.amplitudes() * psi.amplitudes().adjoint());
}

bool DensityOperator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() < tol;
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m_ + m_.adjoint()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityOperator::validate(double tol) const {
  if (!is_hermitian(tol)) throw std::runtime_error("density: not Hermitian");
  if (std::abs(trace_real() - 1.0) > tol) throw std::runtime_error("density: trace != 1");
  if (min_eigenvalue() < -tol) throw std::runtime_error("density: negative eigenvalue");
}

StateVector tensor(const StateVector& lhs, const StateVector& rhs) {
  const int n = lhs.num_qubits() + rhs.num_qubits();
  Vec out(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < lhs.dim(); ++i)
    out.segment(i * rhs.dim(), rhs.dim()) = lhs.amplitudes()[i] * rhs.amplitudes();
  return StateVector(n, std::move(out));
}

DensityOperator tensor(const DensityOperator& lhs, const DensityOperator& rhs) {
  const int n = lhs.num_qubits() + rhs.num_qubits();
  const Eigen::Index dl = lhs.dim(), dr = rhs.dim();
  Mat out(dl * dr, dl * dr);
  for (Eigen::Index i = 0; i < dl; ++i)
    for (Eigen::Index j = 0; j < dl; ++j)
      out.block(i * dr, j * dr, dr, dr) = lhs.matrix()(i, j) * rhs.matrix();
  return DensityOperator(n, std::move(out));
}

void apply_single_qubit(Vec& v, const Eigen::Matrix2cd& op, int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits)
    throw std::invalid_argument("apply_single_qubit: qubit out of range");
  const Eigen::Index stride = Eigen::Index{1} << (num_qubits - 1 - qubit);
  const Eigen::Index dim = v.size();
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & stride) continue;
    const Amplitude a0 = v[base], a1 = v[base | stride];
    v[base] = op(0, 0) * a0 + op(0, 1) * a1;
    v[base | stride] = op(1, 0) * a0 + op(1, 1) * a1;
  }
}

StateVector change_basis(const StateVector& state, std::span<const Basis> per_qubit) {
  if (static_cast<int>(per_qubit.size()) != state.num_qubits())
    throw std::invalid_argument("change_basis: label count != num_qubits");
  StateVector out = state;
  for (int q = 0; q < state.num_qubits(); ++q)
    if (per_qubit[q] == Basis::X)
      apply_single_qubit(out.amplitudes(), hadamard(), q, state.num_qubits());
  return out;
}

DensityOperator change_basis(const DensityOperator& rho, std::span<const Basis> per_qubit) {
  if (static_cast<int>(per_qubit.size()) != rho.num_qubits())
    throw std::invalid_argument("change_basis: label count != num_qubits");
  Mat u = Mat::Identity(1, 1);
  for (int q = 0; q < rho.num_qubits(); ++q) {
    const Eigen::Matrix2cd step = per_qubit[q] == Basis::X
                                      ? hadamard()
                                      : Eigen::Matrix2cd::Identity();
    Mat next(u.rows() * 2, u.cols() * 2);
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      for (Eigen::Index j = 0; j < u.cols(); ++j)
        next.block(i * 2, j * 2, 2, 2) = u(i, j) * step;
    u = std::move(next);
  }
  return DensityOperator(rho.num_qubits(), u * rho.matrix() * u.adjoint());
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<int> ks(keep.begin(), keep.end());
  std::sort(ks.begin(), ks.end());
  if (std::adjacent_find(ks.begin(), ks.end()) != ks.end() || ks.front() < 0 ||
      ks.back() >= n)
    throw std::invalid_argument("partial_trace: bad keep set");

  const int nk = static_cast<int>(ks.size());
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(ks.begin(), ks.end(), q)) traced.push_back(q);

  const Eigen::Index dout = Eigen::Index{1} << nk;
  const Eigen::Index dtr = Eigen::Index{1} << traced.size();
  Mat out = Mat::Zero(dout, dout);
  for (Eigen::Index r = 0; r < dout; ++r) {
    for (Eigen::Index c = 0; c < dout; ++c) {
      Amplitude acc = 0.0;
      for (Eigen::Index t = 0; t < dtr; ++t) {
        Eigen::Index row = 0, col = 0;
        for (int k = 0; k < nk; ++k) {
          const Eigen::Index shift = n - 1 - ks[k];
          row |= ((r >> (nk - 1 - k)) & 1) << shift;
          col |= ((c >> (nk - 1 - k)) & 1) << shift;
        }
        for (std::size_t k = 0; k < traced.size(); ++k) {
          const Eigen::Index b = (t >> (traced.size() - 1 - k)) & 1;
          row |= b << (n - 1 - traced[k]);
          col |= b << (n - 1 - traced[k]);
        }
        acc += rho.matrix()(row, col);
      }
      out(r, c) = acc;
    }
  }
  return DensityOperator(nk, std::move(out));
}

DensityOperator dephase_qubit(const DensityOperator& rho, int qubit) {
  const int n = rho.num_qubits();
  if (qubit < 0 || qubit >= n) throw std::invalid_argument("dephase_qubit: out of range");
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - qubit);
  Mat out = rho.matrix();
  for (Eigen::Index r = 0; r < out.rows(); ++r)
    for (Eigen::Index c = 0; c < out.cols(); ++c)
      if ((r & mask) != (c & mask)) out(r, c) = 0.0;
  return DensityOperator(n, std::move(out));
}

StateVector permute_qubits(const StateVector& psi, std::span<const int> perm) {
  const int n = psi.num_qubits();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_qubits: bad permutation size");
  StateVector out(n);
  for (Eigen::Index idx = 0; idx < psi.dim(); ++idx) {
    Eigen::Index src = 0;
    for (int k = 0; k < n; ++k) {
      const Eigen::Index b = (idx >> (n - 1 - k)) & 1;
      src |= b << (n - 1 - perm[k]);
    }
    out[idx] = psi[src];
  }
  return out;
}

std::vector<double> outcome_distribution(const DensityOperator& rho,
                                         std::span<const Mat> projectors) {
  Mat total = Mat::Zero(rho.dim(), rho.dim());
  std::vector<double> probs;
  probs.reserve(projectors.size());
  for (const Mat& p : projectors) {
    if (p.rows() != rho.dim())
      throw std::invalid_argument("outcome_distribution: projector dim mismatch");
    total += p;
    probs.push_back((p * rho.matrix()).trace().real());
  }
  if ((total - Mat::Identity(rho.dim(), rho.dim())).cwiseAbs().maxCoeff() > kTol)
    throw std::invalid_argument("outcome_distribution: family does not resolve identity");
  return probs;
}

std::pair<int, DensityOperator> measure_projective(const DensityOperator& rho,
                                                   std::span<const Mat> projectors,
                                                   Rng& rng) {
  std::vector<double> probs = outcome_distribution(rho, projectors);
  double total = 0.0;
  for (double& p : probs) {
    p = std::max(p, 0.0);
    total += p;
  }
  if (total < 1e-12) throw std::runtime_error("measure_projective: invalid measurement");
  const int outcome = rng.categorical(probs);
  const Mat& p = projectors[outcome];
  Mat post = p * rho.matrix() * p.adjoint();
  post /= post.trace().real();
  return {outcome, DensityOperator(rho.num_qubits(), std::move(post))};
}

std::vector<double> diagonal_in_basis(const DensityOperator& rho,
                                      std::span<const StateVector> basis) {
  std::vector<double> out;
  out.reserve(basis.size());
  for (const StateVector& b : basis) {
    if (b.dim() != rho.dim())
      throw std::invalid_argument("diagonal_in_basis: dimension mismatch");
    out.push_back((b.amplitudes().adjoint() * rho.matrix() * b.amplitudes())(0).real());
  }
  return out;
}

StateVector bell_state(BellOutcome which) {
  StateVector s(2);
  const double r = 1.0 / std::sqrt(2.0);
  switch (which) {
    case BellOutcome::PsiPlus:  s[1] = r; s[2] = r;  break;  // (ud + du)/sqrt2
    case BellOutcome::PsiMinus: s[1] = r; s[2] = -r; break;
    case BellOutcome::PhiPlus:  s[0] = r; s[3] = r;  break;  // (uu + dd)/sqrt2
    case BellOutcome::PhiMinus: s[0] = r; s[3] = -r; break;
  }
  return s;
}

StateVector singlet() { return bell_state(BellOutcome::PsiMinus); }

std::vector<Mat> bell_projectors() {
  std::vector<Mat> out;
  for (BellOutcome b : {BellOutcome::PsiPlus, BellOutcome::PsiMinus,
                        BellOutcome::PhiPlus, BellOutcome::PhiMinus}) {
    const StateVector s = bell_state(b);
    out.push_back(s.amplitudes() * s.amplitudes().adjoint());
  }
  return out;
}

std::vector<Mat> single_qubit_projectors(Basis basis) {
  std::vector<Mat> out;
  for (int r = 0; r < 2; ++r) {
    StateVector s = StateVector::basis_state(1, r);
    if (basis == Basis::X) {
      const Basis labels[] = {Basis::X};
      s = change_basis(s, labels);
    }
    out.push_back(s.amplitudes() * s.amplitudes().adjoint());
  }
  return out;
}

std::vector<Mat> pair_projectors(Basis basis) {
  const std::vector<Mat> one = single_qubit_projectors(basis);
  std::vector<Mat> out;
  for (int code = 0; code < 4; ++code) {
    Mat p(4, 4);
    const Mat& a = one[(code >> 1) & 1];
    const Mat& b = one[code & 1];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) p.block(i * 2, j * 2, 2, 2) = a(i, j) * b;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Mat> bell_z_family() {
  std::vector<Mat> out;
  const std::vector<Mat> bells = bell_projectors();
  const std::vector<Mat> zs = single_qubit_projectors(Basis::Z);
  for (const Mat& b : bells)
    for (const Mat& z : zs) {
      Mat p(8, 8);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p.block(i * 2, j * 2, 2, 2) = b(i, j) * z;
      out.push_back(std::move(p));
    }
  return out;
}

std::vector<StateVector> bell_z_basis() {
  std::vector<StateVector> out;
  for (BellOutcome b : {BellOutcome::PsiPlus, BellOutcome::PsiMinus,
                        BellOutcome::PhiPlus, BellOutcome::PhiMinus})
    for (int z = 0; z < 2; ++z)
      out.push_back(tensor(bell_state(b), StateVector::basis_state(1, z)));
  return out;
}

std::vector<StateVector> product_basis(std::span<const Basis> per_qubit) {
  const int n = static_cast<int>(per_qubit.size());
  std::vector<StateVector> out;
  const Eigen::Index dim = Eigen::Index{1} << n;
  for (Eigen::Index i = 0; i < dim; ++i)
    out.push_back(change_basis(StateVector::basis_state(n, i), per_qubit));
  return out;
}

StateVector hex_ket(int digit, Basis basis) {
  if (digit < 0 || digit > 15) throw std::invalid_argument("hex_ket: digit out of range");
  // Set digit bit means spin up; index bit 0 means spin up.
  StateVector s = StateVector::basis_state(4, (~digit) & 0xF);
  if (basis == Basis::X) {
    const Basis labels[] = {Basis::X, Basis::X, Basis::X, Basis::X};
    s = change_basis(s, labels);
  }
  return s;
}

int hex_spin_sum(int digit) {
  int ups = 0;
  for (int t = 0; t < 4; ++t) ups += (digit >> t) & 1;
  return 2 * ups - 4;
}

int index_to_hex(int index) { return (~index) & 0xF; }

}  // namespace hwsim::qstate
