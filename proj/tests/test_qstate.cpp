#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hwsim/qstate.hpp"
#include "hwsim/rng.hpp"

using namespace hwsim;
using namespace hwsim::qstate;

namespace {

StateVector random_state(int nq, Rng& rng) {
  StateVector s(nq);
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    s[i] = Amplitude(rng.next_double() - 0.5, rng.next_double() - 0.5);
  return s.normalize();
}

const std::array<Basis, 4> kAllX{Basis::X, Basis::X, Basis::X, Basis::X};

}  // namespace

TEST_CASE("tensor of computational kets") {
  const StateVector ud = tensor(StateVector::up(), StateVector::down());
  CHECK(ud.dim() == 4);
  CHECK(std::abs(ud[1] - 1.0) < kTol);  // (0,1,0,0)
  CHECK(std::abs(ud[0]) < kTol);
  CHECK(std::abs(ud[2]) < kTol);
  CHECK(std::abs(ud[3]) < kTol);
}

TEST_CASE("tensor builds the honest trio state") {
  // (a up + b down) ox singlet, amplitudes read off directly
  const double a = std::sqrt(0.3), b = std::sqrt(0.7);
  StateVector one(1);
  one[0] = a;
  one[1] = b;
  const StateVector trio = tensor(one, singlet());
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(trio[0b001] - a * r) < kTol);   // up up down
  CHECK(std::abs(trio[0b010] + a * r) < kTol);   // up down up
  CHECK(std::abs(trio[0b101] - b * r) < kTol);
  CHECK(std::abs(trio[0b110] + b * r) < kTol);
  CHECK(std::abs(trio.norm() - 1.0) < kTol);
}

TEST_CASE("tensor preserves the norm") {
  Rng rng(7);
  const StateVector a = random_state(2, rng);
  const StateVector b = random_state(1, rng);
  CHECK(std::abs(tensor(a, b).norm() - 1.0) < kTol);
}

TEST_CASE("change_basis is an involution for X labels and preserves inner products") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const StateVector s = random_state(3, rng);
    const StateVector t = random_state(3, rng);
    const std::array<Basis, 3> labels{Basis::X, Basis::Z, Basis::X};
    const StateVector s2 = change_basis(change_basis(s, labels), labels);
    CHECK(s.approx_equal(s2, 1e-9));
    const Amplitude ip1 = s.inner(t);
    const Amplitude ip2 = change_basis(s, labels).inner(change_basis(t, labels));
    CHECK(std::abs(ip1 - ip2) < 1e-9);
  }
}

TEST_CASE("change_basis rejects mismatched label lists") {
  const std::array<Basis, 2> labels{Basis::Z, Basis::Z};
  CHECK_THROWS_AS(change_basis(StateVector(3), labels), std::invalid_argument);
}

TEST_CASE("all-Z labels act as the identity") {
  Rng rng(3);
  const StateVector s = random_state(4, rng);
  const std::array<Basis, 4> labels{Basis::Z, Basis::Z, Basis::Z, Basis::Z};
  CHECK(s.approx_equal(change_basis(s, labels)));
}

TEST_CASE("Bell projectors are orthogonal and complete") {
  const std::vector<Mat> ps = bell_projectors();
  Mat sum = Mat::Zero(4, 4);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    sum += ps[i];
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const double overlap = (ps[i] * ps[j]).trace().real();
      CHECK(std::abs(overlap - (i == j ? 1.0 : 0.0)) < kTol);
    }
  }
  CHECK((sum - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("measuring one side of the singlet is a fair coin") {
  const DensityOperator rho = DensityOperator::from_pure(singlet());
  // projectors P_z on qubit 0 (x identity on qubit 1)
  std::vector<Mat> fam;
  for (const Mat& p : single_qubit_projectors(Basis::Z)) {
    Mat big = Mat::Zero(4, 4);
    big.block(0, 0, 2, 2) = p(0, 0) * Mat::Identity(2, 2);
    big.block(0, 2, 2, 2) = p(0, 1) * Mat::Identity(2, 2);
    big.block(2, 0, 2, 2) = p(1, 0) * Mat::Identity(2, 2);
    big.block(2, 2, 2, 2) = p(1, 1) * Mat::Identity(2, 2);
    fam.push_back(big);
  }
  const std::vector<double> probs = outcome_distribution(rho, fam);
  CHECK(std::abs(probs[0] - 0.5) < kTol);
  CHECK(std::abs(probs[1] - 0.5) < kTol);

  Rng rng(5);
  int ups = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto [o, post] = measure_projective(rho, fam, rng);
    ups += o == 0;
    CHECK(std::abs(post.trace_real() - 1.0) < 1e-9);
  }
  const double freq = static_cast<double>(ups) / n;
  CHECK(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("Bell measurement on the honest trio is uniform") {
  // oracle: the Bell-basis expansion of the trio assigns squared amplitude
  // (a^2+b^2)/4 = 1/4 to each Bell outcome
  const double a = std::sqrt(0.42), b = std::sqrt(0.58);
  StateVector one(1);
  one[0] = a;
  one[1] = b;
  const DensityOperator trio = DensityOperator::from_pure(tensor(one, singlet()));
  const std::vector<Mat> fam = bell_z_family();
  const std::vector<double> probs = outcome_distribution(trio, fam);
  for (int bell = 0; bell < 4; ++bell) {
    const double p = probs[2 * bell] + probs[2 * bell + 1];
    CHECK(std::abs(p - 0.25) < kTol);
  }
}

TEST_CASE("rank-1 projector onto the state itself is certain") {
  Rng rng(23);
  const StateVector s = random_state(2, rng);
  const Mat p = s.amplitudes() * s.amplitudes().adjoint();
  std::vector<Mat> fam{p, Mat::Identity(4, 4) - p};
  const DensityOperator rho = DensityOperator::from_pure(s);
  auto [outcome, post] = measure_projective(rho, fam, rng);
  CHECK(outcome == 0);
  CHECK((post.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("measure_projective rejects a zero-mass family") {
  const DensityOperator rho = DensityOperator::from_pure(StateVector::up());
  // family that resolves identity but is fed a zero matrix state
  DensityOperator zero(1);
  std::vector<Mat> fam = single_qubit_projectors(Basis::Z);
  Rng rng(1);
  CHECK_THROWS_AS(measure_projective(zero, fam, rng), std::runtime_error);
}

TEST_CASE("partial trace of the honest trio leaves the singlet") {
  const double a = std::sqrt(0.2), b = std::sqrt(0.8);
  StateVector one(1);
  one[0] = a;
  one[1] = b;
  const DensityOperator trio = DensityOperator::from_pure(tensor(one, singlet()));
  const int keep[] = {1, 2};
  const DensityOperator pair = partial_trace(trio, keep);
  const DensityOperator expect = DensityOperator::from_pure(singlet());
  CHECK((pair.matrix() - expect.matrix()).cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("partial trace keeps everything when asked to") {
  Rng rng(9);
  const DensityOperator rho = DensityOperator::from_pure(random_state(2, rng));
  const int keep[] = {0, 1};
  CHECK((partial_trace(rho, keep).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("singlet marginal is maximally mixed") {
  const DensityOperator rho = DensityOperator::from_pure(singlet());
  const int keep[] = {0};
  const DensityOperator m = partial_trace(rho, keep);
  CHECK((m.matrix() - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("partial trace rejects an empty keep set") {
  const DensityOperator rho = DensityOperator::from_pure(singlet());
  CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
}

TEST_CASE("hex kets encode patterns MSB-first with set bits up") {
  // |C> = up up down down: amplitude at index 0b0011
  const StateVector c = hex_ket(0xC);
  CHECK(std::abs(c[0b0011] - 1.0) < kTol);
  CHECK(hex_spin_sum(0xC) == 0);
  CHECK(hex_spin_sum(0xF) == 4);
  CHECK(hex_spin_sum(0x1) == -2);
  CHECK(index_to_hex(0b0011) == 0xC);
}

TEST_CASE("validity checks accept states and reject garbage") {
  Rng rng(31);
  const DensityOperator good = DensityOperator::from_pure(random_state(3, rng));
  CHECK_NOTHROW(good.validate());
  DensityOperator bad(1);
  bad.matrix()(0, 0) = 2.0;  // trace 2
  CHECK_THROWS(bad.validate());
}

TEST_CASE("dephasing zeroes cross terms of the chosen qubit") {
  StateVector one(1);
  one[0] = one[1] = 1.0 / std::sqrt(2.0);
  const DensityOperator rho = DensityOperator::from_pure(tensor(one, StateVector::up()));
  const DensityOperator d = dephase_qubit(rho, 0);
  CHECK(std::abs(d.matrix()(0, 2)) < kTol);
  CHECK(std::abs(d.matrix()(0, 0).real() - 0.5) < kTol);
  CHECK(std::abs(d.trace_real() - 1.0) < kTol);
}

TEST_CASE("equal_up_to_phase sees through a global sign") {
  Rng rng(17);
  const StateVector s = random_state(3, rng);
  StateVector t = s;
  t.amplitudes() *= -1.0;
  Amplitude phase;
  CHECK(s.equal_up_to_phase(t, 1e-9, &phase));
  CHECK(std::abs(phase + 1.0) < 1e-9);
  StateVector other = random_state(3, rng);
  CHECK_FALSE(s.equal_up_to_phase(other));
}
