#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oinl/analytics.hpp"
#include "oinl/gpe_solver.hpp"
#include "oinl/physical_params.hpp"
#include "oinl/protocol.hpp"

using namespace oinl;

namespace {

RealField2D harmonic(const Grid2D& g) {
  return RealField2D::sample(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
}

ComplexField2D gaussian(const Grid2D& g, double x0, double sigma) {
  return ComplexField2D::sample(g, [&](double x, double y) {
    return std::exp(-((x - x0) * (x - x0) + y * y) / (2.0 * sigma * sigma)) / (std::sqrt(pi) * sigma);
  });
}

double mean_x(const ComplexField2D& psi) {
  double s = 0.0, n = 0.0;
  const auto& g = psi.grid();
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double d = std::norm(psi(i, j));
      s += g.x(i) * d;
      n += d;
    }
  return s / n;
}

double mean_x2(const ComplexField2D& psi) {
  double s = 0.0, n = 0.0;
  const auto& g = psi.grid();
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double d = std::norm(psi(i, j));
      s += g.x(i) * g.x(i) * d;
      n += d;
    }
  return s / n;
}

double max_difference(const ComplexField2D& a, const ComplexField2D& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double overlap(const ComplexField2D& a, const ComplexField2D& b) {
  return overlap_fidelity(a, b);
}

TwoComponentHamiltonian single(const RealField2D& v, double g) {
  TwoComponentHamiltonian h;
  h.potential_minus = v;
  h.potential_plus = v;
  h.g_self = g;
  return h;
}

// Paper trap in oscillator units on a 128^2 box: harmonic potential, coupling g N.
struct PaperTrap {
  ScaledSystem sys = scale_to_dimensionless(AtomSpecies::rubidium87(), ExperimentConfig::paper_defaults().doughnut,
                                            ExperimentConfig::paper_defaults().protocol);
  Grid2D grid = make_grid(128, 128, 24.0, 24.0);
};

}  // namespace

TEST(RealTime, FreeGaussianSpreadsAnalytically) {
  const auto g = make_grid(128, 128, 32.0, 32.0);
  SplitStepSolver solver(g);
  const double sigma = 1.0;
  TwoComponentState s(gaussian(g, 0.0, sigma), ComplexField2D(g));
  const auto h = single(RealField2D(g), 0.0);
  s = solver.propagate(std::move(s), h, 1.0, 0.01);
  // <x^2>(t) = sigma^2/2 (1 + t^2/sigma^4)
  const double expected = 0.5 * sigma * sigma * (1.0 + 1.0 / std::pow(sigma, 4));
  EXPECT_NEAR(mean_x2(s.minus) / expected, 1.0, 1e-6);
}

TEST(RealTime, DisplacedGroundStateOscillatesAtTrapFrequency) {
  const auto g = make_grid(128, 128, 24.0, 24.0);
  SplitStepSolver solver(g);
  const double x0 = 2.0;
  TwoComponentState s(gaussian(g, x0, 1.0), ComplexField2D(g));
  const auto h = single(harmonic(g), 0.0);
  auto half = solver.propagate(s, h, pi, 1e-3);
  EXPECT_NEAR(mean_x(half.minus), -x0, 1e-3 * x0);
  auto full = solver.propagate(std::move(half), h, pi, 1e-3);
  EXPECT_NEAR(mean_x(full.minus), x0, 1e-3 * x0);
  EXPECT_LT(max_difference(full.minus, s.minus), 1e-3);
}

TEST(RealTime, NormConservedWithNonlinearity) {
  PaperTrap p;
  SplitStepSolver solver(p.grid);
  const double n = p.sys.atom_number;
  auto m = gaussian(p.grid, 0.5, 1.5);
  SplitStepSolver::normalize(m, 0.6 * n);
  auto q = gaussian(p.grid, -0.5, 1.2);
  SplitStepSolver::normalize(q, 0.4 * n);
  TwoComponentState s(m, q);
  const auto h = imprint_hamiltonian(p.sys, p.grid, 0.0025, true);
  for (int k = 0; k < 1000; ++k) solver.step_real(s, h, 1e-3);
  EXPECT_NEAR((atom_number(s.minus) + atom_number(s.plus)) / n, 1.0, 1e-10);
  EXPECT_NEAR(atom_number(s.minus) / (0.6 * n), 1.0, 1e-10);
}

TEST(RealTime, ZeroDurationIsIdentityAndShortLastStep) {
  const auto g = make_grid(32, 32, 8.0, 8.0);
  SplitStepSolver solver(g);
  TwoComponentState s(gaussian(g, 0.3, 1.0), gaussian(g, -0.3, 1.0), 0.25);
  const auto h = single(harmonic(g), 1.0);
  auto same = solver.propagate(s, h, 0.0, 1e-3);
  EXPECT_EQ(max_difference(same.minus, s.minus), 0.0);
  EXPECT_EQ(same.time, 0.25);
  int calls = 0;
  auto later = solver.propagate(s, h, 0.0105, 1e-3, [&](const TwoComponentState&) { ++calls; });
  EXPECT_EQ(calls, 12);  // initial state plus 11 steps
  EXPECT_DOUBLE_EQ(later.time, 0.2605);
  EXPECT_THROW(solver.propagate(s, h, -1.0, 1e-3), DomainError);
  EXPECT_THROW(solver.propagate(s, h, 1.0, 0.0), DomainError);
}

TEST(RealTime, StrangSplittingIsSecondOrder) {
  // Thomas-Fermi cloud split between the components, as after the first pulse;
  // much denser test states put the optical term outside the asymptotic regime.
  PaperTrap p;
  SplitStepSolver solver(p.grid);
  const auto cloud = thomas_fermi_guess(p.grid, harmonic(p.grid), p.sys.g_self, p.sys.atom_number);
  const auto s = raman_apply(TwoComponentState(cloud, ComplexField2D(p.grid)), 0.3);
  const auto h = imprint_hamiltonian(p.sys, p.grid, 0.0025, true);
  const double t = 0.1;
  const auto coarse = solver.propagate(s, h, t, 2e-3);
  const auto mid = solver.propagate(s, h, t, 1e-3);
  const auto fine = solver.propagate(s, h, t, 5e-4);
  const double e1 = max_difference(coarse.minus, mid.minus);
  const double e2 = max_difference(mid.minus, fine.minus);
  EXPECT_GE(std::log2(e1 / e2), 1.8);
}

TEST(RealTime, NonFiniteStateRaises) {
  const auto g = make_grid(16, 16, 4.0, 4.0);
  SplitStepSolver solver(g);
  TwoComponentState s(gaussian(g, 0.0, 1.0), ComplexField2D(g));
  s.minus[5] = complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  EXPECT_THROW(solver.step_real(s, single(harmonic(g), 0.0), 1e-3), NumericalError);
}

TEST(ImaginaryTime, NonInteractingHarmonicGroundState) {
  const auto g = make_grid(128, 128, 24.0, 24.0);
  SplitStepSolver solver(g);
  SolverSettings tight;
  tight.tol_mu = 1e-13;
  const auto gs = solver.ground_state_imaginary(harmonic(g), 0.0, 1.0, tight, gaussian_guess(g, 1.0, 2.0));
  EXPECT_NEAR(gs.mu, 1.0, 1e-5);
  EXPECT_GT(overlap(gs.psi, gaussian(g, 0.0, 1.0)), 1.0 - 1e-8);
}

TEST(ImaginaryTime, PaperGroundStateMatchesThomasFermi) {
  PaperTrap p;
  SplitStepSolver solver(p.grid);
  const auto v = harmonic(p.grid);
  const auto gs = solver.ground_state_imaginary(v, p.sys.g_self, p.sys.atom_number, {},
                                                thomas_fermi_guess(p.grid, v, p.sys.g_self, p.sys.atom_number));
  const auto species = AtomSpecies::rubidium87();
  const auto tf = tf_ground_state(species, p.sys.omega_perp, 1e5, 20e-6);
  const double mu_tf = tf.mu / (hbar * p.sys.omega_perp);
  EXPECT_NEAR(gs.mu / mu_tf, 1.0, 0.05);
  const double peak_tf = tf.peak_density * p.sys.length_unit * p.sys.length_unit;
  EXPECT_NEAR(std::norm(gs.psi(64, 64)) / peak_tf, 1.0, 0.10);

  // Energy never increases along the relaxation.
  for (std::size_t k = 1; k < gs.energies.size(); ++k)
    EXPECT_LE(gs.energies[k], gs.energies[k - 1] * (1.0 + 1e-12)) << "step " << k;

  // dE/dN = mu, from neighbouring atom numbers.
  const double dn = 0.01 * p.sys.atom_number;
  const auto up = solver.ground_state_imaginary(v, p.sys.g_self, p.sys.atom_number + dn, {}, gs.psi);
  const auto down = solver.ground_state_imaginary(v, p.sys.g_self, p.sys.atom_number - dn, {}, gs.psi);
  EXPECT_NEAR((up.energy - down.energy) / (2.0 * dn) / gs.mu, 1.0, 0.02);
}

TEST(ImaginaryTime, GroundStateIsStationaryInRealTime) {
  PaperTrap p;
  SplitStepSolver solver(p.grid);
  const auto v = harmonic(p.grid);
  SolverSettings tight;
  tight.tol_mu = 1e-12;
  const auto gs = solver.ground_state_imaginary(v, p.sys.g_self, p.sys.atom_number, tight,
                                                thomas_fermi_guess(p.grid, v, p.sys.g_self, p.sys.atom_number));
  TwoComponentState s(gs.psi, ComplexField2D(p.grid));
  const auto h = single(v, p.sys.g_self);
  const auto later = solver.propagate(s, h, two_pi, 1e-3);
  double peak = 0.0, change = 0.0;
  for (std::size_t k = 0; k < gs.psi.size(); ++k) {
    peak = std::max(peak, std::norm(gs.psi[k]));
    change = std::max(change, std::abs(std::norm(later.minus[k]) - std::norm(gs.psi[k])));
  }
  EXPECT_LT(change, 1e-4 * peak);
}

TEST(ImaginaryTime, NoiseAndGaussianStartsAgree) {
  PaperTrap p;
  SplitStepSolver solver(p.grid);
  const auto v = harmonic(p.grid);
  SolverSettings s;
  s.dt_imag = 5e-3;
  s.tol_mu = 1e-13;
  const double n = p.sys.atom_number;
  const auto a = solver.ground_state_imaginary(v, p.sys.g_self, n, s, gaussian_guess(p.grid, n));
  const auto b = solver.ground_state_imaginary(v, p.sys.g_self, n, s, noise_guess(p.grid, n, 7));
  EXPECT_GT(overlap(a.psi, b.psi), 1.0 - 1e-6);
  EXPECT_NEAR(a.mu, b.mu, 1e-9 * a.mu);
}

TEST(ImaginaryTime, ReportsNonConvergenceAndUnboundedPotential) {
  const auto g = make_grid(64, 64, 12.0, 12.0);
  SplitStepSolver solver(g);
  SolverSettings few;
  few.max_iterations = 5;
  EXPECT_THROW(solver.ground_state_imaginary(harmonic(g), 0.0, 1.0, few, gaussian_guess(g, 1.0, 3.0)),
               NumericalError);
  const auto hill = RealField2D::sample(g, [](double x, double y) { return -0.5 * (x * x + y * y); });
  EXPECT_THROW(solver.ground_state_imaginary(hill, 0.0, 1.0, {}, gaussian_guess(g, 1.0)), DomainError);
  EXPECT_THROW(solver.ground_state_imaginary(harmonic(g), 0.0, 0.0, {}, gaussian_guess(g, 1.0)), DomainError);
}

TEST(InitialGuesses, NormalizedAndDeterministic) {
  const auto g = make_grid(64, 64, 12.0, 12.0);
  EXPECT_NEAR(atom_number(noise_guess(g, 50.0, 3)), 50.0, 1e-10);
  EXPECT_EQ(max_difference(noise_guess(g, 1.0, 3), noise_guess(g, 1.0, 3)), 0.0);
  EXPECT_GT(max_difference(noise_guess(g, 1.0, 3), noise_guess(g, 1.0, 4)), 0.0);
  EXPECT_NEAR(atom_number(thomas_fermi_guess(g, harmonic(g), 1.0, 100.0)), 100.0, 1e-10);
}
