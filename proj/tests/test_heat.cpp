#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "psg/analysis/model_constants.hpp"
#include "psg/heat/analytic_case.hpp"
#include "psg/heat/expected_objective.hpp"
#include "psg/heat/heat_model.hpp"
#include "psg/heat/oracle.hpp"

using namespace psg;
using namespace psg::heat;
constexpr double kPi = std::numbers::pi;

namespace {

double s1(double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); }
double s2(double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); }

class HeatTest : public ::testing::Test {
 protected:
  void SetUp() override {
    space = fem::FunctionSpace::create(32);
    sc = analytic_case(CaseKind::strongly_convex, space, {});
    AnalyticParams p;
    p.lambda = 0.0;
    cv = analytic_case(CaseKind::convex, space, p);
  }

  // Smooth random modes plus nodal noise.
  GridFunction random_control(std::mt19937_64& rng, double scale) const {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    const double a = c(rng), b = c(rng), d = c(rng), k = 1 + std::floor(3 * (c(rng) + 1));
    Eigen::VectorXd v = space->interpolate([&](double x, double y) {
                                return a * std::sin(k * kPi * x) * std::sin(kPi * y) + b * x * y + d;
                              }).values();
    for (auto& e : v) e = scale * (e + 0.3 * c(rng));
    return GridFunction(space->mesh(), v);
  }

  ElementField random_field(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> a(0.5, 3.5);
    Eigen::VectorXd v(static_cast<Eigen::Index>(space->mesh().num_triangles()));
    for (auto& e : v) e = a(rng);
    return ElementField(space->mesh(), v);
  }

  double rel_error(const GridFunction& f, double (*g)(double, double), double amp) const {
    const double err = space->l2_error(f, [&](double x, double y) { return amp * g(x, y); });
    return err / (std::abs(amp) * 0.5);  // ||s1|| = ||s2|| = 1/2
  }

  std::shared_ptr<const fem::FunctionSpace> space;
  AnalyticCase sc{}, cv{};
};

}  // namespace

TEST_F(HeatTest, ZeroSourceGivesZeroState) {
  const auto y = solve_state(*sc.config, space->zeros(), conductivity(*sc.config, 2.0));
  EXPECT_EQ(y.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(HeatTest, StronglyConvexStateAndAdjointMatchClosedForm) {
  const auto a = conductivity(*sc.config, 2.0);
  const auto y = solve_state(*sc.config, sc.u_bar, a);
  // O(h^2) discretization error of the sin(2 pi x) sin(2 pi y) mode is about 2% here.
  EXPECT_LT(rel_error(y, s2, -1.0 / (32 * kPi * kPi)), 0.03);
  const auto p = solve_adjoint(*sc.config, y, a);
  EXPECT_LT(rel_error(p, s2, -1.0), 0.03);
}

TEST_F(HeatTest, ConvexStateMatchesClosedForm) {
  const auto y = solve_state(*cv.config, cv.u_bar, conductivity(*cv.config, 2.0));
  EXPECT_LT(rel_error(y, s1, 1.0), 0.01);
}

TEST_F(HeatTest, AdjointVanishesAtTarget) {
  const auto p = solve_adjoint(*sc.config, sc.config->target, conductivity(*sc.config, 1.3));
  EXPECT_EQ(p.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(HeatTest, AdjointResidual) {
  std::mt19937_64 rng(4);
  const auto a = random_field(rng);
  const auto y = random_control(rng, 2.0);
  const auto p = solve_adjoint(*sc.config, y, a);
  const auto K = fem::assemble_stiffness(space->mesh(), a);
  Eigen::VectorXd r = K.apply(p.values()) - space->mass().apply(sc.config->target.values() - y.values());
  Eigen::VectorXd b = space->mass().apply(sc.config->target.values() - y.values());
  for (std::size_t i = 0; i < space->mesh().num_nodes(); ++i) {
    if (space->mesh().is_boundary(i)) r[static_cast<Eigen::Index>(i)] = b[static_cast<Eigen::Index>(i)] = 0.0;
  }
  EXPECT_LE(r.norm(), 1e-9 * b.norm());
}

TEST_F(HeatTest, APrioriBounds) {
  const auto c = analysis::model_constants(0.5, std::numbers::sqrt2);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto& model = trial % 2 ? *cv.config : *sc.config;
    const auto u = random_control(rng, 3.0);
    const auto a = random_field(rng);
    const auto y = solve_state(model, u, a);
    Eigen::VectorXd source = u.values();
    if (model.extra_source) source += model.extra_source->values();
    EXPECT_LE(space->l2_norm(y), c.C1 * space->l2_norm(source));
    const auto p = solve_adjoint(model, y, a);
    EXPECT_LE(space->l2_norm(p), c.C2 * space->l2_norm(Eigen::VectorXd(model.target.values() - y.values())));
  }
}

TEST_F(HeatTest, GradientSampleIdentityAndBoundary) {
  std::mt19937_64 rng(2);
  const auto u = random_control(rng, 1.0);
  const auto d = random::draw(sc.config->field, 3, 1);
  const auto s = stochastic_gradient(*sc.config, u, d);
  EXPECT_EQ(s.g.values(), Eigen::VectorXd(2.0 * u.values() - s.adjoint.values()));
  EXPECT_EQ(s.draw.value, d.value);
  for (std::size_t i = 0; i < space->mesh().num_nodes(); ++i) {
    if (space->mesh().is_boundary(i)) {
      EXPECT_EQ(s.state[static_cast<Eigen::Index>(i)], 0.0);
      EXPECT_EQ(s.adjoint[static_cast<Eigen::Index>(i)], 0.0);
    }
  }
  EXPECT_NEAR(s.objective, sample_objective(*sc.config, u, conductivity(*sc.config, d.value)), 1e-9);
}

TEST_F(HeatTest, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& model = trial % 2 ? *cv.config : *sc.config;
    const auto u = random_control(rng, 2.0);  // infeasible values included
    const auto dir = random_control(rng, 1.0);
    const auto a = random_field(rng);
    const auto s = stochastic_gradient(model, u, a);
    const double exact = space->l2_inner(s.g, dir);
    for (double t : {1e-3, 1e-4}) {
      const auto up = u.with_values(u.values() + t * dir.values());
      const auto um = u.with_values(u.values() - t * dir.values());
      const double fd = (sample_objective(model, up, a) - sample_objective(model, um, a)) / (2 * t);
      EXPECT_LE(std::abs(fd - exact), 1e-4 * std::abs(exact)) << "t=" << t;
    }
  }
}

TEST_F(HeatTest, OptimumHasSmallGradientForFixedMean) {
  // lambda u_bar = p_bar in the continuum; the discrete residual is O(h^2).
  const auto s = stochastic_gradient(*sc.config, sc.u_bar, conductivity(*sc.config, 2.0));
  EXPECT_LT(space->l2_norm(s.g), 0.01);
}

TEST_F(HeatTest, ConvexGradientBound) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(0.5001, 3.4999);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = project_box(random_control(rng, 5.0), cv.config->box);
    const auto s = stochastic_gradient(*cv.config, u, conductivity(*cv.config, a(rng)));
    EXPECT_LE(space->l2_norm(s.g), 3.9);
  }
  for (double lo : {0.5001, 3.4999}) {
    const auto s = stochastic_gradient(*cv.config, cv.u_bar, conductivity(*cv.config, lo));
    EXPECT_LE(space->l2_norm(s.g), 3.9);
  }
}

TEST_F(HeatTest, ProjectionExamplesAndProperties) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(space->dimension());
  v[40] = 1.7;
  v[41] = -2.5;
  v[42] = 0.3;
  const auto p = project_box(GridFunction(space->mesh(), v), sc.config->box);
  EXPECT_EQ(p[40], 1.0);
  EXPECT_EQ(p[41], -1.0);
  EXPECT_EQ(p[42], 0.3);
  EXPECT_EQ(project_box(sc.u_bar, sc.config->box).values(), sc.u_bar.values());

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a(space->dimension()), b(space->dimension());
    for (auto& e : a) e = c(rng);
    for (auto& e : b) e = c(rng);
    const GridFunction u(space->mesh(), a), w(space->mesh(), b);
    const auto pu = project_box(u, sc.config->box);
    const auto pw = project_box(w, sc.config->box);
    EXPECT_EQ(project_box(pu, sc.config->box).values(), pu.values());
    EXPECT_TRUE(sc.config->box.contains(pu));
    EXPECT_LE(space->l2_norm(Eigen::VectorXd(pu.values() - pw.values())),
              space->l2_norm(Eigen::VectorXd(a - b)));
  }
}

TEST_F(HeatTest, AnalyticCaseData) {
  EXPECT_NEAR(sc.config->target.values().cwiseAbs().maxCoeff(), 16 * kPi * kPi + 1 / (32 * kPi * kPi), 1e-9);
  EXPECT_NEAR(16 * kPi * kPi + 1 / (32 * kPi * kPi), 157.917, 1e-3);
  std::set<double> values(cv.u_bar.values().begin(), cv.u_bar.values().end());
  EXPECT_EQ(values, (std::set<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(project_box(cv.u_bar, cv.config->box).values(), cv.u_bar.values());
  EXPECT_EQ(project_box(sc.u_bar, sc.config->box).values(), sc.u_bar.values());
  EXPECT_NEAR(space->l2_norm(cv.config->target), std::sqrt(1.25), 0.01);
  EXPECT_NEAR(space->l2_norm(*cv.config->extra_source), std::sqrt(1 + 4 * std::pow(kPi, 4)), 0.05);
  EXPECT_FALSE(sc.config->extra_source.has_value());
}

TEST_F(HeatTest, AnalyticCaseRejectsWrongLambda) {
  AnalyticParams p;
  p.lambda = 0.0;
  EXPECT_THROW(analytic_case(CaseKind::strongly_convex, space, p), std::invalid_argument);
  p.lambda = 1.0;
  EXPECT_THROW(analytic_case(CaseKind::convex, space, p), std::invalid_argument);
}

TEST_F(HeatTest, SampledObjectiveIsLambdaStronglyConvex) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = random_control(rng, 1.0);
    const auto v = random_control(rng, 1.0);
    const auto a = random_field(rng);
    const auto mid = u.with_values(0.5 * (u.values() + v.values()));
    const double d = space->l2_norm(Eigen::VectorXd(u.values() - v.values()));
    const double lhs = sample_objective(*sc.config, mid, a);
    const double rhs = 0.5 * sample_objective(*sc.config, u, a) + 0.5 * sample_objective(*sc.config, v, a) -
                       sc.config->lambda / 8 * d * d;
    EXPECT_LE(lhs, rhs + 1e-9 * std::abs(rhs));
  }
}

TEST_F(HeatTest, ConstantFieldScalingFastPath) {
  // y(a) = y_1 / a for constant a; check the monitor's closed form against direct solves.
  const ExpectedObjective eo(sc.config);
  std::mt19937_64 rng(8);
  const auto u = random_control(rng, 1.0);
  const Eigen::VectorXd y1 = eo.unit_state(u);
  for (double a : {0.7, 2.0, 3.3}) {
    const auto y = solve_state(*sc.config, u, conductivity(*sc.config, a));
    EXPECT_LT((y.values() - y1 / a).norm(), 1e-9 * y1.norm());
  }
}

TEST_F(HeatTest, MonitorMatchesDirectSolves) {
  std::mt19937_64 rng(9);
  const auto u = project_box(random_control(rng, 1.0), sc.config->box);
  const HeatObjectiveMonitor monitor(sc.config, 5, sc.u_bar);
  const auto ev = monitor.evaluate(u.values(), {4, 3});
  double est = 0.0, gap = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double a = random::draw(sc.config->field, 4, random::evaluation_counter(3, k)).value;
    const auto field = conductivity(*sc.config, a);
    est += sample_objective(*sc.config, u, field) / 5;
    gap += (sample_objective(*sc.config, u, field) - sample_objective(*sc.config, sc.u_bar, field)) / 5;
  }
  EXPECT_NEAR(ev.estimate, est, 1e-8 * std::abs(est));
  EXPECT_NEAR(ev.gap, gap, 1e-8 * std::abs(gap));
  const HeatObjectiveMonitor no_ref(sc.config, 5, std::nullopt);
  EXPECT_TRUE(std::isnan(no_ref.evaluate(u.values(), {4, 3}).gap));
}

TEST_F(HeatTest, ExpectedObjectiveGradientMatchesDifferences) {
  for (const auto* c : {&sc, &cv}) {
    const ExpectedObjective eo(c->config);
    std::mt19937_64 rng(12);
    const auto u = random_control(rng, 1.0);
    const auto dir = random_control(rng, 1.0);
    const double t = 1e-3;
    const double fd = (eo.value(u.with_values(u.values() + t * dir.values())) -
                       eo.value(u.with_values(u.values() - t * dir.values()))) / (2 * t);
    const double exact = space->l2_inner(eo.gradient(u), dir);
    EXPECT_NEAR(fd, exact, 1e-6 * std::abs(exact));
  }
}

TEST_F(HeatTest, ExpectedObjectiveMatchesMonteCarlo) {
  const ExpectedObjective eo(sc.config);
  const HeatObjectiveMonitor monitor(sc.config, 20000, std::nullopt);
  const double mc = monitor.evaluate(sc.initial.values(), {77, 1}).estimate;
  EXPECT_NEAR(mc, eo.value(sc.initial), 2e-3 * eo.value(sc.initial));
}

TEST_F(HeatTest, ReferenceSolverReachesStationaryPoint) {
  for (const auto* c : {&sc, &cv}) {
    const ExpectedObjective eo(c->config);
    const auto ref = minimize_expected(eo, c->u_bar);
    const auto g = eo.gradient(ref);
    const auto step = project_box(ref.with_values(ref.values() - g.values() / eo.lipschitz_bound()), c->config->box);
    EXPECT_LT(space->l2_norm(Eigen::VectorXd(step.values() - ref.values())), 1e-8);
    EXPECT_LE(eo.value(ref), eo.value(c->u_bar));
    EXPECT_TRUE(c->config->box.contains(ref));
  }
}
