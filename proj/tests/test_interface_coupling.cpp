#include <cmath>

#include <gtest/gtest.h>

#include "beam/error.hpp"
#include "beam/interface.hpp"
#include "test_util.hpp"

using namespace beam;

namespace {

Vec ring_mass(const BlockConfig& b1, const BlockConfig& b2) {
  Vec mass(b1.ops.m + b2.ops.m);
  mass << b1.b * b1.ops.H, b2.b * b2.ops.H;
  return mass;
}

struct RingCase {
  int order;
  Method method;
};

std::string name(const ::testing::TestParamInfo<RingCase>& info) {
  return "order" + std::to_string(info.param.order) + "_" + to_string(info.param.method);
}

std::vector<RingCase> ring_cases() {
  std::vector<RingCase> out;
  for (int order : {2, 4, 6}) {
    for (Method method : {Method::Sat, Method::Projection, Method::Hybrid}) out.push_back({order, method});
  }
  return out;
}

class Ring : public ::testing::TestWithParam<RingCase> {};

}  // namespace

TEST(InterfacePenalties, AverageOfMaterialConstants) {
  const PenaltyParameters p = interface_penalties(1.0, 4.0, {0.625, 0.200});
  EXPECT_DOUBLE_EQ(p.tau, 6.25);
  EXPECT_DOUBLE_EQ(p.sigma, 2.0);
  const PenaltyParameters s = interface_penalties(3.0, 3.0, {0.5, 0.25});
  EXPECT_DOUBLE_EQ(s.tau, 3.0 / (2.0 * 0.25));
  EXPECT_DOUBLE_EQ(s.sigma, 3.0 / (2.0 * 0.5));
}

TEST(InterfacePenalties, EnergyBlocksArePsd) {
  for (int order : {2, 4, 6}) {
    for (auto [a1, a2] : {std::pair{1.0, 4.0}, std::pair{2.0, 2.0}, std::pair{10.0, 0.5}}) {
      const auto [b1, b2] = interface_energy_blocks(a1, a2, standard_alphas(order));
      EXPECT_GE(min_sym_eigenvalue(b1), -1e-12 * max_abs(b1)) << order;
      EXPECT_GE(min_sym_eigenvalue(b2), -1e-12 * max_abs(b2)) << order;
    }
  }
}

TEST(InterfaceBlocks, MismatchedSpacingIsRejected) {
  const BlockConfig l = make_block(4, -1.0, 0.0, 21, 1.0, 1.0);
  const BlockConfig r = make_block(4, 0.0, 1.0, 41, 1.0, 1.0);
  EXPECT_THROW(interface_constraints(l, r), Error);
}

TEST(InterfaceProjection, PairProjectionsSatisfyIdentities) {
  for (int order : {2, 4, 6}) {
    const auto [b1, b2] = reference_ring_blocks(order, 41);
    Vec h(b1.ops.m + b2.ops.m);
    h << b1.ops.H, b2.ops.H;
    const Mat full = projection_interface(b1, b2);
    const ProjectionCheck c4 = check_projection(full, h, interface_constraints(b1, b2, 4));
    EXPECT_LT(c4.idempotence, 1e-10) << order;
    EXPECT_LT(c4.self_adjoint, 1e-10) << order;
    EXPECT_LT(c4.constraint, 1e-10 * max_abs(interface_constraints(b1, b2, 4))) << order;
    const auto [p2, psp] = hybrid_interface(b1, b2);
    const ProjectionCheck c2 = check_projection(p2, h, interface_constraints(b1, b2, 2));
    EXPECT_LT(c2.worst(), 1e-10 * max_abs(interface_constraints(b1, b2, 2))) << order;
    EXPECT_LT(max_abs(psp - p2 * sat_interface_flux(b1, b2) * p2), 1e-9 * max_abs(psp)) << order;
  }
}

TEST(InterfaceProjection, ProjectedVectorsAreContinuous) {
  const auto [b1, b2] = reference_ring_blocks(4, 41);
  const Mat p = projection_interface(b1, b2);
  std::mt19937 rng(11);
  const Vec v = p * testutil::random_vec(rng, b1.ops.m + b2.ops.m);
  const Vec v1 = v.head(b1.ops.m), v2 = v.tail(b2.ops.m);
  EXPECT_NEAR(v1[b1.ops.m - 1], v2[0], 1e-12 * v.norm());
  EXPECT_NEAR(b1.ops.d1_r.dot(v1), -b2.ops.d1_l.dot(v2), 1e-9 * v.norm());
  EXPECT_NEAR(b1.a * b1.ops.d2_r.dot(v1), -b2.a * b2.ops.d2_l.dot(v2), 1e-7 * v.norm());
}

TEST(RingAssembly, HybridOperatorVanishesOffTheConstraintSpace) {
  const auto [b1, b2] = reference_ring_blocks(4, 41);
  const SemiDiscreteSystem sys = assemble_ring(b1, b2, {Method::Hybrid, standard_alphas(4)});
  const Mat complement = Mat::Identity(sys.n, sys.n) - sys.projection;
  EXPECT_LT(max_abs(sys.D * complement), 1e-9 * max_abs(sys.D));
}

TEST(RingAssembly, ProjectionSystemsCarryTheirConstraints) {
  const auto [b1, b2] = reference_ring_blocks(2, 21);
  const SemiDiscreteSystem proj = assemble_ring(b1, b2, {Method::Projection, {}});
  EXPECT_EQ(proj.constraints.rows(), 8);
  const SemiDiscreteSystem hyb = assemble_ring(b1, b2, {Method::Hybrid, {}});
  EXPECT_EQ(hyb.constraints.rows(), 4);
  const SemiDiscreteSystem sat = assemble_ring(b1, b2, {Method::Sat, standard_alphas(2)});
  EXPECT_EQ(sat.projection.size(), 0);
  EXPECT_EQ(sat.n, 42);
}

TEST_P(Ring, EigenvaluesAreRealAndNonPositive) {
  const auto [b1, b2] = reference_ring_blocks(GetParam().order, 41);
  const SemiDiscreteSystem sys = assemble_ring(b1, b2, {GetParam().method, standard_alphas(GetParam().order)});
  const SpectrumSummary s = spectrum_summary(sys.D);
  EXPECT_LE(s.max_real, 1e-8 * s.rho);
  EXPECT_LE(s.max_abs_imag, 1e-8 * s.rho);
}

TEST_P(Ring, EnergyRateVanishes) {
  const auto [b1, b2] = reference_ring_blocks(GetParam().order, 41);
  const SemiDiscreteSystem sys = assemble_ring(b1, b2, {GetParam().method, standard_alphas(GetParam().order)});
  const Mat k = ring_energy_matrix(b1, b2, sys);
  EXPECT_LT(max_abs(k - k.transpose()), 1e-12 * max_abs(k));
  EXPECT_GE(min_sym_eigenvalue(k), -1e-10 * max_abs(k));
  EXPECT_LT(testutil::worst_energy_rate(ring_mass(b1, b2), sys.D, k), 1e-9);
}

TEST_P(Ring, ConstantsAreInTheKernel) {
  const auto [b1, b2] = reference_ring_blocks(GetParam().order, 41);
  const SemiDiscreteSystem sys = assemble_ring(b1, b2, {GetParam().method, standard_alphas(GetParam().order)});
  const Vec one = Vec::Ones(sys.n);
  EXPECT_LT((sys.D * one).cwiseAbs().maxCoeff(), 1e-8 * max_abs(sys.D));
}

INSTANTIATE_TEST_SUITE_P(Methods, Ring, ::testing::ValuesIn(ring_cases()), name);
