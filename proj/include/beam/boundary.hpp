#pragma once

#include <string>
#include <vector>

#include "beam/sbp.hpp"

namespace beam {

enum class BcKind { Clamped, Free };
enum class Side { Left, Right };
enum class Method { Sat, Projection, Hybrid };

const char* to_string(BcKind kind);
const char* to_string(Method method);
BcKind parse_bc_kind(const std::string& s);
Method parse_method(const std::string& s);

struct BoundaryCondition {
  BcKind kind = BcKind::Clamped;
  Side side = Side::Left;
};

struct EnforcementSpec {
  Method method = Method::Sat;
  AlphaPair alphas;  // used by clamped SAT only
};

/// Penalty parameters in use for one boundary: clamped SAT uses tau = 1/a_III and
/// sigma = 1/a_II, free SAT uses tau = sigma = 1.
struct PenaltyParameters {
  double tau = 0.0;
  double sigma = 0.0;
};

PenaltyParameters clamped_penalties(AlphaPair alphas);

struct BlockLayout {
  int offset = 0;
  int m = 0;
  double x_l = 0.0;
  double x_r = 1.0;
};

/// v_tt = D v together with what was used to build it.
struct SemiDiscreteSystem {
  Mat D;
  double h = 0.0;
  int n = 0;
  int order = 0;
  Method method = Method::Sat;
  std::vector<BlockLayout> layout;
  std::vector<double> a, b;  // material constants per block
  Vec H;                     // diagonal of the (block) norm matrix
  Mat projection;            // empty unless a projection is part of the scheme
  Mat constraints;           // the L used for `projection`
  AlphaPair alphas;
  PenaltyParameters penalties;
  std::string description;
};

Mat sat_clamped_closure(const SbpOperatorSet& ops, double a, AlphaPair alphas, Side side);
Mat sat_free_closure(const SbpOperatorSet& ops, double a, Side side);

/// Constraint rows: (e, d1) per clamped side, (d2, d3) per free side.
Mat boundary_constraints(const SbpOperatorSet& ops, const std::vector<BoundaryCondition>& bcs);
Mat projection_boundary(const SbpOperatorSet& ops, const std::vector<BoundaryCondition>& bcs);

SemiDiscreteSystem assemble_single_block(const SbpOperatorSet& ops, double a, double b,
                                         BcKind left, BcKind right, const EnforcementSpec& spec);

/// Energy matrix K of the single-block schemes:
/// E = b v_t^T H v_t + v^T K v.
Mat single_block_energy_matrix(const SbpOperatorSet& ops, const SemiDiscreteSystem& sys,
                               BcKind left, BcKind right);

/// 2x2 blocks [[tau, 1], [1, a_III]] and [[sigma, 1], [1, a_II]] of the clamped SAT energy
/// in undivided form, assembled as a 4x4 block diagonal matrix.
Mat clamped_sat_energy_blocks(AlphaPair alphas);

}  // namespace beam
