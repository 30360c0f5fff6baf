#pragma once

#include <utility>

#include "beam/boundary.hpp"

namespace beam {

struct BlockConfig {
  Grid grid;
  double a = 1.0;
  double b = 1.0;
  SbpOperatorSet ops;
};

BlockConfig make_block(int order, double x_l, double x_r, int m, double a, double b);

struct InterfaceSpec {
  Method method = Method::Sat;
  AlphaPair alphas;  // SAT only
};

/// tau = (a1 + a2) / (4 a_III), sigma = (a1 + a2) / (4 a_II).
PenaltyParameters interface_penalties(double a_left, double a_right, AlphaPair alphas);

// All pair matrices below act on [v_left; v_right], where the interface joins the
// right edge of `left` to the left edge of `right`.

/// Sum of the four penalty blocks weakly imposing continuity of u, u_x, a u_xx, a u_xxx.
Mat sat_interface(const BlockConfig& left, const BlockConfig& right, AlphaPair alphas);

/// Only the a u_xx and a u_xxx blocks (the part the hybrid scheme keeps as SAT).
Mat sat_interface_flux(const BlockConfig& left, const BlockConfig& right);

/// Rows: u jump, u_x sum, a u_xx jump, a u_xxx jump; `rows` = 4, or 2 for u and u_x only.
Mat interface_constraints(const BlockConfig& left, const BlockConfig& right, int rows = 4);

Mat projection_interface(const BlockConfig& left, const BlockConfig& right);

/// (P, P S P) with P from the two-row constraint and S = sat_interface_flux.
std::pair<Mat, Mat> hybrid_interface(const BlockConfig& left, const BlockConfig& right);

/// Block 1 and block 2 closed into a ring: interface A joins block1-right to
/// block2-left, interface B joins block2-right to block1-left.
SemiDiscreteSystem assemble_ring(const BlockConfig& block1, const BlockConfig& block2,
                                 const InterfaceSpec& spec);

/// Energy matrix K of the ring schemes: E = w_t^T (B x H) w_t + w^T K w.
Mat ring_energy_matrix(const BlockConfig& block1, const BlockConfig& block2,
                       const SemiDiscreteSystem& sys);

/// Undivided energy blocks (A1 for u/u_xxx, A2 for u_x/u_xx) of one SAT interface.
std::pair<Mat, Mat> interface_energy_blocks(double a_left, double a_right, AlphaPair alphas);

/// Periodic benchmark configuration: [-1, 0] with (a, b) = (1, 1) and [0, 1] with (4, 1).
std::pair<BlockConfig, BlockConfig> reference_ring_blocks(int order, int m);

}  // namespace beam
