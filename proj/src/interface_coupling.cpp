#include <cmath>

#include "beam/error.hpp"
#include "beam/interface.hpp"

namespace beam {

BlockConfig make_block(int order, double x_l, double x_r, int m, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::IncompatibleSpec, "a and b must be positive");
  BlockConfig blk;
  blk.grid = build_grid(x_l, x_r, m);
  blk.a = a;
  blk.b = b;
  blk.ops = build_sbp_d4(order, blk.grid);
  return blk;
}

PenaltyParameters interface_penalties(double a_left, double a_right, AlphaPair alphas) {
  const double s = a_left + a_right;
  return {s / (4.0 * alphas.alpha_III), s / (4.0 * alphas.alpha_II)};
}

namespace {

void require_compatible(const BlockConfig& left, const BlockConfig& right) {
  if (left.ops.order != right.ops.order || left.ops.m != right.ops.m ||
      std::abs(left.ops.h - right.ops.h) > 1e-14 * left.ops.h) {
    throw Error(ErrorCode::IncompatibleSpec, "blocks must share order, m and h");
  }
}

Mat outer(const Vec& u, const Vec& v) { return u * v.transpose(); }

Mat pair_matrix(const Mat& ll, const Mat& lr, const Mat& rl, const Mat& rr) {
  const Eigen::Index m = ll.rows();
  Mat out(2 * m, 2 * m);
  out << ll, lr, rl, rr;
  return out;
}

// Adds a pair matrix for blocks located at offsets (off_l, off_r) of a larger system.
void scatter_pair(Mat& global, const Mat& pair, Eigen::Index off_l, Eigen::Index off_r) {
  const Eigen::Index m = pair.rows() / 2;
  const Eigen::Index off[2] = {off_l, off_r};
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      global.block(off[bi], off[bj], m, m) += pair.block(bi * m, bj * m, m, m);
    }
  }
}

Mat scatter_rows(const Mat& rows, Eigen::Index n, Eigen::Index off_l, Eigen::Index off_r) {
  const Eigen::Index m = rows.cols() / 2;
  Mat out = Mat::Zero(rows.rows(), n);
  out.middleCols(off_l, m) += rows.leftCols(m);
  out.middleCols(off_r, m) += rows.rightCols(m);
  return out;
}

}  // namespace

Mat sat_interface(const BlockConfig& left, const BlockConfig& right, AlphaPair alphas) {
  require_compatible(left, right);
  for (const auto* blk : {&left, &right}) {
    if (!is_feasible(blk->ops, alphas)) throw Error(ErrorCode::InfeasibleAlphas, "N-tilde is indefinite");
  }
  const SbpOperatorSet& l = left.ops;
  const SbpOperatorSet& r = right.ops;
  const double h = l.h;
  const double a1 = left.a, a2 = right.a;
  const auto [tau, sigma] = interface_penalties(a1, a2, alphas);
  const Vec hl_inv = l.h_inv(), hr_inv = r.h_inv();
  const auto hl = hl_inv.asDiagonal();
  const auto hr = hr_inv.asDiagonal();

  const Vec p1l = (tau / (h * h * h)) * l.e_r + 0.5 * a1 * l.d3_r;
  const Vec p1r = (tau / (h * h * h)) * r.e_l + 0.5 * a2 * r.d3_l;
  const Mat sat1 = pair_matrix(-(hl * outer(p1l, l.e_r)), hl * outer(p1l, r.e_l),
                               hr * outer(p1r, l.e_r), -(hr * outer(p1r, r.e_l)));

  const Vec p2l = (sigma / h) * l.d1_r - 0.5 * a1 * l.d2_r;
  const Vec p2r = (sigma / h) * r.d1_l + 0.5 * a2 * r.d2_l;
  const Mat sat2 = pair_matrix(-(hl * outer(p2l, l.d1_r)), -(hl * outer(p2l, r.d1_l)),
                               -(hr * outer(p2r, l.d1_r)), -(hr * outer(p2r, r.d1_l)));

  return sat1 + sat2 + sat_interface_flux(left, right);
}

Mat sat_interface_flux(const BlockConfig& left, const BlockConfig& right) {
  require_compatible(left, right);
  const SbpOperatorSet& l = left.ops;
  const SbpOperatorSet& r = right.ops;
  const double a1 = left.a, a2 = right.a;
  const Vec hl_inv = l.h_inv(), hr_inv = r.h_inv();
  const auto hl = hl_inv.asDiagonal();
  const auto hr = hr_inv.asDiagonal();

  const Mat sat3 = pair_matrix(-0.5 * a1 * (hl * outer(l.d1_r, l.d2_r)), -0.5 * a2 * (hl * outer(l.d1_r, r.d2_l)),
                               0.5 * a1 * (hr * outer(r.d1_l, l.d2_r)), 0.5 * a2 * (hr * outer(r.d1_l, r.d2_l)));
  const Mat sat4 = pair_matrix(0.5 * a1 * (hl * outer(l.e_r, l.d3_r)), 0.5 * a2 * (hl * outer(l.e_r, r.d3_l)),
                               0.5 * a1 * (hr * outer(r.e_l, l.d3_r)), 0.5 * a2 * (hr * outer(r.e_l, r.d3_l)));
  return sat3 + sat4;
}

Mat interface_constraints(const BlockConfig& left, const BlockConfig& right, int rows) {
  require_compatible(left, right);
  if (rows != 2 && rows != 4) throw Error(ErrorCode::IncompatibleSpec, "interface constraints use 2 or 4 rows");
  const SbpOperatorSet& l = left.ops;
  const SbpOperatorSet& r = right.ops;
  const Eigen::Index m = l.m;
  Mat c(rows, 2 * m);
  c.row(0) << l.e_r.transpose(), -r.e_l.transpose();
  c.row(1) << l.d1_r.transpose(), r.d1_l.transpose();
  if (rows == 4) {
    c.row(2) << left.a * l.d2_r.transpose(), right.a * r.d2_l.transpose();
    c.row(3) << left.a * l.d3_r.transpose(), right.a * r.d3_l.transpose();
  }
  return c;
}

namespace {

Vec pair_norm(const BlockConfig& left, const BlockConfig& right) {
  Vec h(left.ops.m + right.ops.m);
  h << left.ops.H, right.ops.H;
  return h;
}

}  // namespace

Mat projection_interface(const BlockConfig& left, const BlockConfig& right) {
  return h_projection(pair_norm(left, right), interface_constraints(left, right, 4));
}

std::pair<Mat, Mat> hybrid_interface(const BlockConfig& left, const BlockConfig& right) {
  Mat p = h_projection(pair_norm(left, right), interface_constraints(left, right, 2));
  Mat sat = p * sat_interface_flux(left, right) * p;
  return {std::move(p), std::move(sat)};
}

SemiDiscreteSystem assemble_ring(const BlockConfig& block1, const BlockConfig& block2,
                                 const InterfaceSpec& spec) {
  require_compatible(block1, block2);
  const Eigen::Index m = block1.ops.m;
  const Eigen::Index n = 2 * m;

  SemiDiscreteSystem sys;
  sys.h = block1.ops.h;
  sys.n = static_cast<int>(n);
  sys.order = block1.ops.order;
  sys.method = spec.method;
  sys.layout = {{0, static_cast<int>(m), block1.grid.x_l, block1.grid.x_r},
                {static_cast<int>(m), static_cast<int>(m), block2.grid.x_l, block2.grid.x_r}};
  sys.a = {block1.a, block2.a};
  sys.b = {block1.b, block2.b};
  sys.H = pair_norm(block1, block2);
  sys.alphas = spec.alphas;
  sys.description = std::string("ring ") + to_string(spec.method);

  const Mat stiffness = block_diag(block1.a * block1.ops.D4, block2.a * block2.ops.D4);
  Vec b_inv(n);
  b_inv << Vec::Constant(m, 1.0 / block1.b), Vec::Constant(m, 1.0 / block2.b);

  auto ring_constraints = [&](int rows) {
    Mat c(2 * rows, n);
    c.topRows(rows) = scatter_rows(interface_constraints(block1, block2, rows), n, 0, m);
    c.bottomRows(rows) = scatter_rows(interface_constraints(block2, block1, rows), n, m, 0);
    return c;
  };
  auto ring_flux = [&]() {
    Mat s = Mat::Zero(n, n);
    scatter_pair(s, sat_interface_flux(block1, block2), 0, m);
    scatter_pair(s, sat_interface_flux(block2, block1), m, 0);
    return s;
  };

  switch (spec.method) {
    case Method::Sat: {
      Mat s = Mat::Zero(n, n);
      scatter_pair(s, sat_interface(block1, block2, spec.alphas), 0, m);
      scatter_pair(s, sat_interface(block2, block1, spec.alphas), m, 0);
      sys.penalties = interface_penalties(block1.a, block2.a, spec.alphas);
      sys.D = b_inv.asDiagonal() * (s - stiffness);
      break;
    }
    case Method::Projection: {
      sys.constraints = ring_constraints(4);
      sys.projection = h_projection(sys.H, sys.constraints);
      sys.D = -(b_inv.asDiagonal() * (sys.projection * stiffness * sys.projection));
      break;
    }
    case Method::Hybrid: {
      sys.constraints = ring_constraints(2);
      sys.projection = h_projection(sys.H, sys.constraints);
      const Mat& p = sys.projection;
      sys.D = b_inv.asDiagonal() * (p * (ring_flux() - stiffness) * p);
      break;
    }
  }
  return sys;
}

std::pair<Mat, Mat> interface_energy_blocks(double a1, double a2, AlphaPair alphas) {
  const auto [tau, sigma] = interface_penalties(a1, a2, alphas);
  Mat e1(4, 4), e2(4, 4);
  e1 << tau, 0.5 * a1, -tau, -0.5 * a2,
        0.5 * a1, a1 * alphas.alpha_III, -0.5 * a1, 0.0,
        -tau, -0.5 * a1, tau, 0.5 * a2,
        -0.5 * a2, 0.0, 0.5 * a2, a2 * alphas.alpha_III;
  e2 << sigma, -0.5 * a1, sigma, 0.5 * a2,
        -0.5 * a1, a1 * alphas.alpha_II, -0.5 * a1, 0.0,
        sigma, -0.5 * a1, sigma, 0.5 * a2,
        0.5 * a2, 0.0, 0.5 * a2, a2 * alphas.alpha_II;
  return {e1, e2};
}

Mat ring_energy_matrix(const BlockConfig& block1, const BlockConfig& block2,
                       const SemiDiscreteSystem& sys) {
  const Eigen::Index m = block1.ops.m;
  const Eigen::Index n = 2 * m;
  const Mat stiffness_n = block_diag(block1.a * block1.ops.N, block2.a * block2.ops.N);
  if (sys.method != Method::Sat) {
    const Mat& p = sys.projection;
    return p.transpose() * stiffness_n * p;
  }

  const double h = block1.ops.h;
  Mat k = block_diag(block1.a * n_tilde(block1.ops, sys.alphas), block2.a * n_tilde(block2.ops, sys.alphas));
  auto add_interface = [&](const BlockConfig& l, const BlockConfig& r, Eigen::Index off_l, Eigen::Index off_r) {
    const auto [e1, e2] = interface_energy_blocks(l.a, r.a, sys.alphas);
    Mat w1 = Mat::Zero(4, n), w2 = Mat::Zero(4, n);
    w1.row(0).segment(off_l, m) = std::pow(h, -1.5) * l.ops.e_r.transpose();
    w1.row(1).segment(off_l, m) = std::pow(h, 1.5) * l.ops.d3_r.transpose();
    w1.row(2).segment(off_r, m) = std::pow(h, -1.5) * r.ops.e_l.transpose();
    w1.row(3).segment(off_r, m) = std::pow(h, 1.5) * r.ops.d3_l.transpose();
    w2.row(0).segment(off_l, m) = std::pow(h, -0.5) * l.ops.d1_r.transpose();
    w2.row(1).segment(off_l, m) = std::sqrt(h) * l.ops.d2_r.transpose();
    w2.row(2).segment(off_r, m) = std::pow(h, -0.5) * r.ops.d1_l.transpose();
    w2.row(3).segment(off_r, m) = std::sqrt(h) * r.ops.d2_l.transpose();
    k += w1.transpose() * e1 * w1 + w2.transpose() * e2 * w2;
  };
  add_interface(block1, block2, 0, m);
  add_interface(block2, block1, m, 0);
  return k;
}

std::pair<BlockConfig, BlockConfig> reference_ring_blocks(int order, int m) {
  return {make_block(order, -1.0, 0.0, m, 1.0, 1.0), make_block(order, 0.0, 1.0, m, 4.0, 1.0)};
}

}  // namespace beam
