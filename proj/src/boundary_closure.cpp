#include <cmath>

#include "beam/boundary.hpp"
#include "beam/error.hpp"

namespace beam {

const char* to_string(BcKind kind) { return kind == BcKind::Clamped ? "clamped" : "free"; }

const char* to_string(Method method) {
  switch (method) {
    case Method::Sat: return "sat";
    case Method::Projection: return "projection";
    case Method::Hybrid: return "hybrid";
  }
  return "unknown";
}

BcKind parse_bc_kind(const std::string& s) {
  if (s == "clamped") return BcKind::Clamped;
  if (s == "free") return BcKind::Free;
  throw Error(ErrorCode::InvalidConfig, "unknown boundary condition '" + s + "'");
}

Method parse_method(const std::string& s) {
  if (s == "sat") return Method::Sat;
  if (s == "projection" || s == "proj") return Method::Projection;
  if (s == "hybrid") return Method::Hybrid;
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + s + "'");
}

PenaltyParameters clamped_penalties(AlphaPair alphas) {
  return {1.0 / alphas.alpha_III, 1.0 / alphas.alpha_II};
}

namespace {

struct SideVectors {
  const Vec& e;
  const Vec& d1;
  const Vec& d2;
  const Vec& d3;
  double d2_sign;  // +1 on the left, -1 on the right (d2_r approximates +u_xx)
};

SideVectors side_vectors(const SbpOperatorSet& ops, Side side) {
  if (side == Side::Left) return {ops.e_l, ops.d1_l, ops.d2_l, ops.d3_l, 1.0};
  return {ops.e_r, ops.d1_r, ops.d2_r, ops.d3_r, -1.0};
}

}  // namespace

Mat sat_clamped_closure(const SbpOperatorSet& ops, double a, AlphaPair alphas, Side side) {
  if (!(alphas.alpha_II > 0.0 && alphas.alpha_III > 0.0) || !is_feasible(ops, alphas)) {
    throw Error(ErrorCode::InfeasibleAlphas, "N-tilde is not positive semidefinite");
  }
  const auto [tau, sigma] = clamped_penalties(alphas);
  const double h = ops.h;
  const SideVectors s = side_vectors(ops, side);
  const Vec h_inv = ops.h_inv();
  const Vec u_pen = s.d3 + (tau / (h * h * h)) * s.e;
  const Vec ux_pen = s.d2_sign * s.d2 + (sigma / h) * s.d1;
  return -a * (h_inv.asDiagonal() * (u_pen * s.e.transpose() + ux_pen * s.d1.transpose()));
}

Mat sat_free_closure(const SbpOperatorSet& ops, double a, Side side) {
  const Vec h_inv = ops.h_inv();
  if (side == Side::Left) {
    return a * (h_inv.asDiagonal() * (ops.d1_l * ops.d2_l.transpose() + ops.e_l * ops.d3_l.transpose()));
  }
  return a * (h_inv.asDiagonal() * (ops.e_r * ops.d3_r.transpose() - ops.d1_r * ops.d2_r.transpose()));
}

Mat boundary_constraints(const SbpOperatorSet& ops, const std::vector<BoundaryCondition>& bcs) {
  Mat l(2 * static_cast<Eigen::Index>(bcs.size()), ops.m);
  Eigen::Index row = 0;
  for (const auto& bc : bcs) {
    const SideVectors s = side_vectors(ops, bc.side);
    if (bc.kind == BcKind::Clamped) {
      l.row(row++) = s.e.transpose();
      l.row(row++) = s.d1.transpose();
    } else {
      l.row(row++) = s.d2.transpose();
      l.row(row++) = s.d3.transpose();
    }
  }
  return l;
}

Mat projection_boundary(const SbpOperatorSet& ops, const std::vector<BoundaryCondition>& bcs) {
  return h_projection(ops.H, boundary_constraints(ops, bcs));
}

SemiDiscreteSystem assemble_single_block(const SbpOperatorSet& ops, double a, double b,
                                         BcKind left, BcKind right, const EnforcementSpec& spec) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::IncompatibleSpec, "a and b must be positive");
  SemiDiscreteSystem sys;
  sys.h = ops.h;
  sys.n = ops.m;
  sys.order = ops.order;
  sys.method = spec.method;
  sys.layout = {{0, ops.m, ops.grid.x_l, ops.grid.x_r}};
  sys.a = {a};
  sys.b = {b};
  sys.H = ops.H;
  sys.alphas = spec.alphas;
  sys.description = std::string(to_string(left)) + "/" + to_string(right) + " " + to_string(spec.method);

  switch (spec.method) {
    case Method::Sat: {
      Mat rhs = -a * ops.D4;
      for (auto [kind, side] : {std::pair{left, Side::Left}, std::pair{right, Side::Right}}) {
        if (kind == BcKind::Clamped) {
          rhs += sat_clamped_closure(ops, a, spec.alphas, side);
          sys.penalties = clamped_penalties(spec.alphas);
        } else {
          rhs += sat_free_closure(ops, a, side);
        }
      }
      if (left == BcKind::Free && right == BcKind::Free) sys.penalties = {1.0, 1.0};
      sys.D = rhs / b;
      break;
    }
    case Method::Projection: {
      const std::vector<BoundaryCondition> bcs = {{left, Side::Left}, {right, Side::Right}};
      sys.constraints = boundary_constraints(ops, bcs);
      sys.projection = h_projection(ops.H, sys.constraints);
      sys.D = (-a / b) * (sys.projection * ops.D4 * sys.projection);
      break;
    }
    case Method::Hybrid:
      throw Error(ErrorCode::IncompatibleSpec, "hybrid enforcement applies to interfaces only");
  }
  return sys;
}

Mat clamped_sat_energy_blocks(AlphaPair alphas) {
  const auto [tau, sigma] = clamped_penalties(alphas);
  Mat a = Mat::Zero(4, 4);
  a << tau, 1.0, 0.0, 0.0,
       1.0, alphas.alpha_III, 0.0, 0.0,
       0.0, 0.0, sigma, 1.0,
       0.0, 0.0, 1.0, alphas.alpha_II;
  return a;
}

Mat single_block_energy_matrix(const SbpOperatorSet& ops, const SemiDiscreteSystem& sys,
                               BcKind left, BcKind right) {
  const double a = sys.a.at(0);
  if (sys.method == Method::Projection) {
    const Mat& p = sys.projection;
    return a * (p.transpose() * ops.N * p);
  }
  const double h = ops.h;
  Mat k = ops.N;
  const Mat blocks = clamped_sat_energy_blocks(sys.alphas);
  for (auto [kind, side] : {std::pair{left, Side::Left}, std::pair{right, Side::Right}}) {
    if (kind != BcKind::Clamped) continue;
    const SideVectors s = side_vectors(ops, side);
    k -= h * sys.alphas.alpha_II * (s.d2 * s.d2.transpose()) +
         h * h * h * sys.alphas.alpha_III * (s.d3 * s.d3.transpose());
    Mat w(4, ops.m);
    w.row(0) = std::pow(h, -1.5) * s.e.transpose();
    w.row(1) = std::pow(h, 1.5) * s.d3.transpose();
    w.row(2) = std::pow(h, -0.5) * s.d1.transpose();
    w.row(3) = s.d2_sign * std::sqrt(h) * s.d2.transpose();
    k += w.transpose() * blocks * w;
  }
  return a * k;
}

}  // namespace beam
