#include <cmath>
#include <map>
#include <sstream>

#include "beam/embedded_data.hpp"
#include "beam/error.hpp"
#include "beam/standing_wave.hpp"

namespace beam {

double StandingWaveParams::omega() const { return beta * beta * std::sqrt(a / b); }

double mode_shape(const StandingWaveParams& p, double x, int derivative) {
  const double bx = p.beta * x;
  const double scale = std::pow(p.beta, derivative);
  const double ch = std::cosh(bx), sh = std::sinh(bx), c = std::cos(bx), s = std::sin(bx);
  const bool odd = derivative % 2 == 1;
  // cos and sin cycle with period four under differentiation.
  static constexpr double cos_sign[4] = {1, -1, -1, 1};
  static constexpr double sin_sign[4] = {1, 1, -1, -1};
  const int q = derivative % 4;
  const double d_cos = cos_sign[q] * (odd ? s : c);
  const double d_sin = sin_sign[q] * (odd ? c : s);
  const double d_cosh = odd ? sh : ch;
  const double d_sinh = odd ? ch : sh;
  return scale * (p.A[0] * d_cosh + p.A[1] * d_cos + p.A[2] * d_sin + p.A[3] * d_sinh);
}

double eval(const StandingWaveParams& p, double x, double t) {
  return std::cos(p.omega() * t) * mode_shape(p, x);
}

double eval_dt(const StandingWaveParams& p, double x, double t) {
  return -p.omega() * std::sin(p.omega() * t) * mode_shape(p, x);
}

Vec sample(const StandingWaveParams& p, const Vec& points, double t) {
  Vec out(points.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) out[i] = eval(p, points[i], t);
  return out;
}

namespace {

struct WaveTable {
  std::string version;
  std::map<std::string, StandingWaveParams> sets;
};

const WaveTable& wave_table() {
  static const WaveTable table = [] {
    WaveTable t;
    std::string_view text;
    for (const auto& f : embedded::files()) {
      if (f.name == "standing_waves") text = f.text;
    }
    if (text.empty()) throw Error(ErrorCode::DataFormat, "standing wave data missing");
    std::istringstream in{std::string(text)};
    std::string line, section;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string key;
      if (!(ls >> key)) continue;
      if (key.front() == '[') {
        section = key.substr(1, key.size() - 2);
        t.sets[section];
        continue;
      }
      std::string eq;
      ls >> eq;
      if (eq != "=") throw Error(ErrorCode::DataFormat, "expected '=' in: " + line);
      if (section.empty()) {
        if (key == "version") ls >> t.version;
        continue;
      }
      StandingWaveParams& p = t.sets[section];
      if (key == "domain") ls >> p.x_l >> p.x_r;
      else if (key == "a") ls >> p.a;
      else if (key == "b") ls >> p.b;
      else if (key == "beta") ls >> p.beta;
      else if (key == "A") ls >> p.A[0] >> p.A[1] >> p.A[2] >> p.A[3];
      else throw Error(ErrorCode::DataFormat, "unknown key " + key);
      if (ls.fail()) throw Error(ErrorCode::DataFormat, "bad value in: " + line);
    }
    return t;
  }();
  return table;
}

const StandingWaveParams& lookup(const std::string& name) {
  const auto& sets = wave_table().sets;
  auto it = sets.find(name);
  if (it == sets.end()) throw Error(ErrorCode::InvalidConfig, "unknown parameter set '" + name + "'");
  return it->second;
}

void add(ResidualReport& r, std::string name, double value) {
  r.max_residual = std::max(r.max_residual, std::abs(value));
  r.conditions.push_back({std::move(name), value});
}

}  // namespace

StandingWaveParams reference_wave(const std::string& name) { return lookup(name); }

PiecewiseStandingWave reference_ring_wave() { return {lookup("ring_block1"), lookup("ring_block2")}; }

std::string reference_wave_version() { return wave_table().version; }

ResidualReport verify_params(const StandingWaveParams& p, const std::string& bc_kind, double tol) {
  ResidualReport r;
  int first;
  if (bc_kind == "clamped") first = 0;
  else if (bc_kind == "free") first = 2;
  else throw Error(ErrorCode::InvalidConfig, "unknown boundary condition '" + bc_kind + "'");
  for (double x : {p.x_l, p.x_r}) {
    for (int k = first; k < first + 2; ++k) {
      add(r, "X^(" + std::to_string(k) + ")(" + std::to_string(x) + ")", mode_shape(p, x, k));
    }
  }
  r.passed = r.max_residual < tol;
  return r;
}

ResidualReport verify_params(const PiecewiseStandingWave& p, double tol) {
  ResidualReport r;
  const StandingWaveParams& l = p.block1;
  const StandingWaveParams& q = p.block2;
  for (int k = 0; k < 4; ++k) {
    const double wl = k < 2 ? 1.0 : l.a;
    const double wr = k < 2 ? 1.0 : q.a;
    add(r, "jump d" + std::to_string(k) + " at x=0", wl * mode_shape(l, l.x_r, k) - wr * mode_shape(q, q.x_l, k));
    add(r, "jump d" + std::to_string(k) + " at x=+-1", wr * mode_shape(q, q.x_r, k) - wl * mode_shape(l, l.x_l, k));
  }
  const double rel = std::abs(l.omega() - q.omega()) / std::abs(l.omega());
  add(r, "frequency match (relative)", rel);
  r.passed = r.max_residual < tol && rel < 1e-9;
  return r;
}

double error_norm(const Vec& u_exact, const Vec& v, double h) {
  if (u_exact.size() != v.size()) throw Error(ErrorCode::LengthMismatch, "error_norm length mismatch");
  return std::sqrt(h * (u_exact - v).squaredNorm());
}

}  // namespace beam
