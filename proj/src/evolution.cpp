#include "gbq/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gbq/error.hpp"
#include "gbq/kernels.hpp"

namespace gbq {

namespace {

// phi_l(i theta) = re + i theta * imt for l = 0..3 (phi_0 = exp).
struct PhiValue {
  double re;
  double imt;
};

PhiValue phi_function(int l, double theta) {
  if (std::abs(theta) < 1.0) {
    // Even and odd parts of sum_n (i theta)^n / (n + l)!.
    double re = 0.0, imt = 0.0;
    double t2n = 1.0;  // theta^{2m}
    for (int m = 0; m < 20; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      re += sign * t2n / std::tgamma(2.0 * m + l + 1.0);
      imt += sign * t2n / std::tgamma(2.0 * m + l + 2.0);
      t2n *= theta * theta;
    }
    return {re, imt};
  }
  const cplx z(0.0, theta);
  const cplx e = std::exp(z);
  cplx v;
  switch (l) {
    case 0: v = e; break;
    case 1: v = (e - 1.0) / z; break;
    case 2: v = (e - 1.0 - z) / (z * z); break;
    default: v = (e - 1.0 - z - 0.5 * z * z) / (z * z * z); break;
  }
  return {v.real(), v.imag() / theta};
}

}  // namespace

void validate(const EvolutionConfig& cfg, const FieldPair& state0) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("evolution.dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("evolution.t_end must be positive");
  if (cfg.record_every < 1) throw ConfigError("evolution.record_every must be >= 1");
  const double amp = std::max(max_abs(state0.first), max_abs(state0.second));
  if (!(cfg.blowup_threshold > amp))
    throw ConfigError("evolution.blowup_threshold must exceed the initial amplitude");
}

Mat2 linear_mode_propagator(double k, double dt) {
  const double theta = k * std::sqrt(1.0 + k * k) * dt;
  const double c = std::cos(theta), s = std::sin(theta);
  return {{{c, s}, {-s, c}}};
}

Integrator::Integrator(const Grid& grid, double p, double dt)
    : grid_(grid), p_(p), dt_(dt), cut_(grid.size() / 3) {
  const auto k = grid.wavenumbers();
  const std::size_t M = grid.spectrum_size();
  kk_.assign(k.begin(), k.end());
  kk_[M - 1] = 0.0;
  e_half_.resize(M);
  e_full_.resize(M);
  q_half_.resize(M);
  f1_.resize(M);
  f2_.resize(M);
  f3_.resize(M);
  const double h = dt;
  for (std::size_t j = 0; j < M; ++j) {
    const double kj = kk_[j];
    const double Om = std::abs(kj) * std::sqrt(1.0 + kj * kj);
    // F(A tau) = re I + imt * tau * A, with theta = Omega tau.
    const auto coef = [&](int l, double tau, double scale) {
      const PhiValue v = phi_function(l, Om * tau);
      return Coef{scale * v.re, scale * v.imt * tau};
    };
    e_half_[j] = coef(0, h / 2, 1.0);
    e_full_[j] = coef(0, h, 1.0);
    q_half_[j] = coef(1, h / 2, h / 2);
    const Coef p1 = coef(1, h, h), p2 = coef(2, h, h), p3 = coef(3, h, h);
    f1_[j] = {p1.a - 3 * p2.a + 4 * p3.a, p1.c - 3 * p2.c + 4 * p3.c};
    f2_[j] = {p2.a - 2 * p3.a, p2.c - 2 * p3.c};
    f3_[j] = {4 * p3.a - p2.a, 4 * p3.c - p2.c};
  }
  u_phys_.resize(grid.size());
  w_phys_.resize(grid.size());
}

void Integrator::nonlinear(const std::vector<cplx>& uh, std::vector<cplx>& nv, double threshold,
                           double t_now) const {
  grid_.inverse(uh, u_phys_);
  const double sup = kernels::parallel::max_abs(u_phys_);
  if (!(sup <= threshold)) {
    std::ostringstream os;
    os << "sup|u| = " << sup << " exceeded threshold " << threshold << " near t = " << t_now;
    throw BlowupError(os.str(), t_now);
  }
  kernels::parallel::power_nonlinearity(u_phys_, p_, w_phys_);
  grid_.forward(w_phys_, nv);
  const std::size_t M = nv.size();
  for (std::size_t j = 0; j < M; ++j) nv[j] = (j > cut_) ? cplx(0.0) : nv[j] * cplx(0.0, -kk_[j]);
}

void Integrator::step(FieldPair& state, double threshold, double t_now) const {
  const std::size_t M = grid_.spectrum_size();
  std::vector<cplx> uh(M), vh(M);
  grid_.forward(state.first.values, uh);
  grid_.forward(state.second.values, vh);

  // F (x, y) + G (0, n) with F, G = a I + c A and A (x, y) = (ik y, ik(1+k^2) x).
  const auto apply = [&](const std::vector<Coef>& F, const std::vector<cplx>& x, const std::vector<cplx>& y,
                         const std::vector<Coef>& G, const std::vector<cplx>& n, std::vector<cplx>& ox,
                         std::vector<cplx>& oy) {
    for (std::size_t j = 0; j < M; ++j) {
      const cplx ik(0.0, kk_[j]);
      const double s = 1.0 + kk_[j] * kk_[j];
      ox[j] = F[j].a * x[j] + F[j].c * ik * y[j] + G[j].c * ik * n[j];
      oy[j] = F[j].a * y[j] + F[j].c * ik * s * x[j] + G[j].a * n[j];
    }
  };

  std::vector<cplx> n0(M), na(M), nb(M), nc(M), tmp(M);
  std::vector<cplx> au(M), av(M), bu(M), bv(M), cu(M), cv(M);
  nonlinear(uh, n0, threshold, t_now);
  apply(e_half_, uh, vh, q_half_, n0, au, av);
  nonlinear(au, na, threshold, t_now + dt_ / 2);
  apply(e_half_, uh, vh, q_half_, na, bu, bv);
  nonlinear(bu, nb, threshold, t_now + dt_ / 2);
  for (std::size_t j = 0; j < M; ++j) tmp[j] = 2.0 * nb[j] - n0[j];
  apply(e_half_, au, av, q_half_, tmp, cu, cv);
  nonlinear(cu, nc, threshold, t_now + dt_);

  for (std::size_t j = 0; j < M; ++j) {
    const cplx ik(0.0, kk_[j]);
    const double s = 1.0 + kk_[j] * kk_[j];
    const cplx nsum = f1_[j].a * n0[j] + 2.0 * f2_[j].a * (na[j] + nb[j]) + f3_[j].a * nc[j];
    const cplx nsum_c = f1_[j].c * n0[j] + 2.0 * f2_[j].c * (na[j] + nb[j]) + f3_[j].c * nc[j];
    const cplx x = uh[j], y = vh[j];
    uh[j] = e_full_[j].a * x + e_full_[j].c * ik * y + ik * nsum_c;
    vh[j] = e_full_[j].a * y + e_full_[j].c * ik * s * x + nsum;
  }
  grid_.inverse(uh, state.first.values);
  grid_.inverse(vh, state.second.values);
}

FieldPair step(const FieldPair& state, double p, const EvolutionConfig& cfg) {
  const Integrator integ(state.grid(), p, cfg.dt);
  FieldPair out = state;
  integ.step(out, cfg.blowup_threshold, 0.0);
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Blowup: return "blowup";
    case Termination::Stopped: return "stopped";
  }
  return "unknown";
}

Trajectory evolve(const FieldPair& state0, double p, double omega, const EvolutionConfig& cfg,
                  const RecordHook& hook, double t_start) {
  validate(cfg, state0);
  const Integrator integ(state0.grid(), p, cfg.dt);
  Trajectory traj;
  FieldPair state = state0;
  const long nsteps = std::lround((cfg.t_end - t_start) / cfg.dt);

  const auto record = [&](double t) {
    traj.samples.push_back({t, conserved_quantities(state, omega, p), max_abs(state.first)});
    return hook ? hook(t, state) : true;
  };

  double t = t_start;
  traj.final_time = t;
  if (!record(t)) {
    traj.termination = Termination::Stopped;
    traj.final_state = state;
    return traj;
  }
  for (long n = 1; n <= nsteps; ++n) {
    try {
      integ.step(state, cfg.blowup_threshold, t);
    } catch (const BlowupError& e) {
      traj.termination = Termination::Blowup;
      traj.message = e.what();
      traj.final_time = e.time();
      traj.final_state = state;
      return traj;
    }
    t = t_start + static_cast<double>(n) * cfg.dt;
    traj.final_time = t;
    if (n % cfg.record_every == 0 || n == nsteps) {
      if (!record(t)) {
        traj.termination = Termination::Stopped;
        break;
      }
    }
  }
  traj.final_state = state;
  return traj;
}

void write_checkpoint(const std::string& path, double t, double p, const FieldPair& state) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open checkpoint for writing: " + path);
  const Grid& g = state.grid();
  std::fprintf(f, "# t=%.17g L=%.17g N=%zu p=%.17g\nx,u,v\n", t, g.half_length(), g.size(), p);
  const auto x = g.nodes();
  for (std::size_t i = 0; i < g.size(); ++i)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", x[i], state.first[i], state.second[i]);
  if (std::fclose(f) != 0) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::string line;
  std::getline(in, line);
  double t = 0, L = 0, p = 0;
  std::size_t N = 0;
  if (std::sscanf(line.c_str(), "# t=%lf L=%lf N=%zu p=%lf", &t, &L, &N, &p) != 4)
    throw IoError("malformed checkpoint header in " + path);
  std::getline(in, line);
  if (line != "x,u,v") throw IoError("malformed checkpoint column header in " + path);
  const Grid g = make_grid(L, N);
  Checkpoint cp{t, p, FieldPair(g)};
  const auto x = g.nodes();
  for (std::size_t i = 0; i < N; ++i) {
    if (!std::getline(in, line)) throw IoError("checkpoint truncated: " + path);
    double xi, u, v;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &xi, &u, &v) != 3) throw IoError("bad checkpoint row in " + path);
    if (std::abs(xi - x[i]) > 1e-9 * std::max(1.0, L)) throw IoError("checkpoint nodes do not match its grid");
    cp.state.first[i] = u;
    cp.state.second[i] = v;
  }
  return cp;
}

}  // namespace gbq
