#pragma once

// Time integration of u_t = v_x, v_t = (-u_xx + u - |u|^p u)_x. The linear
// part is propagated exactly per Fourier mode, the nonlinearity by a
// fourth-order exponential Runge-Kutta scheme (Cox-Matthews) with 2/3-rule
// truncation.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "gbq/functionals.hpp"
#include "gbq/grid.hpp"

namespace gbq {

struct EvolutionConfig {
  double dt = 5e-3;
  double t_end = 20.0;
  int record_every = 20;
  double blowup_threshold = 1e3;
};

/// Checks dt, t_end, record_every and the threshold against the initial state.
void validate(const EvolutionConfig& cfg, const FieldPair& state0);

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Exact linear flow of one mode over dt in the symmetrized real variables
/// q = sqrt(1 + k^2) u_hat, r = i v_hat: a rotation by k sqrt(1 + k^2) dt.
Mat2 linear_mode_propagator(double k, double dt);

// One integrator per trajectory: step() reuses internal scratch buffers.
class Integrator {
 public:
  Integrator(const Grid& grid, double p, double dt);

  /// Advances the state by one step of size dt. Throws BlowupError when the
  /// sup norm of u crosses `threshold` or turns NaN in any stage.
  void step(FieldPair& state, double threshold, double t_now) const;

  double dt() const { return dt_; }
  double p() const { return p_; }

 private:
  struct Coef {
    double a;  // multiple of the identity
    double c;  // multiple of the generator A
  };
  Grid grid_;
  double p_;
  double dt_;
  std::size_t cut_;
  std::vector<double> kk_;  // k, zeroed at Nyquist
  std::vector<Coef> e_half_, e_full_, q_half_, f1_, f2_, f3_;
  mutable std::vector<double> u_phys_, w_phys_;

  // v-component of the nonlinear term, -ik F[|u|^p u] truncated to |j| <= N/3.
  void nonlinear(const std::vector<cplx>& uh, std::vector<cplx>& nv, double threshold, double t_now) const;
};

/// One step from a fresh integrator.
FieldPair step(const FieldPair& state, double p, const EvolutionConfig& cfg);

enum class Termination { Completed, Blowup, Stopped };
std::string to_string(Termination t);

struct EvolutionSample {
  double t;
  ConservedValues conserved;
  double sup_u;
};

struct Trajectory {
  std::vector<EvolutionSample> samples;
  Termination termination = Termination::Completed;
  std::string message;
  double final_time = 0.0;
  FieldPair final_state;
};

/// Called at t_start and every record_every steps; return false to stop.
using RecordHook = std::function<bool(double t, const FieldPair& state)>;

/// Evolves from t_start to t_end. Blowup terminates the run and is reported
/// in the trajectory rather than thrown. Hook exceptions propagate.
Trajectory evolve(const FieldPair& state0, double p, double omega, const EvolutionConfig& cfg,
                  const RecordHook& hook = {}, double t_start = 0.0);

struct Checkpoint {
  double t = 0.0;
  double p = 0.0;
  FieldPair state;
};

/// CSV: "# t=.. L=.. N=.. p=.." header, then x,u,v rows at full precision.
void write_checkpoint(const std::string& path, double t, double p, const FieldPair& state);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace gbq
