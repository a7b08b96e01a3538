#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "bilayer/diagnostics.hpp"
#include "bilayer/grid.hpp"
#include "bilayer/rheology.hpp"

namespace bilayer {

enum class Scheme { semi_implicit, implicit_newton };

enum class StepStatus { ok, rupture, blowup, step_failure };

struct StepConfig {
  double dt0 = 1e-5;
  double dt_min = 1e-12;
  double dt_max = 1e-5;
  Scheme scheme = Scheme::implicit_newton;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  /// Heights at or below this value terminate the run with StepStatus::rupture.
  /// NaN = resolve at advance() start to 1e-8 * min(initial min f, initial min g).
  double rupture_floor = std::numeric_limits<double>::quiet_NaN();
  /// Cap on blowup_norm; exceeding it terminates with StepStatus::blowup.
  /// NaN = resolve at advance() start to 1e8 * blowup_norm(initial state).
  double blowup_norm_cap = std::numeric_limits<double>::quiet_NaN();
};

struct StepOutcome {
  State state;
  StepStatus status;
  double dt_used;
  int newton_iterations = 0;   ///< updates taken (0 for the semi-implicit scheme)
  double residual_norm = 0.0;  ///< max-norm residual at acceptance (Newton only)
};

/// L2-type norm of the fields and their discrete fourth derivatives,
/// the blow-up proxy monitored by the stepper.
double blowup_norm(const State& state, const Grid& grid);

/// One step of the frozen-coefficient scheme: the coefficient-matrix entries
/// are evaluated at the current state, averaged onto faces, and applied to
/// the implicit face third derivatives; the shear-thinning flux is linearized
/// about the current face value. The resulting banded system (interleaved
/// f, g unknowns, bandwidth 5) is solved by LU, and the update is applied in
/// conservative divergence form so both discrete masses telescope exactly.
/// A NaN rupture_floor/blowup_norm_cap in config disables that check.
StepOutcome step_semi_implicit(const State& state, double dt,
                               const FluidParams& params, const Grid& grid,
                               const StepConfig& config);

/// One step of the fully implicit conservative scheme
///   u_next = u - dt * divergence_of_flux(faces(u_next)),
/// solved by Newton iteration with an analytic banded Jacobian (finite
/// difference rows for the shear-thinning term when 1 < p < 2 near zero face
/// third derivatives). The iteration runs until the max-norm residual stalls
/// at its rounding floor; the step is accepted when that floor is at most
/// newton_tol * (1 + |u|_inf), so the tolerance is a ceiling on the leftover
/// residual rather than an early-exit target. Non-convergence reports
/// step_failure and leaves the input state untouched.
StepOutcome step_implicit_newton(const State& state, double dt,
                                 const FluidParams& params, const Grid& grid,
                                 const StepConfig& config);

using Observer =
    std::function<void(const State&, const DiagnosticsRecord&, double dt_used)>;

struct AdvanceResult {
  StepOutcome outcome;
  std::vector<DiagnosticsRecord> series;
  long accepted_steps = 0;
};

/// Steps from state.t to t_end with adaptive dt: halve and retry on
/// step_failure (fail terminally below dt_min), grow by 1.2 after 5
/// consecutive successes, clamp to [dt_min, dt_max]. Records diagnostics for
/// the initial state, every record_stride-th accepted step, and the final
/// state; the observer (if any) sees exactly the recorded entries. Rupture
/// and blow-up terminate early with the offending state recorded.
AdvanceResult advance(const State& state, double t_end, StepConfig config,
                      const FluidParams& params, const Grid& grid,
                      const Observer& observer = nullptr,
                      int record_stride = 1);

}  // namespace bilayer
