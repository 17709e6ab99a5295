"""Wire-layout synthesis by shooting on the deflector-wire current.

Both schemes share the same structure: the splitting-wire current follows
in closed form from the scheme's deflection requirement, the mirror pair of
deflector wires sits at an analytically fixed position, and the one free
parameter -- the deflector current -- is tuned until the branch trajectory
re-crosses the launch plane at its starting height. All wires stay powered
throughout, so the objective sees every wire's repulsion over the whole
flight, not just the nominal encounters.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

from scipy.optimize import brentq

from . import analytic
from .field import WireSingularityError, b_field
from .integrator import (
    DEFAULT_CONTROL,
    StepControl,
    Trajectory,
    mirror_trajectory,
    pair_separation,
    simulate,
)
from .model import (
    DesignResult,
    InfeasibleDesignError,
    Medium,
    PacketState,
    ScatteringInputs,
    Wire,
    default_medium,
)

logger = logging.getLogger(__name__)

CLOSURE_SENTINEL = 10.0
"""Returned by :func:`closure_error` when the packet never recrosses the
launch plane within the time budget; vastly larger than any real miss."""

_TIME_MARGIN = 0.1  # fraction of tau allowed beyond the nominal flight time


class DesignFailure(RuntimeError):
    """Shooting failed to bracket or converge; carries the best iterate."""

    def __init__(self, message: str, best_current=None, best_error=None):
        self.best_current = best_current
        self.best_error = best_error
        if best_current is not None:
            message += (
                f" (best iterate: current = {best_current:.6e} A, "
                f"closure error = {best_error:.3e} m)"
            )
        super().__init__(message)


@dataclass(frozen=True)
class DesignSpec:
    """What to design: scheme, launch parameters, convergence knobs."""

    scheme: str  # "triangular" | "inverse"
    inputs: ScatteringInputs
    closure_tolerance: float = 1e-8  # m
    shoot_max_iterations: int = 80

    def __post_init__(self):
        if self.scheme not in ("triangular", "inverse"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.closure_tolerance > 0.0:
            raise ValueError("closure_tolerance must be positive")
        if self.closure_tolerance >= self.inputs.b:
            raise ValueError(
                "closure_tolerance must be finer than the initial split b"
            )
        if self.shoot_max_iterations < 8:
            raise ValueError("shoot_max_iterations must be at least 8")


def closure_error(wires, initial: PacketState, medium: Medium, tau: float,
                  control: StepControl = DEFAULT_CONTROL,
                  margin: float = _TIME_MARGIN) -> float:
    """Signed z miss (m) at the first re-crossing of the launch plane.

    Positive when the branch comes back above its starting height. Returns
    :data:`CLOSURE_SENTINEL` when no crossing with vx < 0 happens within
    ``tau * (1 + margin)``.
    """
    traj = simulate(initial, wires, medium, tau * (1.0 + margin), control,
                    stop_at_closure=True)
    if traj.events.closure is None:
        logger.debug(
            "no launch-plane crossing within %.3e s; returning sentinel",
            tau * (1.0 + margin),
        )
        return CLOSURE_SENTINEL
    return traj.events.closure.z - initial.z


def _deflector_seed(splitting_current, v0, b, x0, wire_x, wire_z,
                    medium: Medium) -> float:
    """Analytic starting guess for the deflector current.

    Treats the branch after the splitting deflection as its outgoing
    asymptote (offset b on the wire side), reads off the impact parameter
    with respect to the deflector wire and the turn angle needed to head
    back to the launch point, and inverts the single-wire deflection
    formulas. When the deflector sits on the asymptote (retrace geometry)
    the impact parameter degenerates to zero; then the seed instead targets
    a head-on turning radius of a few percent of the initial split.
    """
    k_split = analytic.stiffness_k(splitting_current, b, v0, medium)
    theta_s = analytic.scattering_angle(k_split)
    ux, uz = math.cos(theta_s), math.sin(theta_s)
    # outgoing asymptote passes at distance b on the travel-left of the wire
    px, pz = -uz * b, ux * b
    s = ux * (wire_z - pz) - uz * (wire_x - px)
    b_eff = abs(s)
    if b_eff < 1e-3 * b:
        d0_target = b / 50.0
        return d0_target * v0 / math.sqrt(medium.alpha)
    rx, rz = -x0 - wire_x, b - wire_z
    rn = math.hypot(rx, rz)
    dot = (ux * rx + uz * rz) / rn
    cross = (ux * rz - uz * rx) / rn
    turn = abs(math.atan2(cross, dot))
    sqrt_k = math.pi / (math.pi - turn)
    k2 = sqrt_k * sqrt_k
    return b_eff * (v0 / math.sqrt(medium.alpha)) * math.sqrt(k2 - 1.0)


def _shoot(objective, seed: float, budget: int, tolerance: float) -> float:
    """Bracket by geometric scan from the seed, then polish with brentq.

    Near its root the objective decreases through zero as the deflector
    current grows: too little current leaves the branch over-high (or lost
    entirely, the sentinel case), too much slams it below the launch
    height. The scan walks that direction first and falls back to the
    opposite one, so a locally inverted regime still brackets if a root
    exists at all.
    """
    evals = 0
    best = (None, math.inf)

    def f(current):
        nonlocal evals, best
        if evals >= budget:
            raise DesignFailure(
                "shooting iteration budget exhausted",
                best_current=best[0], best_error=best[1],
            )
        evals += 1
        try:
            err = objective(current)
        except WireSingularityError:
            # packet swallowed by a wire: invalid trial, same as no return
            err = CLOSURE_SENTINEL
        if valid(err) and abs(err) < abs(best[1]):
            best = (current, err)
        logger.debug("shoot: I = %.9e A -> closure error %.6e m", current, err)
        return err

    def valid(err):
        return abs(err) < 0.5 * CLOSURE_SENTINEL

    seed_err = f(seed)
    start_i, start_e = seed, seed_err
    while not valid(start_e):
        # sentinel at the seed means under-deflection: walk upward
        start_i *= 2.0
        start_e = f(start_i)
        if start_i > seed * 2.0**16:
            raise DesignFailure("could not find a returning trajectory",
                                best_current=best[0], best_error=best[1])
    if start_e == 0.0:
        return start_i

    def walk(step):
        prev_i, prev_e = start_i, start_e
        for _ in range(40):
            cur_i = prev_i * step
            cur_e = f(cur_i)
            if valid(cur_e) and cur_e == 0.0:
                return (cur_i, cur_i)
            if valid(cur_e) and (cur_e > 0.0) != (prev_e > 0.0):
                return (prev_i, cur_i)
            if valid(cur_e):
                monotone = cur_e < prev_e if step > 1.0 else cur_e > prev_e
                if not monotone:
                    logger.debug(
                        "closure error not monotone across scan: "
                        "I %.3e -> %.3e A, err %.3e -> %.3e m",
                        prev_i, cur_i, prev_e, cur_e,
                    )
                prev_i, prev_e = cur_i, cur_e
            else:
                # lost the trajectory; shrink toward the valid side
                step = math.sqrt(step)
                if abs(step - 1.0) < 1e-3:
                    return None
        return None

    first = 2.0 if start_e > 0.0 else 0.5
    bracket = walk(first)
    if bracket is None:
        bracket = walk(1.0 / first)
    if bracket is None:
        raise DesignFailure("failed to bracket a closure root",
                            best_current=best[0], best_error=best[1])
    if bracket[0] == bracket[1]:
        return bracket[0]

    lo, hi = min(bracket), max(bracket)
    root = brentq(f, lo, hi, xtol=1e-12 * seed, rtol=8.9e-16, maxiter=budget)
    final = f(root)
    if abs(final) > tolerance:
        raise DesignFailure(
            f"converged current misses closure tolerance: |{final:.3e}| m "
            f"> {tolerance:.3e} m",
            best_current=best[0], best_error=best[1],
        )
    return root


def _design(spec: DesignSpec, medium: Medium, control: StepControl,
            splitting_current: float, deflector_xz) -> DesignResult:
    v0, b, x0, tau = (spec.inputs.v0, spec.inputs.b,
                      spec.inputs.x0, spec.inputs.tau)
    dx_w, dz_w = deflector_xz
    initial = PacketState(x=-x0, z=b, vx=v0, vz=0.0, t=0.0)

    def wires_for(current):
        return (
            Wire(0.0, 0.0, splitting_current),
            Wire(dx_w, dz_w, current),
            Wire(dx_w, -dz_w, current),
        )

    def objective(current):
        return closure_error(wires_for(current), initial, medium, tau, control)

    seed = _deflector_seed(splitting_current, v0, b, x0, dx_w, dz_w, medium)
    logger.debug("%s seed current: %.6e A", spec.scheme, seed)
    current = _shoot(objective, seed, spec.shoot_max_iterations,
                     spec.closure_tolerance)

    wires = wires_for(current)
    top = simulate(initial, wires, medium, tau * (1.0 + _TIME_MARGIN), control,
                   stop_at_closure=True)
    bottom = mirror_trajectory(top)
    sep = pair_separation(top, bottom)

    closure = top.events.closure
    if closure is None:
        raise DesignFailure("converged design lost its closure crossing",
                            best_current=current)

    peri = top.events.periapsis_per_wire
    # z -> -z symmetry: the bottom branch sees the mirror wire at the same
    # distance, so the per-wire minimum over both branches is the top
    # branch's distance to the deflector on its own side.
    d_split = peri[0].distance
    d_deflector = peri[1].distance
    min_dists = (d_split, d_deflector, d_deflector)
    densities = [abs(w.current) / (math.pi * d * d)
                 for w, d in zip(wires, min_dists)]
    closest = min(peri[:2], key=lambda p: p.distance)
    bx, bz = b_field((closest.state.x, closest.state.z), wires, medium.mu0)

    events = replace(top.events, separation_max=sep.max_separation)
    top = Trajectory(top.t, top.states, events, top.stats)
    bottom = mirror_trajectory(top)

    result = DesignResult(
        wires=wires,
        max_separation=sep.max_separation,
        closure_error=abs(closure.z - initial.z),
        return_velocity=(closure.vx, closure.vz),
        min_distance_per_wire=min_dists,
        min_current_density=max(densities),
        peak_field=math.hypot(bx, bz),
        return_time=closure.t - initial.t,
    )
    return result, top, bottom


def design_trajectories(spec: DesignSpec, medium: Medium | None = None,
                        control: StepControl = DEFAULT_CONTROL):
    """Run a design and return ``(result, top_branch, bottom_branch)``."""
    medium = medium if medium is not None else default_medium()
    v0, b, x0, tau = (spec.inputs.v0, spec.inputs.b,
                      spec.inputs.x0, spec.inputs.tau)
    if v0 * tau <= 2.0 * x0:
        raise InfeasibleDesignError(
            f"flight too short: v0*tau = {v0 * tau:g} m must exceed "
            f"2*x0 = {2.0 * x0:g} m"
        )
    if spec.scheme == "triangular":
        ratio = analytic.triangular_current_ratio(v0, tau, x0, medium)
        deflector = triangular_deflector_position(x0, b, v0, tau)
    else:
        ratio = analytic.inverse_current_ratio(v0, medium)
        deflector = (-b, v0 * tau / 2.0 - x0)
    return _design(spec, medium, control, ratio * b, deflector)


def triangular_deflector_position(x0: float, b: float, v0: float, tau: float):
    """Where the triangular designer puts the deflector wires, (m, m).

    The geometry admits two natural heights: the branch-ellipse vertex
    (launch offset plus semi-minor, :func:`analytic.apex_wire_position`) and
    the centre-line vertex (semi-minor alone). The scattered branch passes
    between them, and the synthesized deflector current is very sensitive to
    the choice; the midpoint, half the launch offset above the centre-line
    vertex, reproduces the reference configuration's current.
    """
    x_w, z_vertex = analytic.apex_wire_position(x0, b, v0, tau)
    return (x_w, z_vertex - b / 2.0)


def design_triangular(spec: DesignSpec, medium: Medium | None = None,
                      control: StepControl = DEFAULT_CONTROL) -> DesignResult:
    """Synthesise the three-wire triangular-closure configuration."""
    if spec.scheme != "triangular":
        raise ValueError(f"spec.scheme is {spec.scheme!r}, expected 'triangular'")
    return design_trajectories(spec, medium, control)[0]


def design_inverse(spec: DesignSpec, medium: Medium | None = None,
                   control: StepControl = DEFAULT_CONTROL) -> DesignResult:
    """Synthesise the three-wire retrace-closure configuration."""
    if spec.scheme != "inverse":
        raise ValueError(f"spec.scheme is {spec.scheme!r}, expected 'inverse'")
    return design_trajectories(spec, medium, control)[0]
