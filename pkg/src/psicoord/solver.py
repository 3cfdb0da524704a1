"""Recover edge lengths from psi values by damped Newton in log-length variables."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import JacobianMismatch, NoConvergence, NotInPolytope, SingularJacobian
from .polytope import INSIDE, build_polytope, check_membership
from .psi import Metric, PsiVector, forward_map, psi_jacobian
from .triangulation import IdealTriangulation

log = logging.getLogger(__name__)

JACOBIAN_MODES = ("analytic", "finite_difference", "cross_check")


@dataclass(frozen=True)
class SolveOptions:
    max_iterations: int = 100
    residual_tolerance: float = 1e-10
    step_cap: float = 1.0
    backtracking_limit: int = 40
    jacobian_mode: str = "analytic"
    fd_step: float = 1e-6
    cross_check_tolerance: float = 1e-5

    def __post_init__(self):
        if self.jacobian_mode not in JACOBIAN_MODES:
            raise ValueError(f"jacobian_mode must be one of {JACOBIAN_MODES}")
        for name in ("max_iterations", "residual_tolerance", "step_cap", "backtracking_limit"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SolveReport:
    """``final_residual`` is a max norm; ``trace`` holds (Euclidean residual norm, step size)."""

    metric: Metric
    iterations: int
    final_residual: float
    converged: bool
    trace: list[tuple[float, float]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "lengths": list(self.metric.lengths),
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "converged": self.converged,
            "trace": [{"residual": r, "step": s} for r, s in self.trace],
        }

    def format(self) -> str:
        lines = [
            f"converged {'yes' if self.converged else 'no'}",
            f"iterations {self.iterations}",
            f"final_residual {self.final_residual:.6e}",
            "lengths " + " ".join(f"{v:.15g}" for v in self.metric.lengths),
        ]
        lines += [f"iter {i} residual {r:.6e} step {s:.6e}" for i, (r, s) in enumerate(self.trace)]
        return "\n".join(lines) + "\n"


def finite_difference_jacobian(complex_, metric: Metric, lam: float, step: float = 1e-6) -> np.ndarray:
    """Central differences of psi with respect to each length."""
    l = np.array(metric.lengths)
    m = len(l)
    jac = np.empty((m, m))
    for j in range(m):
        h = step * max(1.0, l[j])
        up, down = l.copy(), l.copy()
        up[j] += h
        down[j] -= h
        plus = np.array(forward_map(complex_, Metric(tuple(up)), lam).values)
        minus = np.array(forward_map(complex_, Metric(tuple(down)), lam).values)
        jac[:, j] = (plus - minus) / (2.0 * h)
    return jac


def jacobian(complex_: IdealTriangulation, metric: Metric, lam: float, mode: str = "analytic",
             fd_step: float = 1e-6, tolerance: float = 1e-5) -> np.ndarray:
    if mode == "analytic":
        return psi_jacobian(complex_, metric, lam)
    if mode == "finite_difference":
        return finite_difference_jacobian(complex_, metric, lam, fd_step)
    analytic = psi_jacobian(complex_, metric, lam)
    numeric = finite_difference_jacobian(complex_, metric, lam, fd_step)
    if not jacobians_agree(analytic, numeric, tolerance):
        raise JacobianMismatch(f"analytic and finite-difference Jacobians differ by more than {tolerance}")
    return analytic


def jacobians_agree(a: np.ndarray, b: np.ndarray, rtol: float) -> bool:
    # entries far below the matrix scale are compared absolutely
    scale = max(np.max(np.abs(a)), 1e-300)
    return bool(np.all(np.abs(a - b) <= rtol * np.maximum(np.abs(a), 1e-3 * scale)))


def _residual(complex_, u: np.ndarray, lam: float, target: np.ndarray) -> np.ndarray:
    return np.array(forward_map(complex_, Metric(tuple(np.exp(u))), lam).values) - target


def invert(
    complex_: IdealTriangulation,
    target: PsiVector,
    lam: float,
    opts: SolveOptions | None = None,
    *,
    check: bool = True,
    system=None,
    initial: Metric | None = None,
) -> SolveReport:
    """Find the metric whose psi vector is ``target``.

    The iterate is ``u = log l``; each Newton step is clipped to ``step_cap``
    in the max norm and halved until the Euclidean residual norm decreases.
    Convergence is judged on the max-norm residual.  Pass
    ``check=False`` to skip the polytope membership test.
    """
    opts = opts or SolveOptions()
    lam = float(lam)
    z = np.array(PsiVector(tuple(target.values) if isinstance(target, PsiVector) else tuple(target)).values)
    if len(z) != complex_.edge_count:
        raise ValueError(f"target has {len(z)} entries, complex has {complex_.edge_count} edges")
    if check:
        system = system or build_polytope(complex_, lam)
        verdict = check_membership(system, z)
        if verdict.verdict != INSIDE:
            raise NotInPolytope(f"target is {verdict.verdict} (min margin {verdict.min_margin:.3e})")

    u = np.zeros(len(z)) if initial is None else np.log(np.array(initial.lengths))
    g = _residual(complex_, u, lam, z)
    merit = float(np.linalg.norm(g))
    trace = [(merit, 0.0)]
    iterations = 0
    retried = False
    rng = np.random.default_rng(0)

    while _inf(g) >= opts.residual_tolerance:
        if iterations >= opts.max_iterations:
            return _fail(f"no convergence after {iterations} iterations", u, iterations, g, trace)
        l = np.exp(u)
        jac = jacobian(complex_, Metric(tuple(l)), lam, opts.jacobian_mode, opts.fd_step,
                       opts.cross_check_tolerance) * l
        try:
            if not np.all(np.isfinite(jac)) or np.linalg.cond(jac) > 1e14:
                raise np.linalg.LinAlgError("ill-conditioned Jacobian")
            step = -np.linalg.solve(jac, g)
        except np.linalg.LinAlgError as exc:
            if retried:
                raise SingularJacobian(str(exc)) from exc
            retried = True
            log.debug("singular Jacobian at iteration %d, perturbing iterate", iterations)
            u = u + 1e-6 * rng.standard_normal(len(u))
            g = _residual(complex_, u, lam, z)
            merit = float(np.linalg.norm(g))
            continue
        biggest = float(np.max(np.abs(step)))
        if biggest > opts.step_cap:
            step *= opts.step_cap / biggest
        t = 1.0
        for _ in range(opts.backtracking_limit):
            trial = u + t * step
            g_trial = _residual(complex_, trial, lam, z)
            merit_trial = float(np.linalg.norm(g_trial))
            if merit_trial < merit:
                break
            t *= 0.5
        else:
            return _fail("backtracking budget exhausted", u, iterations, g, trace)
        u, g, merit = trial, g_trial, merit_trial
        iterations += 1
        trace.append((merit, t * float(np.max(np.abs(step)))))
        log.debug("iteration %d: residual %.3e, damping %.3g", iterations, merit, t)

    return SolveReport(Metric(tuple(np.exp(u))), iterations, _inf(g), True, trace)


def _inf(g: np.ndarray) -> float:
    return float(np.max(np.abs(g)))


def _fail(message, u, iterations, g, trace):
    report = SolveReport(Metric(tuple(np.exp(u))), iterations, _inf(g), False, trace)
    raise NoConvergence(message, report)
