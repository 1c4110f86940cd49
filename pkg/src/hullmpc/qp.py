"""Dense convex QP container and solver.

Problems are stated as  min 0.5 z'Hz + g'z  s.t.  G z <= h  (+ optional
equality rows A z = b). The solve is delegated to cvxopt's interior-point
method and followed by a deterministic active-set polish that pushes
constraint residuals to linear-solver accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from cvxopt import matrix as cvx_matrix
from cvxopt import solvers as cvx_solvers

from .errors import Infeasible, IterationLimit

cvx_solvers.options.update({
    "show_progress": False,
    # moderate interior-point tolerances; the active-set polish afterwards
    # drives residuals to linear-solver accuracy
    "abstol": 1e-8,
    "reltol": 1e-8,
    "feastol": 1e-9,
    "maxiters": 100,
})


@dataclass(frozen=True)
class QpRow:
    """Provenance of one inequality row."""

    kind: str          # e.g. "limit-velocity", "distance-current", "slack-bound"
    step: int          # horizon step the row belongs to
    link: int = -1     # link index for distance rows
    detail: str = ""


@dataclass
class QpProblem:
    H: np.ndarray
    g: np.ndarray
    G: np.ndarray
    h: np.ndarray
    rows: list[QpRow] = field(default_factory=list)
    A: np.ndarray | None = None  # equality rows (unused by the condensed MPC)
    b: np.ndarray | None = None

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=float)
        self.g = np.asarray(self.g, dtype=float).reshape(-1)
        n = self.g.shape[0]
        if self.H.shape != (n, n):
            raise ValueError("H/g dimension mismatch")
        if not np.allclose(self.H, self.H.T, atol=1e-9):
            raise ValueError("H must be symmetric")
        self.G = np.asarray(self.G, dtype=float).reshape(-1, n)
        self.h = np.asarray(self.h, dtype=float).reshape(-1)
        if self.G.shape[0] != self.h.shape[0]:
            raise ValueError("G/h row mismatch")
        if self.rows and len(self.rows) != self.G.shape[0]:
            raise ValueError("row bookkeeping does not match constraint count")

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @property
    def m(self) -> int:
        return self.h.shape[0]

    def objective(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return float(0.5 * z @ self.H @ z + self.g @ z)

    def violation(self, z: np.ndarray) -> float:
        """Largest inequality violation (0 when feasible)."""
        if self.m == 0:
            return 0.0
        return float(np.max(np.maximum(self.G @ np.asarray(z, float) - self.h, 0.0)))


def _polish_candidate(qp: QpProblem, active: np.ndarray,
                      scale: float) -> np.ndarray | None:
    """Equality re-solve on one candidate active set; None when invalid."""
    Ga = qp.G[active]
    if qp.A is not None and len(qp.A):
        Ga = np.vstack([qp.A, Ga]) if len(Ga) else np.asarray(qp.A, float)
        ha = np.concatenate([qp.b, qp.h[active]])
        n_eq = len(qp.A)
    else:
        ha = qp.h[active]
        n_eq = 0
    k = len(ha)
    if k == 0:
        try:
            z_p = np.linalg.solve(qp.H, -qp.g)
        except np.linalg.LinAlgError:
            return None
    else:
        KKT = np.block([[qp.H, Ga.T], [Ga, np.zeros((k, k))]])
        rhs = np.concatenate([-qp.g, ha])
        sol, *_ = np.linalg.lstsq(KKT, rhs, rcond=None)
        z_p, lam = sol[:qp.n], sol[qp.n:]
        if np.any(lam[n_eq:] < -1e-7):
            return None  # dual-infeasible guess
    if qp.violation(z_p) > 1e-10 * scale:
        return None
    return z_p


def _polish(qp: QpProblem, z: np.ndarray,
            ineq_multipliers: np.ndarray | None = None) -> np.ndarray | None:
    """Best active-set refinement of an interior-point solution.

    Candidate active sets come from the IP multipliers (cleanly separated at
    the optimum) and from several slack thresholds; the best feasible,
    dual-consistent candidate that does not worsen the objective wins.
    """
    scale = 1.0 + float(np.abs(qp.h).max()) if qp.m else 1.0
    slack = qp.h - qp.G @ z
    candidates: list[tuple] = []
    if ineq_multipliers is not None and len(ineq_multipliers) == qp.m and qp.m:
        lam_scale = max(1.0, float(ineq_multipliers.max()))
        candidates.append(tuple(np.flatnonzero(ineq_multipliers > 1e-6 * lam_scale)))
    for tol in (1e-5, 1e-6, 1e-7):
        candidates.append(tuple(np.flatnonzero(slack <= tol * scale)))
    best = None
    best_obj = qp.objective(z) + 1e-12 * (1.0 + abs(qp.objective(z)))
    for active in dict.fromkeys(candidates):  # dedupe, keep order
        z_p = _polish_candidate(qp, np.asarray(active, dtype=int), scale)
        if z_p is not None and qp.objective(z_p) < best_obj:
            best = z_p
            best_obj = qp.objective(z_p)
    return best


def _is_infeasible(qp: QpProblem) -> bool:
    from scipy.optimize import linprog

    res = linprog(np.zeros(qp.n), A_ub=qp.G, b_ub=qp.h,
                  A_eq=qp.A if qp.A is not None and len(qp.A) else None,
                  b_eq=qp.b if qp.A is not None and len(qp.A) else None,
                  bounds=[(None, None)] * qp.n, method="highs")
    return res.status == 2  # HiGHS: 2 = infeasible


def solve_qp(qp: QpProblem, tol: float = 1e-9) -> tuple[np.ndarray, str]:
    """Solve the QP; returns (z, status) with status == "optimal".

    Raises Infeasible when no point satisfies the constraints, and
    IterationLimit when the interior-point method stalls before reaching
    the requested tolerance.
    """
    if qp.m == 0 and qp.A is None:
        return np.linalg.solve(qp.H, -qp.g), "optimal"
    kwargs = {}
    if qp.A is not None and len(qp.A):
        kwargs["A"] = cvx_matrix(np.asarray(qp.A, float))
        kwargs["b"] = cvx_matrix(np.asarray(qp.b, float).reshape(-1, 1))
    try:
        sol = cvx_solvers.qp(cvx_matrix(qp.H), cvx_matrix(qp.g.reshape(-1, 1)),
                             cvx_matrix(qp.G), cvx_matrix(qp.h.reshape(-1, 1)),
                             **kwargs)
    except (ValueError, ZeroDivisionError, ArithmeticError):
        # cvxopt can fail numerically instead of reporting infeasibility;
        # settle the question with a feasibility LP
        if _is_infeasible(qp):
            raise Infeasible("QP has no feasible point") from None
        raise IterationLimit("QP solver failed numerically") from None
    status = sol["status"]
    if status == "primal infeasible":
        raise Infeasible("QP has no feasible point")
    if status == "dual infeasible":
        raise Infeasible("QP is unbounded below (dual infeasible)")
    z = np.asarray(sol["x"]).reshape(-1)
    if status != "optimal":
        # "unknown": accept only if the returned point is essentially optimal
        if qp.violation(z) > 1e-6:
            raise IterationLimit(f"QP solver stalled with status {status!r}")
    lam = np.asarray(sol["z"]).reshape(-1) if qp.m else None
    z_polished = _polish(qp, z, lam)
    if z_polished is not None:
        z = z_polished
    if qp.violation(z) > tol * (1.0 + float(np.abs(qp.h).max()) if qp.m else 1.0):
        raise IterationLimit("QP solution violates constraints beyond tolerance")
    return z, "optimal"
