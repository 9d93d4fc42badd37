"""Dense semidefinite programming: primal-dual path-following solver.

Solves   min <C, X>  s.t.  <A_k, X> = b_k (k = 1..m),  X >= 0 (PSD)

with an infeasible-start Mehrotra predictor-corrector using the
symmetrized scaling-direction linearization: the complementarity target
K is linearized as dX S + X dS = K, the search direction is recovered
through the (symmetrized) Schur-complement normal equations, and dX is
symmetrized. Cold start from scaled identities, fraction-to-boundary
steps, and a small diagonal regularization of the normal equations keep
the method stable on the sizes this package needs (dim a few dozen).
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SolverSettings:
    """Interior-point tolerances and iteration limits (absolute)."""

    feas_tol: float = 1e-7
    gap_tol: float = 1e-6
    eig_tol: float = 1e-8
    max_iterations: int = 200
    step_fraction: float = 0.98
    regularization: float = 1e-10

    def __post_init__(self):
        if not (0 < self.step_fraction < 1):
            raise ValueError("step_fraction must be in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class SdpProblem:
    """Symmetric objective and equality constraints over PSD matrices."""

    dim: int
    objective: np.ndarray
    constraints: list  # list of (A_k, b_k)

    def __post_init__(self):
        self.objective = _check_symmetric(self.objective, self.dim, "objective")
        if len(self.constraints) < 1:
            raise ValueError("at least one constraint is required")
        checked = []
        for idx, (a, b) in enumerate(self.constraints):
            checked.append(
                (_check_symmetric(a, self.dim, f"constraint {idx}"), float(b))
            )
        self.constraints = checked

    def constraint_tensor(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.stack([a for a, _ in self.constraints])
        b = np.array([b for _, b in self.constraints])
        return a, b


def _check_symmetric(mat: np.ndarray, dim: int, label: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (dim, dim):
        raise ValueError(f"{label}: expected shape ({dim}, {dim}), got {mat.shape}")
    scale = float(np.max(np.abs(mat))) if mat.size else 0.0
    if not np.allclose(mat, mat.T, atol=1e-12 * (1.0 + scale), rtol=0.0):
        raise ValueError(f"{label}: matrix is not symmetric")
    return (mat + mat.T) / 2.0


@dataclass
class SdpSolution:
    U: np.ndarray
    status: str  # "optimal" | "max_iterations" | "infeasible"
    primal_residual: float
    duality_gap: float
    iterations: int
    objective: float
    y: np.ndarray
    dual_residual: float
    message: str = ""


@dataclass(frozen=True)
class SolutionReport:
    """Independent feasibility recheck of a candidate solution."""

    constraint_residuals: np.ndarray
    min_eigenvalue: float
    objective: float

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.constraint_residuals)))


def check_solution(problem: SdpProblem, solution) -> SolutionReport:
    """Recompute per-constraint residuals, min eigenvalue and objective.

    ``solution`` may be an :class:`SdpSolution` or a bare matrix.
    """
    u = solution.U if hasattr(solution, "U") else np.asarray(solution, dtype=float)
    if u.shape != (problem.dim, problem.dim):
        raise ValueError("solution matrix has the wrong shape")
    a, b = problem.constraint_tensor()
    residuals = np.einsum("mij,ij->m", a, u) - b
    min_eig = float(np.linalg.eigvalsh((u + u.T) / 2.0)[0])
    objective = float(np.vdot(problem.objective, u))
    return SolutionReport(residuals, min_eig, objective)


def _max_step(x: np.ndarray, d: np.ndarray) -> float:
    """Largest step in [0, inf) with x + alpha * d still PSD (x PD)."""
    try:
        chol = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        return 0.0
    inv_l = np.linalg.solve(chol, np.eye(len(x)))
    scaled = inv_l @ d @ inv_l.T
    lam = float(np.linalg.eigvalsh((scaled + scaled.T) / 2.0)[0])
    if lam >= 0.0:
        return np.inf
    return -1.0 / lam


def _solve_normal(m_mat: np.ndarray, rhs: np.ndarray, reg: float) -> np.ndarray:
    m_reg = m_mat + reg * np.eye(len(m_mat))
    jitter = reg
    for _ in range(6):
        try:
            chol = np.linalg.cholesky(m_reg)
            z = np.linalg.solve(chol, rhs)
            return np.linalg.solve(chol.T, z)
        except np.linalg.LinAlgError:
            jitter = max(jitter * 100.0, 1e-14)
            m_reg = m_mat + jitter * np.eye(len(m_mat))
    return np.linalg.lstsq(m_mat, rhs, rcond=None)[0]


def solve_sdp(
    problem: SdpProblem, settings: SolverSettings | None = None
) -> SdpSolution:
    """Run the interior-point method on a dense SDP.

    Returns status "optimal" once primal/dual residuals and the
    complementarity gap are inside the settings' tolerances,
    "max_iterations" (with the best iterate seen) if the budget runs out,
    or "infeasible" when the equality constraints are inconsistent or the
    dual iterates diverge along an improving ray.
    """
    settings = settings or SolverSettings()
    n = problem.dim
    a, b = problem.constraint_tensor()
    c = problem.objective
    m = len(b)

    # inconsistent equalities have no PSD solution either
    rows = a.reshape(m, n * n)
    coef, *_ = np.linalg.lstsq(rows, b, rcond=None)
    lin_resid = float(np.max(np.abs(rows @ coef - b)))
    if lin_resid > 1e-8 * (1.0 + float(np.max(np.abs(b)))):
        return SdpSolution(
            U=np.zeros((n, n)),
            status="infeasible",
            primal_residual=np.inf,
            duality_gap=np.inf,
            iterations=0,
            objective=np.nan,
            y=np.zeros(m),
            dual_residual=np.inf,
            message=(
                "equality constraints are inconsistent: least-squares "
                f"residual {lin_resid:.3e} admits no exact solution"
            ),
        )

    x = np.eye(n) * max(1.0, float(np.max(np.abs(b))))
    s = np.eye(n) * max(1.0, float(np.max(np.abs(c))))
    y = np.zeros(m)

    c_scale = 1.0 + float(np.max(np.abs(c)))
    b_scale = 1.0 + float(np.max(np.abs(b)))
    frac = settings.step_fraction
    best = None
    best_score = np.inf
    status = "max_iterations"
    message = ""
    iters = 0

    for iters in range(1, settings.max_iterations + 1):
        rp = b - np.einsum("mij,ij->m", a, x)
        rd = c - s - np.einsum("m,mij->ij", y, a)
        gap = float(np.vdot(x, s))
        mu = gap / n
        pres = float(np.max(np.abs(rp)))
        dres = float(np.max(np.abs(rd)))

        score = max(pres, dres / c_scale, abs(gap))
        if score < best_score:
            best_score = score
            best = (x.copy(), y.copy(), s.copy(), pres, dres, gap)

        if pres <= settings.feas_tol and dres <= settings.feas_tol * c_scale and gap <= settings.gap_tol:
            status = "optimal"
            break

        if float(np.max(np.abs(y))) > 1e10 * b_scale or not np.isfinite(mu):
            status = "infeasible"
            message = (
                "dual iterates diverge along an improving ray; the primal "
                "constraints admit no PSD solution"
            )
            break

        s_inv = _solve_normal(s, np.eye(n), 0.0)
        s_inv = (s_inv + s_inv.T) / 2.0

        xa = np.einsum("ij,mjk->mik", x, a)
        w = xa @ s_inv  # W_k = X A_k S^-1
        m0 = np.einsum("mij,kji->mk", a, w)
        m_schur = (m0 + m0.T) / 2.0

        x_rd_sinv = x @ rd @ s_inv

        # predictor: target -X S
        w0_aff = -x - x_rd_sinv
        sym_w0 = (w0_aff + w0_aff.T) / 2.0
        rhs = rp - np.einsum("mij,ij->m", a, sym_w0)
        dy_aff = _solve_normal(m_schur, rhs, settings.regularization)
        ds_aff = rd - np.einsum("m,mij->ij", dy_aff, a)
        dx_aff = w0_aff + np.einsum("m,mij->ij", dy_aff, w)
        dx_aff = (dx_aff + dx_aff.T) / 2.0

        ap = min(1.0, 0.99 * _max_step(x, dx_aff))
        ad = min(1.0, 0.99 * _max_step(s, ds_aff))
        mu_aff = float(np.vdot(x + ap * dx_aff, s + ad * ds_aff)) / n
        sigma = min(1.0, max((max(mu_aff, 0.0) / mu) ** 3, 1e-8)) if mu > 0 else 0.1

        # corrector: target sigma*mu*I - X S - dX_aff dS_aff
        w0 = sigma * mu * s_inv - x - x_rd_sinv - dx_aff @ ds_aff @ s_inv
        sym_w0 = (w0 + w0.T) / 2.0
        rhs = rp - np.einsum("mij,ij->m", a, sym_w0)
        dy = _solve_normal(m_schur, rhs, settings.regularization)
        ds = rd - np.einsum("m,mij->ij", dy, a)
        dx = w0 + np.einsum("m,mij->ij", dy, w)
        dx = (dx + dx.T) / 2.0

        ap = min(1.0, frac * _max_step(x, dx))
        ad = min(1.0, frac * _max_step(s, ds))
        if ap <= 1e-12 and ad <= 1e-12:
            break

        x = x + ap * dx
        y = y + ad * dy
        s = s + ad * ds
        x = (x + x.T) / 2.0
        s = (s + s.T) / 2.0

    if status == "optimal":
        final = (x, y, s, pres, dres, gap)
    elif status == "infeasible":
        return SdpSolution(
            U=x,
            status=status,
            primal_residual=pres,
            duality_gap=gap,
            iterations=iters,
            objective=float(np.vdot(c, x)),
            y=y,
            dual_residual=dres,
            message=message,
        )
    else:
        final = best if best is not None else (x, y, s, pres, dres, gap)
        message = "iteration budget exhausted; returning the best iterate"

    xf, yf, sf, pres_f, dres_f, gap_f = final
    return SdpSolution(
        U=xf,
        status=status,
        primal_residual=pres_f,
        duality_gap=gap_f,
        iterations=iters,
        objective=float(np.vdot(c, xf)),
        y=yf,
        dual_residual=dres_f,
        message=message,
    )


# -- problem dump ----------------------------------------------------------


def dump_problem(problem: SdpProblem) -> str:
    """Text dump: dim, then C row-major, then each (A_k, b_k)."""
    buf = io.StringIO()
    buf.write(f"{problem.dim}\n")
    for row in problem.objective:
        buf.write(" ".join(f"{v:.17g}" for v in row) + "\n")
    for a_k, b_k in problem.constraints:
        for row in a_k:
            buf.write(" ".join(f"{v:.17g}" for v in row) + "\n")
        buf.write(f"{b_k:.17g}\n")
    return buf.getvalue()


def parse_problem(text: str) -> SdpProblem:
    tokens = text.split()
    if not tokens:
        raise ValueError("empty problem dump")
    pos = 0
    dim = int(tokens[pos])
    pos += 1

    def read_matrix() -> np.ndarray:
        nonlocal pos
        count = dim * dim
        vals = [float(v) for v in tokens[pos : pos + count]]
        if len(vals) != count:
            raise ValueError("truncated matrix in problem dump")
        pos += count
        return np.array(vals).reshape(dim, dim)

    objective = read_matrix()
    constraints = []
    while pos < len(tokens):
        a_k = read_matrix()
        if pos >= len(tokens):
            raise ValueError("constraint without right-hand side")
        b_k = float(tokens[pos])
        pos += 1
        constraints.append((a_k, b_k))
    return SdpProblem(dim=dim, objective=objective, constraints=constraints)


def save_problem(problem: SdpProblem, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dump_problem(problem))


def load_problem(path) -> SdpProblem:
    with open(path, "r", encoding="ascii") as fh:
        return parse_problem(fh.read())
