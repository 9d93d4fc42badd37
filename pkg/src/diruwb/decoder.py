"""Block decoders: exhaustive nearest-neighbor search and SDP relaxation.

The receiver's decision vector satisfies z[n] ~= (r + P d)^T Q^T B[n] Q
(r + P d) plus data-dependent noise, so decoding minimizes the squared
residual over d in {+-1}^{N_b} (nearest-neighbor rule; not true maximum
likelihood because the effective noise depends on the data).

Writing dd^T = D' and lifting u = [1, s, d] to U = u u^T turns the
residual program into a rank-constrained SDP; dropping the rank
constraint gives the relaxation solved here. Candidates are recovered by
sign rounding of the lifted first row, or by randomized hyperplane
rounding (Gram-factor projections onto random directions, best candidate
by objective; the sign candidate is always included).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .model import VolterraModel
from .sdp import SdpProblem, SolverSettings, solve_sdp

# hard cap for the exhaustive search: 2^20 candidates
_MAX_EXHAUSTIVE_BITS = 20

# floor for the instance normalization scale; only an all-zero instance
# (degenerate channel) can reach it
_SCALE_FLOOR = 1e-300


@dataclass(frozen=True)
class DecodingProblem:
    """Observed decision vector plus the kernel model that explains it."""

    z: np.ndarray
    model: VolterraModel

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        if z.shape != (self.model.config.n_symbols,):
            raise ValueError("z must hold one decision variable per symbol")
        object.__setattr__(self, "z", z)

    @property
    def n_symbols(self) -> int:
        return self.model.config.n_symbols


@dataclass(frozen=True)
class DecodeResult:
    d_hat: np.ndarray
    objective: float
    method: str
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LiftedInstance:
    """SDP form of a decoding problem.

    Lifted variable order: index 0 is the constant, indices 1..N_b the
    per-symbol residuals s, indices N_b+1..2N_b the data symbols d.
    Constraint order: the unit corner U[0,0]=1, then the N_b residual
    coupling rows, then the N_b unit-diagonal rows of the d block.
    ``constants`` holds the coupling right-hand sides; the problem data
    were divided by ``scale`` before lifting (objective values in SDP
    units are original units divided by scale**2).
    """

    sdp: SdpProblem
    constants: np.ndarray
    scale: float
    problem: DecodingProblem

    @property
    def n_symbols(self) -> int:
        return self.problem.n_symbols

    def d_block(self) -> slice:
        n_b = self.n_symbols
        return slice(n_b + 1, 2 * n_b + 1)


def _expansion(model: VolterraModel, scale: float = 1.0):
    """Per-symbol scalars/vectors/matrices of zhat(d) = c + w.d + d'Gd.

    zhat[n](d) = (r + P d)^T Q^T B[n] Q (r + P d) expands to
    c[n] + w[n].d + d^T G[n] d with G symmetrized (the quadratic form
    only sees the symmetric part).
    """
    codes = model.codes
    q = codes.q_diag
    r = codes.r
    p = codes.P
    b_scaled = model.B / scale
    bt = q[None, :, None] * b_scaled * q[None, None, :]  # Q^T B[n] Q
    c = np.einsum("i,nij,j->n", r, bt, r)
    w = np.einsum("ip,nij,j->np", p, bt + bt.transpose(0, 2, 1), r)
    g = np.einsum("ip,nij,jq->npq", p, bt, p)
    g = (g + g.transpose(0, 2, 1)) / 2.0
    return c, w, g


def _objective_batch(
    d_batch: np.ndarray, prob: DecodingProblem, expansion=None
) -> np.ndarray:
    c, w, g = expansion if expansion is not None else _expansion(prob.model)
    d_batch = np.asarray(d_batch, dtype=float)
    zhat = c[None, :] + d_batch @ w.T
    zhat += np.einsum("kj,njq,kq->kn", d_batch, g, d_batch)
    return np.sum((prob.z[None, :] - zhat) ** 2, axis=1)


def nn_objective(d: np.ndarray, prob: DecodingProblem) -> float:
    """Sum of squared residuals between z and the model's response to d."""
    d = np.asarray(d, dtype=float)
    if d.shape != (prob.n_symbols,):
        raise ValueError("candidate length must equal n_symbols")
    return float(_objective_batch(d[None, :], prob)[0])


def _candidate_table(n_bits: int) -> np.ndarray:
    """All +-1 vectors, first index lexicographically smallest (+1 < -1)."""
    codes = np.arange(2**n_bits)
    bits = (codes[:, None] >> (n_bits - 1 - np.arange(n_bits))[None, :]) & 1
    return 1 - 2 * bits


def decode_exhaustive(prob: DecodingProblem) -> DecodeResult:
    """Exact nearest-neighbor optimum by full enumeration.

    Ties break toward the lexicographically smallest candidate under the
    order +1 < -1. This is the integer optimum of the residual objective,
    which is the natural baseline here (exact ML would have to model the
    data-dependent noise statistics).
    """
    n_b = prob.n_symbols
    if n_b > _MAX_EXHAUSTIVE_BITS:
        raise ValueError(
            f"exhaustive search supports at most {_MAX_EXHAUSTIVE_BITS} symbols"
        )
    candidates = _candidate_table(n_b)
    objs = _objective_batch(candidates, prob)
    idx = int(np.argmin(objs))  # first minimum = lexicographically smallest
    d_hat = candidates[idx].copy()
    objective = nn_objective(d_hat, prob)
    return DecodeResult(
        d_hat=d_hat,
        objective=objective,
        method="exhaustive",
        diagnostics={"candidates": len(candidates)},
    )


def lift_to_sdp(prob: DecodingProblem, scale: float | None = None) -> LiftedInstance:
    """Build the lifted SDP relaxation of a decoding problem.

    The instance is normalized by ``scale`` (default: the largest
    magnitude among z and the kernels) so solver tolerances act on O(1)
    data regardless of physical signal energy; the decision invariance of
    the residual objective under common scaling makes this safe.
    """
    n_b = prob.n_symbols
    if scale is None:
        scale = max(
            float(np.max(np.abs(prob.z))),
            float(np.max(np.abs(prob.model.B))),
        )
    if scale < _SCALE_FLOOR:
        scale = 1.0
    c_n, w, g = _expansion(prob.model, scale=scale)
    z = prob.z / scale

    dim = 2 * n_b + 1
    objective = np.zeros((dim, dim))
    objective[np.arange(1, n_b + 1), np.arange(1, n_b + 1)] = 1.0

    constraints: list[tuple[np.ndarray, float]] = []
    corner = np.zeros((dim, dim))
    corner[0, 0] = 1.0
    constraints.append((corner, 1.0))

    constants = z - c_n
    d0 = n_b + 1
    for m in range(n_b):
        a_m = np.zeros((dim, dim))
        a_m[0, 1 + m] = 0.5
        a_m[1 + m, 0] = 0.5
        a_m[0, d0:] += w[m] / 2.0
        a_m[d0:, 0] += w[m] / 2.0
        a_m[d0:, d0:] += g[m]
        constraints.append((a_m, float(constants[m])))
    for j in range(n_b):
        diag = np.zeros((dim, dim))
        diag[d0 + j, d0 + j] = 1.0
        constraints.append((diag, 1.0))

    sdp = SdpProblem(dim=dim, objective=objective, constraints=constraints)
    return LiftedInstance(
        sdp=sdp, constants=constants, scale=float(scale), problem=prob
    )


def lift_candidate(d: np.ndarray, instance: LiftedInstance) -> np.ndarray:
    """Rank-one lifted matrix of an integer candidate (for checks)."""
    d = np.asarray(d, dtype=float)
    n_b = instance.n_symbols
    c_n, w, g = _expansion(instance.problem.model, scale=instance.scale)
    z = instance.problem.z / instance.scale
    s = z - c_n - w @ d - np.einsum("j,njq,q->n", d, g, d)
    u = np.concatenate([[1.0], s, d])
    return np.outer(u, u)


def round_sign(u_mat: np.ndarray, instance: LiftedInstance) -> np.ndarray:
    """Sign rounding of the lifted first row's d block; sign(0) -> +1."""
    row = u_mat[0, instance.d_block()]
    return np.where(row >= 0.0, 1, -1).astype(int)


def round_randomized(
    u_mat: np.ndarray,
    instance: LiftedInstance,
    trials: int = 32,
    rng: np.random.Generator | int = 0,
) -> np.ndarray:
    """Randomized hyperplane rounding; returns the best scoring candidate.

    The PSD iterate is Gram-factored, random directions slice the factor
    rows into sign patterns (normalized so the constant coordinate is +1),
    and every distinct candidate plus the plain sign rounding is scored
    with the residual objective. Ties break lexicographically (+1 < -1).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng)
    sym = (u_mat + u_mat.T) / 2.0
    lam, vec = np.linalg.eigh(sym)
    factor = vec * np.sqrt(np.clip(lam, 0.0, None))[None, :]

    proj = rng.normal(size=(trials, sym.shape[0])) @ factor.T
    signs = np.where(proj >= 0.0, 1, -1)
    signs = signs * np.where(signs[:, :1] >= 0, 1, -1)  # anchor constant to +1
    cands = signs[:, instance.d_block()]
    cands = np.vstack([cands, round_sign(u_mat, instance)[None, :]])

    # dedupe and order lexicographically under +1 < -1
    keys = ((1 - cands) // 2).astype(np.int64)
    weights = 2 ** np.arange(instance.n_symbols - 1, -1, -1, dtype=np.int64)
    order = np.argsort(keys @ weights, kind="stable")
    cands = cands[order]
    _, first = np.unique(keys[order] @ weights, return_index=True)
    cands = cands[first]

    objs = _objective_batch(cands, instance.problem)
    return cands[int(np.argmin(objs))].astype(int)


def decode_sdp(
    prob: DecodingProblem,
    settings: SolverSettings | None = None,
    rounding: str = "sign",
    trials: int = 32,
    rng: np.random.Generator | int = 0,
) -> DecodeResult:
    """Lift, solve the relaxation, round, and score the decision.

    rounding="sign" thresholds the lifted first row; "randomized" adds
    hyperplane candidates and keeps the best by objective. A solver
    "infeasible" status raises (decoder instances are feasible by
    construction); "max_iterations" still rounds the best iterate and is
    flagged in the diagnostics.
    """
    if rounding not in ("sign", "randomized"):
        raise ValueError("rounding must be 'sign' or 'randomized'")
    instance = lift_to_sdp(prob)
    solution = solve_sdp(instance.sdp, settings)
    if solution.status == "infeasible":
        raise RuntimeError(
            f"relaxation reported infeasible: {solution.message or 'no detail'}"
        )
    if rounding == "sign":
        d_hat = round_sign(solution.U, instance)
        method = "sdp_sign"
    else:
        d_hat = round_randomized(solution.U, instance, trials=trials, rng=rng)
        method = "sdp_randomized"
    objective = nn_objective(d_hat, prob)
    diagnostics = {
        "status": solution.status,
        "iterations": solution.iterations,
        "primal_residual": solution.primal_residual,
        "duality_gap": solution.duality_gap,
        "sdp_objective": solution.objective,
        "scale": instance.scale,
        "budget_exhausted": solution.status == "max_iterations",
        "degenerate": not bool(np.any(prob.model.B)),
    }
    return DecodeResult(
        d_hat=d_hat, objective=objective, method=method, diagnostics=diagnostics
    )


def decode_timed(decode_fn, *args, **kwargs) -> tuple[DecodeResult, float]:
    """Run a decoder and report its wall time in seconds."""
    start = time.perf_counter()
    result = decode_fn(*args, **kwargs)
    return result, time.perf_counter() - start
