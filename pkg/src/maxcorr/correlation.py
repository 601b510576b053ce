"""Maximal correlation of bipartite states and classical joint distributions.

The quantity computed here is the largest correlation coefficient
|E[f g]| achievable by local observables with zero mean and unit second
moment on each side. For a bipartite density operator it equals the second
operator Schmidt coefficient of the marginal-normalized form

    rho_tilde = (I (x) rho_B^{-1/2}) rho (rho_A^{-1/2} (x) I),

whose leading coefficient is always 1; for a classical joint table it is the
second singular value of the correspondingly normalized table. A variational
alternating-ascent oracle solves the defining optimization directly and is
used as an independent cross-check of the spectral route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .defaults import (
    LAMBDA1_WARN_TOL,
    ORACLE_ITERS,
    RANK_TOL,
    RESTARTS,
)
from .errors import DegenerateMarginalError, RangeError
from .states import BipartiteState, ClassicalJoint

__all__ = [
    "ObservablePair",
    "CorrelationReport",
    "VariationalResult",
    "normalized_operator",
    "mu_schmidt",
    "mu_classical",
    "mu_variational",
    "extract_witness",
]

_DEGENERACY_TOL = 1e-10
_ZERO_DIRECTION = 1e-14


@dataclass(frozen=True)
class ObservablePair:
    """Local observables X on A and Y on B achieving some correlation value.

    Feasibility means tr(rho_A X) = tr(rho_B Y) = 0 and
    tr(rho_A X X^dag) = tr(rho_B Y Y^dag) = 1; objective is |tr(rho X (x) Y^dag)|.
    """

    x: np.ndarray
    y: np.ndarray
    mean_x: complex
    mean_y: complex
    second_moment_x: float
    second_moment_y: float
    objective: float
    hermitian: bool = False
    second_multiplicity: int = 1


@dataclass(frozen=True)
class CorrelationReport:
    """Outcome of a maximal-correlation computation."""

    mu: float
    schmidt: np.ndarray
    lambda1_deviation: float
    marginal_ranks: tuple
    witness: ObservablePair | None = None
    warnings: tuple = ()


@dataclass(frozen=True)
class VariationalResult:
    """Best value found by the alternating-ascent oracle."""

    value: float
    witness: ObservablePair
    converged: bool
    iterations: int


def _rank(w: np.ndarray, rank_tol: float) -> int:
    top = max(float(w[0]), 0.0) if w.size else 0.0
    return int(np.sum(w > rank_tol * top)) if top > 0.0 else 0


def normalized_operator(state: BipartiteState, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Marginal-normalized form of a state; product states map to sqrt(a) (x) sqrt(b)."""
    inv_a = linalg.psd_pinv_sqrt(state.marginal("A"), rank_tol=rank_tol)
    inv_b = linalg.psd_pinv_sqrt(state.marginal("B"), rank_tol=rank_tol)
    left = np.kron(np.eye(state.d_a), inv_b)
    right = np.kron(inv_a, np.eye(state.d_b))
    return left @ state.rho @ right


def mu_schmidt(
    state: BipartiteState,
    rank_tol: float = RANK_TOL,
    witness: bool = False,
) -> CorrelationReport:
    """Maximal correlation via the operator Schmidt spectrum.

    Realigns the marginal-normalized form of the state and reads the second
    singular value. The leading value equals 1 up to numerical error for any
    valid state; its deviation is reported and warned about beyond 1e-6.
    When witness is true the maximizing observable pair is attached.
    """
    wa, va = linalg.hermitian_eig(state.marginal("A"))
    wb, vb = linalg.hermitian_eig(state.marginal("B"))
    ranks = (_rank(wa, rank_tol), _rank(wb, rank_tol))

    schmidt = linalg.singular_values(
        linalg.realign(normalized_operator(state, rank_tol), state.d_a, state.d_b)
    )
    mu = float(schmidt[1]) if schmidt.size > 1 else 0.0
    dev = float(abs(schmidt[0] - 1.0)) if schmidt.size else 1.0

    warnings = []
    if dev > LAMBDA1_WARN_TOL:
        warnings.append(
            f"leading Schmidt coefficient off by {dev:.3e}; "
            "the input may not be a valid normalized state"
        )
    pair = extract_witness(state, rank_tol=rank_tol) if witness else None
    return CorrelationReport(
        mu=mu,
        schmidt=schmidt,
        lambda1_deviation=dev,
        marginal_ranks=ranks,
        witness=pair,
        warnings=tuple(warnings),
    )


def mu_classical(joint: ClassicalJoint, rank_tol: float = RANK_TOL) -> CorrelationReport:
    """Maximal correlation of a joint probability table.

    Restricts to the support (drops zero-probability rows and columns),
    normalizes by the marginals, and reads the second singular value. For
    2x2 supports the value is cross-checked against |det| of the normalized
    table, which it must equal because the leading singular value is 1.
    """
    p = joint.probs
    row = p.sum(axis=1)
    col = p.sum(axis=0)
    p = p[row > 0.0, :][:, col > 0.0]
    if p.size == 0:
        raise DegenerateMarginalError("joint table has empty support")
    row = p.sum(axis=1)
    col = p.sum(axis=0)
    if np.min(row) <= 0.0 or np.min(col) <= 0.0:
        raise DegenerateMarginalError("marginal vanishes after support restriction")

    tilde = p / np.sqrt(np.outer(row, col))
    sv = np.linalg.svd(tilde, compute_uv=False)
    mu = float(sv[1]) if sv.size > 1 else 0.0
    dev = float(abs(sv[0] - 1.0))

    warnings = []
    if dev > LAMBDA1_WARN_TOL:
        warnings.append(f"leading singular value off by {dev:.3e}")
    if tilde.shape == (2, 2):
        det_gap = abs(abs(np.linalg.det(tilde)) - mu)
        if det_gap > 1e-10:
            warnings.append(f"2x2 determinant cross-check off by {det_gap:.3e}")
    return CorrelationReport(
        mu=mu,
        schmidt=sv,
        lambda1_deviation=dev,
        marginal_ranks=(p.shape[0], p.shape[1]),
        witness=None,
        warnings=tuple(warnings),
    )


def _center_normalize(op: np.ndarray, marginal: np.ndarray):
    """Project out the identity component and scale to unit weighted norm."""
    centered = op - np.trace(marginal @ op) * np.eye(op.shape[0])
    norm = float(np.sqrt(max(np.real(np.trace(marginal @ centered @ centered.conj().T)), 0.0)))
    if norm < _ZERO_DIRECTION:
        return None, 0.0
    return centered / norm, norm


def _contract_b(rho4: np.ndarray, y: np.ndarray) -> np.ndarray:
    """tr_B((I (x) Y^dag) rho) as a matrix on A."""
    return np.einsum("ikmj,kj->im", rho4, y.conj())


def _contract_a(rho4: np.ndarray, x: np.ndarray) -> np.ndarray:
    """tr_A((X (x) I) rho) as a matrix on B."""
    return np.einsum("ik,kjim->jm", x, rho4)


def _pinv(m: np.ndarray, rank_tol: float) -> np.ndarray:
    w, v = linalg.hermitian_eig(m)
    cut = rank_tol * max(float(w[0]), 0.0) if w.size else 0.0
    inv = np.where(w > cut, 1.0 / np.where(w > cut, w, 1.0), 0.0)
    return (v * inv) @ v.conj().T


def _pair_stats(state: BipartiteState, rho_a, rho_b, x, y, hermitian: bool, mult: int) -> ObservablePair:
    mean_x = complex(np.trace(rho_a @ x))
    mean_y = complex(np.trace(rho_b @ y))
    m2_x = float(np.real(np.trace(rho_a @ x @ x.conj().T)))
    m2_y = float(np.real(np.trace(rho_b @ y @ y.conj().T)))
    obj = float(abs(np.trace(state.rho @ np.kron(x, y.conj().T))))
    return ObservablePair(
        x=x,
        y=y,
        mean_x=mean_x,
        mean_y=mean_y,
        second_moment_x=m2_x,
        second_moment_y=m2_y,
        objective=obj,
        hermitian=hermitian,
        second_multiplicity=mult,
    )


def mu_variational(
    state: BipartiteState,
    restarts: int = RESTARTS,
    iters: int = ORACLE_ITERS,
    seed: int = 0,
    tol: float = 1e-12,
    rank_tol: float = RANK_TOL,
) -> VariationalResult:
    """Maximal correlation by direct alternating ascent on the defining problem.

    Each half-step is solved exactly: with Y fixed, the optimal X is the
    centered, unit-normalized direction (in the rho_A-weighted inner product
    <X1, X2> = tr(rho_A X2 X1^dag)) of the partial contraction
    tr_B((I (x) Y^dag) rho) pulled back through the rho_A pseudo-inverse, and
    symmetrically for Y. The objective is monotone along the iteration, so
    the best value over restarts is reported together with the achieving
    feasible pair; when no restart meets the tolerance the best feasible
    value found is still returned, flagged as unconverged.
    """
    if restarts < 1 or iters < 1:
        raise RangeError("restarts and iters must be positive")
    rho_a = state.marginal("A")
    rho_b = state.marginal("B")
    pinv_a = _pinv(rho_a, rank_tol)
    pinv_b = _pinv(rho_b, rank_tol)
    rho4 = state.rho.reshape(state.d_a, state.d_b, state.d_a, state.d_b)
    rng = np.random.default_rng(seed)
    eye_a = np.eye(state.d_a)
    eye_b = np.eye(state.d_b)

    best_value = -1.0
    best_pair = None
    best_converged = False
    best_iters = 0

    for _ in range(restarts):
        y = rng.standard_normal((state.d_b, state.d_b)) + 1j * rng.standard_normal(
            (state.d_b, state.d_b)
        )
        y, _n = _center_normalize(y, rho_b)
        if y is None:
            continue
        x = eye_a * 0.0
        value = 0.0
        prev = -1.0
        converged = False
        used = 0
        for it in range(iters):
            used = it + 1
            c = _contract_b(rho4, y)
            x_dir, _ = _center_normalize(pinv_a @ c.conj().T, rho_a)
            if x_dir is None:
                value = 0.0
                converged = True
                break
            x = x_dir
            e = _contract_a(rho4, x)
            y_dir, value = _center_normalize(pinv_b @ e, rho_b)
            if y_dir is None:
                value = 0.0
                converged = True
                break
            y = y_dir
            if abs(value - prev) < tol:
                converged = True
                break
            prev = value
        if value > best_value:
            best_value = value
            best_pair = (x, y)
            best_converged = converged
            best_iters = used

    if best_pair is None or best_value <= 0.0:
        # No usable ascent direction anywhere: the state is (numerically) a
        # product state and every feasible pair scores zero. Return a basic
        # feasible pair built from any centered direction.
        x = _fallback_observable(rho_a, rng)
        y = _fallback_observable(rho_b, rng)
        pair = _pair_stats(state, rho_a, rho_b, x, y, False, 1)
        return VariationalResult(value=pair.objective, witness=pair, converged=True, iterations=0)

    x, y = best_pair
    pair = _pair_stats(state, rho_a, rho_b, x, y, _is_hermitian_pair(x, y), 1)
    return VariationalResult(
        value=pair.objective,
        witness=pair,
        converged=best_converged,
        iterations=best_iters,
    )


def _fallback_observable(marginal: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    d = marginal.shape[0]
    for _ in range(16):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        op, _ = _center_normalize(g, marginal)
        if op is not None:
            return op
    raise RangeError("marginal admits no zero-mean unit-variance observable")


def _is_hermitian_pair(x: np.ndarray, y: np.ndarray) -> bool:
    return (
        float(np.max(np.abs(x - x.conj().T))) < 1e-8
        and float(np.max(np.abs(y - y.conj().T))) < 1e-8
    )


def extract_witness(state: BipartiteState, rank_tol: float = RANK_TOL) -> ObservablePair:
    """Observable pair achieving the maximal correlation.

    The known leading Schmidt pair (sqrt of each marginal) is projected out
    of the realigned normalized form; the top singular pair of the deflated
    operator then maps back through the marginal pseudo-inverse square roots
    to a feasible pair whose objective equals the second Schmidt coefficient
    exactly, independent of spectral degeneracies. When the second
    coefficient is degenerate, any maximizer is returned and its multiplicity
    recorded. A hermitian refinement (alternating ascent restricted to
    hermitian observables, each half-step solved exactly via a Lyapunov
    equation) replaces the pair when it reaches the same objective within
    1e-8.
    """
    rho_a = state.marginal("A")
    rho_b = state.marginal("B")
    sqrt_a = linalg.psd_sqrt(rho_a)
    sqrt_b = linalg.psd_sqrt(rho_b)
    inv_a = linalg.psd_pinv_sqrt(rho_a, rank_tol=rank_tol)
    inv_b = linalg.psd_pinv_sqrt(rho_b, rank_tol=rank_tol)

    tilde = np.kron(np.eye(state.d_a), inv_b) @ state.rho @ np.kron(inv_a, np.eye(state.d_b))
    r = linalg.realign(tilde, state.d_a, state.d_b)

    w = sqrt_a.reshape(-1)
    z = sqrt_b.reshape(-1).conj()
    w = w / np.linalg.norm(w)
    z = z / np.linalg.norm(z)
    deflated = r - np.outer(w, w.conj() @ r)
    deflated = deflated - np.outer(deflated @ z, z.conj())

    u, s, vh = np.linalg.svd(deflated)
    mu = float(s[0]) if s.size else 0.0
    if mu < 1e-12:
        raise RangeError("witness is undefined when the maximal correlation vanishes")
    mult = int(np.sum(s >= mu - _DEGENERACY_TOL))

    m2 = u[:, 0].reshape(state.d_a, state.d_a)
    n2 = vh[0, :].reshape(state.d_b, state.d_b)
    x = inv_a @ m2.conj().T
    y = inv_b @ n2
    x, _ = _center_normalize(x, rho_a)
    y, _ = _center_normalize(y, rho_b)

    # Rotate Y's phase so the raw objective is real positive.
    raw = np.trace(state.rho @ np.kron(x, y.conj().T))
    if abs(raw) > 0.0:
        y = y * np.exp(1j * np.angle(raw))

    pair = _pair_stats(state, rho_a, rho_b, x, y, _is_hermitian_pair(x, y), mult)

    if not pair.hermitian:
        herm = _hermitian_refinement(state, rho_a, rho_b, x, y, rank_tol)
        if herm is not None and herm.objective >= pair.objective - 1e-8:
            herm_pair = ObservablePair(
                x=herm.x,
                y=herm.y,
                mean_x=herm.mean_x,
                mean_y=herm.mean_y,
                second_moment_x=herm.second_moment_x,
                second_moment_y=herm.second_moment_y,
                objective=herm.objective,
                hermitian=True,
                second_multiplicity=mult,
            )
            return herm_pair
    return pair


def _lyapunov_representer(w: np.ndarray, v: np.ndarray, target: np.ndarray, rank_tol: float) -> np.ndarray:
    """Solve rho G + G rho = 2 target on the support, rho given by eigensystem."""
    t = v.conj().T @ target @ v
    denom = w[:, None] + w[None, :]
    cut = rank_tol * max(float(w[0]), 0.0) if w.size else 0.0
    safe = np.where(denom > cut, denom, 1.0)
    g = np.where(denom > cut, 2.0 * t / safe, 0.0)
    return v @ g @ v.conj().T


def _hermitian_refinement(state, rho_a, rho_b, x0, y0, rank_tol, iters: int = 400, tol: float = 1e-13):
    """Alternating ascent over hermitian observables, seeded from a complex pair."""
    wa, va = linalg.hermitian_eig(rho_a)
    wb, vb = linalg.hermitian_eig(rho_b)
    rho4 = state.rho.reshape(state.d_a, state.d_b, state.d_a, state.d_b)

    def best_phase_herm(op, marginal):
        best = None
        best_norm = -1.0
        for alpha in np.linspace(0.0, np.pi, 24, endpoint=False):
            h = op * np.exp(1j * alpha)
            h = (h + h.conj().T) / 2.0
            cand, norm = _center_normalize(h, marginal)
            if cand is not None and norm > best_norm:
                best, best_norm = cand, norm
        return best

    y = best_phase_herm(y0, rho_b)
    if y is None:
        return None
    x = None
    value = 0.0
    prev = -1.0
    for _ in range(iters):
        c = _contract_b(rho4, y)
        c = (c + c.conj().T) / 2.0
        g = _lyapunov_representer(wa, va, c, rank_tol)
        x, _ = _center_normalize((g + g.conj().T) / 2.0, rho_a)
        if x is None:
            return None
        e = _contract_a(rho4, x)
        e = (e + e.conj().T) / 2.0
        g = _lyapunov_representer(wb, vb, e, rank_tol)
        y, value = _center_normalize((g + g.conj().T) / 2.0, rho_b)
        if y is None:
            return None
        if abs(value - prev) < tol:
            break
        prev = value
    return _pair_stats(state, rho_a, rho_b, x, y, True, 1)
