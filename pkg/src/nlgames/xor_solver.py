"""Quantum values of XOR games through the unit-vector program.

For an XOR game with cost matrix ``D`` the quantum value is
``tau + max sum_{s,t} D[s,t] <u_s, v_t> / 2`` over real unit vectors.  We
maximize by block-coordinate ascent (each block has a closed-form optimum)
and certify the result with an explicit dual solution.
"""

from __future__ import annotations

import dataclasses
import itertools
import math

import numpy as np

from .config import rng_stream, tolerances
from .errors import NotXorGame, TooLarge
from .game import XorGame, trivial_value
from .linalg import min_eigenvalue

IMPROVEMENT_TOL = 1e-12
POLISH_TARGET = 1e-13
POLISH_SWEEPS = 20000
POLISH_CHECK_EVERY = 50


@dataclasses.dataclass(frozen=True, eq=False)
class VectorStrategy:
    """Real unit vectors ``u[s]`` (rows) for Alice and ``v[t]`` for Bob."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float, ndmin=2)
        v = np.array(self.v, dtype=float, ndmin=2)
        if u.shape[1] != v.shape[1]:
            raise ValueError(f"vector dimensions differ: {u.shape[1]} and {v.shape[1]}")
        tol = tolerances().state_norm
        for name, arr in (("u", u), ("v", v)):
            err = np.abs(np.linalg.norm(arr, axis=1) - 1.0)
            if err.size and err.max() > tol:
                raise ValueError(f"{name}[{int(err.argmax())}] is not a unit vector (error {err.max():.2e})")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def m(self) -> int:
        return self.u.shape[1]

    def gram(self) -> np.ndarray:
        return self.u @ self.v.T

    def to_dict(self):
        return {"m": self.m, "u": self.u.tolist(), "v": self.v.tolist()}

    @classmethod
    def from_dict(cls, doc):
        from .game import check_schema

        check_schema(doc, "vectors.schema.json")
        return cls(np.array(doc["u"], dtype=float), np.array(doc["v"], dtype=float))


def vector_value(x: XorGame, vs: VectorStrategy) -> float:
    return float(trivial_value(x)) + 0.5 * float(np.sum(x.cost * vs.gram()))


@dataclasses.dataclass(frozen=True)
class DualCertificate:
    bound: float          # certified upper bound on the quantum value
    alice_weights: np.ndarray
    bob_weights: np.ndarray
    min_eigenvalue: float
    shift: float


def dual_upper_bound(x: XorGame, vs: VectorStrategy) -> DualCertificate:
    """Upper bound on the quantum value built from the row/column norms at ``vs``.

    With ``lam[s] = |sum_t D v_t|`` and ``mu[t] = |sum_s D u_s|`` rescaled to
    equal sums, positive semidefiniteness of ``[[diag lam, -D], [-D^T, diag mu]]``
    gives ``sum D <u, v> <= (sum lam + sum mu) / 2`` for every unit-vector
    family.  A negative smallest eigenvalue is absorbed by a diagonal shift,
    which inflates the bound accordingly.  The shift also covers the rounding
    error of the computed eigenvalue, so a float result cannot undercut the
    true maximum by round-off.
    """
    d = np.asarray(x.cost, dtype=float)
    tau = float(trivial_value(x))
    lam = np.linalg.norm(d @ vs.v, axis=1)
    mu = np.linalg.norm(d.T @ vs.u, axis=1)
    sl, sm = lam.sum(), mu.sum()
    if sl > 0 and sm > 0:
        c = math.sqrt(sm / sl)
        lam, mu = lam * c, mu / c
    n = d.shape[0] + d.shape[1]
    block = np.block([[np.diag(lam), -d], [-d.T, np.diag(mu)]])
    e = min_eigenvalue(block)
    rounding = 4 * n * np.finfo(float).eps * float(np.linalg.norm(block))
    shift = max(0.0, rounding - e)
    bound = tau + 0.5 * ((lam.sum() + mu.sum()) / 2 + n * shift / 2)
    return DualCertificate(float(bound), lam, mu, float(e), float(shift))


@dataclasses.dataclass(frozen=True)
class XorSolveResult:
    value: float
    vectors: VectorStrategy
    dual_bound: float
    gap: float
    restarts: int
    iterations: int          # sweeps of the winning restart, polish included
    history: tuple           # objective after each sweep of the winning restart
    best_restart: int

    def to_dict(self):
        return {"value": self.value, "dualBound": self.dual_bound, "gap": self.gap,
                "restarts": self.restarts, "iterations": self.iterations,
                "vectors": self.vectors.to_dict()}


def _normalize_rows(target, previous):
    norms = np.linalg.norm(target, axis=1)
    out = previous.copy()
    ok = norms > 0
    out[ok] = target[ok] / norms[ok, None]
    return out


def _sweep(d, u, v):
    u = _normalize_rows(d @ v, u)
    v = _normalize_rows(d.T @ u, v)
    return u, v, float(np.sum(d * (u @ v.T)))


def _random_unit_rows(rng, n, m):
    g = rng.standard_normal((n, m))
    return g / np.linalg.norm(g, axis=1)[:, None]


def ascend(d, u, v, max_sweeps=100000):
    """Block-coordinate ascent until a sweep improves the objective by less than 1e-12."""
    history = []
    prev = float(np.sum(d * (u @ v.T)))
    for _ in range(max_sweeps):
        u, v, obj = _sweep(d, u, v)
        history.append(obj)
        if obj - prev < IMPROVEMENT_TOL:
            break
        prev = obj
    return u, v, history


def quantum_value_xor(x: XorGame, restarts: int = 32, seed: int = 0, rank: int | None = None,
                      polish: bool = True) -> XorSolveResult:
    """Quantum value of XOR game ``x`` with a certified dual bound.

    Each restart starts from seeded random unit vectors in dimension ``rank``
    (default ``min(nS, nT)``).  The best restart (ties: lowest index) is then
    polished: sweeps continue until the certified gap stops shrinking or
    reaches ~1e-13.
    """
    if not isinstance(x, XorGame):
        if getattr(x, "xor_form", None) is None:
            raise NotXorGame("quantum_value_xor needs an XOR game")
        x = x.xor_form
    d = np.asarray(x.cost, dtype=float)
    tau = float(trivial_value(x))
    m = rank or min(x.n_s, x.n_t)
    if not np.any(d):
        e = np.zeros((1, m))
        e[0, 0] = 1.0
        vs = VectorStrategy(np.repeat(e, x.n_s, 0), np.repeat(e, x.n_t, 0))
        return XorSolveResult(tau, vs, tau, 0.0, restarts, 0, (), 0)

    best = None
    for r in range(max(1, restarts)):
        rng = rng_stream(seed, "xor-restart", r)
        u0, v0 = _random_unit_rows(rng, x.n_s, m), _random_unit_rows(rng, x.n_t, m)
        u, v, hist = ascend(d, u0, v0)
        if best is None or hist[-1] > best[2][-1]:
            best = (u, v, hist, r)
    u, v, hist, r = best
    hist = list(hist)
    cert = dual_upper_bound(x, VectorStrategy(u, v))
    value = tau + 0.5 * hist[-1]
    if polish:
        done = 0
        while done < POLISH_SWEEPS and cert.bound - value > POLISH_TARGET:
            for _ in range(POLISH_CHECK_EVERY):
                u, v, obj = _sweep(d, u, v)
                hist.append(obj)
            done += POLISH_CHECK_EVERY
            new = dual_upper_bound(x, VectorStrategy(u, v))
            stalled = new.bound - (tau + 0.5 * obj) >= cert.bound - value
            cert, value = new, tau + 0.5 * obj
            if stalled:
                break
    vs = VectorStrategy(u, v)
    value = vector_value(x, vs)
    return XorSolveResult(value, vs, cert.bound, cert.bound - value, max(1, restarts),
                          len(hist), tuple(hist), r)


# -- brute-force oracle -----------------------------------------------------

def quantum_value_bruteforce(x: XorGame, rank: int = 2, grid: float = 1e-3) -> float:
    """Grid search over planar (or sign) vectors for tiny games, then local polish.

    Bob's first vector is fixed (rotation invariance); every other Bob angle
    runs over a grid of spacing ``grid`` and Alice answers optimally.  Test
    oracle only.
    """
    from scipy.optimize import minimize

    if x.n_s > 3 or x.n_t > 3 or rank > 2 or rank < 1:
        raise TooLarge("the brute-force oracle handles nS, nT <= 3 and rank <= 2")
    d = np.asarray(x.cost, dtype=float)
    tau = float(trivial_value(x))
    if rank == 1:
        best = max(np.abs(d @ np.array(b)).sum() for b in itertools.product((1, -1), repeat=x.n_t))
        return tau + 0.5 * float(best)

    def objective(angles):
        # angles: (..., nT - 1)
        theta = np.concatenate([np.zeros(angles.shape[:-1] + (1,)), angles], axis=-1)
        vx, vy = np.cos(theta), np.sin(theta)
        ax = np.einsum("st,...t->...s", d, vx)
        ay = np.einsum("st,...t->...s", d, vy)
        return np.sqrt(ax ** 2 + ay ** 2).sum(axis=-1)

    free = x.n_t - 1
    if free == 0:
        return tau + 0.5 * float(objective(np.zeros((0,))))
    axis = np.arange(0.0, 2 * math.pi, grid)
    best_val, best_pt = -np.inf, None
    if free == 1:
        vals = objective(axis[:, None])
        i = int(np.argmax(vals))
        best_val, best_pt = vals[i], np.array([axis[i]])
    else:
        for a in axis:
            pts = np.stack([np.full_like(axis, a), axis], axis=1)
            vals = objective(pts)
            i = int(np.argmax(vals))
            if vals[i] > best_val:
                best_val, best_pt = vals[i], pts[i].copy()
    res = minimize(lambda p: -objective(p), best_pt, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
    return tau + 0.5 * float(max(best_val, -res.fun))
