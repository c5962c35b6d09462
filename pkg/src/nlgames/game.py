"""Nonlocal game representation, validation and the game file format.

A game is given by question counts ``n_s, n_t``, answer counts ``n_a, n_b``,
a sparse question distribution ``pi`` and a total win predicate
``V(s, t, a, b)``.  Probabilities given as rationals (``Fraction``, ``int`` or
``"p/q"`` strings) are kept exact so that classical values come out as exact
fractions; a single binary64 entry switches the whole game to floats.
"""

from __future__ import annotations

import dataclasses
import json
import math
import types
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Callable, Mapping, Sequence

import jsonschema
import numpy as np

from .config import tolerances
from .errors import (
    IndexOutOfRange,
    NegativeProbability,
    NonNormalizedDistribution,
    NotXorGame,
    ParseError,
    SchemaViolation,
)


def to_probability(p):
    """Coerce ``p`` to ``Fraction`` (rational input) or ``float``."""
    if isinstance(p, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    if isinstance(p, str):
        try:
            return Fraction(p.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot read probability {p!r}") from exc
    if isinstance(p, (float, np.floating)):
        return float(p)
    if isinstance(p, np.integer):
        return Fraction(int(p))
    raise TypeError(f"unsupported probability type {type(p).__name__}")


def _harmonize(values):
    """All-Fraction if every value is exact, else all-float."""
    if all(isinstance(v, Fraction) for v in values):
        return list(values), True
    return [float(v) for v in values], False


@dataclasses.dataclass(frozen=True)
class GameSpec:
    """Unvalidated game description.

    ``pi`` is a sequence of ``(s, t, probability)`` entries; ``predicate``
    is either a callable ``(s, t, a, b) -> bool`` or an array-like of shape
    ``(n_s, n_t, n_a, n_b)``.
    """

    n_s: int
    n_t: int
    n_a: int
    n_b: int
    pi: Sequence
    predicate: Callable | np.ndarray
    labels: Mapping | None = None


@dataclasses.dataclass(frozen=True, eq=False)
class XorGame:
    """Compact form of a game whose predicate depends on ``a XOR b`` only.

    ``v0[s, t]`` / ``v1[s, t]`` are the predicate values for parity 0 / 1.
    ``pi_exact`` holds the rational distribution when one is available.
    """

    n_s: int
    n_t: int
    pi: np.ndarray
    v0: np.ndarray
    v1: np.ndarray
    pi_exact: tuple | None = None

    @classmethod
    def from_arrays(cls, pi, v0, v1) -> "XorGame":
        exact = None
        if isinstance(pi, (list, tuple)) or (isinstance(pi, np.ndarray) and pi.dtype == object):
            rows = [[to_probability(p) for p in row] for row in pi]
            flat, is_exact = _harmonize([p for row in rows for p in row])
            width = len(rows[0])
            if is_exact:
                exact = tuple(tuple(flat[i * width:(i + 1) * width]) for i in range(len(rows)))
            pi_f = np.array([float(p) for p in flat]).reshape(len(rows), width)
        else:
            pi_f = np.asarray(pi, dtype=float)
        v0 = np.asarray(v0).astype(np.int8)
        v1 = np.asarray(v1).astype(np.int8)
        if not (pi_f.shape == v0.shape == v1.shape) or pi_f.ndim != 2:
            raise ValueError("pi, v0 and v1 must be matrices of one shape")
        if np.any(pi_f < 0):
            raise NegativeProbability("negative entry in pi")
        total = sum(sum(r) for r in exact) if exact else float(pi_f.sum())
        if abs(total - 1) > tolerances().probability:
            raise NonNormalizedDistribution(f"pi sums to {float(total)!r}, not 1")
        if not np.isin(v0, (0, 1)).all() or not np.isin(v1, (0, 1)).all():
            raise ValueError("predicate values must be 0 or 1")
        for arr in (pi_f, v0, v1):
            arr.setflags(write=False)
        return cls(pi_f.shape[0], pi_f.shape[1], pi_f, v0, v1, exact)

    @cached_property
    def cost(self) -> np.ndarray:
        """Signed cost matrix ``D = pi * (V0 - V1)``."""
        d = self.pi * (self.v0.astype(float) - self.v1)
        d.setflags(write=False)
        return d

    @property
    def exact(self) -> bool:
        return self.pi_exact is not None

    def scaled_costs(self):
        """Integer matrices ``(pi * L, D * L)`` and the common denominator ``L``.

        Only meaningful for exact games; used by the enumerating solvers.
        """
        if not self.exact:
            raise ValueError("game has floating-point probabilities")
        denom = 1
        for row in self.pi_exact:
            for p in row:
                denom = math.lcm(denom, p.denominator)
        w = np.array([[int(p * denom) for p in row] for row in self.pi_exact], dtype=object)
        d = w * (self.v0.astype(object) - self.v1.astype(object))
        return w, d, denom

    def pi_entry(self, s, t):
        return self.pi_exact[s][t] if self.exact else float(self.pi[s, t])

    def __eq__(self, other):
        if not isinstance(other, XorGame):
            return NotImplemented
        return (self.pi_exact == other.pi_exact and np.array_equal(self.pi, other.pi)
                and np.array_equal(self.v0, other.v0) and np.array_equal(self.v1, other.v1))

    __hash__ = None


@dataclasses.dataclass(frozen=True)
class DeterministicStrategy:
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))


@dataclasses.dataclass(frozen=True, eq=False)
class ValidatedGame:
    n_s: int
    n_t: int
    n_a: int
    n_b: int
    pi: Mapping              # (s, t) -> Fraction | float, positive entries only
    predicate: np.ndarray    # bool, shape (n_s, n_t, n_a, n_b), read-only
    exact: bool
    labels: Mapping | None = None

    @cached_property
    def support(self) -> tuple:
        return tuple(sorted(self.pi))

    @property
    def is_binary(self) -> bool:
        return self.n_a == 2 and self.n_b == 2

    @cached_property
    def xor_form(self) -> XorGame | None:
        if not self.is_binary:
            return None
        v = self.predicate
        if not np.array_equal(v, v[:, :, ::-1, ::-1]):
            return None
        pi = [[self.pi.get((s, t), Fraction(0) if self.exact else 0.0)
               for t in range(self.n_t)] for s in range(self.n_s)]
        return XorGame.from_arrays(pi, v[:, :, 0, 0], v[:, :, 0, 1])

    @cached_property
    def pi_matrix(self) -> np.ndarray:
        m = np.zeros((self.n_s, self.n_t))
        for (s, t), p in self.pi.items():
            m[s, t] = float(p)
        m.setflags(write=False)
        return m

    def scaled_weights(self):
        """Integer weight matrix ``pi * L`` and denominator ``L`` (exact games)."""
        if not self.exact:
            raise ValueError("game has floating-point probabilities")
        denom = 1
        for p in self.pi.values():
            denom = math.lcm(denom, p.denominator)
        w = np.zeros((self.n_s, self.n_t), dtype=object)
        for (s, t), p in self.pi.items():
            w[s, t] = int(p * denom)
        return w, denom

    def __eq__(self, other):
        if not isinstance(other, ValidatedGame):
            return NotImplemented
        return ((self.n_s, self.n_t, self.n_a, self.n_b, self.exact)
                == (other.n_s, other.n_t, other.n_a, other.n_b, other.exact)
                and dict(self.pi) == dict(other.pi)
                and np.array_equal(self.predicate, other.predicate)
                and _labels_dict(self.labels) == _labels_dict(other.labels))

    __hash__ = None


def _labels_dict(labels):
    if not labels:
        return {}
    return {k: list(v) for k, v in labels.items()}


def _predicate_array(spec: GameSpec) -> np.ndarray:
    shape = (spec.n_s, spec.n_t, spec.n_a, spec.n_b)
    if callable(spec.predicate):
        arr = np.zeros(shape, dtype=bool)
        for idx in np.ndindex(*shape):
            arr[idx] = bool(spec.predicate(*idx))
        return arr
    arr = np.asarray(spec.predicate)
    if arr.shape != shape:
        raise IndexOutOfRange(f"predicate table has shape {arr.shape}, expected {shape}")
    return arr.astype(bool)


def validate(spec: GameSpec) -> ValidatedGame:
    """Check ``spec`` and return the immutable validated game.

    Duplicate ``(s, t)`` entries in ``pi`` are summed; zero entries are
    dropped from the stored distribution.
    """
    for name in ("n_s", "n_t", "n_a", "n_b"):
        value = getattr(spec, name)
        if not isinstance(value, (int, np.integer)) or value < 1:
            raise IndexOutOfRange(f"{name} must be a positive integer, got {value!r}")
    raw = []
    for entry in spec.pi:
        s, t, p = entry
        if not (0 <= s < spec.n_s and 0 <= t < spec.n_t):
            raise IndexOutOfRange(f"pi entry ({s}, {t}) outside {spec.n_s}x{spec.n_t}")
        raw.append((int(s), int(t), to_probability(p)))
    probs, exact = _harmonize([p for _, _, p in raw])
    merged: dict = {}
    for (s, t, _), p in zip(raw, probs):
        if p < 0:
            raise NegativeProbability(f"pi({s}, {t}) = {p} is negative")
        merged[(s, t)] = merged.get((s, t), 0) + p
    total = sum(merged.values()) if merged else 0
    if abs(total - 1) > tolerances().probability:
        raise NonNormalizedDistribution(f"pi sums to {float(total)!r}, not 1")
    pi = {k: v for k, v in sorted(merged.items()) if v > 0}
    pred = _predicate_array(spec)
    pred.setflags(write=False)
    labels = None
    if spec.labels:
        labels = types.MappingProxyType({k: tuple(v) for k, v in spec.labels.items()})
    return ValidatedGame(spec.n_s, spec.n_t, spec.n_a, spec.n_b,
                         types.MappingProxyType(pi), pred, exact, labels)


def _require_xor(g) -> XorGame:
    if isinstance(g, XorGame):
        return g
    x = g.xor_form
    if x is None:
        raise NotXorGame("the predicate does not depend on a XOR b alone")
    return x


def trivial_value(g):
    """Winning probability of answering independent uniform random bits."""
    x = _require_xor(g)
    if x.exact:
        return sum((p * (int(x.v0[s, t]) + int(x.v1[s, t]))
                    for s, row in enumerate(x.pi_exact) for t, p in enumerate(row)),
                   Fraction(0)) / 2
    return float(np.sum(x.pi * (x.v0 + x.v1)) / 2)


def evaluate_deterministic(g: ValidatedGame, d: DeterministicStrategy):
    if len(d.a) != g.n_s or len(d.b) != g.n_t:
        raise IndexOutOfRange("strategy length does not match the question sets")
    if any(not 0 <= x < g.n_a for x in d.a) or any(not 0 <= y < g.n_b for y in d.b):
        raise IndexOutOfRange("strategy answer outside the answer set")
    total = Fraction(0) if g.exact else 0.0
    for (s, t), p in g.pi.items():
        if g.predicate[s, t, d.a[s], d.b[t]]:
            total += p
    return total


# -- file format ------------------------------------------------------------

def _schema(name):
    return json.loads(resources.files("nlgames").joinpath("schemas").joinpath(name).read_text("utf-8"))


def check_schema(document, schema_name):
    try:
        jsonschema.validate(document, _schema(schema_name))
    except jsonschema.ValidationError as exc:
        field = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaViolation(exc.message, field=field) from None


def _probability_to_json(p):
    if isinstance(p, Fraction):
        return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"
    return float(p)


def game_to_dict(g: ValidatedGame) -> dict:
    doc = {
        "nS": g.n_s, "nT": g.n_t, "nA": g.n_a, "nB": g.n_b,
        "pi": [[s, t, _probability_to_json(p)] for (s, t), p in g.pi.items()],
    }
    x = g.xor_form
    if x is not None:
        doc["predicate"] = {
            "type": "xor",
            "V0": [[int(s), int(t)] for s, t in np.argwhere(x.v0)],
            "V1": [[int(s), int(t)] for s, t in np.argwhere(x.v1)],
        }
    else:
        doc["predicate"] = {"type": "table",
                            "wins": [[int(i) for i in row] for row in np.argwhere(g.predicate)]}
    if g.labels:
        doc["labels"] = _labels_dict(g.labels)
    return doc


def game_from_dict(doc) -> GameSpec:
    check_schema(doc, "game.schema.json")
    shape = (doc["nS"], doc["nT"], doc["nA"], doc["nB"])
    pred = np.zeros(shape, dtype=bool)
    spec = doc["predicate"]
    try:
        if spec["type"] == "table":
            for i, row in enumerate(spec["wins"]):
                if not all(0 <= v < n for v, n in zip(row, shape)):
                    raise IndexOutOfRange(f"predicate.wins[{i}] = {row} outside {shape}")
                pred[tuple(row)] = True
        else:
            if shape[2:] != (2, 2):
                raise SchemaViolation("xor predicates need nA = nB = 2", field="predicate")
            for c, key in ((0, "V0"), (1, "V1")):
                for i, (s, t) in enumerate(spec[key]):
                    if not (0 <= s < shape[0] and 0 <= t < shape[1]):
                        raise IndexOutOfRange(f"predicate.{key}[{i}] = {[s, t]} outside {shape[:2]}")
                    for a in (0, 1):
                        pred[s, t, a, a ^ c] = True
    except KeyError as exc:
        raise SchemaViolation(f"missing {exc.args[0]!r}", field="predicate") from None
    pi = []
    for i, (s, t, p) in enumerate(doc["pi"]):
        try:
            pi.append((s, t, to_probability(p)))
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), field=f"pi/{i}") from None
    return GameSpec(*shape, pi=tuple(pi), predicate=pred, labels=doc.get("labels"))


def loads_game(text: str) -> GameSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return game_from_dict(doc)


def load_game(path) -> GameSpec:
    """Read a game file; the contents are validated before returning."""
    with open(path, encoding="utf-8") as fh:
        spec = loads_game(fh.read())
    validate(spec)
    return spec


def read_game(path) -> ValidatedGame:
    return validate(load_game(path))


def dumps_game(g) -> str:
    if isinstance(g, GameSpec):
        g = validate(g)
    return json.dumps(game_to_dict(g), indent=1, sort_keys=True)


def save_game(g, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_game(g))
        fh.write("\n")
