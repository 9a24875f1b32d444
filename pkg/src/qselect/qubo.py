"""QUBO model: representation, evaluation, exhaustive oracle, features and bounds."""
from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels

BRUTE_FORCE_MAX_VARS = 24


class QuboError(ValueError):
    """Base class for malformed or unsupported QUBO input."""


class DimensionError(QuboError):
    pass


class CapacityError(QuboError):
    pass


class DegenerateProblemError(QuboError):
    pass


@dataclass(frozen=True)
class Constraint:
    """Declarative feasibility check on an assignment.

    ``cardinality``: sum of ``variables`` equals ``k``.
    ``cover``: every pair has at least one variable set.
    ``exclusion``: no pair has both variables set.
    """

    kind: str
    variables: tuple[int, ...] = ()
    pairs: tuple[tuple[int, int], ...] = ()
    k: int = 0

    KINDS = ("cardinality", "cover", "exclusion")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise QuboError(f"unknown constraint kind {self.kind!r}")

    def satisfied(self, x: Sequence[int]) -> bool:
        if self.kind == "cardinality":
            return sum(int(x[i]) for i in self.variables) == self.k
        if self.kind == "cover":
            return all(x[i] or x[j] for i, j in self.pairs)
        return not any(x[i] and x[j] for i, j in self.pairs)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "cardinality":
            out["variables"] = list(self.variables)
            out["k"] = self.k
        else:
            out["pairs"] = [list(p) for p in self.pairs]
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "Constraint":
        return cls(
            kind=obj["kind"],
            variables=tuple(int(v) for v in obj.get("variables", ())),
            pairs=tuple((int(i), int(j)) for i, j in obj.get("pairs", ())),
            k=int(obj.get("k", 0)),
        )


@dataclass(frozen=True)
class QuboProblem:
    """f(x) = offset + sum_i linear[i] x_i + sum_{i<j} quadratic[i, j] x_i x_j.

    Instances are canonical: indices in range, ``i < j`` for every quadratic
    key, no stored zero coefficients. Use :meth:`from_terms` to build one from
    arbitrary (possibly duplicated or unordered) terms.
    """

    num_vars: int
    offset: float = 0.0
    linear: Mapping[int, float] = field(default_factory=dict)
    quadratic: Mapping[tuple[int, int], float] = field(default_factory=dict)
    reference_optimum: float | None = None
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        n = self.num_vars
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise QuboError(f"num_vars must be a positive integer, got {n!r}")
        for i, v in self.linear.items():
            if not 0 <= i < n:
                raise QuboError(f"linear index {i} out of range [0, {n})")
            if v == 0:
                raise QuboError(f"zero linear coefficient stored at {i}")
        for (i, j), v in self.quadratic.items():
            if not (0 <= i < j < n):
                raise QuboError(f"quadratic key ({i}, {j}) must satisfy 0 <= i < j < {n}")
            if v == 0:
                raise QuboError(f"zero quadratic coefficient stored at ({i}, {j})")
        for con in self.constraints:
            idx = list(con.variables) + [v for p in con.pairs for v in p]
            if any(not 0 <= v < n for v in idx):
                raise QuboError("constraint refers to a variable out of range")

    @classmethod
    def from_terms(
        cls,
        num_vars: int,
        linear: Mapping[int, float] | Iterable[tuple[int, float]] = (),
        quadratic: Mapping[tuple[int, int], float] | Iterable[tuple[int, int, float]] = (),
        offset: float = 0.0,
        reference_optimum: float | None = None,
        constraints: Iterable[Constraint] = (),
    ) -> "QuboProblem":
        """Canonicalize raw terms: merge duplicates, order pairs, fold x_i*x_i into x_i."""
        lin: dict[int, float] = {}
        quad: dict[tuple[int, int], float] = {}
        items = linear.items() if isinstance(linear, Mapping) else linear
        for i, v in items:
            lin[int(i)] = lin.get(int(i), 0.0) + float(v)
        qitems = (
            ((i, j, v) for (i, j), v in quadratic.items())
            if isinstance(quadratic, Mapping)
            else quadratic
        )
        for i, j, v in qitems:
            i, j = int(i), int(j)
            if i == j:
                lin[i] = lin.get(i, 0.0) + float(v)
                continue
            key = (i, j) if i < j else (j, i)
            quad[key] = quad.get(key, 0.0) + float(v)
        lin = {i: v for i, v in sorted(lin.items()) if v != 0}
        quad = {k: v for k, v in sorted(quad.items()) if v != 0}
        return cls(
            num_vars=int(num_vars),
            offset=float(offset),
            linear=lin,
            quadratic=quad,
            reference_optimum=reference_optimum,
            constraints=tuple(constraints),
        )

    def with_offset(self, offset: float) -> "QuboProblem":
        return QuboProblem(
            self.num_vars, float(offset), dict(self.linear), dict(self.quadratic),
            None, self.constraints,
        )

    def with_reference(self, value: float | None) -> "QuboProblem":
        return QuboProblem(
            self.num_vars, self.offset, dict(self.linear), dict(self.quadratic),
            value, self.constraints,
        )

    # dense views, shared by solvers and simulators
    @cached_property
    def linear_vector(self) -> np.ndarray:
        a = np.zeros(self.num_vars)
        for i, v in self.linear.items():
            a[i] = v
        a.flags.writeable = False
        return a

    @cached_property
    def coupling_matrix(self) -> np.ndarray:
        """Symmetric matrix with b_ij in both (i, j) and (j, i), zero diagonal."""
        q = np.zeros((self.num_vars, self.num_vars))
        for (i, j), v in self.quadratic.items():
            q[i, j] = v
            q[j, i] = v
        q.flags.writeable = False
        return q

    @cached_property
    def max_abs_coefficient(self) -> float:
        vals = [abs(v) for v in self.linear.values()] + [abs(v) for v in self.quadratic.values()]
        return max(vals, default=0.0)

    @cached_property
    def min_abs_coefficient(self) -> float:
        vals = [abs(v) for v in self.linear.values()] + [abs(v) for v in self.quadratic.values()]
        return min(vals, default=0.0)

    def is_feasible(self, x: Sequence[int]) -> bool:
        return all(c.satisfied(x) for c in self.constraints)

    def to_json(self) -> dict:
        out = {
            "num_vars": self.num_vars,
            "offset": self.offset,
            "linear": [[i, v] for i, v in self.linear.items()],
            "quadratic": [[i, j, v] for (i, j), v in self.quadratic.items()],
        }
        if self.reference_optimum is not None:
            out["reference_optimum"] = self.reference_optimum
        if self.constraints:
            out["constraints"] = [c.to_json() for c in self.constraints]
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "QuboProblem":
        try:
            n = obj["num_vars"]
            if isinstance(n, bool) or not isinstance(n, int):
                raise QuboError("num_vars must be an integer")
            lin = {}
            for entry in obj.get("linear", []):
                i, v = entry
                if int(i) in lin:
                    raise QuboError(f"duplicate linear index {i}")
                lin[int(i)] = float(v)
            quad = {}
            for entry in obj.get("quadratic", []):
                i, j, v = entry
                if not int(i) < int(j):
                    raise QuboError(f"quadratic entry ({i}, {j}) violates i < j")
                if (int(i), int(j)) in quad:
                    raise QuboError(f"duplicate quadratic key ({i}, {j})")
                quad[(int(i), int(j))] = float(v)
            ref = obj.get("reference_optimum")
            cons = tuple(Constraint.from_json(c) for c in obj.get("constraints", []))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, QuboError):
                raise
            raise QuboError(f"malformed QUBO object: {exc}") from exc
        return cls(
            num_vars=n,
            offset=float(obj.get("offset", 0.0)),
            linear={i: v for i, v in sorted(lin.items()) if v != 0},
            quadratic={k: v for k, v in sorted(quad.items()) if v != 0},
            reference_optimum=None if ref is None else float(ref),
            constraints=cons,
        )


def save_problem(problem: QuboProblem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(problem.to_json(), indent=1) + "\n")


def load_problem(path: str | Path) -> QuboProblem:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise QuboError(f"{path}: invalid JSON ({exc})") from exc
    return QuboProblem.from_json(obj)


def evaluate(problem: QuboProblem, x: Sequence[int]) -> float:
    if len(x) != problem.num_vars:
        raise DimensionError(f"assignment has length {len(x)}, problem has {problem.num_vars} variables")
    total = problem.offset
    for i, v in problem.linear.items():
        if x[i]:
            total += v
    for (i, j), v in problem.quadratic.items():
        if x[i] and x[j]:
            total += v
    return total


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    """Basis index to assignment; variable i is bit i (little-endian)."""
    return tuple((index >> i) & 1 for i in range(n))


def bits_to_index(x: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(x))


def energy_table(problem: QuboProblem) -> np.ndarray:
    """f evaluated on every basis index 0 .. 2^N - 1 (vectorized, float64)."""
    n = problem.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise CapacityError(f"{n} variables exceed enumeration budget {BRUTE_FORCE_MAX_VARS}")
    idx = np.arange(1 << n, dtype=np.int64)
    bits = [((idx >> i) & 1).astype(bool) for i in range(n)]
    out = np.full(1 << n, problem.offset, dtype=float)
    for i, v in problem.linear.items():
        out[bits[i]] += v
    for (i, j), v in problem.quadratic.items():
        out[bits[i] & bits[j]] += v
    return out


@dataclass(frozen=True)
class BruteForceResult:
    min_value: float
    minimizers: tuple[tuple[int, ...], ...]
    max_value: float


def brute_force(problem: QuboProblem) -> BruteForceResult:
    """Exact extrema over all 2^N assignments.

    Candidates come from the enumeration kernel and are then re-scored with
    :func:`evaluate`, so reported values are bit-identical to ``evaluate``.
    """
    n = problem.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise CapacityError(f"{n} variables exceed enumeration budget {BRUTE_FORCE_MAX_VARS}")
    scale = max(1.0, problem.max_abs_coefficient * (n + len(problem.quadratic)), abs(problem.offset))
    slack = 1e-9 * scale
    lo_idx, hi_idx = kernels.enumerate_candidates(
        np.ascontiguousarray(problem.coupling_matrix),
        np.ascontiguousarray(problem.linear_vector),
        slack,
    )
    lo = [(index_to_bits(int(k), n)) for k in lo_idx]
    hi = [(index_to_bits(int(k), n)) for k in hi_idx]
    lo_vals = [evaluate(problem, x) for x in lo]
    min_value = min(lo_vals)
    tol = 1e-9 * max(1.0, abs(min_value))
    minimizers = tuple(sorted(x for x, v in zip(lo, lo_vals) if v - min_value <= tol))
    max_value = max(evaluate(problem, x) for x in hi)
    return BruteForceResult(min_value, minimizers, max_value)


FEATURE_NAMES = (
    "n_vars", "n_lin", "n_quad",
    "mean_lin", "var_lin", "mean_quad", "var_quad", "mean_all", "var_all",
)


@dataclass(frozen=True)
class FeatureVector:
    n_vars: int
    n_lin: int
    n_quad: int
    mean_lin: float
    var_lin: float
    mean_quad: float
    var_quad: float
    mean_all: float
    var_all: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in FEATURE_NAMES], dtype=float)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in FEATURE_NAMES)


def _mean_var(values: np.ndarray) -> tuple[float, float]:
    # population variance; empty sets map to (0, 0). statistics computes both exactly
    # and rounds once, so results do not depend on summation order.
    if values.size == 0:
        return 0.0, 0.0
    data = values.tolist()
    return float(statistics.mean(data)), float(statistics.pvariance(data))


def extract_features(problem: QuboProblem) -> FeatureVector:
    lin = np.fromiter(problem.linear.values(), dtype=float, count=len(problem.linear))
    quad = np.fromiter(problem.quadratic.values(), dtype=float, count=len(problem.quadratic))
    mean_lin, var_lin = _mean_var(lin)
    mean_quad, var_quad = _mean_var(quad)
    mean_all, var_all = _mean_var(np.concatenate([lin, quad]))
    return FeatureVector(
        n_vars=problem.num_vars,
        n_lin=int(lin.size),
        n_quad=int(quad.size),
        mean_lin=mean_lin,
        var_lin=var_lin,
        mean_quad=mean_quad,
        var_quad=var_quad,
        mean_all=mean_all,
        var_all=var_all,
    )


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


def posiform_bounds(problem: QuboProblem) -> BoundPair:
    """Sign-sum bounds: every negative term on for the lower, every positive one for the upper."""
    lower = upper = problem.offset
    for v in list(problem.linear.values()) + list(problem.quadratic.values()):
        if v < 0:
            lower += v
        else:
            upper += v
    return BoundPair(lower, upper)


def round_and_normalize(problem: QuboProblem, precision: float = 1.0) -> QuboProblem:
    """Round coefficients to multiples of ``precision`` and rescale so min |coefficient| = 1.

    The offset goes through the same affine map, so the argmin set of the
    rounded problem is preserved by the rescaling.
    """
    if not precision > 0:
        raise ValueError("precision must be positive")

    def rnd(v: float) -> float:
        return round(v / precision) * precision

    lin = {i: rnd(v) for i, v in problem.linear.items()}
    quad = {k: rnd(v) for k, v in problem.quadratic.items()}
    nonzero = [abs(v) for v in list(lin.values()) + list(quad.values()) if v != 0]
    if not nonzero:
        raise DegenerateProblemError("all coefficients round to zero at this precision")
    scale = min(nonzero)
    return QuboProblem.from_terms(
        problem.num_vars,
        {i: v / scale for i, v in lin.items()},
        {k: v / scale for k, v in quad.items()},
        offset=rnd(problem.offset) / scale,
        constraints=problem.constraints,
    )


def integer_scaled(problem: QuboProblem, precision: float = 1.0) -> tuple[QuboProblem, float]:
    """Integer-valued copy of ``problem`` for fixed-point value registers.

    Coefficients are rounded to multiples of ``precision`` and divided by the
    gcd of their integer multiples, which equals the smallest magnitude
    whenever that one divides all others. Returns the problem and the scale
    factor (original units per integer unit).
    """
    if not precision > 0:
        raise ValueError("precision must be positive")
    lin = {i: int(round(v / precision)) for i, v in problem.linear.items()}
    quad = {k: int(round(v / precision)) for k, v in problem.quadratic.items()}
    off = int(round(problem.offset / precision))
    ints = [abs(v) for v in list(lin.values()) + list(quad.values()) if v]
    if not ints:
        raise DegenerateProblemError("all coefficients round to zero at this precision")
    g = math.gcd(*ints)
    return (
        QuboProblem.from_terms(
            problem.num_vars,
            {i: v // g for i, v in lin.items()},
            {k: v // g for k, v in quad.items()},
            offset=float(off // g) if off % g == 0 else off / g,
            constraints=problem.constraints,
        ),
        precision * g,
    )


def twos_complement_bits(lower: float, upper: float) -> int:
    """Smallest m with -2^(m-1) <= lower and upper <= 2^(m-1) - 1."""
    m = 1
    while -(2 ** (m - 1)) > lower or upper > 2 ** (m - 1) - 1:
        m += 1
    return m


def num_value_qubits(problem: QuboProblem) -> int:
    b = posiform_bounds(problem)
    return twos_complement_bits(b.lower, b.upper)
