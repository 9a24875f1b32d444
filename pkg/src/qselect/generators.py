"""Seeded generators for the benchmark problem families."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .qubo import BRUTE_FORCE_MAX_VARS, Constraint, QuboProblem, brute_force

FAMILIES = (
    "max_cut",
    "min_vertex_cover",
    "set_packing",
    "k_clique",
    "number_partitioning",
    "random_qubo",
    "portfolio",
)

ALIASES = {
    "maxcut": "max_cut",
    "mvc": "min_vertex_cover",
    "vertex_cover": "min_vertex_cover",
    "packing": "set_packing",
    "kclique": "k_clique",
    "clique": "k_clique",
    "partition": "number_partitioning",
    "npp": "number_partitioning",
    "random": "random_qubo",
    "qubo": "random_qubo",
}

DEFAULT_RANGES = {
    "max_cut": (1.0, 1.0),
    "min_vertex_cover": (1.0, 1.0),
    "set_packing": (1.0, 5.0),
    "k_clique": (1.0, 1.0),
    "number_partitioning": (1.0, 10.0),
    "random_qubo": (-5.0, 5.0),
    "portfolio": (0.5, 2.0),
}


class SpecError(ValueError):
    pass


def canonical_family(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = ALIASES.get(key, key)
    if key not in FAMILIES:
        raise SpecError(f"unknown problem family {name!r}; choose from {', '.join(FAMILIES)}")
    return key


@dataclass(frozen=True)
class ProblemSpec:
    """Everything needed to regenerate one problem bit-for-bit.

    ``k`` is the clique size for ``k_clique`` and the asset budget for
    ``portfolio``; ``None`` picks the family default. ``penalty=None`` uses
    1 + sum of |objective coefficients|.
    """

    family: str
    size: int
    density: float = 0.5
    coeff_range: tuple[float, float] | None = None
    penalty: float | None = None
    seed: int = 0
    k: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", canonical_family(self.family))
        if self.coeff_range is not None:
            object.__setattr__(self, "coeff_range", tuple(float(v) for v in self.coeff_range))
        if not isinstance(self.size, (int, np.integer)) or self.size < 1:
            raise SpecError(f"size must be a positive integer, got {self.size!r}")
        if not 0 < self.density <= 1:
            raise SpecError(f"density must lie in (0, 1], got {self.density}")
        if self.penalty is not None and not self.penalty > 0:
            raise SpecError(f"penalty must be positive, got {self.penalty}")
        lo, hi = self.weights_range
        if lo > hi:
            raise SpecError(f"coeff_range lower bound {lo} exceeds upper bound {hi}")
        if self.k is not None and not 1 <= self.k <= self.size:
            raise SpecError(f"k={self.k} must lie in [1, {self.size}]")

    @property
    def weights_range(self) -> tuple[float, float]:
        return self.coeff_range if self.coeff_range is not None else DEFAULT_RANGES[self.family]

    def to_json(self) -> dict:
        out = asdict(self)
        out["coeff_range"] = list(self.weights_range)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ProblemSpec":
        fields = {k: obj[k] for k in ("family", "size", "density", "coeff_range", "penalty", "seed", "k") if k in obj}
        if fields.get("coeff_range") is not None:
            fields["coeff_range"] = tuple(fields["coeff_range"])
        return cls(**fields)


def _draw(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    # integral ranges give integer weights; otherwise three decimals
    if float(lo).is_integer() and float(hi).is_integer():
        return rng.integers(int(lo), int(hi) + 1, size=size).astype(float)
    return np.round(rng.uniform(lo, hi, size=size), 3)


def _random_graph(rng: np.random.Generator, n: int, p: float) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def _default_penalty(spec: ProblemSpec, coeffs: Sequence[float]) -> float:
    if spec.penalty is not None:
        return float(spec.penalty)
    return 1.0 + float(sum(abs(c) for c in coeffs))


def _add_cardinality(lin: dict, quad: dict, n: int, k: int, weight: float) -> float:
    """Add weight * (sum x - k)^2 into the term maps; returns the constant part."""
    for i in range(n):
        lin[i] = lin.get(i, 0.0) + weight * (1 - 2 * k)
        for j in range(i + 1, n):
            quad[(i, j)] = quad.get((i, j), 0.0) + 2 * weight
    return weight * k * k


def generate(spec: ProblemSpec) -> QuboProblem:
    rng = np.random.default_rng(spec.seed)
    n = spec.size
    lo, hi = spec.weights_range
    lin: dict[int, float] = {}
    quad: dict[tuple[int, int], float] = {}
    offset = 0.0
    constraints: list[Constraint] = []
    fam = spec.family

    if fam == "max_cut":
        edges = _random_graph(rng, n, spec.density)
        w = _draw(rng, lo, hi, len(edges))
        for (i, j), wij in zip(edges, w):
            quad[(i, j)] = quad.get((i, j), 0.0) + 2 * wij
            lin[i] = lin.get(i, 0.0) - wij
            lin[j] = lin.get(j, 0.0) - wij

    elif fam == "min_vertex_cover":
        edges = _random_graph(rng, n, spec.density)
        pen = _default_penalty(spec, [1.0] * n)
        for i in range(n):
            lin[i] = 1.0
        for i, j in edges:
            offset += pen
            lin[i] -= pen
            lin[j] -= pen
            quad[(i, j)] = quad.get((i, j), 0.0) + pen
        constraints.append(Constraint("cover", pairs=tuple(edges)))

    elif fam == "set_packing":
        conflicts = _random_graph(rng, n, spec.density)
        w = _draw(rng, lo, hi, n)
        pen = _default_penalty(spec, w)
        for i in range(n):
            lin[i] = -w[i]
        for i, j in conflicts:
            quad[(i, j)] = quad.get((i, j), 0.0) + pen
        constraints.append(Constraint("exclusion", pairs=tuple(conflicts)))

    elif fam == "k_clique":
        k = spec.k if spec.k is not None else max(2, math.ceil(n / 3))
        if k > n:
            raise SpecError(f"clique size {k} exceeds {n} vertices")
        edges = set(_random_graph(rng, n, spec.density))
        missing = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
        w = _draw(rng, lo, hi, len(missing))
        for (i, j), wij in zip(missing, w):
            quad[(i, j)] = wij
        pen = _default_penalty(spec, w)
        offset += _add_cardinality(lin, quad, n, k, pen)
        constraints.append(Constraint("cardinality", variables=tuple(range(n)), k=k))
        constraints.append(Constraint("exclusion", pairs=tuple(missing)))

    elif fam == "number_partitioning":
        s = _draw(rng, lo, hi, n)
        total = float(s.sum())
        # (sum_i s_i (2 x_i - 1))^2 expanded with x_i^2 = x_i
        for i in range(n):
            lin[i] = 4 * s[i] * (s[i] - total)
            for j in range(i + 1, n):
                quad[(i, j)] = 8 * s[i] * s[j]
        offset = total * total

    elif fam == "random_qubo":
        for i in range(n):
            if rng.random() < spec.density:
                lin[i] = float(_draw(rng, lo, hi, 1)[0])
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < spec.density:
                    quad[(i, j)] = float(_draw(rng, lo, hi, 1)[0])

    elif fam == "portfolio":
        budget = spec.k if spec.k is not None else max(1, math.ceil(n / 2))
        mu = np.round(rng.uniform(lo, hi, size=n), 3)
        factors = rng.normal(size=(n, n))
        cov = np.round(factors @ factors.T / n, 3)
        mask = rng.random((n, n)) < spec.density
        for i in range(n):
            lin[i] = cov[i, i] - mu[i]
            for j in range(i + 1, n):
                if mask[i, j]:
                    quad[(i, j)] = 2 * cov[i, j]
        pen = _default_penalty(spec, list(lin.values()) + list(quad.values()))
        offset += _add_cardinality(lin, quad, n, budget, pen)
        constraints.append(Constraint("cardinality", variables=tuple(range(n)), k=budget))

    return QuboProblem.from_terms(
        n,
        {i: float(v) for i, v in lin.items()},
        {key: float(v) for key, v in quad.items()},
        offset=float(offset),
        constraints=constraints,
    )


_SUITE_RANGES = {
    "max_cut": [(1.0, 1.0), (1.0, 3.0), (1.0, 10.0)],
    "min_vertex_cover": [(1.0, 1.0)],
    "set_packing": [(1.0, 1.0), (1.0, 5.0), (1.0, 10.0)],
    "k_clique": [(1.0, 1.0), (1.0, 3.0)],
    "number_partitioning": [(1.0, 5.0), (1.0, 10.0), (1.0, 20.0)],
    "random_qubo": [(-1.0, 1.0), (-5.0, 5.0), (-10.0, 10.0), (-10.0, 3.0)],
    "portfolio": [(0.5, 2.0), (0.1, 1.0), (1.0, 3.0)],
}

_SUITE_DENSITIES = (0.3, 0.5, 0.7, 1.0)


def derive_seed(seed: int, index: int) -> int:
    """Per-item seed from (suite seed, index); independent of worker scheduling."""
    return int(np.random.SeedSequence([seed, index]).generate_state(2, dtype=np.uint32).view(np.uint64)[0] >> 1)


def generate_suite(
    count: int,
    size_range: tuple[int, int] = (3, 10),
    families: Sequence[str] = FAMILIES,
    seed: int = 0,
    with_reference: bool = True,
) -> list[tuple[ProblemSpec, QuboProblem]]:
    """Reproducible suite cycling through ``families`` with random sizes, densities and ranges."""
    families = [canonical_family(f) for f in families]
    if not families:
        raise SpecError("at least one family is required")
    lo_n, hi_n = size_range
    if not 1 <= lo_n <= hi_n:
        raise SpecError(f"invalid size range {size_range}")
    if with_reference and hi_n > BRUTE_FORCE_MAX_VARS:
        raise SpecError(f"sizes above {BRUTE_FORCE_MAX_VARS} cannot get a reference optimum")
    suite = []
    for index in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        fam = families[index % len(families)]
        ranges = _SUITE_RANGES[fam]
        spec = ProblemSpec(
            family=fam,
            size=int(rng.integers(lo_n, hi_n + 1)),
            density=float(rng.choice(_SUITE_DENSITIES)),
            coeff_range=ranges[int(rng.integers(len(ranges)))],
            seed=derive_seed(seed, index),
        )
        problem = generate(spec)
        if with_reference:
            problem = problem.with_reference(brute_force(problem).min_value)
        suite.append((spec, problem))
    return suite
