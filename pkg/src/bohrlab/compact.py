"""Compact sets with boundary sampling.

Four kinds are supported: Euclidean balls and polydiscs in ``C^d``, the
segment ``[-1, 1]`` and Bernstein ellipses ``E_rho`` (the Joukowski image of
``|w| = rho``).  Each kind knows how to lay a nested grid on its boundary
(distinguished boundary for polydiscs) in terms of real parameters, so the
sup-norm engine can refine samples by moving those parameters.

Grids are nested under doubling: the grid for ``2n`` contains the grid for
``n``.  Sup-norm monotonicity in ``boundary_count`` rests on this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc


@dataclass(frozen=True)
class SamplingPlan:
    """How densely boundaries are sampled and how hard the best sample is polished.

    ``boundary_count`` is per boundary dimension (angles per circle, or
    directions for balls in ``d > 1``).  ``angle_count`` is only used when a
    modulus constraint is linearized into half-planes.
    """

    boundary_count: int = 64
    angle_count: int = 64
    seed: int = 0
    refinement_rounds: int = 2

    def __post_init__(self) -> None:
        if self.boundary_count < 8 or self.angle_count < 8:
            raise ValueError("boundary_count and angle_count must be >= 8")
        if self.refinement_rounds < 0:
            raise ValueError("refinement_rounds must be >= 0")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def replace(self, **changes) -> "SamplingPlan":
        data = dict(self.to_dict())
        data.update(changes)
        return SamplingPlan(**data)

    def to_dict(self) -> dict:
        return {
            "boundary_count": self.boundary_count,
            "angle_count": self.angle_count,
            "seed": int(self.seed),
            "refinement_rounds": self.refinement_rounds,
        }


def default_plan(d: int = 1, seed: int = 0) -> SamplingPlan:
    """Plan sized so that polydisc grids stay around 10^4 points."""
    count = {1: 256, 2: 96, 3: 24, 4: 12}.get(d, 8)
    return SamplingPlan(boundary_count=count, seed=seed)


def _angles(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def _as_center(center, d: int | None) -> tuple[complex, ...]:
    c = np.atleast_1d(np.asarray(center, dtype=complex))
    if d is not None and c.size == 1 and d > 1:
        c = np.full(d, c[0])
    return tuple(complex(x) for x in c)


class CompactSet:
    """Base class; concrete kinds are frozen dataclasses below."""

    kind: str = ""

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    # boundary parametrization used by the sup-norm engine
    def grid(self, n: int, seed: int) -> tuple[np.ndarray, np.ndarray | None]:
        raise NotImplementedError

    def points(self, T: np.ndarray, aux: np.ndarray | None, seed: int) -> np.ndarray:
        raise NotImplementedError

    def spacing(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def contains(self, z, interior: bool = False) -> bool:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params()}


@dataclass(frozen=True)
class Ball(CompactSet):
    """Closed Euclidean ball ``{z : |z - center| <= radius}`` in ``C^d``."""

    center: tuple[complex, ...]
    radius: float
    kind = "Ball"

    def __init__(self, center=0.0, radius: float = 1.0, dimension: int | None = None):
        object.__setattr__(self, "center", _as_center(center, dimension))
        object.__setattr__(self, "radius", float(radius))
        if not self.radius > 0:
            raise ValueError("radius must be > 0")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def grid(self, n, seed):
        th = _angles(n)
        if self.dimension == 1:
            return th[:, None], None
        dirs = np.repeat(np.arange(n), n)
        return np.tile(th, n)[:, None], dirs

    def points(self, T, aux, seed):
        c = np.asarray(self.center)
        e = np.exp(1j * T[:, 0])
        if self.dimension == 1:
            return (c[0] + self.radius * e)[:, None]
        u = sphere_directions(self.dimension, int(aux.max()) + 1, seed)[aux]
        return c[None, :] + self.radius * e[:, None] * u

    def spacing(self, n):
        return np.array([2 * np.pi / n])

    def contains(self, z, interior=False):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        dist = float(np.linalg.norm(z - np.asarray(self.center)))
        return dist < self.radius if interior else dist <= self.radius * (1 + 1e-12)

    def params(self):
        return {"center": [[c.real, c.imag] for c in self.center], "radius": self.radius}


@dataclass(frozen=True)
class Polydisc(CompactSet):
    """Closed polydisc; sampled on its distinguished boundary (a torus)."""

    center: tuple[complex, ...]
    radii: tuple[float, ...]
    kind = "Polydisc"

    def __init__(self, center=0.0, radii: float | Iterable[float] = 1.0, dimension: int | None = None):
        r = np.atleast_1d(np.asarray(radii, dtype=float))
        if dimension is None:
            dimension = max(r.size, np.atleast_1d(np.asarray(center)).size)
        if r.size == 1:
            r = np.full(dimension, r[0])
        object.__setattr__(self, "center", _as_center(center, dimension))
        object.__setattr__(self, "radii", tuple(float(x) for x in r))
        if len(self.radii) != len(self.center):
            raise ValueError("center and radii lengths differ")
        if min(self.radii) <= 0:
            raise ValueError("radii must be > 0")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def grid(self, n, seed):
        th = _angles(n)
        mesh = np.meshgrid(*([th] * self.dimension), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1), None

    def points(self, T, aux, seed):
        return np.asarray(self.center)[None, :] + np.asarray(self.radii)[None, :] * np.exp(1j * T)

    def spacing(self, n):
        return np.full(self.dimension, 2 * np.pi / n)

    def contains(self, z, interior=False):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        dist = np.abs(z - np.asarray(self.center))
        r = np.asarray(self.radii)
        return bool(np.all(dist < r)) if interior else bool(np.all(dist <= r * (1 + 1e-12)))

    def params(self):
        return {"center": [[c.real, c.imag] for c in self.center], "radii": list(self.radii)}


@dataclass(frozen=True)
class Segment(CompactSet):
    """The real segment ``[-1, 1]``, sampled at ``cos(2 pi j / n)``."""

    kind = "Segment"

    @property
    def dimension(self) -> int:
        return 1

    def grid(self, n, seed):
        return _angles(n)[:, None], None

    def points(self, T, aux, seed):
        return np.cos(T[:, 0]).astype(complex)[:, None]

    def spacing(self, n):
        return np.array([2 * np.pi / n])

    def contains(self, z, interior=False):
        if interior:
            return False
        z = complex(np.ravel(np.asarray(z, dtype=complex))[0])
        return abs(z.imag) <= 1e-12 and abs(z.real) <= 1 + 1e-12

    def params(self):
        return {}


@dataclass(frozen=True)
class BernsteinEllipse(CompactSet):
    """Closed region bounded by ``{(w + 1/w)/2 : |w| = rho}``, ``rho > 1``."""

    rho: float
    kind = "BernsteinEllipse"

    def __post_init__(self):
        object.__setattr__(self, "rho", float(self.rho))
        if not self.rho > 1:
            raise ValueError("rho must be > 1")

    @property
    def dimension(self) -> int:
        return 1

    @property
    def semi_axes(self) -> tuple[float, float]:
        return (self.rho + 1 / self.rho) / 2, (self.rho - 1 / self.rho) / 2

    def grid(self, n, seed):
        return _angles(n)[:, None], None

    def points(self, T, aux, seed):
        w = self.rho * np.exp(1j * T[:, 0])
        return ((w + 1 / w) / 2)[:, None]

    def spacing(self, n):
        return np.array([2 * np.pi / n])

    def contains(self, z, interior=False):
        level = green_level(complex(np.ravel(np.asarray(z, dtype=complex))[0]))
        return level < self.rho if interior else level <= self.rho * (1 + 1e-12)

    def params(self):
        return {"rho": self.rho}


def green_level(z: complex) -> float:
    """``|w|`` for the Joukowski preimage ``w`` of ``z`` with ``|w| >= 1``."""
    w = z + np.sqrt(z * z - 1 + 0j)
    a = abs(w)
    return max(a, 1 / a) if a > 0 else math.inf


@lru_cache(maxsize=64)
def _directions_cached(d: int, n: int, seed: int) -> np.ndarray:
    sampler = qmc.Halton(d=2 * d, scramble=True, seed=np.random.default_rng(seed))
    u = np.clip(sampler.random(n), 1e-12, 1 - 1e-12)
    g = ndtri(u)
    v = g[:, :d] + 1j * g[:, d:]
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v.setflags(write=False)
    return v


def sphere_directions(d: int, n: int, seed: int) -> np.ndarray:
    """Seeded quasi-uniform unit vectors in ``C^d``; a prefix of a fixed Halton stream."""
    # always draw a power-of-two block so that prefixes agree across n
    block = 1 << max(3, (n - 1).bit_length())
    return _directions_cached(d, block, int(seed))[:n]


def boundary_samples(K: CompactSet, plan: SamplingPlan) -> np.ndarray:
    """Boundary points of ``K`` as an array of shape ``(M, d)``."""
    T, aux = K.grid(plan.boundary_count, plan.seed)
    return K.points(T, aux, plan.seed)


def dilate(K: CompactSet, lam: float) -> CompactSet:
    """Enlarge ``K`` by the factor ``lam >= 1``.

    Balls and polydiscs scale their radii about the center.  Ellipses are
    dilated in the Green-function parameter, ``E_rho -> E_{rho**lam}``; the
    segment is the level ``rho = 1`` and by convention goes to ``E_lam``.
    """
    lam = float(lam)
    if lam < 1:
        raise ValueError(f"dilation factor must be >= 1, got {lam}")
    if isinstance(K, Ball):
        return Ball(K.center, K.radius * lam)
    if isinstance(K, Polydisc):
        return Polydisc(K.center, [r * lam for r in K.radii])
    if isinstance(K, BernsteinEllipse):
        return BernsteinEllipse(K.rho ** lam)
    if isinstance(K, Segment):
        return K if lam == 1 else BernsteinEllipse(lam)
    raise TypeError(f"cannot dilate {K!r}")


def scale(K: CompactSet, r: float) -> CompactSet:
    """Homothety of ``K`` about its center by ``r > 0`` (balls and polydiscs only)."""
    if isinstance(K, Ball):
        return Ball(K.center, K.radius * r)
    if isinstance(K, Polydisc):
        return Polydisc(K.center, [x * r for x in K.radii])
    raise TypeError(f"{K.kind} has no homothety")


def ellipse_or_segment(rho: float) -> CompactSet:
    """Green level set ``rho >= 1``: the segment at ``rho == 1``, an ellipse above."""
    return Segment() if rho <= 1 else BernsteinEllipse(rho)


def compact_from_dict(data: dict) -> CompactSet:
    kind, p = data["kind"], data.get("params", {})
    if kind == "Ball":
        return Ball([complex(a, b) for a, b in p["center"]], p["radius"])
    if kind == "Polydisc":
        return Polydisc([complex(a, b) for a, b in p["center"]], p["radii"])
    if kind == "Segment":
        return Segment()
    if kind == "BernsteinEllipse":
        return BernsteinEllipse(p["rho"])
    raise ValueError(f"unknown compact kind {kind!r}")
