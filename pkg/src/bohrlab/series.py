"""Truncated multivariate power series.

A :class:`TruncatedSeries` is a finite table ``alpha -> c_alpha`` of complex
coefficients, read as the entire function ``sum c_alpha z**alpha`` in ``d``
variables.  Exponent tuples (multi-indices) are plain ``tuple[int, ...]``.

Evaluation is vectorized: a series is callable on an array of points of
shape ``(M, d)`` and returns ``M`` complex values.  This is the calling
convention every evaluable function in the package follows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping

import numpy as np

MultiIndex = tuple[int, ...]

_CHUNK = 1 << 21


def check_multi_index(alpha: Iterable[int], d: int | None = None) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if not alpha:
        raise ValueError("multi-index must have length >= 1")
    if any(a < 0 for a in alpha):
        raise ValueError(f"negative exponent in multi-index {alpha}")
    if d is not None and len(alpha) != d:
        raise ValueError(f"multi-index {alpha} has length {len(alpha)}, expected {d}")
    return alpha


def multi_indices(d: int, max_degree: int, min_degree: int = 0) -> Iterator[MultiIndex]:
    """All multi-indices of length ``d`` with total degree in ``[min_degree, max_degree]``.

    Ordered by total degree, then lexicographically (descending in the first
    variable), so the output is deterministic.
    """
    for n in range(min_degree, max_degree + 1):
        block = []
        for combo in combinations_with_replacement(range(d), n):
            alpha = [0] * d
            for k in combo:
                alpha[k] += 1
            block.append(tuple(alpha))
        yield from sorted(block, reverse=True)


def as_points(z, d: int) -> np.ndarray:
    """Coerce ``z`` to a complex array of shape ``(M, d)``."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise ValueError(f"points of shape {np.shape(z)} do not match dimension {d}")
    return arr


def monomial_matrix(Z: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """``out[j, t] = prod_k Z[j, k] ** exps[t, k]``."""
    out = np.ones((Z.shape[0], exps.shape[0]), dtype=complex)
    for k in range(exps.shape[1]):
        col = exps[:, k]
        top = int(col.max(initial=0))
        if top == 0:
            continue
        if top <= 64:
            # repeated multiplication for low degrees
            pw = np.empty((Z.shape[0], top + 1), dtype=complex)
            pw[:, 0] = 1.0
            for p in range(1, top + 1):
                pw[:, p] = pw[:, p - 1] * Z[:, k]
            out *= pw[:, col]
        else:
            uniq, inv = np.unique(col, return_inverse=True)
            out *= (Z[:, k:k + 1] ** uniq[None, :])[:, inv]
    return out


@dataclass(frozen=True)
class TruncatedSeries:
    """Finitely supported coefficient table of an entire function in ``dimension`` variables.

    Absent indices have coefficient zero.  ``degree_bound`` defaults to the
    largest stored total degree.
    """

    dimension: int
    coefficients: Mapping[MultiIndex, complex]
    degree_bound: int | None = None
    _exps: np.ndarray = field(init=False, repr=False, compare=False)
    _coefs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        d = int(self.dimension)
        if d < 1:
            raise ValueError("dimension must be >= 1")
        table: dict[MultiIndex, complex] = {}
        for alpha, c in self.coefficients.items():
            alpha = check_multi_index(alpha, d)
            c = complex(c)
            if c != 0:
                table[alpha] = table.get(alpha, 0) + c
        top = max((sum(a) for a in table), default=0)
        bound = top if self.degree_bound is None else int(self.degree_bound)
        if top > bound:
            raise ValueError(f"stored degree {top} exceeds degree_bound {bound}")
        keys = sorted(table, key=lambda a: (sum(a), tuple(-x for x in a)))
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "coefficients", {a: table[a] for a in keys})
        object.__setattr__(self, "degree_bound", bound)
        exps = np.array(keys, dtype=np.int64).reshape(len(keys), d)
        object.__setattr__(self, "_exps", exps)
        object.__setattr__(self, "_coefs", np.array([table[a] for a in keys], dtype=complex))

    # construction helpers -------------------------------------------------

    @classmethod
    def from_univariate(cls, coefs: Iterable[complex], degree_bound: int | None = None) -> "TruncatedSeries":
        """One-variable series from the coefficient list ``[c_0, c_1, ...]``."""
        return cls(1, {(n,): c for n, c in enumerate(coefs)}, degree_bound)

    @classmethod
    def constant(cls, value: complex, dimension: int = 1) -> "TruncatedSeries":
        return cls(dimension, {(0,) * dimension: value}, 0)

    @classmethod
    def monomial(cls, alpha: Iterable[int], coef: complex = 1.0) -> "TruncatedSeries":
        alpha = check_multi_index(alpha)
        return cls(len(alpha), {alpha: coef})

    # views ----------------------------------------------------------------

    @property
    def exponents(self) -> np.ndarray:
        return self._exps

    @property
    def values(self) -> np.ndarray:
        return self._coefs

    def __len__(self) -> int:
        return len(self._coefs)

    def __getitem__(self, alpha) -> complex:
        if isinstance(alpha, int):
            alpha = (alpha,)
        return self.coefficients.get(tuple(alpha), 0j)

    def items(self):
        return self.coefficients.items()

    def constant_term(self) -> complex:
        return self[(0,) * self.dimension]

    # evaluation -----------------------------------------------------------

    def __call__(self, Z) -> np.ndarray:
        Z = as_points(Z, self.dimension)
        if len(self._coefs) == 0:
            return np.zeros(Z.shape[0], dtype=complex)
        out = np.empty(Z.shape[0], dtype=complex)
        step = max(1, _CHUNK // max(1, len(self._coefs)))
        for s in range(0, Z.shape[0], step):
            out[s:s + step] = monomial_matrix(Z[s:s + step], self._exps) @ self._coefs
        return out

    # arithmetic -----------------------------------------------------------

    def _combine(self, other: "TruncatedSeries", sign: float) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        table = dict(self.coefficients)
        for a, c in other.items():
            table[a] = table.get(a, 0) + sign * c
        return TruncatedSeries(self.dimension, table, max(self.degree_bound, other.degree_bound))

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        if isinstance(scalar, TruncatedSeries):
            return NotImplemented
        return TruncatedSeries(self.dimension, {a: scalar * c for a, c in self.items()}, self.degree_bound)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def without_constant(self) -> "TruncatedSeries":
        zero = (0,) * self.dimension
        return TruncatedSeries(self.dimension, {a: c for a, c in self.items() if a != zero}, self.degree_bound)

    def embed(self, dimension: int, variables: Iterable[int] | None = None) -> "TruncatedSeries":
        """Same function viewed in ``dimension`` variables (extra variables unused)."""
        variables = list(range(self.dimension)) if variables is None else list(variables)
        if len(variables) != self.dimension or max(variables) >= dimension:
            raise ValueError("bad variable embedding")
        table = {}
        for a, c in self.items():
            b = [0] * dimension
            for power, v in zip(a, variables):
                b[v] = power
            table[tuple(b)] = c
        return TruncatedSeries(dimension, table, self.degree_bound)

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "degree_bound": self.degree_bound,
            "coefficients": [[list(a), c.real, c.imag] for a, c in self.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TruncatedSeries":
        table = {tuple(e): complex(re, im) for e, re, im in data["coefficients"]}
        return cls(int(data["dimension"]), table, data.get("degree_bound"))


def evaluate(f: TruncatedSeries, z) -> complex:
    """Value of ``f`` at the single point ``z``."""
    pt = np.atleast_1d(np.asarray(z, dtype=complex))
    if pt.ndim != 1 or pt.shape[0] != f.dimension:
        raise ValueError(f"point of dimension {pt.shape[-1] if pt.ndim else 0} given to a "
                         f"{f.dimension}-variable series")
    return complex(f(pt.reshape(1, -1))[0])


def random_series(d: int, N: int, decay: float, seed: int) -> TruncatedSeries:
    """Seeded test function with ``c_alpha = u_alpha * decay**|alpha|``, ``u`` uniform in the unit disc."""
    if N < 0:
        raise ValueError("N must be >= 0")
    rng = np.random.default_rng(seed)
    keys = list(multi_indices(d, N))
    rad = np.sqrt(rng.random(len(keys)))
    ang = rng.uniform(0.0, 2 * np.pi, len(keys))
    u = rad * np.exp(1j * ang)
    table = {}
    for a, uu in zip(keys, u):
        table[a] = uu * float(decay) ** sum(a)
    return TruncatedSeries(d, table, N)
