"""Basis families of entire functions with a constant member at index 0.

* :class:`Monomial` -- ``z**alpha`` in ``d`` variables, indexed by multi-indices.
* :class:`FaberSegment` -- Faber polynomials of ``[-1, 1]``: ``F_0 = 1``,
  ``F_n = 2 T_n`` for ``n >= 1``.
* :class:`Shifted` -- ``psi_0 = 1``, ``psi_n = phi_n - phi_n(z0)``.
* :class:`ExplicitBasis` -- a finite list of black-box members, for
  experiments; nothing derived from it is certified.

Coefficients of a function in a basis are always a plain ``dict`` mapping
index to complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .compact import CompactSet, Polydisc, SamplingPlan, Segment
from .series import MultiIndex, TruncatedSeries, as_points, check_multi_index, monomial_matrix, multi_indices
from .supnorm import SupEstimate, sup_batch, sup_norm


class ExpansionError(ArithmeticError):
    """Coefficient extraction did not reproduce the function within tolerance."""

    def __init__(self, result: "ExpansionResult", tol: float):
        self.result = result
        super().__init__(f"expansion residual {result.residual:.3e} exceeds tolerance {tol:.3e}")


class BasisFamily:
    """Indexed family ``(phi_n)``; subclasses define indexing and evaluation."""

    kind = ""
    dimension = 1

    def normalize_index(self, n):
        raise NotImplementedError

    def indices(self, max_degree: int, min_degree: int = 0) -> list:
        raise NotImplementedError

    def degree(self, n) -> int:
        raise NotImplementedError

    def prepare(self, indices: Sequence):
        """Array form of a list of normalized indices, accepted by the evaluation methods."""
        return np.asarray(indices, dtype=np.int64)

    def degrees(self, prepared) -> np.ndarray:
        return np.asarray(prepared)

    def values(self, indices: Sequence, Z: np.ndarray) -> np.ndarray:
        """Member values, shape ``(len(indices), M)``."""
        raise NotImplementedError

    def combination(self, indices, C: np.ndarray, Z: np.ndarray) -> np.ndarray:
        """``C @ values(indices, Z)``; subclasses may evaluate this without the member matrix."""
        return C @ self.values(indices, Z)

    def values_pointwise(self, indices: Sequence, Z: np.ndarray) -> np.ndarray:
        """Member ``indices[i]`` at point ``Z[i]``."""
        raise NotImplementedError

    @property
    def constant_index(self):
        return self.normalize_index(0)

    def has_constant_member(self) -> bool:
        return True

    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    # conveniences built on ``values`` -------------------------------------

    def function(self, coeffs: Mapping) -> Callable[[np.ndarray], np.ndarray]:
        """The callable ``z -> sum_n coeffs[n] * phi_n(z)``."""
        idx = [self.normalize_index(n) for n in coeffs]
        c = np.array([complex(coeffs[n]) for n in coeffs])

        def f(Z):
            Z = as_points(Z, self.dimension)
            if not idx:
                return np.zeros(Z.shape[0], dtype=complex)
            return c @ self.values(idx, Z)

        return f

    def value_at(self, n, z) -> complex:
        Z = as_points(np.atleast_1d(np.asarray(z, dtype=complex)).reshape(1, -1), self.dimension)
        return complex(self.values([self.normalize_index(n)], Z)[0, 0])


@dataclass(frozen=True)
class Monomial(BasisFamily):
    dimension: int = 1
    kind = "Monomial"

    def normalize_index(self, n) -> MultiIndex:
        if isinstance(n, (int, np.integer)):
            if n == 0:
                return (0,) * self.dimension
            if self.dimension != 1:
                raise IndexError(f"integer index {n} is ambiguous in dimension {self.dimension}")
            n = (int(n),)
        try:
            return check_multi_index(n, self.dimension)
        except ValueError as exc:
            raise IndexError(str(exc)) from None

    def indices(self, max_degree, min_degree=0):
        return list(multi_indices(self.dimension, max_degree, min_degree))

    def degree(self, n):
        return sum(self.normalize_index(n))

    def prepare(self, indices):
        return np.asarray(indices, dtype=np.int64).reshape(len(indices), self.dimension)

    def degrees(self, prepared):
        return self.prepare(prepared).sum(axis=1)

    def values(self, indices, Z):
        return monomial_matrix(Z, self.prepare(indices)).T

    def values_pointwise(self, indices, Z):
        return np.prod(Z ** self.prepare(indices), axis=1)

    def abs_values(self, indices, Z):
        """``|z**alpha|`` through ``exp(alpha . log|z|)``; no complex powers needed."""
        L = np.maximum(np.log(np.abs(Z)), -745.0)
        return np.exp(self.prepare(indices) @ L.T)

    def abs_values_pointwise(self, indices, Z):
        L = np.maximum(np.log(np.abs(Z)), -745.0)
        return np.exp(np.einsum("ik,ik->i", self.prepare(indices).astype(float), L))

    def combination(self, indices, C, Z):
        exps = self.prepare(indices)
        active = np.flatnonzero(exps.any(axis=0))
        if len(active) <= 1 and len(exps):
            # support in one variable: dense coefficient table against chunked power rows
            v = active[0] if len(active) else 0
            top = int(exps[:, v].max())
            dense = np.zeros((top + 1, C.shape[0]), dtype=complex)
            np.add.at(dense, exps[:, v], C.T)
            z = Z[:, v]
            out = np.empty((C.shape[0], len(z)), dtype=complex)
            step = max(1, (1 << 22) // (top + 1))
            for s in range(0, len(z), step):
                zz = z[s:s + step]
                P = np.empty((len(zz), top + 1), dtype=complex)
                P[:, 0] = 1.0
                if top:
                    P[:, 1:] = np.cumprod(np.broadcast_to(zz[:, None], (len(zz), top)), axis=1)
                out[:, s:s + step] = (P @ dense).T
            return out
        return C @ self.values(exps, Z)

    def params(self):
        return {"dimension": self.dimension}


def chebyshev_table(x: np.ndarray, n_max: int) -> np.ndarray:
    """``T_0 .. T_{n_max}`` at ``x`` by the three-term recurrence, shape ``(n_max + 1, M)``."""
    x = np.asarray(x, dtype=complex)
    out = np.empty((n_max + 1,) + x.shape, dtype=complex)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for n in range(2, n_max + 1):
        out[n] = 2 * x * out[n - 1] - out[n - 2]
    return out


@dataclass(frozen=True)
class FaberSegment(BasisFamily):
    kind = "FaberSegment"

    @property
    def dimension(self) -> int:  # type: ignore[override]
        return 1

    def normalize_index(self, n) -> int:
        if isinstance(n, tuple) and len(n) == 1:
            n = n[0]
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise IndexError(f"Faber index must be a non-negative integer, got {n!r}")
        return int(n)

    def indices(self, max_degree, min_degree=0):
        return list(range(min_degree, max_degree + 1))

    def degree(self, n):
        return self.normalize_index(n)

    def prepare(self, indices):
        return np.asarray(indices, dtype=np.int64).reshape(-1)

    def values(self, indices, Z):
        idx = np.asarray(indices, dtype=int)
        T = chebyshev_table(Z[:, 0], int(idx.max(initial=0)))[idx]
        return np.where((idx == 0)[:, None], T, 2 * T)

    def values_pointwise(self, indices, Z):
        idx = np.asarray(indices, dtype=int)
        T = chebyshev_table(Z[:, 0], int(idx.max(initial=0)))
        t = T[idx, np.arange(len(idx))]
        return np.where(idx == 0, t, 2 * t)


@dataclass(frozen=True)
class Shifted(BasisFamily):
    """``psi_0 = 1`` and ``psi_n = phi_n - phi_n(z0)`` for ``n >= 1``."""

    base: BasisFamily
    z0: tuple[complex, ...] = field(default=(0j,))
    kind = "Shifted"

    def __post_init__(self):
        z0 = np.atleast_1d(np.asarray(self.z0, dtype=complex))
        if z0.size == 1 and self.base.dimension > 1:
            z0 = np.full(self.base.dimension, z0[0])
        if z0.size != self.base.dimension:
            raise ValueError("z0 dimension does not match the base family")
        object.__setattr__(self, "z0", tuple(complex(x) for x in z0))

    @property
    def dimension(self) -> int:  # type: ignore[override]
        return self.base.dimension

    def normalize_index(self, n):
        return self.base.normalize_index(n)

    def indices(self, max_degree, min_degree=0):
        return self.base.indices(max_degree, min_degree)

    def degree(self, n):
        return self.base.degree(n)

    def prepare(self, indices):
        return self.base.prepare(indices)

    def degrees(self, prepared):
        return self.base.degrees(prepared)

    def _at_z0(self, indices):
        return self.base.values(indices, np.asarray(self.z0, dtype=complex)[None, :])[:, 0]

    def _zero_mask(self, indices):
        return self.base.degrees(self.base.prepare(indices)) == 0

    def values(self, indices, Z):
        v = self.base.values(indices, Z) - self._at_z0(indices)[:, None]
        return np.where(self._zero_mask(indices)[:, None], 1.0, v)

    def values_pointwise(self, indices, Z):
        v = self.base.values_pointwise(indices, Z) - self._at_z0(indices)
        return np.where(self._zero_mask(indices), 1.0, v)

    def params(self):
        return {"base": self.base.to_dict(), "z0": [[c.real, c.imag] for c in self.z0]}


@dataclass(frozen=True, eq=False)
class ExplicitBasis(BasisFamily):
    """Finitely many black-box members ``members[n](Z) -> (M,)``."""

    members: tuple[Callable[[np.ndarray], np.ndarray], ...]
    dimension: int = 1
    kind = "Explicit"

    def normalize_index(self, n):
        if isinstance(n, tuple) and len(n) == 1:
            n = n[0]
        if not isinstance(n, (int, np.integer)) or not 0 <= n < len(self.members):
            raise IndexError(f"index {n!r} out of range for {len(self.members)} members")
        return int(n)

    def indices(self, max_degree, min_degree=0):
        return list(range(min_degree, min(max_degree, len(self.members) - 1) + 1))

    def degree(self, n):
        return self.normalize_index(n)

    def prepare(self, indices):
        return np.asarray(indices, dtype=np.int64).reshape(-1)

    def values(self, indices, Z):
        return np.array([np.asarray(self.members[n](Z), dtype=complex) for n in indices])

    def values_pointwise(self, indices, Z):
        return np.array([complex(self.members[n](Z[i:i + 1])[0]) for i, n in enumerate(indices)])

    def has_constant_member(self, seed: int = 0) -> bool:
        """Numerical check that member 0 is the constant function 1."""
        rng = np.random.default_rng(seed)
        Z = rng.normal(size=(16, self.dimension)) + 1j * rng.normal(size=(16, self.dimension))
        v = np.asarray(self.members[0](Z), dtype=complex)
        return bool(np.allclose(v, 1.0, rtol=0, atol=1e-12))


def basis_eval(B: BasisFamily, n, z) -> complex:
    """Value of member ``n`` of ``B`` at the point ``z``."""
    return B.value_at(n, z)


def shift_basis(B: BasisFamily, z0) -> Shifted:
    return Shifted(B, z0)


def basis_from_dict(data: Mapping) -> BasisFamily:
    kind, p = data["kind"], data.get("params", {})
    if kind == "Monomial":
        return Monomial(int(p.get("dimension", 1)))
    if kind == "FaberSegment":
        return FaberSegment()
    if kind == "Shifted":
        return Shifted(basis_from_dict(p["base"]), [complex(a, b) for a, b in p["z0"]])
    raise ValueError(f"basis kind {kind!r} cannot be rebuilt from JSON")


def basis_by_name(name: str, dimension: int = 1) -> BasisFamily:
    if name == "monomial":
        return Monomial(dimension)
    if name == "faber":
        if dimension != 1:
            raise ValueError("the Faber family lives in one variable")
        return FaberSegment()
    raise ValueError(f"unknown basis {name!r}")


# --------------------------------------------------------------------------
# member batches and sup norms


class MemberBatch:
    """Sup-norm batch whose rows are the members ``indices`` of ``basis``."""

    def __init__(self, basis: BasisFamily, indices, prepared: bool = False):
        self.basis = basis
        self.indices = indices if prepared else basis.prepare(list(indices))
        if hasattr(basis, "abs_values"):
            self.abs_grid = lambda Z: basis.abs_values(self.indices, Z)
            self.abs_pointwise = lambda Z: basis.abs_values_pointwise(self.indices, Z)

    def __len__(self):
        return len(self.indices)

    def take(self, rows):
        return MemberBatch(self.basis, self.indices[rows], prepared=True)

    def grid(self, Z):
        return self.basis.values(self.indices, Z)

    def pointwise(self, Z):
        return self.basis.values_pointwise(self.indices, Z)


class CombinationBatch:
    """Rows are functions ``sum_t C[i, t] phi_{indices[t]}``."""

    def __init__(self, basis: BasisFamily, indices, C: np.ndarray, prepared: bool = False):
        self.basis = basis
        self.indices = indices if prepared else basis.prepare(list(indices))
        self.C = np.atleast_2d(np.asarray(C, dtype=complex))

    def __len__(self):
        return self.C.shape[0]

    def take(self, rows):
        return CombinationBatch(self.basis, self.indices, self.C[rows], prepared=True)

    def grid(self, Z):
        return self.basis.combination(self.indices, self.C, Z)

    def pointwise(self, Z):
        if self.C.shape[0] == 1:
            return self.grid(Z)[0]
        V = self.basis.values(self.indices, Z)  # (terms, k)
        return np.einsum("it,ti->i", self.C, V)


def coefficient_matrix(B: BasisFamily, corpus: Sequence[Mapping]) -> tuple[list, np.ndarray]:
    """Union support and dense coefficient matrix for a list of coefficient dicts."""
    support = sorted({B.normalize_index(n) for c in corpus for n in c}, key=lambda n: (B.degree(n), n))
    pos = {n: t for t, n in enumerate(support)}
    C = np.zeros((len(corpus), len(support)), dtype=complex)
    for i, c in enumerate(corpus):
        for n, v in c.items():
            C[i, pos[B.normalize_index(n)]] += complex(v)
    return support, C


_SUP_CACHE: dict = {}
_SUP_CACHE_LIMIT = 256


def member_sups(B: BasisFamily, indices: Sequence, K: CompactSet, plan: SamplingPlan) -> np.ndarray:
    """``|phi_n|_K`` for each index (sampled lower bounds), memoized per ``(B, K, plan)``."""
    indices = [B.normalize_index(n) for n in indices]
    if not indices:
        return np.zeros(0)
    try:
        table = _SUP_CACHE.setdefault((B, K, plan), {})
    except TypeError:  # unhashable basis
        return sup_batch(MemberBatch(B, indices), K, plan).value
    missing = [n for n in dict.fromkeys(indices) if n not in table]
    if missing:
        vals = sup_batch(MemberBatch(B, missing), K, plan).value
        table.update(zip(missing, vals.tolist()))
    if len(_SUP_CACHE) > _SUP_CACHE_LIMIT:
        _SUP_CACHE.pop(next(iter(_SUP_CACHE)))
    return np.array([table[n] for n in indices])


def as_coefficients(f, B: BasisFamily) -> dict:
    """Coefficient dict from a TruncatedSeries, a mapping or a sequence."""
    if isinstance(f, TruncatedSeries):
        if not isinstance(B, (Monomial, Shifted)) or B.dimension != f.dimension:
            raise ValueError("a TruncatedSeries is a coefficient table in the monomial basis")
        return {a: c for a, c in f.items()}
    if isinstance(f, Mapping):
        return {B.normalize_index(n): complex(c) for n, c in f.items()}
    return {B.normalize_index(n): complex(c) for n, c in enumerate(f)}


# --------------------------------------------------------------------------
# coefficient extraction


@dataclass(frozen=True)
class ExpansionBudget:
    """Truncation degree, extraction radius (monomials), quadrature size and tolerance."""

    max_degree: int = 48
    radius: float = 1.25
    nodes: int | None = None
    tol: float = 1e-8


@dataclass(frozen=True)
class ExpansionResult:
    coefficients: dict
    residual: float

    def to_dict(self) -> dict:
        return {
            "coefficients": [[list(n) if isinstance(n, tuple) else n, c.real, c.imag]
                             for n, c in self.coefficients.items()],
            "residual": self.residual,
        }


def _nodes(budget: ExpansionBudget) -> int:
    if budget.nodes is not None:
        return int(budget.nodes)
    n = max(32, 2 * (budget.max_degree + 1))
    return 1 << (n - 1).bit_length()


def _monomial_coefficients(f, d, budget: ExpansionBudget) -> dict:
    M = _nodes(budget)
    rho = budget.radius
    th = 2 * np.pi * np.arange(M) / M
    mesh = np.meshgrid(*([th] * d), indexing="ij")
    Z = rho * np.exp(1j * np.stack([m.ravel() for m in mesh], axis=1))
    vals = np.asarray(f(Z), dtype=complex).reshape((M,) * d)
    fc = np.fft.fftn(vals) / M ** d
    out = {}
    for alpha in multi_indices(d, min(budget.max_degree, M - 1)):
        out[alpha] = complex(fc[alpha]) / rho ** sum(alpha)
    return out


def _faber_coefficients(f, budget: ExpansionBudget) -> dict:
    M = max(_nodes(budget), budget.max_degree + 1)
    th = np.pi * (np.arange(M) + 0.5) / M
    vals = np.asarray(f(np.cos(th).astype(complex)[:, None]), dtype=complex)
    k = np.arange(budget.max_degree + 1)
    a = (2.0 / M) * (np.cos(np.outer(k, th)) @ vals)
    out = {0: complex(a[0] / 2)}
    for n in range(1, budget.max_degree + 1):
        out[n] = complex(a[n] / 2)
    return out


def extraction_compact(B: BasisFamily, budget: ExpansionBudget) -> CompactSet:
    base = B.base if isinstance(B, Shifted) else B
    if isinstance(base, FaberSegment):
        return Segment()
    return Polydisc(0.0, budget.radius, B.dimension)


def extract_coefficients(B: BasisFamily, f, budget: ExpansionBudget | None = None,
                         plan: SamplingPlan | None = None, strict: bool = True) -> ExpansionResult:
    """Coefficients of ``f`` in ``B`` with the sup-norm residual on the extraction compact.

    Monomials use discrete Fourier averages over the torus of radius
    ``budget.radius``; the Faber family uses Gauss-Chebyshev quadrature
    on ``[-1, 1]``.  For a shifted family the coefficient at 0 is ``f(z0)``.
    Raises :class:`ExpansionError` when the residual exceeds ``budget.tol``
    and ``strict`` is set.
    """
    budget = budget or ExpansionBudget()
    plan = plan or SamplingPlan(128)
    if isinstance(f, TruncatedSeries):
        f = f.__call__
    base = B.base if isinstance(B, Shifted) else B
    if isinstance(base, Monomial):
        coeffs = _monomial_coefficients(f, base.dimension, budget)
    elif isinstance(base, FaberSegment):
        coeffs = _faber_coefficients(f, budget)
    else:
        raise TypeError(f"no extraction rule for {base.kind}")
    if isinstance(B, Shifted):
        z0 = np.asarray(B.z0, dtype=complex)[None, :]
        coeffs[B.constant_index] = complex(np.asarray(f(z0))[0])
    partial = B.function(coeffs)
    K = extraction_compact(B, budget)
    residual = sup_norm(lambda Z: f(Z) - partial(Z), K, plan)
    result = ExpansionResult(coeffs, float(residual))
    if strict and residual > budget.tol:
        raise ExpansionError(result, budget.tol)
    return result
