"""Sparse real polynomial maps R^n -> R^p with exact rational coefficients.

A map is stored as one coefficient dictionary per component, keyed by
exponent tuples.  Coefficients are `fractions.Fraction`, so symbolic
manipulation (partial derivatives, restriction to coordinate subspaces,
evaluation at rational points) is exact.  Floating point enters only in
the compiled evaluators used for numerics, which are vectorised over
batches of points.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

Monomials = Mapping[tuple[int, ...], Fraction]


def _clean(component: Monomials, n: int) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for expo, coeff in component.items():
        expo = tuple(int(e) for e in expo)
        if len(expo) != n:
            raise ValueError(f"exponent tuple {expo} has length {len(expo)}, expected {n}")
        if any(e < 0 for e in expo):
            raise ValueError(f"negative exponent in {expo}")
        c = Fraction(coeff)
        if c != 0:
            out[expo] = out.get(expo, Fraction(0)) + c
            if out[expo] == 0:
                del out[expo]
    return out


class RealPolynomialMap:
    """Polynomial map f : R^n -> R^p held as sparse rational data.

    Parameters
    ----------
    n : int
        Number of variables.
    components : sequence of dict
        One dict per component, mapping exponent tuples of length `n`
        to rational coefficients.
    var_names : sequence of str, optional
        Display names for the variables; defaults to x1..xn.
    """

    def __init__(self, n: int, components: Sequence[Monomials],
                 var_names: Sequence[str] | None = None):
        if n < 1:
            raise ValueError("need at least one variable")
        if not components:
            raise ValueError("need at least one component")
        self.n = int(n)
        self.p = len(components)
        self.components: tuple[dict[tuple[int, ...], Fraction], ...] = tuple(
            _clean(c, self.n) for c in components)
        if var_names is None:
            var_names = tuple(f"x{i+1}" for i in range(self.n))
        else:
            var_names = tuple(var_names)
            if len(var_names) != self.n:
                raise ValueError("var_names length does not match n")
            if len(set(var_names)) != self.n:
                raise ValueError("duplicate variable name")
        self.var_names = var_names
        self._compiled = None
        self._compiled_grad = None
        self._partials: dict[tuple[int, int], dict[tuple[int, ...], Fraction]] = {}

    # ------------------------------------------------------------------
    # exact layer

    def eval_exact(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Evaluate at a rational point, exactly."""
        if len(x) != self.n:
            raise ValueError("point has wrong dimension")
        xs = [Fraction(v) for v in x]
        out = []
        for comp in self.components:
            acc = Fraction(0)
            for expo, coeff in comp.items():
                term = coeff
                for xv, e in zip(xs, expo):
                    if e:
                        term *= xv ** e
                acc += term
            out.append(acc)
        return tuple(out)

    def partial(self, i: int, j: int) -> dict[tuple[int, ...], Fraction]:
        """Sparse dict of d f_i / d x_j (0-based indices)."""
        key = (i, j)
        if key not in self._partials:
            out: dict[tuple[int, ...], Fraction] = {}
            for expo, coeff in self.components[i].items():
                e = expo[j]
                if e == 0:
                    continue
                dexpo = expo[:j] + (e - 1,) + expo[j + 1:]
                out[dexpo] = out.get(dexpo, Fraction(0)) + coeff * e
                if out[dexpo] == 0:
                    del out[dexpo]
            self._partials[key] = out
        return self._partials[key]

    def jacobian_exact(self, x: Sequence[Fraction]) -> list[list[Fraction]]:
        """Exact p-by-n Jacobian matrix at a rational point."""
        xs = [Fraction(v) for v in x]
        rows = []
        for i in range(self.p):
            row = []
            for j in range(self.n):
                acc = Fraction(0)
                for expo, coeff in self.partial(i, j).items():
                    term = coeff
                    for xv, e in zip(xs, expo):
                        if e:
                            term *= xv ** e
                    acc += term
                row.append(acc)
            rows.append(row)
        return rows

    def restricted_to_zero(self, zero_vars: Iterable[int]) -> "RealPolynomialMap":
        """The map obtained by setting the given variables (0-based) to zero."""
        zv = set(zero_vars)
        comps = []
        for comp in self.components:
            kept = {e: c for e, c in comp.items() if all(e[j] == 0 for j in zv)}
            comps.append(kept)
        return RealPolynomialMap(self.n, comps, self.var_names)

    def total_degree(self) -> int:
        deg = 0
        for comp in self.components:
            for expo in comp:
                deg = max(deg, sum(expo))
        return deg

    # ------------------------------------------------------------------
    # compiled float layer

    def _compile(self):
        # flat arrays: one row of exponents per monomial, with a segment
        # index saying which component it belongs to
        if self._compiled is None:
            expos, coeffs, seg = [], [], []
            for i, comp in enumerate(self.components):
                for e, c in comp.items():
                    expos.append(e)
                    coeffs.append(float(c))
                    seg.append(i)
            if expos:
                E = np.array(expos, dtype=np.int64)
                C = np.array(coeffs)
                S = np.array(seg, dtype=np.int64)
            else:
                E = np.zeros((0, self.n), dtype=np.int64)
                C = np.zeros(0)
                S = np.zeros(0, dtype=np.int64)
            self._compiled = (E, C, S)
        return self._compiled

    def _compile_grad(self):
        if self._compiled_grad is None:
            expos, coeffs, seg = [], [], []
            for i in range(self.p):
                for j in range(self.n):
                    for e, c in self.partial(i, j).items():
                        expos.append(e)
                        coeffs.append(float(c))
                        seg.append(i * self.n + j)
            if expos:
                E = np.array(expos, dtype=np.int64)
                C = np.array(coeffs)
                S = np.array(seg, dtype=np.int64)
            else:
                E = np.zeros((0, self.n), dtype=np.int64)
                C = np.zeros(0)
                S = np.zeros(0, dtype=np.int64)
            self._compiled_grad = (E, C, S)
        return self._compiled_grad

    @staticmethod
    def _segsum(vals: np.ndarray, seg: np.ndarray, nseg: int) -> np.ndarray:
        # vals (N, m), seg (m,) -> (N, nseg)
        out = np.zeros((vals.shape[0], nseg))
        np.add.at(out.T, seg, vals.T)
        return out

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        """Evaluate at a batch of points.  X is (N, n); returns (N, p)."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.shape[1] != self.n:
            raise ValueError("points have wrong dimension")
        E, C, S = self._compile()
        if len(C) == 0:
            vals = np.zeros((X.shape[0], self.p))
        else:
            P = np.prod(X[:, None, :] ** E[None, :, :], axis=2)
            vals = self._segsum(P * C, S, self.p)
        return vals[0] if single else vals

    def grad_many(self, X: np.ndarray) -> np.ndarray:
        """Jacobians at a batch of points.  X is (N, n); returns (N, p, n)."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.shape[1] != self.n:
            raise ValueError("points have wrong dimension")
        E, C, S = self._compile_grad()
        if len(C) == 0:
            vals = np.zeros((X.shape[0], self.p * self.n))
        else:
            P = np.prod(X[:, None, :] ** E[None, :, :], axis=2)
            vals = self._segsum(P * C, S, self.p * self.n)
        vals = vals.reshape(X.shape[0], self.p, self.n)
        return vals[0] if single else vals

    def __call__(self, x) -> np.ndarray:
        return self.eval_many(np.asarray(x, dtype=float))

    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RealPolynomialMap):
            return NotImplemented
        return (self.n == other.n and self.components == other.components
                and self.var_names == other.var_names)

    def __repr__(self) -> str:
        return f"RealPolynomialMap(n={self.n}, p={self.p}, vars={self.var_names})"


def eval_map(f: RealPolynomialMap, x) -> np.ndarray:
    """Value of f at one point (float)."""
    return f.eval_many(np.asarray(x, dtype=float))


def grad_map(f: RealPolynomialMap, x) -> np.ndarray:
    """Jacobian of f at one point (float), shape (p, n)."""
    return f.grad_many(np.asarray(x, dtype=float))


def det_exact(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a small square matrix of Fractions (Laplace expansion)."""
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("matrix is not square")
    if m == 1:
        return Fraction(rows[0][0])
    if m == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = Fraction(0)
    sign = 1
    for k in range(m):
        if rows[0][k] != 0:
            minor = [[rows[i][j] for j in range(m) if j != k] for i in range(1, m)]
            acc += sign * rows[0][k] * det_exact(minor)
        sign = -sign
    return acc


def minors_exact(matrix: Sequence[Sequence[Fraction]], size: int) -> list[Fraction]:
    """All size-by-size minors taken from the full set of rows of `matrix`.

    Rows are used in the given order; columns run over all increasing
    column selections.  Requires len(matrix) == size.
    """
    rows = [list(r) for r in matrix]
    if len(rows) != size:
        raise ValueError("row count must equal minor size")
    ncols = len(rows[0])
    out = []
    for cols in itertools.combinations(range(ncols), size):
        sub = [[row[c] for c in cols] for row in rows]
        out.append(det_exact(sub))
    return out
