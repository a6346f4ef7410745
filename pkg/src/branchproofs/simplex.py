"""Exact rational linear programming with verified certificates.

Solves max/min of a linear functional over ``{x : A x <= b}`` in exact
arithmetic and returns one of three fully certified outcomes:

* ``Optimal``    -- optimal value, an optimal point, and dual multipliers
  satisfying strong duality as exact identities;
* ``Infeasible`` -- a Farkas certificate ``lam >= 0`` with ``lam A = 0`` and
  ``lam b < 0``;
* ``Unbounded``  -- a ray ``r`` with ``A r <= 0`` and ``c r > 0``.

Internally the solver runs Bland-rule primal simplex on the LP dual
``min y b  s.t.  y A = c, y >= 0`` whose tableau has only n rows (n = number
of variables), which keeps pivots cheap for the many-row systems produced by
branching paths and accumulated cutting planes.  The tableau is kept integral
("integer pivoting": every entry equals the current basis determinant times
the rational tableau entry), so the inner loop is bignum-integer arithmetic
with no gcd normalization.  Every extracted outcome is re-verified against
the original data by exact arithmetic before it is returned; a failure raises
``SolverError`` instead of returning silently wrong answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from .vectors import Scalar, Vector, format_rational, parse_rational


class DimensionMismatch(ValueError):
    pass


class SolverError(RuntimeError):
    """An extracted outcome failed its exact verification (solver bug)."""


class InequalitySystem:
    """A finite system of linear inequalities ``A x <= b`` over Q^n.

    Immutable; rows are addressable by index.  ``m == 0`` is allowed (the
    whole space), ``n >= 1`` is required.
    """

    __slots__ = ("matrix", "rhs", "n", "_scaled", "_empty")

    def __init__(self, matrix: Iterable, rhs: Iterable[Scalar], n: int | None = None):
        rows = tuple(a if isinstance(a, Vector) else Vector(a) for a in matrix)
        self.rhs: tuple[Fraction, ...] = tuple(Fraction(b) for b in rhs)
        if len(rows) != len(self.rhs):
            raise DimensionMismatch("matrix and rhs row counts differ")
        if rows:
            dims = {len(a) for a in rows}
            if len(dims) != 1:
                raise DimensionMismatch("rows of differing dimension")
            inferred = dims.pop()
            if n is not None and n != inferred:
                raise DimensionMismatch("explicit n disagrees with row dimension")
            n = inferred
        if n is None or n < 1:
            raise ValueError("dimension n >= 1 required (pass n= for empty systems)")
        self.matrix: tuple[Vector, ...] = rows
        self.n = n
        self._scaled = None
        self._empty: bool | None = None

    @property
    def m(self) -> int:
        return len(self.matrix)

    def row(self, i: int) -> tuple[Vector, Fraction]:
        return self.matrix[i], self.rhs[i]

    def rows(self) -> Iterable[tuple[Vector, Fraction]]:
        return zip(self.matrix, self.rhs)

    def with_rows(self, extra: Iterable[tuple]) -> "InequalitySystem":
        extra = list(extra)
        return InequalitySystem(
            self.matrix
            + tuple(a if isinstance(a, Vector) else Vector(a) for a, _ in extra),
            self.rhs + tuple(Fraction(b) for _, b in extra),
            n=self.n,
        )

    def with_equality(self, a: Vector, b: Scalar) -> "InequalitySystem":
        """Append ``a x = b`` as the two opposing inequality rows."""
        return self.with_rows([(a, b), (-a, -Fraction(b))])

    def contains(self, x: Vector) -> bool:
        return all(a.dot(x) <= b for a, b in self.rows())

    @staticmethod
    def box(n: int, lo: Scalar, hi: Scalar) -> "InequalitySystem":
        """The box ``lo <= x_i <= hi`` in R^n."""
        matrix, rhs = [], []
        for i in range(n):
            matrix.append(Vector.unit(n, i))
            rhs.append(Fraction(hi))
            matrix.append(-Vector.unit(n, i))
            rhs.append(-Fraction(lo))
        return InequalitySystem(matrix, rhs, n=n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, InequalitySystem)
            and self.n == other.n
            and self.matrix == other.matrix
            and self.rhs == other.rhs
        )

    def __repr__(self) -> str:
        return f"InequalitySystem(n={self.n}, m={self.m})"

    # text format: line 1 "n m", then m lines "a_1 ... a_n b"

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        for a, b in self.rows():
            lines.append(a.text() + " " + format_rational(b))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "InequalitySystem":
        tokens_by_line = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not tokens_by_line:
            raise ValueError("empty system description")
        header = tokens_by_line[0]
        if len(header) != 2:
            raise ValueError("first line must be 'n m'")
        n, m = int(header[0]), int(header[1])
        body = tokens_by_line[1:]
        if len(body) != m:
            raise ValueError(f"expected {m} rows, found {len(body)}")
        matrix, rhs = [], []
        for tokens in body:
            if len(tokens) != n + 1:
                raise ValueError(f"row needs {n + 1} rationals, found {len(tokens)}")
            values = [parse_rational(t) for t in tokens]
            matrix.append(Vector(values[:n]))
            rhs.append(values[n])
        return InequalitySystem(matrix, rhs, n=n)

    def _scaled_rows(self):
        """Per-row integer scaling of (A, b); cached, rows being immutable."""
        if self._scaled is None:
            mat, rhs, sigmas = [], [], []
            for a, b in self.rows():
                scale = lcm(b.denominator, *(e.denominator for e in a))
                mat.append([int(e * scale) for e in a])
                rhs.append(int(b * scale))
                sigmas.append(scale)
            self._scaled = (mat, rhs, sigmas)
        return self._scaled


@dataclass(frozen=True)
class FarkasCertificate:
    """Nonnegative multipliers proving ``A x <= b`` empty: lam A = 0, lam b < 0."""

    multipliers: Vector

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.multipliers) if v != 0)

    def verify(self, system: InequalitySystem) -> bool:
        lam = self.multipliers
        if len(lam) != system.m or any(v < 0 for v in lam):
            return False
        combo = [Fraction(0)] * system.n
        total = Fraction(0)
        for coeff, (a, b) in zip(lam, system.rows()):
            if coeff:
                for j, e in enumerate(a):
                    combo[j] += coeff * e
                total += coeff * b
        return all(v == 0 for v in combo) and total < 0


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: Vector
    dual: Vector


@dataclass(frozen=True)
class Infeasible:
    certificate: FarkasCertificate


@dataclass(frozen=True)
class Unbounded:
    ray: Vector


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def lp_optimize(system: InequalitySystem, c: Vector, sense: str = "max") -> LpOutcome:
    """Exact optimum of ``c x`` over ``A x <= b``, with certificate.

    For ``sense="min"`` the problem is solved as max of ``-c``; the returned
    duals then satisfy ``dual A = -c`` and ``dual b = -value``.
    """
    if len(c) != system.n:
        raise DimensionMismatch(f"objective has dim {len(c)}, system has n={system.n}")
    if sense == "max":
        return _solve_max(system, c)
    if sense == "min":
        res = _solve_max(system, -c)
        if isinstance(res, Optimal):
            return Optimal(-res.value, res.point, res.dual)
        return res
    raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")


def is_empty(system: InequalitySystem) -> Optional[FarkasCertificate]:
    """A verified Farkas certificate iff the system is empty, else None."""
    if system._empty is False:
        return None
    if system._empty is None and all(b >= 0 for b in system.rhs):
        system._empty = False  # x = 0 is feasible
        return None
    res = _solve_max(system, Vector.zero(system.n))
    if isinstance(res, Infeasible):
        return res.certificate
    return None


def reduce_certificate(
    system: InequalitySystem, cert: FarkasCertificate
) -> FarkasCertificate:
    """Reduce a Farkas certificate to a vertex of the normalized dual cone.

    The result has at most n+1 nonzero multipliers (its support rows carry
    linearly independent ``(a_i, b_i)`` vectors) and still verifies exactly.
    """
    if not cert.verify(system):
        raise ValueError("input is not a valid Farkas certificate for the system")
    slack = -sum(
        (v * b for v, b in zip(cert.multipliers, system.rhs)), Fraction(0)
    )
    lam = [v / slack for v in cert.multipliers]  # normalize to lam b = -1
    while True:
        support = [i for i, v in enumerate(lam) if v != 0]
        columns = [tuple(system.matrix[i]) + (system.rhs[i],) for i in support]
        mu = _kernel_vector(columns)
        if mu is None:
            break
        if all(v <= 0 for v in mu):
            mu = [-v for v in mu]
        step = min(lam[i] / m for i, m in zip(support, mu) if m > 0)
        for i, m in zip(support, mu):
            lam[i] -= step * m
    reduced = FarkasCertificate(Vector(lam))
    if not reduced.verify(system):
        raise SolverError("certificate reduction produced an invalid certificate")
    return reduced


def _kernel_vector(columns: Sequence[tuple]) -> list[Fraction] | None:
    """A nontrivial rational dependency among the given column vectors.

    Returns coefficients x (not all zero) with ``sum x_i col_i = 0``, or None
    if the columns are linearly independent.
    """
    if not columns:
        return None
    height = len(columns[0])
    width = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(width)] for i in range(height)]
    pivot_of_col: dict[int, int] = {}
    rank = 0
    for col in range(width):
        pivot_row = next((r for r in range(rank, height) if rows[r][col] != 0), None)
        if pivot_row is None:
            # free column: express it through the pivot columns found so far
            coeffs = [Fraction(0)] * width
            coeffs[col] = Fraction(-1)
            for c_prev, r_prev in pivot_of_col.items():
                coeffs[c_prev] = rows[r_prev][col] / rows[r_prev][c_prev]
            return coeffs
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        piv = rows[rank][col]
        for r in range(height):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / piv
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[rank])]
        pivot_of_col[col] = rank
        rank += 1
        if rank == height and width > height:
            # remaining columns are all free; take the next one
            col_next = next(c for c in range(width) if c not in pivot_of_col)
            coeffs = [Fraction(0)] * width
            coeffs[col_next] = Fraction(-1)
            for c_prev, r_prev in pivot_of_col.items():
                coeffs[c_prev] = rows[r_prev][col_next] / rows[r_prev][c_prev]
            return coeffs
    return None


# ---------------------------------------------------------------------------
# core solver: integer-pivot primal simplex on the dual tableau
# ---------------------------------------------------------------------------


class _DualTableau:
    """Integer simplex tableau for  max (-b) y  s.t.  A^T y = c, y >= 0.

    Column layout: the m original y columns, then one artificial column per
    equality row, then the right-hand side.  Entries equal ``d`` times the
    rational tableau entry for the (signed) scale factor ``d``; ``d`` starts
    at 1 and becomes the pivot element after each pivot, so every division in
    the update rule is exact.
    """

    def __init__(self, mat: list[list[int]], rhs_c: list[int]):
        self.m = len(mat)  # number of y variables
        n = len(rhs_c)
        self.ncols = self.m + n + 1
        self.rhs_col = self.ncols - 1
        self.tau = [1 if cj >= 0 else -1 for cj in rhs_c]
        self.rows: list[list[int]] = []
        for j in range(n):
            row = [self.tau[j] * mat[i][j] for i in range(self.m)]
            row.extend(1 if k == j else 0 for k in range(n))
            row.append(self.tau[j] * rhs_c[j])
            self.rows.append(row)
        self.obj = [0] * self.ncols
        self.basis = [self.m + j for j in range(n)]
        self.dropped: list[int] = []  # equality rows removed as redundant
        self.d = 1

    def set_objective(self, raw: list[int]) -> None:
        """Install the reduced-cost row for a raw per-column objective."""
        obj = [self.d * raw[col] for col in range(self.ncols - 1)] + [0]
        for row, var in zip(self.rows, self.basis):
            coeff = raw[var]
            if coeff:
                for col in range(self.ncols):
                    obj[col] -= coeff * row[col]
        self.obj = obj

    def objective_value(self) -> Fraction:
        return Fraction(-self.obj[self.rhs_col], self.d)

    def reduced_cost(self, col: int) -> Fraction:
        return Fraction(self.obj[col], self.d)

    def pivot(self, pos: int, col: int) -> None:
        row_r = self.rows[pos]
        p = row_r[col]
        d = self.d
        for idx in range(len(self.rows)):
            if idx == pos:
                continue
            self.rows[idx] = self._update(self.rows[idx], row_r, col, p, d)
        self.obj = self._update(self.obj, row_r, col, p, d)
        self.d = p
        self.basis[pos] = col

    @staticmethod
    def _update(row, row_r, col, p, d):
        factor = row[col]
        if factor:
            return [(p * v - factor * w) // d for v, w in zip(row, row_r)]
        if p != d:
            return [(p * v) // d for v in row]
        return row

    def _entering(self, banned: frozenset[int]) -> int | None:
        sd = 1 if self.d > 0 else -1
        obj = self.obj
        for col in range(self.ncols - 1):
            if obj[col] * sd > 0 and col not in banned:
                return col
        return None

    def _leaving(self, col: int) -> int | None:
        """Bland ratio test; returns a basis position or None (unbounded)."""
        sd = 1 if self.d > 0 else -1
        rhs_col = self.rhs_col
        best_pos = None
        best_ratio = None
        for pos, row in enumerate(self.rows):
            coeff = row[col]
            if coeff * sd <= 0:
                continue
            ratio = Fraction(row[rhs_col], coeff)
            if (
                best_ratio is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.basis[pos] < self.basis[best_pos])
            ):
                best_pos, best_ratio = pos, ratio
        return best_pos

    def run(self, banned: frozenset[int]) -> int | None:
        """Bland-rule simplex; None at optimum, else the unbounded column."""
        while True:
            col = self._entering(banned)
            if col is None:
                return None
            pos = self._leaving(col)
            if pos is None:
                return col
            self.pivot(pos, col)

    def drive_out_artificials(self) -> None:
        """Pivot every basic artificial out; drop rows of redundant equalities.

        Only called when the phase-1 optimum is zero, so every basic artificial
        sits at value 0 and these pivots are degenerate (feasibility kept).
        """
        pos = 0
        while pos < len(self.rows):
            if self.basis[pos] < self.m:
                pos += 1
                continue
            row = self.rows[pos]
            col = next((c for c in range(self.m) if row[c] != 0), None)
            if col is None:
                self.dropped.append(self.basis[pos] - self.m)
                del self.rows[pos]
                del self.basis[pos]
                continue
            self.pivot(pos, col)
            pos += 1

    def basic_values(self) -> dict[int, Fraction]:
        rhs_col = self.rhs_col
        return {
            var: Fraction(row[rhs_col], self.d)
            for row, var in zip(self.rows, self.basis)
        }


def _solve_max(system: InequalitySystem, c: Vector) -> LpOutcome:
    mat, rhs_b, sigmas = system._scaled_rows()
    mu = lcm(*(e.denominator for e in c))
    c_int = [int(e * mu) for e in c]
    m, n = system.m, system.n

    tab = _DualTableau(mat, c_int)
    art0 = tab.m

    # phase 1: maximize minus the sum of artificials
    tab.set_objective([0] * tab.m + [-1] * n)
    if tab.run(banned=frozenset()) is not None:
        raise SolverError("phase 1 objective cannot be unbounded")
    if tab.objective_value() != 0:
        # dual infeasible: the primal is unbounded or empty
        ray = Vector(
            tab.tau[j] * (Fraction(1) + tab.reduced_cost(art0 + j))
            for j in range(n)
        )
        _check_ray(system, c, ray)
        witness = is_empty(system)  # c = 0 never reaches this branch
        if witness is not None:
            return Infeasible(witness)
        return Unbounded(ray)

    tab.drive_out_artificials()

    # phase 2: maximize -(scaled b) y over the feasible dual basis
    tab.set_objective([-v for v in rhs_b] + [0] * n)
    banned = frozenset(range(art0, art0 + n))
    unb_col = tab.run(banned=banned)

    if unb_col is not None:
        # unbounded dual ray == Farkas certificate of primal emptiness
        direction = _ray_direction(tab, unb_col)
        lam = Vector(sigmas[i] * direction.get(i, Fraction(0)) for i in range(m))
        cert = FarkasCertificate(lam)
        if not cert.verify(system):
            raise SolverError("extracted Farkas certificate failed verification")
        system._empty = True
        return Infeasible(cert)

    values = tab.basic_values()
    dropped = set(tab.dropped)
    point = Vector(
        Fraction(0) if j in dropped else tab.tau[j] * tab.reduced_cost(art0 + j)
        for j in range(n)
    )
    dual = Vector(
        Fraction(sigmas[i], mu) * values.get(i, Fraction(0)) for i in range(m)
    )
    value = -tab.objective_value() / mu
    _check_optimal(system, c, value, point, dual)
    system._empty = False
    return Optimal(value, point, dual)


def _ray_direction(tab: _DualTableau, col: int) -> dict[int, Fraction]:
    direction = {col: Fraction(1)}
    for row, var in zip(tab.rows, tab.basis):
        if row[col]:
            direction[var] = Fraction(-row[col], tab.d)
    return direction


def _check_ray(system: InequalitySystem, c: Vector, ray: Vector) -> None:
    if c.dot(ray) <= 0:
        raise SolverError("extracted ray does not improve the objective")
    for a, _ in system.rows():
        if a.dot(ray) > 0:
            raise SolverError("extracted ray leaves the recession cone")


def _check_optimal(system, c, value, point, dual) -> None:
    if c.dot(point) != value:
        raise SolverError("optimal point does not attain the reported value")
    for a, b in system.rows():
        if a.dot(point) > b:
            raise SolverError("optimal point is infeasible")
    if any(v < 0 for v in dual):
        raise SolverError("negative dual multiplier")
    combo = [Fraction(0)] * system.n
    total = Fraction(0)
    for coeff, (a, b) in zip(dual, system.rows()):
        if coeff:
            for j, e in enumerate(a):
                combo[j] += coeff * e
            total += coeff * b
    if any(v != e for v, e in zip(combo, c)):
        raise SolverError("duals do not reproduce the objective")
    if total != value:
        raise SolverError("strong duality violated")
