"""The matrix form of convolution and its powers.

For a measure nu the transition matrix A has entries

    A[i][j] = nu(g_i^{-1} * g_j)

which is doubly stochastic by construction, and right multiplication by A
is convolution with nu: ``convolve(mu, nu) == mu . A``.  Convolution
powers of nu are therefore rows of powers of A, and the limit of A^m for
an acyclic nu has the closed form: 1/|H| on pairs whose quotient lies in
H, 0 elsewhere, where H is the subgroup generated by the support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetError, ConvergenceError, DomainError, NotAcyclicError
from .groups import CosetDecomposition, FiniteGroup, Subgroup, coset_decomposition
from .measures import ProbMeasure, SupportOrbit, support_orbit
from .scalars import EXACT, Scalar

DEFAULT_BIT_LIMIT = 8_000_000  # ~1 MB of numerator/denominator data per matrix
DEFAULT_POWER_TOL = 1e-12
DEFAULT_MAX_ITER = 2**20


@dataclass(frozen=True)
class TransitionMatrix:
    """The doubly stochastic matrix representing convolution by ``source``."""

    group: FiniteGroup
    source: ProbMeasure
    entries: tuple[tuple[Scalar, ...], ...]

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def mode(self) -> str:
        return self.source.mode

    def as_float_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries], dtype=float)


def transition_matrix(m: ProbMeasure) -> TransitionMatrix:
    g = m.group
    entries = tuple(
        tuple(m.weights[g.cayley[g.inverses[i]][j]] for j in range(g.order))
        for i in range(g.order)
    )
    return TransitionMatrix(g, m, entries)


def _identity_entries(n: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def _matrix_bits(entries) -> int:
    total = 0
    for row in entries:
        for x in row:
            f = Fraction(x)
            total += f.numerator.bit_length() + f.denominator.bit_length()
    return total


def matrix_multiply(a, b):
    """Plain O(n^3) product of two square scalar matrices (tuples of tuples)."""
    n = len(a)
    bt = tuple(zip(*b))  # columns of b
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def matrix_power(a: TransitionMatrix, m: int, bit_limit: int | None = None):
    """A^m by exponentiation by squaring; A^0 is the identity.

    Exact powers can grow; the bit budget (default ~1 MB per matrix)
    aborts pathological blowup with a clear error instead of stalling.
    """
    if m < 0:
        raise DomainError(f"exponent must be >= 0, got {m}")
    limit = DEFAULT_BIT_LIMIT if bit_limit is None else bit_limit
    n = a.order
    if a.mode == EXACT:
        result = _identity_entries(n)
    else:
        result = tuple(tuple(1.0 if i == j else 0.0 for j in range(n)) for i in range(n))
    base = a.entries
    e = m
    while e:
        if e & 1:
            result = matrix_multiply(result, base)
            if a.mode == EXACT and _matrix_bits(result) > limit:
                raise BudgetError(f"exact matrix power exceeded the {limit}-bit budget")
        e >>= 1
        if e:
            base = matrix_multiply(base, base)
            if a.mode == EXACT and _matrix_bits(base) > limit:
                raise BudgetError(f"exact matrix power exceeded the {limit}-bit budget")
    return result


def measure_times_matrix(m: ProbMeasure, entries) -> ProbMeasure:
    """Row vector times matrix, returned as a measure on the same group."""
    n = m.group.order
    acc = [sum(m.weights[i] * entries[i][k] for i in range(n)) for k in range(n)]
    return ProbMeasure(m.group, tuple(acc))


def convolution_power(m: ProbMeasure, n: int, bit_limit: int | None = None) -> ProbMeasure:
    """The n-fold convolution power; n = 0 gives the point mass at the identity."""
    if n < 0:
        raise DomainError(f"power must be >= 0, got {n}")
    if n == 0:
        e = ProbMeasure.point_mass(m.group, m.group.identity)
        return e if m.mode == EXACT else e.to_float()
    if n == 1:
        return m
    a = transition_matrix(m)
    return measure_times_matrix(m, matrix_power(a, n - 1, bit_limit))


@dataclass(frozen=True)
class PowerIterationResult:
    """Outcome of float power iteration on a transition matrix.

    Either the powers stabilised (``converged`` with the limit matrix and
    the number of multiplications used) or they settled into oscillation
    with the reported period (``converged`` False, ``period`` set).
    """

    converged: bool
    matrix: tuple[tuple[float, ...], ...] | None
    iterations: int
    period: int | None = None


def power_convergence(
    a: TransitionMatrix,
    tol: float = DEFAULT_POWER_TOL,
    max_iter: int | None = None,
    orbit: SupportOrbit | None = None,
) -> PowerIterationResult:
    """Iterate A, A^2, A^3, ... in floats until successive powers agree.

    Convergence means max-entry distance below ``tol``.  When the driving
    measure is not acyclic the powers cannot converge; the support-power
    period d is then used to detect stable oscillation (A^m close to
    A^{m+d} over a full cycle) and report it instead of spinning until
    ``max_iter``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    limit = DEFAULT_MAX_ITER if max_iter is None else max_iter
    if orbit is None:
        orbit = support_orbit(a.source)
    d = orbit.period
    af = a.as_float_array()
    current = af.copy()
    history: list[np.ndarray] = [current]  # last d+1 powers
    oscillating_run = 0
    for k in range(1, limit + 1):
        nxt = current @ af
        if np.max(np.abs(nxt - current)) < tol:
            return PowerIterationResult(
                converged=True,
                matrix=tuple(tuple(float(x) for x in row) for row in nxt),
                iterations=k,
            )
        if d > 1:
            if len(history) > d:
                if np.max(np.abs(nxt - history[-d])) < tol:
                    oscillating_run += 1
                    if oscillating_run >= d:
                        return PowerIterationResult(
                            converged=False, matrix=None, iterations=k, period=d
                        )
                else:
                    oscillating_run = 0
            history.append(nxt)
            if len(history) > d + 1:
                history.pop(0)
        current = nxt
    raise ConvergenceError(
        f"no convergence or stable period after {limit} multiplications (tol={tol})"
    )


@dataclass(frozen=True)
class LimitMatrix:
    """Closed-form limit of the powers of a transition matrix (acyclic case)."""

    group: FiniteGroup
    subgroup: Subgroup
    entries: tuple[tuple[Fraction, ...], ...]
    block_value: Fraction


def limit_matrix_closed_form(m: ProbMeasure) -> LimitMatrix:
    """The limit B with B[i][j] = 1/|H| when g_i^{-1} g_j is in H, else 0."""
    orbit = support_orbit(m)
    if not orbit.acyclic:
        raise NotAcyclicError(
            "measure is not acyclic; the powers do not converge "
            "(use accumulation_points for the oscillating family)"
        )
    g = m.group
    h = orbit.subgroup
    value = Fraction(1, h.order)
    entries = tuple(
        tuple(
            value if g.cayley[g.inverses[i]][j] in h else Fraction(0)
            for j in range(g.order)
        )
        for i in range(g.order)
    )
    return LimitMatrix(g, h, entries, value)


@dataclass(frozen=True)
class BlockStructureReport:
    """Result of checking the coset block structure of a transition matrix."""

    decomposition: CosetDecomposition
    ok: bool
    violations: tuple[tuple[str, int, int], ...]  # (kind, row, col) in original indices
    diagonal_block: tuple[tuple[Scalar, ...], ...]


def verify_block_structure(m: ProbMeasure) -> BlockStructureReport:
    """Under the coset relabeling, off-diagonal coset blocks of A must be
    zero and every diagonal block must equal the restricted matrix on H."""
    g = m.group
    a = transition_matrix(m).entries
    orbit = support_orbit(m)
    dec = coset_decomposition(g, orbit.subgroup)
    sigma = dec.relabeling
    k = orbit.subgroup.order
    l = len(dec.blocks)
    diag = tuple(tuple(a[sigma[r]][sigma[c]] for c in range(k)) for r in range(k))
    violations: list[tuple[str, int, int]] = []
    for bm in range(l):
        for bp in range(l):
            for r in range(k):
                for c in range(k):
                    i = sigma[bm * k + r]
                    j = sigma[bp * k + c]
                    if bm == bp:
                        if a[i][j] != diag[r][c]:
                            violations.append(("diagonal-mismatch", i, j))
                    elif a[i][j] != 0:
                        violations.append(("off-diagonal-nonzero", i, j))
    return BlockStructureReport(dec, not violations, tuple(violations), diag)


def is_primitive_restricted(m: ProbMeasure) -> tuple[bool, int | None]:
    """Primitivity of the restriction of A to H = <supp>.

    Tests by boolean matrix powering up to the Wielandt bound
    (k-1)^2 + 1 for a k x k nonnegative matrix; returns the smallest
    exponent whose power is entrywise positive, or (False, None).
    """
    g = m.group
    supp = m.support()
    if not supp:
        raise DomainError("measure has empty support")
    from .groups import generated_subgroup

    h = generated_subgroup(g, supp)
    members = h.members
    k = len(members)
    block = np.array(
        [[g.cayley[g.inverses[hi]][hj] in supp for hj in members] for hi in members],
        dtype=np.int64,
    )
    bound = (k - 1) ** 2 + 1
    power = block
    for exponent in range(1, bound + 1):
        if (power > 0).all():
            return True, exponent
        power = (power @ block > 0).astype(np.int64)
    return False, None
