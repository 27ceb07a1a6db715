"""The dynamical system T(mu) = convolve(mu, nu) for a fixed driving measure.

One orientation is used consistently: T acts by right convolution, i.e.
row-vector multiplication by the transition matrix of nu.  A left-action
convenience (``apply_left``) exists but none of the limit results below
depend on it.

For acyclic nu the orbit of every mu converges; the limit is mu times the
closed-form limit matrix, its fixed points are exactly the solutions of
the Choquet-Deny equation convolve(mu, nu) = mu, and the basin of each
reachable limit is a coset-block-sum constraint system intersected with
the simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DomainError,
    GroupMismatchError,
    ModeMismatchError,
    NotAcyclicError,
    VerificationError,
)
from .groups import CosetDecomposition, coset_decomposition
from .measures import (
    ProbMeasure,
    convolve,
    l1_distance,
    support_orbit,
)
from .rational_linalg import nullspace
from .scalars import EXACT, Scalar
from .transition import transition_matrix

ACCUMULATION_TOL = 1e-10
_SUBSEQ_SETTLE_TOL = 1e-13
_SUBSEQ_MAX_ROUNDS = 10**5


def _require_same_group(a: ProbMeasure, b: ProbMeasure) -> None:
    if a.group != b.group:
        raise GroupMismatchError("measures live on different groups")


def apply_step(nu: ProbMeasure, mu: ProbMeasure) -> ProbMeasure:
    """One step of the dynamics: convolve(mu, nu), linear in mu."""
    return convolve(mu, nu)


def apply_step_left(nu: ProbMeasure, mu: ProbMeasure) -> ProbMeasure:
    """Left-action variant convolve(nu, mu); coincides with apply_step on
    abelian groups, unused by the limit theorems."""
    return convolve(nu, mu)


def orbit(nu: ProbMeasure, mu: ProbMeasure, steps: int) -> list[ProbMeasure]:
    """[mu, T(mu), ..., T^steps(mu)]."""
    if steps < 0:
        raise DomainError("steps must be >= 0")
    _require_same_group(nu, mu)
    out = [mu]
    for _ in range(steps):
        out.append(apply_step(nu, out[-1]))
    return out


def limit_of_powers(nu: ProbMeasure) -> ProbMeasure:
    """Limit of the convolution powers of an acyclic measure: uniform on
    the subgroup generated by the support."""
    so = support_orbit(nu)
    if not so.acyclic:
        raise NotAcyclicError(
            "powers of a non-acyclic measure do not converge; "
            "use accumulation_points instead"
        )
    uniform = ProbMeasure.uniform(nu.group, so.subgroup.members)
    return uniform if nu.mode == EXACT else uniform.to_float()


@dataclass(frozen=True)
class OmegaLimitReport:
    """Accumulation points of an orbit.

    Acyclic driving measure: a single point and period 1.  Otherwise one
    point per support-power cycle set, in cycle order, and ``periodic``
    is set.  ``verified`` records that each claimed point was checked
    against float iteration along its subsequence.
    """

    driving: ProbMeasure
    initial: ProbMeasure
    points: tuple[ProbMeasure, ...]
    periodic: bool
    period: int
    verified: bool


def omega_limit(nu: ProbMeasure, mu: ProbMeasure) -> OmegaLimitReport:
    """The single accumulation point of the orbit of mu under an acyclic nu.

    Equals mu times the closed-form limit matrix; on each left coset gH
    the limit spreads mu's block mass uniformly.
    """
    _require_same_group(nu, mu)
    point = convolve(mu, limit_of_powers(nu))
    return OmegaLimitReport(
        driving=nu, initial=mu, points=(point,), periodic=False, period=1, verified=True
    )


def _uniform_like(nu: ProbMeasure, subset) -> ProbMeasure:
    u = ProbMeasure.uniform(nu.group, subset)
    return u if nu.mode == EXACT else u.to_float()


def accumulation_points(
    nu: ProbMeasure,
    tol: float = ACCUMULATION_TOL,
    max_rounds: int = _SUBSEQ_MAX_ROUNDS,
) -> OmegaLimitReport:
    """All accumulation points of the power sequence nu, nu^2, nu^3, ...

    Acyclic case: the single uniform limit.  Otherwise the support powers
    cycle through d sets K_1..K_d and the claim is one accumulation point
    per set, the uniform measure on K_j.  Because that case rests on a
    sketched argument, every claimed point is verified here by float
    iteration along its subsequence (exponents congruent mod d); a
    mismatch raises :class:`VerificationError` rather than being
    returned.
    """
    so = support_orbit(nu)
    if so.acyclic:
        point = limit_of_powers(nu)
        return OmegaLimitReport(
            driving=nu, initial=nu, points=(point,), periodic=False, period=1, verified=True
        )
    d = so.period
    t = so.pre_period
    claims = tuple(_uniform_like(nu, ks) for ks in so.cycle_sets)

    af = transition_matrix(nu).as_float_array()
    step_d = np.linalg.matrix_power(af, d)
    nu_f = np.array([float(w) for w in nu.weights], dtype=float)
    for j, claim in enumerate(claims):
        # first exponent in this residue class inside the cycle: t + 1 + j
        vec = nu_f @ np.linalg.matrix_power(af, t + j) if t + j > 0 else nu_f.copy()
        rounds = 0
        while True:
            nxt = vec @ step_d
            rounds += 1
            if np.max(np.abs(nxt - vec)) < _SUBSEQ_SETTLE_TOL:
                vec = nxt
                break
            if rounds >= max_rounds:
                raise VerificationError(
                    f"subsequence {j} did not settle within {max_rounds} rounds"
                )
            vec = nxt
        claim_f = np.array([float(w) for w in claim.weights], dtype=float)
        if np.max(np.abs(vec - claim_f)) > tol:
            raise VerificationError(
                f"claimed accumulation point {j} differs from the subsequence "
                f"limit by {np.max(np.abs(vec - claim_f)):.3e} (> {tol})"
            )
    return OmegaLimitReport(
        driving=nu, initial=nu, points=claims, periodic=True, period=d, verified=True
    )


@dataclass(frozen=True)
class FixedPointSet:
    """Solutions of the Choquet-Deny equation convolve(mu, nu) = mu.

    The solution set is the convex hull of the uniform measures on the
    left cosets of H; ``dimension`` is its affine dimension, one less
    than the number of cosets.
    """

    driving: ProbMeasure
    basis: tuple[ProbMeasure, ...]
    dimension: int
    decomposition: CosetDecomposition


def fixed_points(nu: ProbMeasure) -> FixedPointSet:
    """Fixed measures of the dynamics, exactly.

    The basis claim (uniform measure on each left coset of H) is
    cross-checked two ways: each basis element is verified fixed by
    direct convolution, and the full linear system mu (A - I) = 0 is
    solved by rational elimination to confirm the solution-space
    dimension equals the number of cosets.
    """
    if nu.mode != EXACT:
        raise ModeMismatchError("fixed_points requires an exact measure")
    g = nu.group
    so = support_orbit(nu)
    dec = coset_decomposition(g, so.subgroup)
    basis = tuple(ProbMeasure.uniform(g, block) for block in dec.blocks)
    for b in basis:
        if convolve(b, nu).weights != b.weights:
            raise VerificationError("uniform coset measure is unexpectedly not fixed")
    a = transition_matrix(nu).entries
    n = g.order
    # mu (A - I) = 0  <=>  (A - I)^T x = 0
    system = [
        [Fraction(a[i][j]) - (1 if i == j else 0) for i in range(n)] for j in range(n)
    ]
    null_dim = len(nullspace(system))
    if null_dim != len(dec.blocks):
        raise VerificationError(
            f"null space dimension {null_dim} != coset count {len(dec.blocks)}"
        )
    return FixedPointSet(nu, basis, len(dec.blocks) - 1, dec)


def is_recurrent(nu: ProbMeasure, mu: ProbMeasure) -> bool:
    """True when mu is an accumulation point of its own orbit, which for
    acyclic nu happens exactly when mu solves the Choquet-Deny equation of
    the limit measure: convolve(mu, limit_of_powers(nu)) = mu."""
    _require_same_group(nu, mu)
    image = convolve(mu, limit_of_powers(nu))
    if mu.mode == EXACT and image.mode == EXACT:
        return image.weights == mu.weights
    return float(l1_distance(image.to_float(), mu.to_float())) <= 1e-12


@dataclass(frozen=True)
class BasinDescription:
    """The basin of attraction of a limit measure eta.

    A measure converges to eta exactly when its mass on each left coset
    block equals ``required_sums`` for that block; the basin is that
    affine constraint system (dimension n - l) intersected with the
    simplex.  ``feasible`` is False when eta is not constant on each
    coset, in which case its basin is empty and ``witness_block`` names
    an offending coset.
    """

    target: ProbMeasure
    decomposition: CosetDecomposition
    required_sums: tuple[Scalar, ...] | None
    dimension: int
    feasible: bool
    witness_block: int | None = None

    def block_sums(self, mu: ProbMeasure) -> tuple[Scalar, ...]:
        return tuple(
            sum(mu.weights[i] for i in block) for block in self.decomposition.blocks
        )

    def contains(self, mu: ProbMeasure) -> bool:
        if not self.feasible:
            return False
        if mu.group != self.target.group:
            raise GroupMismatchError("candidate lives on a different group")
        sums = self.block_sums(mu)
        if mu.mode == EXACT and self.target.mode == EXACT:
            return all(s == r for s, r in zip(sums, self.required_sums))
        return all(abs(float(s) - float(r)) <= 1e-12 for s, r in zip(sums, self.required_sums))


def basin(nu: ProbMeasure, eta: ProbMeasure) -> BasinDescription:
    """Describe the basin of eta under an acyclic driving measure."""
    _require_same_group(nu, eta)
    so = support_orbit(nu)
    if not so.acyclic:
        raise NotAcyclicError("basins are defined for acyclic driving measures")
    dec = coset_decomposition(nu.group, so.subgroup)
    k = so.subgroup.order
    n = nu.group.order
    l = len(dec.blocks)
    dimension = n - l
    required: list[Scalar] = []
    for m, block in enumerate(dec.blocks):
        values = [eta.weights[i] for i in block]
        if eta.mode == EXACT:
            constant = all(v == values[0] for v in values)
        else:
            constant = max(values) - min(values) <= 1e-12
        if not constant:
            return BasinDescription(eta, dec, None, dimension, False, witness_block=m)
        required.append(k * values[0])
    total = sum(required)
    if eta.mode == EXACT:
        ok = total == 1
    else:
        ok = abs(float(total) - 1.0) <= 1e-12
    if not ok:
        raise VerificationError(f"block sums add to {total}, expected 1")
    return BasinDescription(eta, dec, tuple(required), dimension, True)


def same_omega_limit(nu: ProbMeasure, mu1: ProbMeasure, mu2: ProbMeasure) -> bool:
    """Two orbits share their limit iff the initial measures agree blockwise
    on every left coset of H."""
    _require_same_group(nu, mu1)
    _require_same_group(nu, mu2)
    so = support_orbit(nu)
    if not so.acyclic:
        raise NotAcyclicError("omega limits compare only for acyclic driving measures")
    dec = coset_decomposition(nu.group, so.subgroup)
    for block in dec.blocks:
        s1 = sum(mu1.weights[i] for i in block)
        s2 = sum(mu2.weights[i] for i in block)
        if mu1.mode == EXACT and mu2.mode == EXACT:
            if s1 != s2:
                return False
        elif abs(float(s1) - float(s2)) > 1e-12:
            return False
    return True


def acyclic_perturbation(nu: ProbMeasure, eps: Scalar) -> ProbMeasure:
    """An acyclic measure within l1 distance eps of nu.

    Spreads a small amount of mass from the support onto the rest of
    H = <supp(nu)>: with a the smallest positive weight and
    ebar = min(eps, a)/2, each missing element of H gains
    ebar/(|H| - |supp|) and each support element loses ebar/|supp|.
    The result has support exactly H (hence is acyclic) and distance
    2*ebar <= eps, with equality when eps <= a.  Elements outside H keep
    weight zero; a full-support-on-H measure is returned unchanged.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    so = support_orbit(nu)
    supp = so.sets[0]
    h_members = so.subgroup.member_set()
    if supp == h_members:
        return nu
    exact = nu.mode == EXACT
    if exact:
        eps = Fraction(eps)
    else:
        eps = float(eps)
    a = min(w for w in nu.weights if w > 0)
    ebar = min(eps, a) / 2
    gain = ebar / (len(h_members) - len(supp))
    loss = ebar / len(supp)
    weights = []
    for i, w in enumerate(nu.weights):
        if i in supp:
            weights.append(w - loss)
        elif i in h_members:
            weights.append(w + gain)
        else:
            weights.append(w)
    # ProbMeasure validation fails loudly if this ever left the simplex
    return ProbMeasure(nu.group, tuple(weights))


@dataclass(frozen=True)
class GenericityReport:
    """Whether nu has full support, and if so whether the generic picture
    holds: H = G, acyclicity, a unique fixed point (uniform on G), and
    every sampled orbit limit uniform."""

    measure: ProbMeasure
    full_support: bool
    generates_group: bool | None = None
    acyclic: bool | None = None
    unique_fixed_point_uniform: bool | None = None
    omega_limits_uniform: bool | None = None

    @property
    def generic(self) -> bool:
        return bool(
            self.full_support
            and self.generates_group
            and self.acyclic
            and self.unique_fixed_point_uniform
            and self.omega_limits_uniform
        )


def generic_check(nu: ProbMeasure) -> GenericityReport:
    """Check membership in the open dense set of fully supported measures
    and, for members, verify the generic limit behavior on a deterministic
    sample of initial measures (all point masses and the uniform one)."""
    g = nu.group
    full = len(nu.support()) == g.order
    if not full:
        return GenericityReport(nu, False)
    so = support_orbit(nu)
    generates = so.subgroup.order == g.order
    acyclic = so.acyclic
    uniform = ProbMeasure.uniform(g)
    if nu.mode == EXACT:
        fps = fixed_points(nu)
        unique_uniform = len(fps.basis) == 1 and fps.basis[0].weights == uniform.weights
        samples = [ProbMeasure.point_mass(g, i) for i in range(g.order)]
        samples.append(uniform)
        limits_ok = all(
            omega_limit(nu, mu).points[0].weights == uniform.weights for mu in samples
        )
    else:
        limit = limit_of_powers(nu)
        unique_uniform = float(l1_distance(limit, uniform.to_float())) <= 1e-10
        samples = [ProbMeasure.point_mass(g, i).to_float() for i in range(g.order)]
        samples.append(uniform.to_float())
        limits_ok = all(
            float(l1_distance(omega_limit(nu, mu).points[0], uniform.to_float())) <= 1e-10
            for mu in samples
        )
    return GenericityReport(
        nu,
        True,
        generates_group=generates,
        acyclic=acyclic,
        unique_fixed_point_uniform=unique_uniform,
        omega_limits_uniform=limits_ok,
    )
