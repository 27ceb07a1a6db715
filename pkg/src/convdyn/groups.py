"""Finite groups as dense Cayley tables with 0-based element indices.

Element order is significant throughout the package: measures are
index-aligned weight vectors, so a group fixes a canonical ordering of
its elements once and for all.  All types here are immutable.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

from .errors import DomainError, GroupMismatchError, GroupStructureError

DEFAULT_MAX_ORDER = 5040  # |S_7|; every algorithm here is O(n^2)-O(n^3)


def max_group_order() -> int:
    raw = os.environ.get("MAX_GROUP_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"MAX_GROUP_ORDER must be an integer, got {raw!r}") from None


def _check_order(n: int) -> None:
    if n < 1:
        raise DomainError(f"group order must be >= 1, got {n}")
    cap = max_group_order()
    if n > cap:
        raise DomainError(f"group order {n} exceeds cap {cap} (MAX_GROUP_ORDER)")


@dataclass(frozen=True)
class GroupViolation:
    """One violated group axiom with a concrete witness."""

    axiom: str  # "shape" | "latin-square" | "associativity" | "identity" | "inverse"
    witness: tuple[int, ...]
    detail: str

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}


def validate_table(cayley) -> list[GroupViolation]:
    """Check a candidate Cayley table against every group axiom.

    Returns a report of violations, each naming the axiom and a witness;
    an empty report means the table defines a group.  Never raises.
    """
    violations: list[GroupViolation] = []
    n = len(cayley)
    if n == 0:
        return [GroupViolation("shape", (), "table is empty")]
    for i, row in enumerate(cayley):
        if len(row) != n:
            violations.append(
                GroupViolation("shape", (i,), f"row {i} has length {len(row)}, expected {n}")
            )
            return violations
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                violations.append(
                    GroupViolation("shape", (i, j), f"entry [{i}][{j}] = {v!r} is not an index in 0..{n - 1}")
                )
                return violations

    for i in range(n):
        if len(set(cayley[i])) != n:
            violations.append(GroupViolation("latin-square", (i,), f"row {i} repeats an element"))
    for j in range(n):
        col = [cayley[i][j] for i in range(n)]
        if len(set(col)) != n:
            violations.append(GroupViolation("latin-square", (j,), f"column {j} repeats an element"))

    identity = None
    for e in range(n):
        if all(cayley[e][j] == j for j in range(n)) and all(cayley[i][e] == i for i in range(n)):
            identity = e
            break
    if identity is None:
        violations.append(GroupViolation("identity", (), "no two-sided identity element"))
    else:
        for i in range(n):
            if not any(cayley[i][j] == identity and cayley[j][i] == identity for j in range(n)):
                violations.append(
                    GroupViolation("inverse", (i,), f"element {i} has no two-sided inverse")
                )

    for i in range(n):
        for j in range(n):
            ij = cayley[i][j]
            row_j = cayley[j]
            row_i = cayley[i]
            row_ij = cayley[ij]
            for k in range(n):
                if row_ij[k] != row_i[row_j[k]]:
                    violations.append(
                        GroupViolation(
                            "associativity",
                            (i, j, k),
                            f"(g{i}*g{j})*g{k} = g{row_ij[k]} but g{i}*(g{j}*g{k}) = g{row_i[row_j[k]]}",
                        )
                    )
                    return violations  # one associativity witness is enough
    return violations


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group: labels, dense Cayley table, identity and inverse tables.

    ``cayley[i][j]`` is the index of ``g_i * g_j``.  Construct through the
    family builders or :func:`group_from_table`; those guarantee validity.
    """

    labels: tuple[str, ...]
    cayley: tuple[tuple[int, ...], ...]
    identity: int
    inverses: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "cayley", tuple(tuple(row) for row in self.cayley))
        object.__setattr__(self, "inverses", tuple(self.inverses))
        n = len(self.labels)
        if len(self.cayley) != n or any(len(r) != n for r in self.cayley):
            raise GroupStructureError(f"Cayley table shape does not match {n} labels")
        if len(set(self.labels)) != n:
            raise GroupStructureError("labels must be distinct")
        if len(self.inverses) != n or not 0 <= self.identity < n:
            raise GroupStructureError("identity/inverse tables do not match the order")

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, i: int, j: int) -> int:
        return self.cayley[i][j]

    def inv(self, i: int) -> int:
        return self.inverses[i]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"no element labeled {label!r}") from None

    def __repr__(self) -> str:  # keep tables out of reprs
        return f"FiniteGroup(order={self.order}, labels={self.labels[:4]}...)"


def validate_group(g: FiniteGroup) -> list[GroupViolation]:
    """Re-check every invariant of a built group, including the stored
    identity and inverse tables."""
    violations = validate_table(g.cayley)
    n = g.order
    if not any(v.axiom in ("shape", "identity") for v in violations):
        if not (
            all(g.cayley[g.identity][j] == j for j in range(n))
            and all(g.cayley[i][g.identity] == i for i in range(n))
        ):
            violations.append(
                GroupViolation("identity", (g.identity,), "stored identity index is wrong")
            )
        for i in range(n):
            if g.cayley[i][g.inverses[i]] != g.identity or g.cayley[g.inverses[i]][i] != g.identity:
                violations.append(
                    GroupViolation("inverse", (i,), f"stored inverse of {i} is wrong")
                )
    return violations


def _finish(labels, cayley) -> FiniteGroup:
    """Derive identity/inverses for a table known to be a group."""
    n = len(cayley)
    identity = next(
        e
        for e in range(n)
        if all(cayley[e][j] == j for j in range(n)) and all(cayley[i][e] == i for i in range(n))
    )
    inverses = tuple(next(j for j in range(n) if cayley[i][j] == identity) for i in range(n))
    return FiniteGroup(tuple(labels), tuple(tuple(r) for r in cayley), identity, inverses)


def group_from_table(cayley, labels=None) -> FiniteGroup:
    """Build a group from an explicit Cayley table, validating every axiom.

    Raises :class:`GroupStructureError` naming the violated axiom and a
    witness when the table is not a group.
    """
    n = len(cayley)
    _check_order(n)
    violations = validate_table(cayley)
    if violations:
        first = violations[0]
        raise GroupStructureError(
            f"not a group: {first.axiom} violated at {first.witness}: {first.detail}",
            violations,
        )
    if labels is None:
        labels = [f"g{i}" for i in range(n)]
    if len(labels) != n:
        raise GroupStructureError(f"{len(labels)} labels for a table of order {n}")
    return _finish(labels, cayley)


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n with elements labeled '0'..'n-1' and addition mod n."""
    _check_order(n)
    cayley = [[(i + j) % n for j in range(n)] for i in range(n)]
    return _finish([str(i) for i in range(n)], cayley)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n.

    Elements are r^k (index k) and s*r^k (index n+k) with s^2 = e,
    r^n = e and s*r*s = r^-1.
    """
    if n < 1:
        raise DomainError(f"dihedral parameter must be >= 1, got {n}")
    _check_order(2 * n)
    size = 2 * n

    def mul(a: int, b: int) -> int:
        f1, k1 = divmod(a, n)
        f2, k2 = divmod(b, n)
        f = f1 ^ f2
        k = (k2 - k1) % n if f2 else (k1 + k2) % n
        return f * n + k

    cayley = [[mul(a, b) for b in range(size)] for a in range(size)]
    labels = [f"r{k}" for k in range(n)] + [f"sr{k}" for k in range(n)]
    return _finish(labels, cayley)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on {0..n-1}; elements in lexicographic one-line order, n <= 8.

    Product is composition: (sigma * tau)(x) = sigma(tau(x)).
    """
    if not 1 <= n <= 8:
        raise DomainError(f"symmetric group parameter must be in 1..8, got {n}")
    perms = list(itertools.permutations(range(n)))
    _check_order(len(perms))
    index = {p: i for i, p in enumerate(perms)}
    cayley = [
        [index[tuple(p[q[x]] for x in range(n))] for q in perms]
        for p in perms
    ]
    labels = ["".join(str(x) for x in p) for p in perms]
    return _finish(labels, cayley)


def product_group(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Direct product; element (a, b) has index a*|G2| + b and label '(la,lb)'."""
    n1, n2 = g1.order, g2.order
    _check_order(n1 * n2)
    size = n1 * n2

    def mul(x: int, y: int) -> int:
        a1, b1 = divmod(x, n2)
        a2, b2 = divmod(y, n2)
        return g1.cayley[a1][a2] * n2 + g2.cayley[b1][b2]

    cayley = [[mul(x, y) for y in range(size)] for x in range(size)]
    labels = [f"({g1.labels[a]},{g2.labels[b]})" for a in range(n1) for b in range(n2)]
    return _finish(labels, cayley)


def build_group(family: str, *, n: int | None = None, factors=None, cayley=None, labels=None) -> FiniteGroup:
    """Dispatch on a family tag; this is the constructor the JSON loader uses."""
    if family == "cyclic":
        if n is None:
            raise DomainError("cyclic family requires n")
        return cyclic_group(n)
    if family == "dihedral":
        if n is None:
            raise DomainError("dihedral family requires n")
        return dihedral_group(n)
    if family == "symmetric":
        if n is None:
            raise DomainError("symmetric family requires n")
        return symmetric_group(n)
    if family == "product":
        if not factors or len(factors) != 2:
            raise DomainError("product family requires exactly two factors")
        return product_group(factors[0], factors[1])
    if family == "table":
        if cayley is None:
            raise DomainError("table family requires a cayley table")
        return group_from_table(cayley, labels)
    raise DomainError(f"unknown group family {family!r}")


def relabel_group(g: FiniteGroup, order, labels=None) -> FiniteGroup:
    """Return the same group with elements listed in a new order.

    ``order[new_index] = old_index``; labels default to the old labels
    carried along.  Used to realise that results do not depend on how
    the elements are enumerated.
    """
    n = g.order
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise DomainError("relabeling must be a permutation of 0..n-1")
    position = {old: new for new, old in enumerate(order)}
    cayley = [[position[g.cayley[order[i]][order[j]]] for j in range(n)] for i in range(n)]
    if labels is None:
        labels = [g.labels[old] for old in order]
    return _finish(labels, cayley)


def element_order(g: FiniteGroup, i: int) -> int:
    """Multiplicative order of g_i."""
    x = i
    k = 1
    while x != g.identity:
        x = g.cayley[x][i]
        k += 1
    return k


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` as a sorted member tuple plus its generators."""

    parent: FiniteGroup
    members: tuple[int, ...]
    generators: frozenset[int]
    _member_set: frozenset[int] = field(repr=False, compare=False, default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        object.__setattr__(self, "_member_set", frozenset(self.members))

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, index: int) -> bool:
        return index in self._member_set

    def member_set(self) -> frozenset[int]:
        return self._member_set


def generated_subgroup(g: FiniteGroup, gens) -> Subgroup:
    """Smallest subgroup containing ``gens``: closure under products.

    In a finite group the closure of a nonempty set under products alone
    already contains the identity and all inverses, so a work queue over
    right-multiplication by generators terminates in at most |G| rounds.
    """
    gens = frozenset(gens)
    if not gens:
        raise DomainError("generator set must be nonempty")
    n = g.order
    for i in gens:
        if not 0 <= i < n:
            raise DomainError(f"generator index {i} out of range 0..{n - 1}")
    members = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for m in frontier:
            for s in gens:
                p = g.cayley[m][s]
                if p not in members:
                    members.add(p)
                    nxt.append(p)
        frontier = nxt
    return Subgroup(g, tuple(sorted(members)), gens)


def is_subgroup(g: FiniteGroup, members) -> bool:
    """One-step subgroup test on an index set."""
    mset = frozenset(members)
    if not mset or any(not 0 <= i < g.order for i in mset):
        return False
    return all(g.cayley[a][g.inverses[b]] in mset for a in mset for b in mset)


@dataclass(frozen=True)
class CosetDecomposition:
    """Left cosets of a subgroup, with a relabeling that lists them in order.

    ``blocks[m]`` is the sorted index set ``representatives[m] * H``; the
    first representative is the identity.  ``relabeling`` is a permutation
    of 0..n-1 listing the elements block by block, and within block m as
    ``representatives[m] * h`` with h running through the sorted members
    of H.  That within-block order is what makes the diagonal blocks of a
    relabeled transition matrix literally identical.
    """

    subgroup: Subgroup
    representatives: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    relabeling: tuple[int, ...]

    @property
    def group(self) -> FiniteGroup:
        return self.subgroup.parent

    def block_index(self, i: int) -> int:
        """Index of the coset block containing element i."""
        for m, block in enumerate(self.blocks):
            if i in block:
                return m
        raise DomainError(f"element {i} not covered by the decomposition")


def coset_decomposition(g: FiniteGroup, h: Subgroup) -> CosetDecomposition:
    """Decompose G into left cosets of H, representatives by lowest unused index."""
    if h.parent is not g and h.parent != g:
        raise GroupMismatchError("subgroup does not belong to this group")
    if not is_subgroup(g, h.members):
        raise DomainError("member set is not a subgroup")
    n = g.order
    assigned = [False] * n
    representatives: list[int] = []
    blocks: list[tuple[int, ...]] = []
    relabeling: list[int] = []
    # identity first, then lowest unused index
    candidates = [g.identity] + [i for i in range(n) if i != g.identity]
    for rep in candidates:
        if assigned[rep]:
            continue
        ordered = [g.cayley[rep][m] for m in h.members]
        for x in ordered:
            assigned[x] = True
        representatives.append(rep)
        blocks.append(tuple(sorted(ordered)))
        relabeling.extend(ordered)
    return CosetDecomposition(h, tuple(representatives), tuple(blocks), tuple(relabeling))


@dataclass(frozen=True)
class GroupHom:
    """A verified homomorphism: map[i] is the image index of g_i."""

    source: FiniteGroup
    target: FiniteGroup
    map: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.map[i]


def check_homomorphism(src: FiniteGroup, tgt: FiniteGroup, mapping) -> GroupHom:
    """Verify the homomorphism property at every pair; raise with a witness
    pair (i, j) on the first failure."""
    from .errors import HomomorphismError

    mapping = tuple(mapping)
    if len(mapping) != src.order:
        raise DomainError(f"map length {len(mapping)} != |source| = {src.order}")
    for v in mapping:
        if not 0 <= v < tgt.order:
            raise DomainError(f"map value {v} out of range for target of order {tgt.order}")
    for i in range(src.order):
        for j in range(src.order):
            if mapping[src.cayley[i][j]] != tgt.cayley[mapping[i]][mapping[j]]:
                raise HomomorphismError(
                    f"not a homomorphism: fails at pair ({i}, {j})", witness=(i, j)
                )
    if mapping[src.identity] != tgt.identity:
        raise HomomorphismError("map does not send identity to identity", witness=None)
    return GroupHom(src, tgt, mapping)
