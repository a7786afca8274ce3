"""Basic rigid modules: enumeration and the torsion/wide-side constructions.

A basic rigid module is a set of indecomposable indices that is a clique of
the mutually-Ext-free relation. Enumeration is a depth-first extension in
canonical index order with candidate-set pruning; the output order (and
hence every downstream artifact) is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CycleFound, NotRigid
from .indec import IndecTable


@dataclass(frozen=True, order=True)
class RigidModule:
    """A basic rigid module as a sorted set of indec indices."""

    summands: tuple[int, ...]

    @classmethod
    def of(cls, indices: Iterable[int]) -> "RigidModule":
        return cls(tuple(sorted(set(int(i) for i in indices))))

    @property
    def size(self) -> int:
        return len(self.summands)

    def __contains__(self, i: int) -> bool:
        return i in self.summands


def is_rigid_set(t: IndecTable, indices: Iterable[int]) -> bool:
    idx = sorted(set(indices))
    ext = t.ext
    return all(
        ext[i, j] == 0 and ext[j, i] == 0 for i in idx for j in idx if j >= i
    )


def check_rigid(t: IndecTable, indices: Iterable[int]) -> RigidModule:
    u = RigidModule.of(indices)
    if not is_rigid_set(t, u.summands):
        raise NotRigid(f"summand set {u.summands} has a non-zero extension")
    return u


def iter_rigid_sets(t: IndecTable) -> Iterator[tuple[int, ...]]:
    """All mutually-Ext-free index sets, in lexicographic order (incl. ())."""
    m = len(t)
    ext = t.ext
    nbr_gt = [0] * m
    for i in range(m):
        mask = 0
        for j in range(i + 1, m):
            if ext[i, j] == 0 and ext[j, i] == 0:
                mask |= 1 << j
        nbr_gt[i] = mask

    def extend(prefix: tuple[int, ...], cand: int) -> Iterator[tuple[int, ...]]:
        yield prefix
        while cand:
            c = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            yield from extend(prefix + (c,), cand & nbr_gt[c])

    full = (1 << m) - 1
    yield from extend((), full)


def enumerate_rigid(t: IndecTable) -> list[RigidModule]:
    return [RigidModule(s) for s in iter_rigid_sets(t)]


def rigid_profile(t: IndecTable) -> tuple[int, ...]:
    """Counts of basic rigid modules by number of summands, sizes 0..n."""
    counts = [0] * (t.quiver.n + 1)
    for s in iter_rigid_sets(t):
        counts[len(s)] += 1  # sizes beyond n would violate the theory
    return tuple(counts)


def fac_minimal_version(u: RigidModule, t: IndecTable) -> RigidModule:
    """The unique minimal subset of summands whose Fac still covers u.

    Deletes any summand lying in the Fac of the others until stable; the
    result does not depend on deletion order.
    """
    current = list(u.summands)
    changed = True
    while changed:
        changed = False
        for i in list(current):
            rest = [j for j in current if j != i]
            if t.in_fac(rest, i):
                current = rest
                changed = True
                break
    return RigidModule.of(current)


def co_bongartz(u: RigidModule, t: IndecTable) -> RigidModule:
    """The unique basic support tilting module with the same Fac as u."""
    check_rigid(t, u.summands)
    fac = [j for j in range(len(t)) if t.in_fac(u.summands, j)]
    ext = t.ext
    proj = [x for x in fac if all(ext[x, y] == 0 for y in fac)]
    return check_rigid(t, proj)


def is_support_tilting(u: RigidModule, t: IndecTable) -> bool:
    """Rigid with as many summands as vertices in its support."""
    support: set[int] = set()
    for i in u.summands:
        support.update(v for v, d in enumerate(t.dims[i]) if d)
    return len(u.summands) == len(support)


def exceptional_order(u: RigidModule, t: IndecTable) -> tuple[int, ...]:
    """Order the summands so no Hom or Ext points from later to earlier.

    Ties are broken by canonical index order. Raises CycleFound if no such
    order exists (impossible for rigid input).
    """
    nodes = list(u.summands)
    hom, ext = t.hom, t.ext
    succ = {
        a: [
            b
            for b in nodes
            if b != a and (hom[a, b] != 0 or ext[a, b] != 0)
        ]
        for a in nodes
    }
    indeg = {b: 0 for b in nodes}
    for a in nodes:
        for b in succ[a]:
            indeg[b] += 1
    order = []
    ready = sorted(b for b in nodes if indeg[b] == 0)
    while ready:
        a = ready.pop(0)
        order.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
        ready.sort()
    if len(order) != len(nodes):
        raise CycleFound(f"Hom/Ext digraph on {u.summands} has a cycle")
    return tuple(order)
