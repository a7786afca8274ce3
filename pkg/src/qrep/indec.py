"""The canonical table of indecomposables and exact decomposition.

Indecomposables are constructed by walking an admissible sequence of sinks:
a dimension vector is reflected until it becomes simple at the sink about to
be mutated, and the representation is then rebuilt by inverse reflection
functors. One table per (quiver, prime); the quiver may be a disjoint union
of Dynkin trees (vertex removal produces those), in which case every
connected component must be of ADE type.

Tables are built once and then shared read-only; the per-pair Hom bases and
the rational inverse used by `decompose` are cached lazily.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import cycle

import numpy as np

from .errors import NoSolution, NotASink, NotDynkin
from .fp import DEFAULT_PRIME, PrimeField
from .quiver import (
    Quiver,
    classify,
    euler_form,
    sink_mutation,
    source_mutation,
    topological_order,
)
from .rep import Morphism, Representation, _reorder_with, hom_basis, hom_dim


def reflection_functor(m: Representation, v: int) -> Representation:
    """Apply the sink reflection at v; the result lives over the mutated quiver.

    Replaces the space at v by the kernel of the combined incoming map and
    reverses the incident arrows. Simple-at-v direct summands are killed.
    """
    q = m.quiver
    field = m.field
    if not q.is_sink(v):
        raise NotASink(f"vertex {v} has an outgoing arrow")
    incoming = q.arrows_into(v)
    blocks = [m.maps[k] for k in incoming]
    combined = (
        np.hstack(blocks) if blocks else field.zeros(m.dim[v], 0)
    )
    ker = field.kernel_basis(combined)
    new_dim = list(m.dim)
    new_dim[v] = ker.shape[1]

    arrows: list[tuple[int, int]] = []
    mats: list[np.ndarray] = []
    off = 0
    offsets = {}
    for k in incoming:
        s, _ = q.arrows[k]
        offsets[k] = off
        off += m.dim[s]
    for k, (s, t) in enumerate(q.arrows):
        if t == v:
            # reversed arrow v -> s: project the kernel onto the s block
            arrows.append((v, s))
            mats.append(ker[offsets[k] : offsets[k] + m.dim[s], :])
        else:
            arrows.append((s, t))
            mats.append(m.maps[k])
    arrows, mats = _reorder_with(arrows, mats)
    q2 = sink_mutation(q, v)
    assert tuple(arrows) == q2.arrows
    return Representation(q2, field, new_dim, mats)


def source_reflection(m: Representation, v: int) -> Representation:
    """Inverse reflection at a source v (the quiver gets mutated back).

    Replaces the space at v by the cokernel of the combined outgoing map.
    """
    q = m.quiver
    field = m.field
    if not q.is_source(v):
        raise NotASink(f"vertex {v} has an incoming arrow")
    outgoing = q.arrows_out_of(v)
    blocks = [m.maps[k] for k in outgoing]
    combined = (
        np.vstack(blocks) if blocks else field.zeros(0, m.dim[v])
    )
    total = combined.shape[0]
    span = field.column_span_basis(combined)
    proj = field.quotient_projection(span, total)
    new_dim = list(m.dim)
    new_dim[v] = proj.shape[0]

    arrows: list[tuple[int, int]] = []
    mats: list[np.ndarray] = []
    off = 0
    offsets = {}
    for k in outgoing:
        _, t = q.arrows[k]
        offsets[k] = off
        off += m.dim[t]
    for k, (s, t) in enumerate(q.arrows):
        if s == v:
            # reversed arrow t -> v: include the t block, then project
            arrows.append((t, v))
            incl = field.zeros(total, m.dim[t])
            incl[offsets[k] : offsets[k] + m.dim[t], :] = field.eye(m.dim[t])
            mats.append(field.mul(proj, incl))
        else:
            arrows.append((s, t))
            mats.append(m.maps[k])
    arrows, mats = _reorder_with(arrows, mats)
    q2 = source_mutation(q, v)
    assert tuple(arrows) == q2.arrows
    return Representation(q2, field, new_dim, mats)


@dataclass(frozen=True)
class ModuleClass:
    """Isomorphism class of a module: indec indices with multiplicities."""

    entries: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, mult: dict[int, int]) -> "ModuleClass":
        items = tuple(sorted((int(i), int(m)) for i, m in mult.items() if m))
        if any(m < 0 for _, m in items):
            raise ValueError("negative multiplicity")
        return cls(items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.entries)

    @property
    def size(self) -> int:
        """Number of non-isomorphic indecomposable summands."""
        return len(self.entries)

    def is_basic(self) -> bool:
        return all(m == 1 for _, m in self.entries)


def _component_vertex_sets(q: Quiver) -> list[list[int]]:
    adj: list[set[int]] = [set() for _ in range(q.n)]
    for s, t in q.arrows:
        adj[s].add(t)
        adj[t].add(s)
    seen: set[int] = set()
    comps = []
    for v in range(q.n):
        if v in seen:
            continue
        stack = [v]
        comp = []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _induced_quiver(q: Quiver, vertices: list[int]) -> Quiver:
    index = {v: i for i, v in enumerate(vertices)}
    arrows = tuple(
        (index[s], index[t]) for s, t in q.arrows if s in index and t in index
    )
    return Quiver(len(vertices), arrows)


def _check_dynkin_components(q: Quiver) -> int:
    """Every connected component must be ADE; returns the total root count."""
    total = 0
    for comp in _component_vertex_sets(q):
        total += classify(_induced_quiver(q, comp)).root_count
    return total


def _positive_roots(q: Quiver) -> list[tuple[int, ...]]:
    """All positive roots of the underlying graph, lexicographically sorted."""
    adj: list[list[int]] = [[] for _ in range(q.n)]
    for s, t in q.arrows:
        adj[s].append(t)
        adj[t].append(s)
    roots: set[tuple[int, ...]] = set()
    frontier = [
        tuple(1 if w == v else 0 for w in range(q.n)) for v in range(q.n)
    ]
    roots.update(frontier)
    while frontier:
        nxt = []
        for d in frontier:
            for v in range(q.n):
                refl = list(d)
                refl[v] = sum(d[w] for w in adj[v]) - d[v]
                if refl[v] < 0:
                    continue
                tup = tuple(refl)
                if any(tup) and tup not in roots:
                    roots.add(tup)
                    nxt.append(tup)
        frontier = nxt
    return sorted(roots)


def _admissible_sink_order(q: Quiver) -> list[int]:
    """Vertex order v_1.. such that v_k is a sink after mutating v_1..v_{k-1}."""
    return list(reversed(topological_order(q)))


def _realize_root(
    q: Quiver, field: PrimeField, adm: list[int], root: tuple[int, ...]
) -> Representation:
    """Build the indecomposable with the given dimension vector."""
    adj: list[list[int]] = [[] for _ in range(q.n)]
    for s, t in q.arrows:
        adj[s].append(t)
        adj[t].append(s)
    steps: list[int] = []
    cur_q = q
    r = list(root)
    limit = 64 * max(1, q.n) * max(1, len(adm))
    for v in cycle(adm) if adm else ():
        if sum(r) == r[v] == 1:
            rep = Representation.simple(cur_q, field, v)
            for w in reversed(steps):
                rep = source_reflection(rep, w)
            if rep.dim != root:
                raise AssertionError(f"realized {rep.dim}, wanted {root}")
            return rep
        r[v] = sum(r[w] for w in adj[v]) - r[v]
        if r[v] < 0 or len(steps) > limit:
            raise AssertionError(f"{root} is not a positive root of the quiver")
        steps.append(v)
        cur_q = sink_mutation(cur_q, v)
    raise AssertionError("empty quiver has no roots")


class IndecTable:
    """All indecomposables of a (component-wise) Dynkin quiver over F_p.

    `indecs[i]` realizes the i-th positive root; roots are ordered
    lexicographically by dimension vector, which is field-independent, so
    index i means the same isomorphism class at every prime.
    """

    def __init__(
        self,
        quiver: Quiver,
        field: PrimeField,
        indecs: tuple[Representation, ...],
        hom: np.ndarray,
        ext: np.ndarray,
    ) -> None:
        self.quiver = quiver
        self.field = field
        self.indecs = indecs
        self.dims = tuple(m.dim for m in indecs)
        self.hom = hom
        self.ext = ext
        self.index_by_dim = {d: i for i, d in enumerate(self.dims)}
        self._hom_bases_cache: dict[tuple[int, int], tuple[Morphism, ...]] = {}
        self._hom_inverse: list[list[Fraction]] | None = None

    def __len__(self) -> int:
        return len(self.indecs)

    def simple_index(self, v: int) -> int:
        root = tuple(1 if w == v else 0 for w in range(self.quiver.n))
        return self.index_by_dim[root]

    def hom_bases(self, i: int, j: int) -> tuple[Morphism, ...]:
        key = (i, j)
        got = self._hom_bases_cache.get(key)
        if got is None:
            got = tuple(hom_basis(self.indecs[i], self.indecs[j]))
            assert len(got) == self.hom[i, j]
            self._hom_bases_cache[key] = got
        return got

    # -- membership in Fac / Sub of a summand set ---------------------------

    def in_fac(self, summands, j: int) -> bool:
        """Is indec j a quotient of a direct sum over the summand set?"""
        x = self.indecs[j]
        field = self.field
        summands = sorted(set(summands))
        for v in range(self.quiver.n):
            if x.dim[v] == 0:
                continue
            mats = [
                phi.comps[v] for i in summands for phi in self.hom_bases(i, j)
            ]
            stacked = np.hstack(mats) if mats else field.zeros(x.dim[v], 0)
            if field.rank(stacked) != x.dim[v]:
                return False
        return True

    def in_sub(self, summands, j: int) -> bool:
        """Does indec j embed into a direct sum over the summand set?"""
        x = self.indecs[j]
        field = self.field
        summands = sorted(set(summands))
        for v in range(self.quiver.n):
            if x.dim[v] == 0:
                continue
            mats = [
                psi.comps[v] for i in summands for psi in self.hom_bases(j, i)
            ]
            stacked = np.vstack(mats) if mats else field.zeros(0, x.dim[v])
            if field.rank(stacked) != x.dim[v]:
                return False
        return True

    # -- decomposition -------------------------------------------------------

    def fingerprint(self, m: Representation) -> tuple[int, ...]:
        """dim Hom(indec_i, m) for every i; determines the iso class."""
        return tuple(hom_dim(x, m) for x in self.indecs)

    def _inverse(self) -> list[list[Fraction]]:
        if self._hom_inverse is None:
            self._hom_inverse = _fraction_inverse(self.hom)
        return self._hom_inverse

    def decompose(self, m: Representation) -> ModuleClass:
        """Multiplicities of each indecomposable in m, solved exactly."""
        if m.quiver != self.quiver:
            raise ValueError("representation over a different quiver")
        f = self.fingerprint(m)
        inv = self._inverse()
        mult = {}
        for j in range(len(self)):
            val = sum(inv[j][i] * f[i] for i in range(len(self)))
            if val.denominator != 1 or val < 0:
                raise NoSolution(f"non-integral multiplicity for {m!r}")
            if val:
                mult[j] = int(val)
        # re-check: the fingerprint must be reproduced exactly
        for i in range(len(self)):
            if sum(int(self.hom[i, j]) * c for j, c in mult.items()) != f[i]:
                raise NoSolution(f"fingerprint mismatch for {m!r}")
        return ModuleClass.from_dict(mult)

    def iso(self, m: Representation, x: Representation) -> bool:
        if m.quiver != self.quiver or x.quiver != self.quiver:
            raise ValueError("representation over a different quiver")
        return self.fingerprint(m) == self.fingerprint(x)

    def rep_of_class(self, cls_: ModuleClass) -> Representation:
        """The canonical representation with the given decomposition."""
        from .rep import direct_sum  # local import to keep module load light

        reps = []
        for i, mult in cls_.entries:
            reps.extend([self.indecs[i]] * mult)
        return direct_sum(self.quiver, self.field, reps)

    def __repr__(self) -> str:
        return (
            f"IndecTable(n={self.quiver.n}, indecs={len(self)}, p={self.field.p})"
        )


def _fraction_inverse(mat: np.ndarray) -> list[list[Fraction]]:
    """Exact inverse of an integer matrix by Gauss-Jordan over Q."""
    n = mat.shape[0]
    a = [[Fraction(int(mat[i, j])) for j in range(n)] for i in range(n)]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise NoSolution("hom matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        scale = a[c][c]
        a[c] = [x / scale for x in a[c]]
        inv[c] = [x / scale for x in inv[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    return inv


def build_indec_table(q: Quiver, prime: int = DEFAULT_PRIME) -> IndecTable:
    """Construct the full indecomposable table of a Dynkin-type quiver.

    Accepts disjoint unions of ADE trees; raises NotDynkin otherwise.
    """
    expected = _check_dynkin_components(q) if q.n else 0
    field = PrimeField(prime)
    roots = _positive_roots(q)
    if len(roots) != expected:
        raise AssertionError(
            f"found {len(roots)} positive roots, expected {expected}"
        )
    adm = _admissible_sink_order(q)
    indecs = tuple(_realize_root(q, field, adm, root) for root in roots)

    m = len(indecs)
    hom = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            hom[i, j] = hom_dim(indecs[i], indecs[j])
    dmat = np.array([list(r) for r in roots], dtype=np.int64).reshape(m, q.n)
    cartan = np.eye(q.n, dtype=np.int64)
    for s, t in q.arrows:
        cartan[s, t] -= 1
    gram = dmat @ cartan @ dmat.T
    ext = hom - gram

    if np.any(ext < 0):
        raise AssertionError("negative Ext dimension in table")
    if m and np.any(np.diag(ext) != 0):
        raise NotDynkin("an indecomposable with self-extensions appeared")
    if m and np.any(np.diag(hom) < 1):
        raise AssertionError("hom diagonal below 1")
    if len({tuple(col) for col in hom.T.tolist()}) != m:
        raise AssertionError("indecomposables with equal fingerprints")
    return IndecTable(q, field, indecs, hom, ext)


@lru_cache(maxsize=None)
def indec_table(q: Quiver, prime: int = DEFAULT_PRIME) -> IndecTable:
    """Cached table per (quiver, prime); the table is shared read-only."""
    return build_indec_table(q, prime)


def decompose(m: Representation, t: IndecTable) -> ModuleClass:
    return t.decompose(m)


def iso(m: Representation, x: Representation, t: IndecTable) -> bool:
    return t.iso(m, x)


# -- serialization (CLI table cache) ----------------------------------------


def table_to_json_dict(t: IndecTable) -> dict:
    return {
        "quiver": t.quiver.to_json_dict(),
        "prime": t.field.p,
        "indecs": [
            {
                "dim": list(m.dim),
                "maps": [mat.tolist() for mat in m.maps],
            }
            for m in t.indecs
        ],
        "hom": t.hom.tolist(),
        "ext": t.ext.tolist(),
    }


def table_from_json_dict(data: dict) -> IndecTable:
    q = Quiver.from_json_dict(data["quiver"])
    field = PrimeField(int(data["prime"]))
    indecs = tuple(
        Representation(q, field, entry["dim"], entry["maps"])
        for entry in data["indecs"]
    )
    hom = np.array(data["hom"], dtype=np.int64).reshape(len(indecs), len(indecs))
    ext = np.array(data["ext"], dtype=np.int64).reshape(len(indecs), len(indecs))
    return IndecTable(q, field, indecs, hom, ext)
