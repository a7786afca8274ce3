"""Representations of a quiver over F_p and the linear algebra on them.

A representation assigns a vector space F_p^{dim[v]} to each vertex and a
matrix of shape (dim[target], dim[source]) to each arrow. Morphisms are
vertex-indexed matrices satisfying the intertwiner law. Ext^1 is computed
through the Euler form identity (exact for acyclic quivers); extension
classes themselves are only materialized by the closure oracles.

Values are immutable after construction and safe to share.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import NotSinkOrSource
from .fp import PrimeField
from .quiver import Quiver, euler_form, remove_vertex


class Representation:
    """A finite-dimensional representation of a quiver over F_p."""

    __slots__ = ("quiver", "field", "dim", "maps")

    def __init__(self, quiver: Quiver, field: PrimeField, dim, maps) -> None:
        self.quiver = quiver
        self.field = field
        self.dim = tuple(int(d) for d in dim)
        if len(self.dim) != quiver.n:
            raise ValueError("dimension vector length mismatch")
        if any(d < 0 for d in self.dim):
            raise ValueError("negative dimension")
        mats = []
        if len(maps) != len(quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for k, (s, t) in enumerate(quiver.arrows):
            m = field.mat(maps[k], shape=(self.dim[t], self.dim[s]))
            m.setflags(write=False)
            mats.append(m)
        self.maps = tuple(mats)

    @classmethod
    def zero(cls, quiver: Quiver, field: PrimeField) -> "Representation":
        dim = (0,) * quiver.n
        return cls(quiver, field, dim, [field.zeros(0, 0)] * len(quiver.arrows))

    @classmethod
    def simple(cls, quiver: Quiver, field: PrimeField, v: int) -> "Representation":
        dim = tuple(1 if w == v else 0 for w in range(quiver.n))
        maps = [
            field.zeros(dim[t], dim[s]) for s, t in quiver.arrows
        ]
        return cls(quiver, field, dim, maps)

    @property
    def total_dim(self) -> int:
        return sum(self.dim)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.dim) if d > 0)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self) -> str:
        return f"Representation(dim={self.dim}, p={self.field.p})"


class Morphism:
    """A morphism of representations: one matrix per vertex, intertwining."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Representation, target: Representation, comps) -> None:
        if source.quiver != target.quiver:
            raise ValueError("source and target live over different quivers")
        if source.field != target.field:
            raise ValueError("source and target live over different fields")
        self.source = source
        self.target = target
        field = source.field
        mats = []
        for v in range(source.quiver.n):
            m = field.mat(comps[v], shape=(target.dim[v], source.dim[v]))
            m.setflags(write=False)
            mats.append(m)
        self.comps = tuple(mats)
        for k, (s, t) in enumerate(source.quiver.arrows):
            lhs = field.mul(self.comps[t], source.maps[k])
            rhs = field.mul(target.maps[k], self.comps[s])
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"intertwiner law fails at arrow {k}")

    def __repr__(self) -> str:
        return f"Morphism({self.source.dim} -> {self.target.dim})"


def _hom_system(m: Representation, x: Representation) -> tuple[np.ndarray, list[int]]:
    """Linear system whose kernel is Hom(m, x).

    Unknowns are the column-major flattenings of the per-vertex components,
    concatenated vertex by vertex; returns (system matrix, column offsets).
    """
    q = m.quiver
    field = m.field
    sizes = [x.dim[v] * m.dim[v] for v in range(q.n)]
    offs = [0]
    for s in sizes:
        offs.append(offs[-1] + s)
    ncols = offs[-1]
    nrows = sum(x.dim[t] * m.dim[s] for s, t in q.arrows)
    a = field.zeros(nrows, ncols)
    row = 0
    for k, (s, t) in enumerate(q.arrows):
        h = x.dim[t] * m.dim[s]
        if h == 0:
            continue
        if sizes[t]:
            # vec(phi_t . M_a) = (M_a^T (x) I) vec(phi_t)
            a[row : row + h, offs[t] : offs[t] + sizes[t]] += np.kron(
                m.maps[k].T, field.eye(x.dim[t])
            )
        if sizes[s]:
            # vec(X_a . phi_s) = (I (x) X_a) vec(phi_s)
            a[row : row + h, offs[s] : offs[s] + sizes[s]] -= np.kron(
                field.eye(m.dim[s]), x.maps[k]
            )
        row += h
    return a % field.p, offs


def hom_dim(m: Representation, x: Representation) -> int:
    """dim Hom(m, x)."""
    if m.quiver != x.quiver:
        raise ValueError("representations over different quivers")
    a, offs = _hom_system(m, x)
    return offs[-1] - m.field.rank(a)


def hom_basis(m: Representation, x: Representation) -> list[Morphism]:
    """A basis of the morphism space Hom(m, x)."""
    if m.quiver != x.quiver:
        raise ValueError("representations over different quivers")
    field = m.field
    a, offs = _hom_system(m, x)
    basis = field.kernel_basis(a)
    out = []
    for col in range(basis.shape[1]):
        comps = []
        for v in range(m.quiver.n):
            block = basis[offs[v] : offs[v + 1], col]
            comps.append(
                np.reshape(block, (x.dim[v], m.dim[v]), order="F")
            )
        out.append(Morphism(m, x, comps))
    return out


def ext_dim(m: Representation, x: Representation) -> int:
    """dim Ext^1(m, x), via dim Hom - <dim m, dim x> (acyclic quiver)."""
    val = hom_dim(m, x) - euler_form(m.quiver, m.dim, x.dim)
    if val < 0:
        raise AssertionError("negative Ext dimension: quiver not acyclic?")
    return val


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    """(kernel representation, inclusion into the source)."""
    field = f.source.field
    q = f.source.quiver
    bases = [field.kernel_basis(f.comps[v]) for v in range(q.n)]
    dim = [b.shape[1] for b in bases]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        maps.append(field.coords(bases[t], field.mul(f.source.maps[k], bases[s])))
    ker = Representation(q, field, dim, maps)
    return ker, Morphism(ker, f.source, bases)


def image(f: Morphism) -> tuple[Representation, Morphism]:
    """(image representation, inclusion into the target)."""
    field = f.source.field
    q = f.source.quiver
    bases = [field.column_span_basis(f.comps[v]) for v in range(q.n)]
    dim = [b.shape[1] for b in bases]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        maps.append(field.coords(bases[t], field.mul(f.target.maps[k], bases[s])))
    img = Representation(q, field, dim, maps)
    return img, Morphism(img, f.target, bases)


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    """(cokernel representation, projection from the target)."""
    field = f.source.field
    q = f.source.quiver
    projs = []
    for v in range(q.n):
        span = field.column_span_basis(f.comps[v])
        projs.append(field.quotient_projection(span, f.target.dim[v]))
    dim = [pi.shape[0] for pi in projs]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        if dim[s] == 0 or dim[t] == 0:
            maps.append(field.zeros(dim[t], dim[s]))
            continue
        # the induced map is the unique c with c . proj_s = proj_t . X_a
        rho = field.solve(projs[s], field.eye(dim[s]))  # right inverse
        assert rho is not None
        maps.append(field.mul(field.mul(projs[t], f.target.maps[k]), rho))
    cok = Representation(q, field, dim, maps)
    return cok, Morphism(f.target, cok, projs)


def direct_sum(
    quiver: Quiver, field: PrimeField, reps: Sequence[Representation]
) -> Representation:
    """Block-diagonal direct sum; the empty sum is the zero representation."""
    for r in reps:
        if r.quiver != quiver or r.field != field:
            raise ValueError("summand over a different quiver or field")
    dim = [sum(r.dim[v] for r in reps) for v in range(quiver.n)]
    maps = []
    for k, (s, t) in enumerate(quiver.arrows):
        block = field.zeros(dim[t], dim[s])
        ro = co = 0
        for r in reps:
            dt, ds = r.dim[t], r.dim[s]
            block[ro : ro + dt, co : co + ds] = r.maps[k]
            ro += dt
            co += ds
        maps.append(block)
    return Representation(quiver, field, dim, maps)


def trace_in(u: Representation, x: Representation) -> tuple[int, ...]:
    """Per-vertex dimensions of the trace of u in x (sum of all images u -> x)."""
    field = u.field
    basis = hom_basis(u, x)
    dims = []
    for v in range(x.quiver.n):
        if x.dim[v] == 0:
            dims.append(0)
            continue
        mats = [phi.comps[v] for phi in basis]
        stacked = np.hstack(mats) if mats else field.zeros(x.dim[v], 0)
        dims.append(field.rank(stacked))
    return tuple(dims)


def is_in_fac(u: Representation, x: Representation) -> bool:
    """True iff x is a quotient of a finite direct sum of copies of u."""
    return trace_in(u, x) == x.dim


def is_in_sub(u: Representation, x: Representation) -> bool:
    """True iff x embeds into a finite direct sum of copies of u."""
    field = u.field
    basis = hom_basis(x, u)
    for v in range(x.quiver.n):
        if x.dim[v] == 0:
            continue
        mats = [psi.comps[v] for psi in basis]
        stacked = np.vstack(mats) if mats else field.zeros(0, x.dim[v])
        if field.rank(stacked) != x.dim[v]:
            return False
    return True


def _reorder_with(arrows: list[tuple[int, int]], mats: list[np.ndarray]):
    """Sort arrow/matrix pairs the same way Quiver canonicalizes arrows."""
    perm = sorted(range(len(arrows)), key=arrows.__getitem__)
    return [arrows[i] for i in perm], [mats[i] for i in perm]


def restrict_away(m: Representation, v: int) -> Representation:
    """Drop the space at v and all incident maps; a representation of Q_v."""
    q = m.quiver
    q2 = remove_vertex(q, v)

    def renum(w: int) -> int:
        return w if w < v else w - 1

    arrows = []
    mats = []
    for k, (s, t) in enumerate(q.arrows):
        if v in (s, t):
            continue
        arrows.append((renum(s), renum(t)))
        mats.append(m.maps[k])
    arrows, mats = _reorder_with(arrows, mats)
    assert tuple(arrows) == q2.arrows
    dim = tuple(d for w, d in enumerate(m.dim) if w != v)
    return Representation(q2, m.field, dim, mats)


def strip_simple(m: Representation, v: int) -> Representation:
    """Remove all simple-at-v direct summands (v must be a sink or source)."""
    q = m.quiver
    field = m.field
    if q.is_sink(v):
        incoming = q.arrows_into(v)
        mats = [m.maps[k] for k in incoming]
        stacked = np.hstack(mats) if mats else field.zeros(m.dim[v], 0)
        span = field.column_span_basis(stacked)
        new_dim = list(m.dim)
        new_dim[v] = span.shape[1]
        maps = []
        for k, (s, t) in enumerate(q.arrows):
            if t == v:
                maps.append(field.coords(span, m.maps[k]))
            else:
                maps.append(m.maps[k])
        return Representation(q, field, new_dim, maps)
    if q.is_source(v):
        outgoing = q.arrows_out_of(v)
        mats = [m.maps[k] for k in outgoing]
        stacked = np.vstack(mats) if mats else field.zeros(0, m.dim[v])
        ker = field.kernel_basis(stacked)
        comp = field.complement_basis(ker, m.dim[v])
        new_dim = list(m.dim)
        new_dim[v] = comp.shape[1]
        maps = []
        for k, (s, t) in enumerate(q.arrows):
            if s == v:
                maps.append(field.mul(m.maps[k], comp))
            else:
                maps.append(m.maps[k])
        return Representation(q, field, new_dim, maps)
    raise NotSinkOrSource(f"vertex {v} is neither a sink nor a source")
