"""Subcategories as index sets, the torsion/wide projections, and oracles.

A subcategory is the additive closure of a set of indecomposable indices; a
module belongs iff all of its indecomposable summands do. The primary
membership algorithm for the cokernel category of a rigid module is
Fac intersected with the wide envelope; brute-force closure oracles are kept
as an independent check and never feed the primary algorithms.

Oracle searches are bounded. A blown budget is a third truth value,
reported as such, never as a counterexample or as a pass. The per-object
submodule/quotient spectra only depend on (quiver, prime), so they are
computed once and shared across all subcategories.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from itertools import combinations_with_replacement
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetExceeded, NotRigid
from .fp import iter_coefficient_vectors
from .indec import IndecTable, ModuleClass, indec_table
from .quiver import topological_order
from .rep import Morphism, Representation, cokernel, direct_sum, hom_basis, hom_dim, kernel
from .rigid import RigidModule, check_rigid, fac_minimal_version

DEFAULT_MAP_BUDGET = 100_000


@dataclass(frozen=True)
class Subcat:
    """Additive closure of a set of indecomposables, canonically sorted."""

    members: tuple[int, ...]

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Subcat":
        return cls(tuple(sorted(set(int(i) for i in indices))))

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __len__(self) -> int:
        return len(self.members)

    def issubset(self, other: "Subcat") -> bool:
        return set(self.members) <= set(other.members)


def _summand_indices(u) -> tuple[int, ...]:
    if isinstance(u, RigidModule):
        return u.summands
    if isinstance(u, Subcat):
        return u.members
    return tuple(sorted(set(int(i) for i in u)))


def fac_closure(u, t: IndecTable) -> Subcat:
    """All indecomposables that are quotients of sums over the given set."""
    s = _summand_indices(u)
    return Subcat.of(j for j in range(len(t)) if t.in_fac(s, j))


def sub_closure(u, t: IndecTable) -> Subcat:
    """All indecomposables embedding into sums over the given set."""
    s = _summand_indices(u)
    return Subcat.of(j for j in range(len(t)) if t.in_sub(s, j))


def right_perp(u, t: IndecTable) -> Subcat:
    """Indecomposables x with Hom(u, x) = 0 = Ext(u, x) for all members."""
    s = _summand_indices(u)
    return Subcat.of(
        j
        for j in range(len(t))
        if all(t.hom[i, j] == 0 and t.ext[i, j] == 0 for i in s)
    )


def left_perp(u, t: IndecTable) -> Subcat:
    """Indecomposables x with Hom(x, u) = 0 = Ext(x, u) for all members."""
    s = _summand_indices(u)
    return Subcat.of(
        j
        for j in range(len(t))
        if all(t.hom[j, i] == 0 and t.ext[j, i] == 0 for i in s)
    )


def wide_envelope(u, t: IndecTable) -> Subcat:
    """Smallest wide subcategory containing the rigid module u."""
    s = _summand_indices(u)
    check_rigid(t, s)
    return left_perp(right_perp(s, t).members, t)


def cok(u, t: IndecTable) -> Subcat:
    """The cokernel category of a rigid module u.

    Membership is Fac(u) intersected with the wide envelope of u; the
    two-term presentation search is a separate, independent oracle.
    """
    s = _summand_indices(u)
    check_rigid(t, s)
    fac = fac_closure(s, t)
    env = set(wide_envelope(s, t).members)
    return Subcat.of(j for j in fac.members if j in env)


def ext_projectives(c: Subcat, t: IndecTable) -> Subcat:
    """Members with no extensions into any member."""
    mem = c.members
    return Subcat.of(
        x for x in mem if all(t.ext[x, y] == 0 for y in mem)
    )


def progenerator(c: Subcat, t: IndecTable) -> RigidModule:
    """The basic module of all Ext-projective members.

    Raises NotRigid when that set is not Ext-free, which signals that c was
    not extension-closed in the first place.
    """
    return check_rigid(t, ext_projectives(c, t).members)


def has_enough_ext_projectives(c: Subcat, t: IndecTable) -> bool:
    return cok(progenerator(c, t), t) == c


def torsion_closure(c: Subcat, t: IndecTable) -> Subcat:
    """Smallest torsion class containing c (= Fac c for extension-closed c)."""
    return fac_closure(c.members, t)


def wide_part(c: Subcat, t: IndecTable) -> Subcat:
    """Largest wide subcategory of the kernels-stay-inside kind.

    Computed through the Fac-minimal version of the progenerator; the raw
    kernel-quantification definition is checked against this by
    `wide_part_raw` on small ranks.
    """
    u0 = fac_minimal_version(progenerator(c, t), t)
    return cok(u0, t)


def split_projectives(c: Subcat, t: IndecTable) -> Subcat:
    """Members onto which every surjection from c splits."""
    u0 = fac_minimal_version(progenerator(c, t), t)
    return Subcat.of(u0.summands)


def all_ice(t: IndecTable) -> list[tuple[RigidModule, Subcat]]:
    """Every (rigid module, its cokernel category) pair, canonically ordered."""
    from .rigid import enumerate_rigid

    return [(u, cok(u, t)) for u in enumerate_rigid(t)]


# ---------------------------------------------------------------------------
# submodule enumeration
# ---------------------------------------------------------------------------


def iter_submodule_bases(rep: Representation) -> Iterator[dict[int, np.ndarray]]:
    """All submodules of rep, as per-vertex column bases.

    Vertices are processed in topological order, so at each vertex only the
    subspaces containing the forced image of the already-chosen part are
    enumerated.
    """
    q = rep.quiver
    fld = rep.field
    order = topological_order(q)
    incoming = {
        v: [(k, s) for k, (s, t2) in enumerate(q.arrows) if t2 == v]
        for v in order
    }
    chosen: dict[int, np.ndarray] = {}

    def rec(i: int) -> Iterator[dict[int, np.ndarray]]:
        if i == len(order):
            yield dict(chosen)
            return
        v = order[i]
        nv = rep.dim[v]
        forced = fld.subspace_sum(
            [fld.mul(rep.maps[k], chosen[s]) for k, s in incoming[v]], nv
        )
        r = forced.shape[1]
        if r == 0:
            for w in fld.iter_subspaces(nv):
                chosen[v] = w
                yield from rec(i + 1)
        else:
            pi = fld.quotient_projection(forced, nv)
            rho = fld.solve(pi, fld.eye(nv - r))
            assert rho is not None
            for w in fld.iter_subspaces(nv - r):
                lift = fld.mul(rho, w)
                chosen[v] = fld.column_span_basis(np.hstack([forced, lift]))
                yield from rec(i + 1)
        chosen.pop(v, None)

    yield from rec(0)


def subrep_of_bases(
    rep: Representation, bases: dict[int, np.ndarray]
) -> tuple[Representation, Morphism]:
    """(submodule representation, inclusion) from per-vertex bases."""
    q = rep.quiver
    fld = rep.field
    blist = [bases[v] for v in range(q.n)]
    dim = [b.shape[1] for b in blist]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        maps.append(fld.coords(blist[t], fld.mul(rep.maps[k], blist[s])))
    sub = Representation(q, fld, dim, maps)
    return sub, Morphism(sub, rep, blist)


def iter_subquotients(
    rep: Representation,
) -> Iterator[tuple[Representation, Representation]]:
    """All (submodule, quotient) pairs of rep."""
    for bases in iter_submodule_bases(rep):
        sub, incl = subrep_of_bases(rep, bases)
        quot, _ = cokernel(incl)
        yield sub, quot


# ---------------------------------------------------------------------------
# subquotient spectra, shared across subcategories
# ---------------------------------------------------------------------------

_Pair = tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]


class _SpectrumCache:
    """Per-(quiver, prime): what (sub, quotient) iso-pairs each object has."""

    def __init__(self, table: IndecTable, map_budget: int) -> None:
        self.table = table
        self.map_budget = map_budget
        self.entries: dict[tuple[int, ...], tuple[str, object]] = {}

    def _estimate(self, dim: tuple[int, ...]) -> int:
        est = 1
        for d in dim:
            est *= self.table.field.count_subspaces(d)
            if est > self.map_budget:
                return est
        return est

    def get(self, shape: tuple[int, ...]) -> tuple[str, object]:
        got = self.entries.get(shape)
        if got is not None:
            return got
        t = self.table
        rep = direct_sum(t.quiver, t.field, [t.indecs[i] for i in shape])
        est = self._estimate(rep.dim)
        if est > self.map_budget:
            result: tuple[str, object] = ("skipped", est)
        else:
            pairs: set[_Pair] = set()
            for sub, quot in iter_subquotients(rep):
                pairs.add((t.decompose(sub).entries, t.decompose(quot).entries))
            result = ("ok", tuple(sorted(pairs)))
        self.entries[shape] = result
        return result


_spectrum_caches: dict[tuple, _SpectrumCache] = {}


def _spectrum_cache(quiver, prime: int, map_budget: int) -> _SpectrumCache:
    key = (quiver, prime, map_budget)
    cache = _spectrum_caches.get(key)
    if cache is None:
        cache = _SpectrumCache(indec_table(quiver, prime), map_budget)
        _spectrum_caches[key] = cache
    return cache


# ---------------------------------------------------------------------------
# closure oracles
# ---------------------------------------------------------------------------


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class PropertyResult:
    verdict: Verdict = Verdict.TRUE
    checked: int = 0
    skipped: int = 0
    counterexample: str | None = None

    def record_skip(self) -> None:
        self.skipped += 1
        if self.verdict is Verdict.TRUE:
            self.verdict = Verdict.BUDGET_EXCEEDED

    def record_fail(self, description: str) -> None:
        if self.verdict is not Verdict.FALSE:
            self.verdict = Verdict.FALSE
            self.counterexample = description


_PROPERTIES = ("extensions", "images", "cokernels", "quotients", "kernels", "epi_kernels")


@dataclass
class OracleReport:
    prime: int
    mult_bound: int
    map_budget: int
    extensions: PropertyResult = dc_field(default_factory=PropertyResult)
    images: PropertyResult = dc_field(default_factory=PropertyResult)
    cokernels: PropertyResult = dc_field(default_factory=PropertyResult)
    quotients: PropertyResult = dc_field(default_factory=PropertyResult)
    kernels: PropertyResult = dc_field(default_factory=PropertyResult)
    epi_kernels: PropertyResult = dc_field(default_factory=PropertyResult)

    def result(self, name: str) -> PropertyResult:
        return getattr(self, name)

    def verdicts(self) -> dict[str, Verdict]:
        return {name: self.result(name).verdict for name in _PROPERTIES}

    def budget_fraction(self) -> float:
        checked = sum(self.result(n).checked for n in _PROPERTIES)
        skipped = sum(self.result(n).skipped for n in _PROPERTIES)
        total = checked + skipped
        return skipped / total if total else 0.0

    def as_dict(self) -> dict:
        out = {
            "prime": self.prime,
            "mult_bound": self.mult_bound,
            "map_budget": self.map_budget,
        }
        for name in _PROPERTIES:
            res = self.result(name)
            entry = {
                "verdict": res.verdict.value,
                "checked": res.checked,
                "skipped": res.skipped,
            }
            if res.counterexample:
                entry["counterexample"] = res.counterexample
            out[name] = entry
        return out


def _member_shapes(members: tuple[int, ...], mult_bound: int):
    for k in range(1, mult_bound + 1):
        yield from combinations_with_replacement(members, k)


def closure_oracles(
    c: Subcat,
    t: IndecTable,
    prime: int = 2,
    mult_bound: int = 2,
    map_budget: int = DEFAULT_MAP_BUDGET,
) -> OracleReport:
    """Brute-force closure verdicts for the additive closure of c.

    Objects searched are direct sums of members with at most `mult_bound`
    summands counted with multiplicity. Images, cokernels, quotients,
    kernels and epi-kernels all reduce to (submodule, quotient) pairs of
    those objects; extensions enumerate every class between member pairs
    elementwise. True means: no counterexample in the completed bounded
    search. A skipped search site yields BUDGET_EXCEEDED, never false.
    """
    tp = indec_table(t.quiver, prime)
    members = set(c.members)
    fac_cl = set(fac_closure(c.members, tp).members)
    sub_cl = set(sub_closure(c.members, tp).members)
    spectrum = _spectrum_cache(t.quiver, prime, map_budget)
    report = OracleReport(prime=prime, mult_bound=mult_bound, map_budget=map_budget)
    sub_props = ("images", "cokernels", "quotients", "kernels", "epi_kernels")

    for shape in _member_shapes(tuple(sorted(members)), mult_bound):
        status, payload = spectrum.get(shape)
        if status == "skipped":
            for name in sub_props:
                report.result(name).record_skip()
            continue
        for name in sub_props:
            report.result(name).checked += 1
        for s_items, q_items in payload:  # type: ignore[union-attr]
            s_sup = {i for i, _ in s_items}
            q_sup = {i for i, _ in q_items}
            s_in = s_sup <= members
            q_in = q_sup <= members
            desc = f"object={shape} sub={s_items} quot={q_items}"
            if not q_in:
                report.quotients.record_fail(desc)
            if s_sup <= fac_cl:
                if not s_in:
                    report.images.record_fail(desc)
                if not q_in:
                    report.cokernels.record_fail(desc)
            if q_sup <= sub_cl and not s_in:
                report.kernels.record_fail(desc)
            if q_in and not s_in:
                report.epi_kernels.record_fail(desc)

    ordered = tuple(sorted(members))
    for n_idx in ordered:
        for l_idx in ordered:
            d = int(tp.ext[n_idx, l_idx])
            if prime**d > map_budget:
                report.extensions.record_skip()
                continue
            report.extensions.checked += 1
            for middle in _extension_middles(tp, n_idx, l_idx):
                mc = tp.decompose(middle)
                if not mc.support <= members:
                    report.extensions.record_fail(
                        f"Ext({n_idx},{l_idx}) middle={mc.entries}"
                    )
                    break
            if report.extensions.verdict is Verdict.FALSE:
                break
        if report.extensions.verdict is Verdict.FALSE:
            break
    return report


def _extension_middles(
    tp: IndecTable, n_idx: int, l_idx: int
) -> Iterator[Representation]:
    """Middle terms of every extension class of N by L, one per class."""
    n_rep = tp.indecs[n_idx]
    l_rep = tp.indecs[l_idx]
    fld = tp.field
    q = tp.quiver
    sizes0 = [l_rep.dim[v] * n_rep.dim[v] for v in range(q.n)]
    offs0 = [0]
    for s in sizes0:
        offs0.append(offs0[-1] + s)
    sizes1 = [l_rep.dim[t] * n_rep.dim[s] for s, t in q.arrows]
    offs1 = [0]
    for s in sizes1:
        offs1.append(offs1[-1] + s)
    delta = fld.zeros(offs1[-1], offs0[-1])
    for k, (s, t) in enumerate(q.arrows):
        if sizes1[k] == 0:
            continue
        if sizes0[s]:
            delta[offs1[k] : offs1[k + 1], offs0[s] : offs0[s + 1]] += np.kron(
                fld.eye(n_rep.dim[s]), l_rep.maps[k]
            )
        if sizes0[t]:
            delta[offs1[k] : offs1[k + 1], offs0[t] : offs0[t + 1]] -= np.kron(
                n_rep.maps[k].T, fld.eye(l_rep.dim[t])
            )
    delta %= fld.p
    span = fld.column_span_basis(delta)
    comp = fld.complement_basis(span, offs1[-1])
    assert comp.shape[1] == tp.ext[n_idx, l_idx]
    dim = [l_rep.dim[v] + n_rep.dim[v] for v in range(q.n)]
    for coeffs in iter_coefficient_vectors(fld.p, comp.shape[1]):
        zeta = (comp @ np.array(coeffs, dtype=np.int64)) % fld.p
        maps = []
        for k, (s, t) in enumerate(q.arrows):
            block = fld.zeros(dim[t], dim[s])
            lt, ls = l_rep.dim[t], l_rep.dim[s]
            block[:lt, :ls] = l_rep.maps[k]
            block[lt:, ls:] = n_rep.maps[k]
            if sizes1[k]:
                block[:lt, ls:] = np.reshape(
                    zeta[offs1[k] : offs1[k + 1]],
                    (lt, n_rep.dim[s]),
                    order="F",
                )
            maps.append(block)
        yield Representation(q, fld, dim, maps)


# ---------------------------------------------------------------------------
# two-term presentation oracle
# ---------------------------------------------------------------------------


def _nonneg_combination(target: tuple[int, ...], vecs: list[tuple[int, ...]]) -> bool:
    """Is target a nonnegative integer combination of vecs?"""
    if all(x == 0 for x in target):
        return True
    if not vecs:
        return False
    head, rest = vecs[0], vecs[1:]
    bound = min(
        (t // h for t, h in zip(target, head) if h),
        default=0,
    )
    for c in range(bound + 1):
        reduced = tuple(t - c * h for t, h in zip(target, head))
        if min(reduced) < 0:
            break
        if _nonneg_combination(reduced, rest):
            return True
    return False


def has_two_term_presentation(
    u: RigidModule,
    x_idx: int,
    t: IndecTable,
    prime: int = 2,
    map_budget: int = 4096,
) -> bool:
    """Does some surjection from the Hom-counted sum of u onto x have its
    kernel inside add u?

    The covering object is fixed as the direct sum of each summand taken
    dim Hom(summand, x) times; the map ranges over the whole Hom space.
    Raises BudgetExceeded when that space is too large to sweep.
    """
    tp = indec_table(t.quiver, prime)
    check_rigid(tp, u.summands)
    x = tp.indecs[x_idx]
    mults = [(i, int(tp.hom[i, x_idx])) for i in u.summands]
    if sum(m for _, m in mults) == 0:
        return x.total_dim == 0
    if not tp.in_fac(u.summands, x_idx):
        return False
    u0_parts: list[Representation] = []
    for i, m in mults:
        u0_parts.extend([tp.indecs[i]] * m)
    u0 = direct_sum(tp.quiver, tp.field, u0_parts)
    kdim = tuple(a - b for a, b in zip(u0.dim, x.dim))
    if min(kdim) < 0 or not _nonneg_combination(
        kdim, [tp.dims[i] for i in u.summands]
    ):
        return False

    basis = hom_basis(u0, x)
    h = len(basis)
    if prime**h > map_budget:
        raise BudgetExceeded(
            f"hom space of dimension {h} over F_{prime} exceeds budget"
        )
    fld = tp.field
    stacks = [
        np.stack([phi.comps[v] for phi in basis])
        if h
        else np.zeros((0, x.dim[v], u0.dim[v]), dtype=np.int64)
        for v in range(tp.quiver.n)
    ]
    allowed = set(u.summands)
    for coeffs in iter_coefficient_vectors(prime, h):
        cvec = np.array(coeffs, dtype=np.int64)
        comps = [
            np.tensordot(cvec, stacks[v], axes=1) % fld.p
            if h
            else fld.zeros(x.dim[v], u0.dim[v])
            for v in range(tp.quiver.n)
        ]
        if any(
            fld.rank(comps[v]) != x.dim[v] for v in range(tp.quiver.n)
        ):
            continue
        ker, _ = kernel(Morphism(u0, x, comps))
        if tp.decompose(ker).support <= allowed:
            return True
    return False


# ---------------------------------------------------------------------------
# the raw kernel-quantification form of the wide part (bounded oracle)
# ---------------------------------------------------------------------------


def _embeds_in_single(
    tp: IndecTable, items: tuple[tuple[int, int], ...], w_idx: int, map_budget: int
) -> bool:
    """Does the module with the given decomposition embed into indec w?"""
    x = tp.rep_of_class(ModuleClass(items))
    if x.total_dim == 0:
        return True
    w = tp.indecs[w_idx]
    if any(a > b for a, b in zip(x.dim, w.dim)):
        return False
    basis = hom_basis(x, w)
    h = len(basis)
    if h == 0:
        return False
    if tp.field.p**h > map_budget:
        raise BudgetExceeded(f"hom space of dimension {h} exceeds budget")
    fld = tp.field
    for coeffs in iter_coefficient_vectors(fld.p, h):
        cvec = np.array(coeffs, dtype=np.int64)
        ok = True
        for v in range(tp.quiver.n):
            if x.dim[v] == 0:
                continue
            comp = (
                np.tensordot(cvec, np.stack([b.comps[v] for b in basis]), axes=1)
                % fld.p
            )
            if fld.rank(comp) != x.dim[v]:
                ok = False
                break
        if ok:
            return True
    return False


def wide_part_raw(
    c: Subcat,
    t: IndecTable,
    prime: int = 2,
    mult_bound: int = 2,
    map_budget: int = DEFAULT_MAP_BUDGET,
) -> Subcat:
    """The kernels-stay-inside members, straight from the definition.

    w qualifies when for every bounded object B of c and every submodule
    S of B whose quotient embeds into w, S lies in c. Bounded-search oracle
    for cross-checking `wide_part` on small ranks; raises BudgetExceeded
    rather than returning a weaker answer.
    """
    tp = indec_table(t.quiver, prime)
    members = set(c.members)
    spectrum = _spectrum_cache(t.quiver, prime, map_budget)
    embed_cache: dict[tuple, bool] = {}
    good = set(members)
    for shape in _member_shapes(tuple(sorted(members)), mult_bound):
        status, payload = spectrum.get(shape)
        if status == "skipped":
            raise BudgetExceeded(f"object {shape} exceeds submodule budget")
        for s_items, q_items in payload:  # type: ignore[union-attr]
            s_sup = {i for i, _ in s_items}
            if s_sup <= members:
                continue
            for w in list(good):
                key = (q_items, w)
                emb = embed_cache.get(key)
                if emb is None:
                    emb = _embeds_in_single(tp, q_items, w, map_budget)
                    embed_cache[key] = emb
                if emb:
                    good.discard(w)
        if not good:
            break
    return Subcat.of(good)
