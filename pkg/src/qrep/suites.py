"""Named verification suites, shared by the CLI and the acceptance tests.

Each suite sweeps a fixed family of checks and returns a report carrying one
status per check: "pass", "fail", or "budget" (a bounded search that could
not finish; never counted as a failure).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .counting import (
    bijection_check_reflection,
    bijection_check_removal,
    closed_count_table,
    schroeder,
)
from .fp import DEFAULT_PRIME
from .indec import indec_table
from .quiver import DynkinType, all_orientations, dynkin_quiver
from .rigid import (
    enumerate_rigid,
    exceptional_order,
    fac_minimal_version,
    co_bongartz,
    is_support_tilting,
    rigid_profile,
)
from .subcat import (
    Verdict,
    closure_oracles,
    cok,
    ext_projectives,
    fac_closure,
    progenerator,
    split_projectives,
    wide_envelope,
    wide_part,
)

SUITE_NAMES = (
    "main-bijection",
    "ice-closure",
    "section4",
    "exceptional",
    "mutation",
    "counts",
    "field-independence",
)


@dataclass
class SuiteOptions:
    rank_bound: int = 6
    primes: tuple[int, ...] = (2, 3)
    prime: int = DEFAULT_PRIME
    mult_bound: int = 2
    map_budget: int = 100_000


@dataclass
class SuiteCheck:
    name: str
    status: str  # pass | fail | budget
    counterexample: str | None = None

    def as_dict(self) -> dict:
        out: dict = {"name": self.name, "status": self.status}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteReport:
    suite: str
    checks: list[SuiteCheck] = dc_field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str | None = None) -> None:
        self.checks.append(
            SuiteCheck(name, "pass" if ok else "fail", None if ok else detail)
        )

    def add_budget(self, name: str, detail: str | None = None) -> None:
        self.checks.append(SuiteCheck(name, "budget", detail))

    @property
    def exit_code(self) -> int:
        if any(c.status == "fail" for c in self.checks):
            return 1
        if any(c.status == "budget" for c in self.checks):
            return 2
        return 0

    def as_dict(self) -> dict:
        return {"suite": self.suite, "checks": [c.as_dict() for c in self.checks]}


def _types_within(families: list[tuple[str, int]], bound: int) -> list[DynkinType]:
    return [DynkinType(f, n) for f, n in families if n <= bound]


def counts_suite(opts: SuiteOptions) -> SuiteReport:
    report = SuiteReport("counts")
    for n in range(1, min(5, opts.rank_bound) + 1):
        dt = DynkinType("A", n)
        expected = closed_count_table(dt).by_size
        ok = True
        detail = None
        for oid, q in enumerate(all_orientations(dt)):
            profile = rigid_profile(indec_table(q, opts.prime))
            if profile != expected:
                ok, detail = False, f"orientation {oid}: {profile} != {expected}"
                break
        if sum(expected) != schroeder(n):
            ok, detail = False, f"total {sum(expected)} != schroeder({n})"
        report.add(f"counts-{dt}-all-orientations", ok, detail)
    for dt in _types_within([("D", 4), ("D", 5)], opts.rank_bound):
        expected = closed_count_table(dt).by_size
        ok = True
        detail = None
        for oid, q in enumerate(all_orientations(dt)):
            profile = rigid_profile(indec_table(q, opts.prime))
            if profile != expected:
                ok, detail = False, f"orientation {oid}: {profile} != {expected}"
                break
        report.add(f"counts-{dt}-all-orientations", ok, detail)
    for dt in _types_within([("E", 6), ("E", 7), ("E", 8)], opts.rank_bound):
        expected = closed_count_table(dt).by_size
        profile = rigid_profile(indec_table(dynkin_quiver(dt), opts.prime))
        report.add(
            f"counts-{dt}",
            profile == expected,
            f"{profile} != {expected}" if profile != expected else None,
        )
    return report


def main_bijection_suite(opts: SuiteOptions) -> SuiteReport:
    report = SuiteReport("main-bijection")
    for dt in _types_within([("A", 4), ("D", 4)], opts.rank_bound):
        ok = True
        detail = None
        for oid, q in enumerate(all_orientations(dt)):
            t = indec_table(q, opts.prime)
            rigids = enumerate_rigid(t)
            images = set()
            for u in rigids:
                c = cok(u, t)
                images.add(c.members)
                if progenerator(c, t) != u:
                    ok = False
                    detail = f"orientation {oid}: progenerator(cok({u.summands}))"
                    break
            if len(images) != len(rigids):
                ok = False
                detail = f"orientation {oid}: cok not injective"
            if not ok:
                break
        report.add(f"main-bijection-{dt}", ok, detail)
    return report


def section4_suite(opts: SuiteOptions) -> SuiteReport:
    report = SuiteReport("section4")
    for dt in _types_within([("A", 4), ("D", 4)], opts.rank_bound):
        t = indec_table(dynkin_quiver(dt), opts.prime)
        ok_cb = ok_wide = ok_inv = True
        d_cb = d_wide = d_inv = None
        for u in enumerate_rigid(t):
            c = cok(u, t)
            ubar = co_bongartz(u, t)
            if fac_closure(c, t) != fac_closure(ubar, t) or not is_support_tilting(
                ubar, t
            ):
                ok_cb, d_cb = False, f"u={u.summands}"
            if wide_part(c, t) != cok(fac_minimal_version(u, t), t):
                ok_wide, d_wide = False, f"u={u.summands}"
            if is_support_tilting(u, t):
                tcls = fac_closure(u, t)
                if fac_closure(wide_part(tcls, t), t) != tcls:
                    ok_inv, d_inv = False, f"torsion side, u={u.summands}"
            if fac_minimal_version(u, t) == u:
                w = cok(u, t)
                if wide_part(fac_closure(w, t), t) != w:
                    ok_inv, d_inv = False, f"wide side, u={u.summands}"
        report.add(f"co-bongartz-{dt}", ok_cb, d_cb)
        report.add(f"wide-part-{dt}", ok_wide, d_wide)
        report.add(f"mutually-inverse-{dt}", ok_inv, d_inv)
    return report


def exceptional_suite(opts: SuiteOptions) -> SuiteReport:
    report = SuiteReport("exceptional")
    for dt in _types_within([("A", 5), ("D", 5), ("E", 6)], opts.rank_bound):
        t = indec_table(dynkin_quiver(dt), opts.prime)
        ok = True
        detail = None
        for u in enumerate_rigid(t):
            try:
                order = exceptional_order(u, t)
            except Exception as exc:  # CycleFound means a violated theorem
                ok, detail = False, f"u={u.summands}: {exc}"
                break
            if tuple(sorted(order)) != u.summands:
                ok, detail = False, f"u={u.summands}: order {order} not a permutation"
                break
        report.add(f"exceptional-order-{dt}", ok, detail)
    for dt in _types_within([("A", 4), ("D", 4)], opts.rank_bound):
        t = indec_table(dynkin_quiver(dt), opts.prime)
        ok = True
        detail = None
        for u in enumerate_rigid(t):
            env = wide_envelope(u, t)
            gen = progenerator(env, t)  # raises NotRigid on an Ext-unfree set
            if gen.size != u.size:
                ok, detail = False, f"u={u.summands}: envelope progenerator {gen.summands}"
                break
        report.add(f"wide-envelope-rank-{dt}", ok, detail)
    return report


def mutation_suite(opts: SuiteOptions) -> SuiteReport:
    report = SuiteReport("mutation")
    for dt in _types_within([("A", 3), ("A", 4), ("D", 4)], opts.rank_bound):
        ok = True
        detail = None
        for oid, q in enumerate(all_orientations(dt)):
            t = indec_table(q, opts.prime)
            for v in q.sinks():
                refl = bijection_check_reflection(t, v)
                rem = bijection_check_removal(t, v)
                if not refl.passed:
                    ok, detail = False, f"orientation {oid} v={v}: {refl.failures[0]}"
                if not rem.passed:
                    ok, detail = False, f"orientation {oid} v={v}: {rem.failures[0]}"
            if not ok:
                break
        report.add(f"appendix-bijections-{dt}", ok, detail)
    return report


def ice_closure_suite(opts: SuiteOptions) -> SuiteReport:
    report = SuiteReport("ice-closure")
    for dt in _types_within([("A", 3), ("D", 4)], opts.rank_bound):
        t = indec_table(dynkin_quiver(dt), opts.prime)
        rigids = enumerate_rigid(t)
        checked = skipped = 0
        ok_closed = ok_primes = ok_tri = True
        d_closed = d_primes = d_tri = None
        for u in rigids:
            c = cok(u, t)
            reports = {
                p: closure_oracles(
                    c, t, prime=p, mult_bound=opts.mult_bound,
                    map_budget=opts.map_budget,
                )
                for p in opts.primes
            }
            verdict_sets = {
                p: tuple(sorted((k, v.value) for k, v in r.verdicts().items()))
                for p, r in reports.items()
            }
            if len(set(verdict_sets.values())) > 1:
                ok_primes, d_primes = False, f"u={u.summands}: {verdict_sets}"
            for p, r in reports.items():
                for name in ("images", "cokernels", "extensions"):
                    res = r.result(name)
                    checked += res.checked
                    skipped += res.skipped
                    if res.verdict is Verdict.FALSE:
                        ok_closed = False
                        d_closed = f"u={u.summands} p={p} {name}: {res.counterexample}"
            # epi-kernel trichotomy: split = ext-projectives <=> Fac-minimal
            # <=> the epi-kernel oracle agrees (at the first prime)
            r0 = reports[opts.primes[0]]
            cond_split = ext_projectives(c, t) == split_projectives(c, t)
            cond_facmin = fac_minimal_version(u, t) == u
            epi = r0.epi_kernels.verdict
            if epi is Verdict.BUDGET_EXCEEDED:
                skipped += 1
            elif not (cond_split == cond_facmin == (epi is Verdict.TRUE)):
                ok_tri = False
                d_tri = f"u={u.summands}: split={cond_split} facmin={cond_facmin} epi={epi.value}"
        fraction = skipped / (checked + skipped) if (checked + skipped) else 0.0
        report.add(f"ice-closure-{dt}", ok_closed, d_closed)
        report.add(f"prime-consistency-{dt}", ok_primes, d_primes)
        report.add(f"epi-kernel-trichotomy-{dt}", ok_tri, d_tri)
        if fraction >= 0.05:
            report.add_budget(
                f"budget-fraction-{dt}", f"{fraction:.1%} of checks skipped"
            )
        else:
            report.add(f"budget-fraction-{dt}", True)
    return report


def field_independence_suite(opts: SuiteOptions) -> SuiteReport:
    report = SuiteReport("field-independence")
    families = (
        [("A", n) for n in range(1, 7)]
        + [("D", n) for n in range(4, 7)]
        + [("E", 6)]
    )
    primes = (2, 3, 5)
    for dt in _types_within(families, opts.rank_bound):
        q = dynkin_quiver(dt)
        tables = [indec_table(q, p) for p in primes]
        ok = all(
            np.array_equal(tables[0].hom, t.hom)
            and np.array_equal(tables[0].ext, t.ext)
            and tables[0].dims == t.dims
            for t in tables[1:]
        )
        report.add(f"field-independence-{dt}", ok, None if ok else str(primes))
    return report


SUITES = {
    "main-bijection": main_bijection_suite,
    "ice-closure": ice_closure_suite,
    "section4": section4_suite,
    "exceptional": exceptional_suite,
    "mutation": mutation_suite,
    "counts": counts_suite,
    "field-independence": field_independence_suite,
}


def run_suite(name: str, opts: SuiteOptions | None = None) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    return SUITES[name](opts or SuiteOptions())
