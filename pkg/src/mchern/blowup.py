"""Blow-up transformation of modification systems.

A :class:`BlowupCenter` describes, extensionally, a smooth center meeting
the current divisor arrangement with normal crossings: its codimension d,
the set K0 of divisors containing it, and the classes [E_I ^ S] of its
pieces inside each stratum.  Whether such data is realized by an actual
subvariety is the caller's assertion; the engine only checks the
combinatorial admissibility conditions.

Blowing up replaces S by a P^(d-1)-bundle.  The new exceptional divisor
gets multiplicity

    mu0 = sum_{j in K0} mu_j + d - 1,

old strata lose their intersection with S, and the part of the new
arrangement over S is governed by the fiber picture: divisors containing
S cut each fiber in |K0| independent hyperplanes, divisors through S but
not containing it swallow whole fibers.  Concretely, for old subsets M

    [new E_M] = [E_M] - [E_M ^ S]

and for subsets {0} u N containing the fresh index

    [new E_{0 u N}] = [E_{K0 u (N \\ K0)} ^ S] * [H_{|N ^ K0|}]

with [H_i] the fiber stratum class from :mod:`mchern.strata`.  Marked
loci transform by the same two rules applied to their own center data.
The weighted functional chi is invariant under this transformation, and
:func:`verify_invariance` checks that exactly, locus by locus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .modsys import Divisor, MarkedLocus, ModificationSystem
from .ring import MotivicClass, projective_class
from .strata import FiberFrame, hyperplane_stratum_class


class BlowupError(ValueError):
    """Raised for centers or programs that violate admissibility."""


CONTAINS_CENTER = "contains_center"
DISJOINT_FROM_CENTER = "disjoint_from_center"


@dataclass(frozen=True)
class LocusRule:
    """How a marked locus meets the center.

    ``contains_center`` means the locus contains all of S, so the center
    data is reused as is; ``disjoint_from_center`` means the intersection
    is empty; ``explicit`` supplies the classes [E_I ^ S ^ U] directly.
    """

    kind: str
    strata: Optional[Mapping[frozenset[str], MotivicClass]] = None

    def __post_init__(self):
        if self.kind not in (CONTAINS_CENTER, DISJOINT_FROM_CENTER, "explicit"):
            raise ValueError(f"unknown locus rule kind {self.kind!r}")
        if self.kind == "explicit" and self.strata is None:
            raise ValueError("explicit locus rule requires stratum classes")

    @classmethod
    def contains(cls) -> "LocusRule":
        return cls(CONTAINS_CENTER)

    @classmethod
    def disjoint(cls) -> "LocusRule":
        return cls(DISJOINT_FROM_CENTER)

    @classmethod
    def explicit(cls, strata: Mapping[frozenset[str], MotivicClass]) -> "LocusRule":
        return cls("explicit", dict(strata))


@dataclass(frozen=True)
class BlowupCenter:
    """Extensional description of a smooth normal-crossings center."""

    codim: int
    containing: frozenset[str] = frozenset()
    center_strata: Mapping[frozenset[str], MotivicClass] = field(default_factory=dict)
    locus_rules: Mapping[str, LocusRule] = field(default_factory=dict)

    def total_class(self) -> MotivicClass:
        total = MotivicClass.zero()
        for cls in self.center_strata.values():
            total = total + cls
        return total


@dataclass(frozen=True)
class BlowupResult:
    system: ModificationSystem
    loci: dict[str, MarkedLocus]
    fresh_id: str


def _center_masks(system: ModificationSystem, center: BlowupCenter) -> tuple[int, dict[int, MotivicClass]]:
    k0_mask = system.mask_of(tuple(center.containing))
    strata = {}
    for key, cls in center.center_strata.items():
        mask = system.mask_of(tuple(key))
        if not cls.is_zero():
            strata[mask] = cls
    return k0_mask, strata


def validate_center(system: ModificationSystem, center: BlowupCenter) -> list[str]:
    """Admissibility of the center against the current system."""
    problems: list[str] = []
    n, d = system.ambient_dim, center.codim
    if not 1 <= d <= n:
        problems.append(f"codimension {d} outside 1..{n}")
        return problems
    try:
        k0_mask, strata = _center_masks(system, center)
    except ValueError as exc:
        return [str(exc)]
    if k0_mask.bit_count() > d:
        problems.append(
            f"center lies on {k0_mask.bit_count()} divisors, more than its codimension {d}"
        )
    for mask in sorted(strata):
        ids = system.ids_of(mask)
        if mask & k0_mask != k0_mask:
            problems.append(f"center stratum {ids} does not contain all of K0")
        if mask not in system.strata:
            problems.append(f"center is nonzero on the empty stratum {ids}")
        if (mask & ~k0_mask).bit_count() > n - d:
            problems.append(
                f"center stratum {ids} would create strata deeper than dimension {n}"
            )
    return problems


def _locus_center_data(
    system: ModificationSystem,
    center: BlowupCenter,
    center_strata: dict[int, MotivicClass],
    locus: MarkedLocus,
) -> dict[int, MotivicClass]:
    rule = center.locus_rules.get(locus.name)
    if rule is None:
        raise BlowupError(
            f"no center rule for locus {locus.name!r}; declare contains_center, "
            "disjoint_from_center, or explicit classes"
        )
    if rule.kind == CONTAINS_CENTER:
        return dict(center_strata)
    if rule.kind == DISJOINT_FROM_CENTER:
        return {}
    data = {}
    for key, cls in rule.strata.items():
        mask = system.mask_of(tuple(key))
        if cls.is_zero():
            continue
        if mask not in center_strata:
            raise BlowupError(
                f"locus {locus.name!r} meets the center on {system.ids_of(mask)} "
                "where the center itself is empty"
            )
        data[mask] = cls
    return data


def _transform_strata(
    old: Mapping[int, MotivicClass],
    center_data: Mapping[int, MotivicClass],
    k0_mask: int,
    fiber: Sequence[MotivicClass],
    new_bit: int,
) -> dict[int, MotivicClass]:
    out: dict[int, MotivicClass] = {}
    for mask in old.keys() | center_data.keys():
        adjusted = old.get(mask, MotivicClass.zero()) - center_data.get(
            mask, MotivicClass.zero()
        )
        if not adjusted.is_zero():
            out[mask] = adjusted
    for mask, cls in center_data.items():
        outside = mask & ~k0_mask
        sub = k0_mask
        while True:
            h = fiber[sub.bit_count()]
            if not h.is_zero():
                new_mask = new_bit | outside | sub
                term = cls * h
                cur = out.get(new_mask)
                out[new_mask] = term if cur is None else cur + term
            if sub == 0:
                break
            sub = (sub - 1) & k0_mask
    return {m: c for m, c in out.items() if not c.is_zero()}


def blow_up(
    system: ModificationSystem,
    center: BlowupCenter,
    loci: Iterable[MarkedLocus] = (),
    *,
    fresh_id: Optional[str] = None,
) -> BlowupResult:
    """Apply one blow-up, transforming the system and any marked loci."""
    problems = validate_center(system, center)
    if problems:
        raise BlowupError("; ".join(problems))
    k0_mask, center_strata = _center_masks(system, center)
    loci = list(loci)
    locus_data = {
        locus.name: _locus_center_data(system, center, center_strata, locus)
        for locus in loci
    }

    if fresh_id is None:
        step = len(system.divisors)
        fresh_id = f"exc{step}"
        while fresh_id in system.idents:
            step += 1
            fresh_id = f"exc{step}"
    elif fresh_id in system.idents:
        raise BlowupError(f"fresh divisor id {fresh_id!r} already in use")

    d = center.codim
    k0_size = k0_mask.bit_count()
    mu0 = sum(system.divisors[i].mu for i in range(len(system.divisors)) if k0_mask >> i & 1)
    mu0 += d - 1
    frame = FiberFrame(d, k0_size)
    fiber = [hyperplane_stratum_class(frame, size) for size in range(k0_size + 1)]
    new_bit = 1 << len(system.divisors)

    new_strata = _transform_strata(system.strata, center_strata, k0_mask, fiber, new_bit)
    ambient = system.ambient_class
    if ambient is not None:
        ambient = ambient + center.total_class() * (projective_class(d - 1) - 1)
    new_system = ModificationSystem(
        system.ambient_dim,
        system.divisors + (Divisor(fresh_id, mu0),),
        new_strata,
        ambient_class=ambient,
        label=system.label,
    )
    new_loci = {
        locus.name: MarkedLocus(
            locus.name,
            _transform_strata(locus.strata, locus_data[locus.name], k0_mask, fiber, new_bit),
        )
        for locus in loci
    }
    return BlowupResult(new_system, new_loci, fresh_id)


# -- verification -------------------------------------------------------------


FULL_LOCUS_NAME = "__full__"


def _with_full_rule(center: BlowupCenter) -> BlowupCenter:
    rules = dict(center.locus_rules)
    rules[FULL_LOCUS_NAME] = LocusRule.contains()
    return BlowupCenter(center.codim, center.containing, dict(center.center_strata), rules)


def verify_invariance(
    system: ModificationSystem,
    center: BlowupCenter,
    loci: Iterable[MarkedLocus] = (),
) -> bool:
    """chi before equals chi after, for the full locus and every given locus."""
    full = system.full_locus(FULL_LOCUS_NAME)
    all_loci = [full, *loci]
    result = blow_up(system, _with_full_rule(center), all_loci)
    for locus in all_loci:
        before = system.chi(locus)
        after = result.system.chi(result.loci[locus.name])
        if before != after:
            return False
    return True


def total_class_delta_matches(
    before: ModificationSystem, after: ModificationSystem, center: BlowupCenter
) -> bool:
    """Blow-up trades S for a P^(d-1)-bundle over it, on total classes."""
    gained = center.total_class() * (projective_class(center.codim - 1) - 1)
    return after.total_class() == before.total_class() + gained


def fiber_completeness_holds(
    after: ModificationSystem, center: BlowupCenter, fresh_id: str
) -> bool:
    """Strata on the fresh divisor sum to [S] * [P^(d-1)]."""
    bit = after.mask_of(fresh_id)
    total = MotivicClass.zero()
    for mask, cls in after.strata.items():
        if mask & bit:
            total = total + cls
    return total == center.total_class() * projective_class(center.codim - 1)


# -- programs ------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupProgram:
    initial: ModificationSystem
    steps: tuple[BlowupCenter, ...]
    loci: Mapping[str, MarkedLocus] = field(default_factory=dict)


@dataclass(frozen=True)
class StepAudit:
    index: int
    fresh_id: str
    invariance_ok: bool
    total_class_ok: bool
    fiber_complete: bool


@dataclass(frozen=True)
class ProgramResult:
    final: ModificationSystem
    loci: dict[str, MarkedLocus]
    snapshots: tuple[ModificationSystem, ...]
    audits: tuple[StepAudit, ...]

    @property
    def all_checks_passed(self) -> bool:
        return all(
            a.invariance_ok and a.total_class_ok and a.fiber_complete for a in self.audits
        )


def run_program(program: BlowupProgram, *, audit: bool = True) -> ProgramResult:
    """Left fold of blow_up over the steps, with per-step snapshots.

    Errors raised by a step are re-raised with the step index attached.
    """
    system = program.initial
    loci = dict(program.loci)
    snapshots = [system]
    audits: list[StepAudit] = []
    for index, step in enumerate(program.steps):
        try:
            if audit:
                invariance_ok = verify_invariance(system, step, loci.values())
            result = blow_up(system, step, loci.values())
        except BlowupError as exc:
            raise BlowupError(f"step {index}: {exc}") from exc
        if audit:
            audits.append(
                StepAudit(
                    index,
                    result.fresh_id,
                    invariance_ok,
                    total_class_delta_matches(system, result.system, step),
                    fiber_completeness_holds(result.system, step, result.fresh_id),
                )
            )
        system = result.system
        loci = result.loci or loci
        snapshots.append(system)
    return ProgramResult(system, loci, tuple(snapshots), tuple(audits))


# -- JSON wire format ------------------------------------------------------------


def _strata_from_json(entries) -> dict[frozenset[str], MotivicClass]:
    return {
        frozenset(entry["subset"]): MotivicClass.from_json(entry["class"])
        for entry in entries
    }


def center_from_json(obj: Mapping) -> BlowupCenter:
    try:
        rules: dict[str, LocusRule] = {}
        for name, kind in obj.get("locus_defaults", {}).items():
            if kind == CONTAINS_CENTER:
                rules[name] = LocusRule.contains()
            elif kind == DISJOINT_FROM_CENTER:
                rules[name] = LocusRule.disjoint()
            else:
                raise ValueError(f"unknown locus default {kind!r} for {name!r}")
        for name, entries in obj.get("locus_center_strata", {}).items():
            rules[name] = LocusRule.explicit(_strata_from_json(entries))
        return BlowupCenter(
            codim=int(obj["codim"]),
            containing=frozenset(obj.get("containing", ())),
            center_strata=_strata_from_json(obj.get("center_strata", ())),
            locus_rules=rules,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed blow-up step: {exc}") from exc


def center_to_json(center: BlowupCenter) -> dict:
    obj: dict = {
        "codim": center.codim,
        "containing": sorted(center.containing),
        "center_strata": [
            {"subset": sorted(key), "class": cls.to_json()}
            for key, cls in sorted(center.center_strata.items(), key=lambda kv: sorted(kv[0]))
        ],
    }
    defaults = {}
    explicit = {}
    for name, rule in sorted(center.locus_rules.items()):
        if rule.kind == "explicit":
            explicit[name] = [
                {"subset": sorted(key), "class": cls.to_json()}
                for key, cls in sorted(rule.strata.items(), key=lambda kv: sorted(kv[0]))
            ]
        else:
            defaults[name] = rule.kind
    if defaults:
        obj["locus_defaults"] = defaults
    if explicit:
        obj["locus_center_strata"] = explicit
    return obj


def program_from_json(obj: Mapping) -> BlowupProgram:
    from .modsys import system_from_json

    try:
        system, loci = system_from_json(obj["initial"])
        steps = tuple(center_from_json(step) for step in obj.get("steps", ()))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed program object: {exc}") from exc
    return BlowupProgram(system, steps, loci)


def program_to_json(program: BlowupProgram) -> dict:
    from .modsys import system_to_json

    return {
        "initial": system_to_json(program.initial, program.loci or None),
        "steps": [center_to_json(step) for step in program.steps],
    }
