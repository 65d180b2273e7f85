"""Seeded random generators for invariance property checks.

Systems, centers, and marked loci are drawn small enough that the
exhaustive subset sums stay cheap: centers only lie on at most
min(|J|, d) divisors, stratum classes are low-degree polynomials, and
every admissibility constraint of the blow-up engine is respected by
construction.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

from .blowup import BlowupCenter, LocusRule
from .modsys import MarkedLocus, ModificationSystem
from .ring import LPolynomial, MotivicClass


def random_polynomial(rng: random.Random, max_degree: int = 2, max_coeff: int = 3) -> LPolynomial:
    degree = rng.randint(0, max_degree)
    coeffs = [rng.randint(0, max_coeff) for _ in range(degree + 1)]
    return LPolynomial(coeffs)


def random_class(
    rng: random.Random,
    *,
    nonzero: bool = False,
    max_degree: int = 2,
    max_coeff: int = 3,
) -> MotivicClass:
    poly = random_polynomial(rng, max_degree, max_coeff)
    while nonzero and poly.is_zero():
        poly = random_polynomial(rng, max_degree, max_coeff)
    return MotivicClass(poly)


def random_system(
    rng: random.Random,
    *,
    max_divisors: int = 8,
    max_mu: int = 4,
) -> ModificationSystem:
    ambient_dim = rng.randint(2, 4)
    count = rng.randint(0, max_divisors)
    divisors = [(f"d{i}", rng.randint(0, max_mu)) for i in range(count)]
    strata: dict[tuple[str, ...], MotivicClass] = {
        (): random_class(rng, nonzero=True)
    }
    subsets = [
        combo
        for size in range(1, min(count, ambient_dim) + 1)
        for combo in itertools.combinations(range(count), size)
    ]
    rng.shuffle(subsets)
    for combo in subsets[: max(1, len(subsets) // 2)]:
        strata[tuple(f"d{i}" for i in combo)] = random_class(rng, nonzero=True)
    system = ModificationSystem(ambient_dim, divisors, strata, label="random")
    return system


def random_center(rng: random.Random, system: ModificationSystem) -> Optional[BlowupCenter]:
    """An admissible center with nonempty stratum data, or None if impossible."""
    n = system.ambient_dim
    d = rng.randint(1, n)
    count = len(system.divisors)
    idents = system.idents

    candidates: list[frozenset[str]] = []
    max_k0 = min(count, d)
    for size in range(0, max_k0 + 1):
        for combo in itertools.combinations(range(count), size):
            k0 = frozenset(idents[i] for i in combo)
            if _eligible_strata(system, k0, d):
                candidates.append(k0)
    if not candidates:
        return None
    k0 = rng.choice(sorted(candidates, key=sorted))

    eligible = _eligible_strata(system, k0, d)
    chosen = [key for key in eligible if rng.random() < 0.6] or [rng.choice(eligible)]
    center_strata = {
        key: random_class(rng, nonzero=True, max_degree=1) for key in chosen
    }
    return BlowupCenter(codim=d, containing=k0, center_strata=center_strata)


def _eligible_strata(
    system: ModificationSystem, k0: frozenset[str], d: int
) -> list[frozenset[str]]:
    n = system.ambient_dim
    k0_mask = system.mask_of(tuple(k0))
    out = []
    for mask in sorted(system.strata):
        if mask & k0_mask == k0_mask and (mask & ~k0_mask).bit_count() <= n - d:
            out.append(frozenset(system.ids_of(mask)))
    return out


def random_locus(
    rng: random.Random, system: ModificationSystem, name: str
) -> MarkedLocus:
    strata = {}
    for mask in sorted(system.strata):
        roll = rng.random()
        if roll < 0.5:
            strata[mask] = random_class(rng, nonzero=True, max_degree=1)
    return MarkedLocus(name, strata)


def attach_locus_rules(
    rng: random.Random, center: BlowupCenter, loci: list[MarkedLocus], system: ModificationSystem
) -> BlowupCenter:
    """Give every locus a center rule: contains, disjoint, or explicit data."""
    rules = dict(center.locus_rules)
    for locus in loci:
        roll = rng.random()
        if roll < 0.4:
            rules[locus.name] = LocusRule.contains()
        elif roll < 0.7:
            rules[locus.name] = LocusRule.disjoint()
        else:
            explicit = {}
            for key, cls in center.center_strata.items():
                if rng.random() < 0.5:
                    explicit[key] = random_class(rng, nonzero=True, max_degree=1)
            rules[locus.name] = LocusRule.explicit(explicit)
    return BlowupCenter(center.codim, center.containing, dict(center.center_strata), rules)


def random_invariance_case(
    rng: random.Random, *, max_divisors: int = 8, locus_count: int = 2
):
    """(system, center, loci) ready for verify_invariance, retrying until valid."""
    while True:
        system = random_system(rng, max_divisors=max_divisors)
        center = random_center(rng, system)
        if center is None:
            continue
        loci = [random_locus(rng, system, f"T{i}") for i in range(locus_count)]
        center = attach_locus_rules(rng, center, loci, system)
        return system, center, loci
