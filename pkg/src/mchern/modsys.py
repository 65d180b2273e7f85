"""Combinatorial model of a modification and its weighted class functional.

A :class:`ModificationSystem` records what the formulas actually consume
about a proper birational map with normal-crossings exceptional divisor:
the index set of exceptional components with their multiplicities, and
the class [E_I] of each locus lying on exactly the components indexed by
I.  Strata are stored extensionally; geometry only enters through the
exporters in :mod:`mchern.blowup` and :mod:`mchern.surface`.

A :class:`MarkedLocus` carries the classes [E_I ^ preimage(U)] for a
distinguished locus U downstairs.  The functional

    chi(U) = sum_I [E_I ^ preimage(U)] / prod_{i in I} [P^mu_i]

recovers the class of U itself; its evaluation at L = 1 is the weighted
Euler sum.  Subsets are encoded as bitmasks over the divisor index set,
which bounds the number of divisors at 62; every use here stays far
below that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .ring import MotivicClass

SubsetKey = Union[int, str, Iterable[str]]


@dataclass(frozen=True)
class Divisor:
    ident: str
    mu: int

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"divisor {self.ident!r} has negative multiplicity")


class MarkedLocus:
    """Stratum-intersection classes of a distinguished locus.

    Keys are bitmasks over the owning system's divisors; absent keys mean
    the intersection is empty.  Instances are immutable by convention.
    """

    __slots__ = ("name", "strata")

    def __init__(self, name: str, strata: Mapping[int, MotivicClass]):
        self.name = name
        self.strata = {
            mask: cls for mask, cls in strata.items() if not cls.is_zero()
        }

    def scaled(self, factor: int) -> "MarkedLocus":
        return MarkedLocus(self.name, {m: factor * c for m, c in self.strata.items()})

    @staticmethod
    def combine(name: str, terms: Iterable[tuple[int, "MarkedLocus"]]) -> "MarkedLocus":
        """Integer linear combination, stratum by stratum."""
        acc: dict[int, MotivicClass] = {}
        for coeff, locus in terms:
            for mask, cls in locus.strata.items():
                cur = acc.get(mask, MotivicClass.zero())
                acc[mask] = cur + coeff * cls
        return MarkedLocus(name, acc)

    def __repr__(self) -> str:
        return f"MarkedLocus({self.name!r}, {len(self.strata)} strata)"


class ModificationSystem:
    """Divisor multiplicities plus the classes of all arrangement strata."""

    __slots__ = ("ambient_dim", "divisors", "strata", "ambient_class", "label")

    def __init__(
        self,
        ambient_dim: int,
        divisors: Iterable[Union[Divisor, tuple[str, int]]],
        strata: Mapping[SubsetKey, MotivicClass],
        *,
        ambient_class: Optional[MotivicClass] = None,
        label: str = "",
    ):
        if ambient_dim < 1:
            raise ValueError("ambient dimension must be positive")
        divs = tuple(d if isinstance(d, Divisor) else Divisor(*d) for d in divisors)
        idents = [d.ident for d in divs]
        if len(set(idents)) != len(idents):
            raise ValueError("divisor ids must be distinct")
        if len(divs) > 62:
            raise ValueError("at most 62 divisors are supported (bitmask encoding)")
        self.ambient_dim = ambient_dim
        self.divisors = divs
        index = {d.ident: i for i, d in enumerate(divs)}
        normalized: dict[int, MotivicClass] = {}
        for key, cls in strata.items():
            mask = _as_mask(key, index, len(divs))
            if not cls.is_zero():
                if mask in normalized:
                    raise ValueError(f"duplicate stratum key {key!r}")
                normalized[mask] = cls
        self.strata = normalized
        self.ambient_class = ambient_class
        self.label = label

    @property
    def _ident_index(self) -> dict[str, int]:
        return {d.ident: i for i, d in enumerate(self.divisors)}

    @property
    def idents(self) -> tuple[str, ...]:
        return tuple(d.ident for d in self.divisors)

    def mask_of(self, ids: SubsetKey) -> int:
        return _as_mask(ids, self._ident_index, len(self.divisors))

    def ids_of(self, mask: int) -> tuple[str, ...]:
        return tuple(
            d.ident for i, d in enumerate(self.divisors) if mask >> i & 1
        )

    def mu_of_mask(self, mask: int) -> tuple[int, ...]:
        return tuple(d.mu for i, d in enumerate(self.divisors) if mask >> i & 1)

    def stratum(self, key: SubsetKey) -> MotivicClass:
        return self.strata.get(self.mask_of(key), MotivicClass.zero())

    def total_class(self) -> MotivicClass:
        total = MotivicClass.zero()
        for cls in self.strata.values():
            total = total + cls
        return total

    # -- invariants ----------------------------------------------------------

    def validate(self) -> list[str]:
        """Empty list iff all structural invariants hold."""
        problems: list[str] = []
        for mask in sorted(self.strata):
            if mask.bit_count() > self.ambient_dim:
                problems.append(
                    f"stratum {self.ids_of(mask)} has depth {mask.bit_count()} "
                    f"> ambient dimension {self.ambient_dim}"
                )
        if self.ambient_class is not None and self.total_class() != self.ambient_class:
            problems.append("strata do not sum to the declared ambient class")
        return problems

    def locus_violations(self, locus: MarkedLocus) -> list[str]:
        problems: list[str] = []
        limit = 1 << len(self.divisors)
        for mask in sorted(locus.strata):
            if mask >= limit:
                problems.append(f"locus {locus.name!r} keys unknown divisors (mask {mask})")
            elif mask not in self.strata:
                problems.append(
                    f"locus {locus.name!r} is nonzero on the empty stratum "
                    f"{self.ids_of(mask)}"
                )
        return problems

    # -- the functional --------------------------------------------------------

    def full_locus(self, name: str = "full") -> MarkedLocus:
        return MarkedLocus(name, dict(self.strata))

    def chi(self, locus: MarkedLocus) -> MotivicClass:
        """Weighted stratum sum; with the full locus this is the base class."""
        total = MotivicClass.zero()
        for mask, cls in sorted(locus.strata.items()):
            total = total + MotivicClass(cls.num, cls.den + self.mu_of_mask(mask))
        return total

    def euler_chi(self, locus: MarkedLocus) -> Fraction:
        """Euler-specialized functional, computed independently and cross-checked."""
        total = Fraction(0)
        for mask, cls in locus.strata.items():
            weight = 1
            for mu in self.mu_of_mask(mask):
                weight *= mu + 1
            total += cls.euler_specialize() / weight
        via_chi = self.chi(locus).euler_specialize()
        if total != via_chi:
            raise ArithmeticError(
                f"euler_chi mismatch on {locus.name!r}: {total} != {via_chi}"
            )
        return total

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return (
            f"ModificationSystem(n={self.ambient_dim}, divisors={len(self.divisors)}, "
            f"strata={len(self.strata)}{tag})"
        )


def _as_mask(key: SubsetKey, index: Mapping[str, int], count: int) -> int:
    if isinstance(key, int):
        if key < 0 or key >= 1 << count:
            raise ValueError(f"mask {key} out of range for {count} divisors")
        return key
    if isinstance(key, str):
        key = (key,)
    mask = 0
    for ident in key:
        try:
            bit = 1 << index[ident]
        except KeyError:
            raise ValueError(f"unknown divisor id {ident!r}") from None
        if mask & bit:
            raise ValueError(f"repeated divisor id {ident!r} in subset")
        mask |= bit
    return mask


# -- JSON wire format ----------------------------------------------------------


def system_to_json(
    system: ModificationSystem, loci: Optional[Mapping[str, MarkedLocus]] = None
) -> dict:
    obj: dict = {
        "ambient_dim": system.ambient_dim,
        "divisors": [{"id": d.ident, "mu": d.mu} for d in system.divisors],
        "strata": [
            {"subset": list(system.ids_of(mask)), "class": cls.to_json()}
            for mask, cls in sorted(system.strata.items())
        ],
    }
    if system.label:
        obj["label"] = system.label
    if system.ambient_class is not None:
        obj["ambient_class"] = system.ambient_class.to_json()
    if loci is not None:
        obj["loci"] = [
            {
                "name": name,
                "strata": [
                    {"subset": list(system.ids_of(mask)), "class": cls.to_json()}
                    for mask, cls in sorted(locus.strata.items())
                ],
            }
            for name, locus in sorted(loci.items())
        ]
    return obj


def system_from_json(obj: Mapping) -> tuple[ModificationSystem, dict[str, MarkedLocus]]:
    try:
        divisors = [(d["id"], int(d["mu"])) for d in obj.get("divisors", ())]
        strata = {
            frozenset(entry["subset"]): MotivicClass.from_json(entry["class"])
            for entry in obj.get("strata", ())
        }
        ambient = obj.get("ambient_class")
        system = ModificationSystem(
            int(obj["ambient_dim"]),
            divisors,
            {tuple(sorted(k)): v for k, v in strata.items()},
            ambient_class=MotivicClass.from_json(ambient) if ambient is not None else None,
            label=str(obj.get("label", "")),
        )
        loci: dict[str, MarkedLocus] = {}
        for entry in obj.get("loci", ()):
            strata_map = {
                system.mask_of(tuple(item["subset"])): MotivicClass.from_json(item["class"])
                for item in entry.get("strata", ())
            }
            loci[entry["name"]] = MarkedLocus(entry["name"], strata_map)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed system object: {exc}") from exc
    return system, loci
