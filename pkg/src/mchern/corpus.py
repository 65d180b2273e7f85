"""Deterministic test corpora: surface programs and crepant chains.

The surface corpus enumerates blow-up programs breadth-first, trying
every admissible event type at every step (generic point, a point on
each existing curve, each crossing), and truncates at a size cap so the
sweep stays desk-scale.  Order-swap pairs pick programs whose final two
events are independent and exchange them; the geometry downstairs cannot
tell the difference, which the tests verify exactly.

The chain builders insert a chain of rational curves into a trivial
system one curve at a time, as codimension-1 centers.  Every inserted
divisor gets multiplicity 0, giving the discrepancy-free flavor of a
minimal resolution; two insertion orders must produce identical systems.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Optional

from .blowup import BlowupCenter, blow_up
from .modsys import ModificationSystem
from .ring import LPolynomial, MotivicClass
from .surface import Event, GenericPoint, IntersectionPoint, PointOnCurve, SurfaceModel


def event_choices(surface: SurfaceModel) -> list[Event]:
    """All admissible next events, in a fixed deterministic order."""
    choices: list[Event] = [GenericPoint()]
    for j in range(1, surface.k + 1):
        choices.append(PointOnCurve(j))
    for a, b in surface.meeting_pairs():
        choices.append(IntersectionPoint(a, b))
    return choices


def surface_corpus(max_events: int = 6, limit: int = 500) -> list[tuple[Event, ...]]:
    """Breadth-first enumeration of event programs, capped at ``limit``."""
    programs: list[tuple[Event, ...]] = []
    queue: deque[tuple[tuple[Event, ...], SurfaceModel]] = deque()
    queue.append(((), SurfaceModel.plane()))
    while queue and len(programs) < limit:
        events, surface = queue.popleft()
        programs.append(events)
        if len(events) < max_events:
            for event in event_choices(surface):
                queue.append((events + (event,), surface.apply_event(event)))
    return programs


def _references(event: Event) -> tuple[int, ...]:
    if isinstance(event, PointOnCurve):
        return (event.curve,)
    if isinstance(event, IntersectionPoint):
        return (event.a, event.b)
    return ()


def swap_last_two(program: tuple[Event, ...]) -> Optional[tuple[Event, ...]]:
    """Exchange the final two events when they are independent.

    The last event is independent of the one before it when it does not
    reference the curve that event creates; neither event can reference
    the other's curve, so no index remapping is needed.
    """
    if len(program) < 2:
        return None
    first, second = program[-2], program[-1]
    created = len(program) - 1  # curve index made by the first of the two
    if created in _references(second) or first == second:
        return None
    return program[:-2] + (second, first)


def order_swap_pairs(
    programs: Iterable[tuple[Event, ...]], want: int = 20
) -> list[tuple[tuple[Event, ...], tuple[Event, ...]]]:
    pairs = []
    seen = set()
    for program in programs:
        swapped = swap_last_two(program)
        if swapped is None:
            continue
        key = frozenset((program, swapped))
        if key in seen:
            continue
        seen.add(key)
        pairs.append((program, swapped))
        if len(pairs) >= want:
            break
    return pairs


def final_transposition(program: tuple[Event, ...]) -> dict[str, str]:
    """Divisor relabeling aligning a program with its last-two swap."""
    k = len(program)
    return {f"e{k - 1}": f"e{k}", f"e{k}": f"e{k - 1}"}


def systems_isomorphic_under(
    a: ModificationSystem, b: ModificationSystem, ident_map: Mapping[str, str]
) -> bool:
    """Exact equality of systems after renaming a's divisors via ident_map."""
    if a.ambient_dim != b.ambient_dim or len(a.divisors) != len(b.divisors):
        return False
    mapped_mu = {ident_map.get(d.ident, d.ident): d.mu for d in a.divisors}
    if mapped_mu != {d.ident: d.mu for d in b.divisors}:
        return False
    b_strata = {frozenset(b.ids_of(mask)): cls for mask, cls in b.strata.items()}
    a_strata = {
        frozenset(ident_map.get(i, i) for i in a.ids_of(mask)): cls
        for mask, cls in a.strata.items()
    }
    if set(a_strata) != set(b_strata):
        return False
    return all(a_strata[key] == b_strata[key] for key in a_strata)


def systems_equal_by_ident(a: ModificationSystem, b: ModificationSystem) -> bool:
    return systems_isomorphic_under(a, b, {})


# -- discrepancy-free chains -----------------------------------------------------


def trivial_plane_system() -> ModificationSystem:
    cls = MotivicClass(LPolynomial((1, 1, 1)))
    return ModificationSystem(2, (), {(): cls}, ambient_class=cls, label="plane")


def chain_insertion_center(
    system: ModificationSystem, position: int, inserted: set[int]
) -> BlowupCenter:
    """The chain curve at ``position`` as a codimension-1 center.

    The curve meets whichever of its chain neighbors are already present,
    one point each; the rest of it lies in the open stratum.
    """
    neighbors = [p for p in (position - 1, position + 1) if p in inserted]
    strata: dict[frozenset[str], MotivicClass] = {
        frozenset(): MotivicClass(LPolynomial((1 - len(neighbors), 1)))
    }
    for p in neighbors:
        strata[frozenset((f"c{p}",))] = MotivicClass.one()
    return BlowupCenter(codim=1, containing=frozenset(), center_strata=strata)


def chain_system(length: int, order: Iterable[int]) -> ModificationSystem:
    """Insert a chain of ``length`` rational curves in the given order.

    Every insertion is a codimension-1 step, so each new divisor carries
    multiplicity 0.
    """
    order = list(order)
    if sorted(order) != list(range(1, length + 1)):
        raise ValueError("order must be a permutation of 1..length")
    system = trivial_plane_system()
    inserted: set[int] = set()
    for position in order:
        center = chain_insertion_center(system, position, inserted)
        system = blow_up(system, center, fresh_id=f"c{position}").system
        inserted.add(position)
    return system


def chain_two_orders(length: int) -> tuple[ModificationSystem, ModificationSystem]:
    """The same chain built left-to-right and odds-before-evens."""
    forward = list(range(1, length + 1))
    shuffled = [p for p in forward if p % 2 == 1] + [p for p in forward if p % 2 == 0]
    return chain_system(length, forward), chain_system(length, shuffled)
