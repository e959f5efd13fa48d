"""Named systems and the composition operator behind the lower bounds."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .core import (
    ContradictionError,
    InvalidArgumentError,
    ResourceLimitError,
    SetPair,
    SetPairSystem,
    binomial,
    is_one_cross_intersecting,
)

MAX_PAIRS = 10**6
# compose re-checks its output with the pairwise checker up to this many pairs
CHECK_THRESHOLD = 2000


def five_cycle() -> SetPairSystem:
    """A_i = {i, i+1}, B_i = {i-1, i+2} modulo 5: the two complementary 5-cycles."""
    return SetPairSystem.from_pairs(
        ({i, (i + 1) % 5}, {(i - 1) % 5, (i + 2) % 5}) for i in range(5)
    )


def singleton_swap() -> SetPairSystem:
    return SetPairSystem.from_pairs([(["x"], ["y"]), (["y"], ["x"])])


def triangle() -> SetPairSystem:
    """({x},{y,z}), ({y},{x,z}), ({z},{x,y}); sigma = 1, excepted by case (a)."""
    return SetPairSystem.from_pairs(
        [(["x"], ["y", "z"]), (["y"], ["x", "z"]), (["z"], ["x", "y"])]
    )


def diamond_fixture() -> SetPairSystem:
    """Two pairs forming the 22-diamond (indices 1, 2) plus ({w},{v}).

    Sigma is exactly 5/6, the equality case of the diamond bound.
    """
    return SetPairSystem.from_pairs(
        [(["w"], ["v"]), (["v", "x"], ["y", "w"]), (["v", "y"], ["x", "w"])]
    )


def figure1_fixture() -> SetPairSystem:
    """The five (2,2) pairs on {x, y, z, a, b} forced in the last subcase of the 5/6 proof."""
    return SetPairSystem.from_pairs(
        [
            (["x", "y"], ["z", "a"]),
            (["a", "b"], ["x", "z"]),
            (["x", "a"], ["y", "b"]),
            (["z", "y"], ["x", "b"]),
            (["z", "b"], ["y", "a"]),
        ]
    )


def bollobas_family(a: int, b: int, max_pairs: int = MAX_PAIRS) -> SetPairSystem:
    """Every a-subset of {0..a+b-1} paired with its complement."""
    if a < 1 or b < 1:
        raise InvalidArgumentError(f"bollobas_family needs a, b >= 1, got ({a}, {b})")
    size = binomial(a + b, a)
    if size > max_pairs:
        raise ResourceLimitError(f"C({a + b},{a}) = {size} pairs exceeds cap {max_pairs}")
    ground = frozenset(range(a + b))
    pairs = tuple(SetPair(frozenset(c), ground - frozenset(c)) for c in itertools.combinations(range(a + b), a))
    return SetPairSystem(pairs, tuple(str(i) for i in range(a + b)))


@dataclass(frozen=True)
class CompositionSpec:
    outer: SetPairSystem
    inners: tuple[SetPairSystem, ...]

    def __post_init__(self):
        if len(self.inners) != self.outer.m:
            raise InvalidArgumentError(
                f"composition needs one inner system per outer pair: {len(self.inners)} != {self.outer.m}"
            )


def _check_one_cross(S: SetPairSystem, what: str) -> None:
    if S.m >= 2 and not is_one_cross_intersecting(S):
        raise InvalidArgumentError(f"{what} is not 1-cross intersecting")
    if any(not p.A or not p.B for p in S.pairs):
        raise InvalidArgumentError(f"{what} has an empty side")


def compose(spec: CompositionSpec | SetPairSystem, inners: Sequence[SetPairSystem] | None = None,
            max_pairs: int = MAX_PAIRS) -> SetPairSystem:
    """Blow up each outer pair i into the pairs of inner system i.

    Pair (i, j) is (A_i u A'_j, B_i u B'_j) where the primed sets come from
    inner i and every ground is made disjoint.  Distinct outer indices meet
    once through the outer system and not at all through the inners; equal
    outer indices meet only through the inner system.  Outer labels are kept,
    inner labels get a ``.i`` suffix, or another separator when "." already
    occurs in some label.
    """
    if not isinstance(spec, CompositionSpec):
        spec = CompositionSpec(spec, tuple(inners or ()))
    outer = spec.outer
    _check_one_cross(outer, "outer system")
    for i, inner in enumerate(spec.inners):
        _check_one_cross(inner, f"inner system {i}")
    total = sum(inner.m for inner in spec.inners)
    if total > max_pairs:
        raise ResourceLimitError(f"composition would have {total} pairs, cap is {max_pairs}")

    used = "".join(outer.labels) + "".join(lab for inner in spec.inners for lab in inner.labels)
    sep = next(c for c in "./:#|~^@!" + "".join(map(chr, range(0x2000, 0x3000))) if c not in used)
    labels = list(outer.labels)
    masks = []
    offset = outer.n
    for i, ((oa, ob), inner) in enumerate(zip(outer.masks, spec.inners)):
        labels.extend(f"{lab}{sep}{i}" for lab in inner.labels)
        for ia, ib in inner.masks:
            masks.append((oa | ia << offset, ob | ib << offset))
        offset += inner.n
    result = SetPairSystem.from_masks(masks, labels)
    if 2 <= result.m <= CHECK_THRESHOLD and not is_one_cross_intersecting(result):
        raise ContradictionError("composition of 1-cross intersecting systems is not 1-cross intersecting")
    return result


def power_construction_size(n: int) -> int:
    return 5 ** (n // 2) if n % 2 == 0 else 2 * 5 ** ((n - 1) // 2)


def power_construction(n: int, max_pairs: int = MAX_PAIRS) -> SetPairSystem:
    """A 1-cross intersecting (n, n) system with 5^(n/2) or 2*5^((n-1)/2) pairs."""
    if n < 2:
        raise InvalidArgumentError(f"power_construction needs n >= 2, got {n}")
    if power_construction_size(n) > max_pairs:
        raise ResourceLimitError(f"{power_construction_size(n)} pairs exceeds cap {max_pairs}")
    if n == 2:
        return five_cycle()
    inner = singleton_swap() if n == 3 else power_construction(n - 2, max_pairs)
    return compose(CompositionSpec(five_cycle(), (inner,) * 5), max_pairs=max_pairs)
