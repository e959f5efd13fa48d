"""Exact verifiers: Bollobas, averaging, binomial-ratio scans, diamond,
exception taxonomy, the 5/6 bound and the biclique dual view."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    A_SIDE,
    B_SIDE,
    ContradictionError,
    InvalidArgumentError,
    SetPairSystem,
    is_cross_intersecting,
    is_one_cross_intersecting,
    sigma,
    weight,
)
from .jsonio import dump_counterexample

log = logging.getLogger(__name__)

FIVE_SIXTHS = Fraction(5, 6)
TWENTY_NINE_THIRTIETHS = Fraction(29, 30)
ONE_THIRD = Fraction(1, 3)
THREE_TENTHS = Fraction(3, 10)
ONE_FIFTH = Fraction(1, 5)


def _contradiction(S: SetPairSystem, reason: str) -> ContradictionError:
    return ContradictionError(reason, dump_counterexample(S, reason))


def check_bollobas(S: SetPairSystem) -> tuple[Fraction, bool]:
    if not is_cross_intersecting(S):
        raise InvalidArgumentError("check_bollobas needs a cross intersecting system")
    total = sigma(S)
    if total > 1:
        raise _contradiction(S, f"Bollobas sum {total} exceeds 1")
    return total, total == 1


def _sigma_loose(masks) -> Fraction:
    # weight of a pair with an emptied side is 1/C(k, k) = 1
    return sum((weight(a.bit_count(), b.bit_count()) for a, b in masks), Fraction(0))


def averaging_terms(S: SetPairSystem, side: str = A_SIDE) -> list[Fraction]:
    """Sigma(S[I_v^side] - {v}) for every ground element v, in id order."""
    if side not in (A_SIDE, B_SIDE):
        raise InvalidArgumentError(f"side must be 'A' or 'B', got {side!r}")
    k = 0 if side == A_SIDE else 1
    terms = []
    for v in range(S.n):
        bit = 1 << v
        kept = [(a & ~bit, b & ~bit) for a, b in S.masks if not (a, b)[k] & bit]
        terms.append(_sigma_loose(kept))
    return terms


def check_averaging(S: SetPairSystem, side: str = A_SIDE) -> bool:
    if S.m == 0:
        raise InvalidArgumentError("averaging identity needs a nonempty ground")
    for i, (a, b) in enumerate(S.masks):
        if not a or not b or a & b:
            raise InvalidArgumentError(f"pair {i} has an empty side or A_i and B_i meet")
    terms = averaging_terms(S, side)
    total = sigma(S)
    return total == sum(terms, Fraction(0)) / S.n and total <= max(terms)


# -- binomial ratio scans ----------------------------------------------------


@dataclass
class LemmaScan:
    name: str
    rows: list[tuple[int, int, Fraction]]
    violations: list[tuple[int, int, Fraction]]
    equality_points: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def one_third_ratio(a: int, b: int) -> Fraction:
    return Fraction(math.comb(a + b - 2, a - 1), math.comb(a + b, a))


def one_fifth_ratio(a: int, b: int) -> Fraction:
    return Fraction(math.comb(a + b - 3, b - 1), math.comb(a + b, b))


def scan_lemma_one_third(max_size: int) -> LemmaScan:
    """C(a+b-2, a-1)/C(a+b, a) over 2 <= a, b <= max_size.

    Bound: 1/3 at (2, 2), 3/10 everywhere else.  Equality points are where the
    ratio hits 1/3.
    """
    if max_size < 2:
        raise InvalidArgumentError("scan range must reach 2")
    rows, bad, eq = [], [], []
    for a in range(2, max_size + 1):
        for b in range(2, max_size + 1):
            r = one_third_ratio(a, b)
            rows.append((a, b, r))
            if r > (ONE_THIRD if (a, b) == (2, 2) else THREE_TENTHS):
                bad.append((a, b, r))
            if r == ONE_THIRD:
                eq.append((a, b))
    return LemmaScan("one-third", rows, bad, eq)


def scan_lemma_one_fifth(max_size: int) -> LemmaScan:
    if max_size < 2:
        raise InvalidArgumentError("scan range must reach 2")
    rows, bad, eq = [], [], []
    for a in range(2, max_size + 1):
        for b in range(2, max_size + 1):
            r = one_fifth_ratio(a, b)
            rows.append((a, b, r))
            if r > ONE_FIFTH:
                bad.append((a, b, r))
            if r == ONE_FIFTH:
                eq.append((a, b))
    return LemmaScan("one-fifth", rows, bad, eq)


# -- patterns ----------------------------------------------------------------


def find_diamond(S: SetPairSystem) -> tuple[int, int] | None:
    """Smallest (i, j) with all four sets of size 2, A_i meeting A_j and B_i meeting B_j."""
    two = [i for i, (a, b) in enumerate(S.masks) if a.bit_count() == 2 and b.bit_count() == 2]
    masks = S.masks
    for x, i in enumerate(two):
        for j in two[x + 1:]:
            if masks[i][0] & masks[j][0] and masks[i][1] & masks[j][1]:
                return i, j
    return None


@dataclass
class ExceptionReport:
    """Which singleton configurations (a), (b), (c) occur, with the first witness of each."""

    witnesses: dict[str, tuple[int, int]] = field(default_factory=dict)

    @property
    def cases(self) -> frozenset[str]:
        return frozenset(self.witnesses)

    def __bool__(self) -> bool:
        return bool(self.witnesses)

    def to_json(self) -> dict:
        return {"cases": sorted(self.witnesses), "witnesses": {k: list(v) for k, v in sorted(self.witnesses.items())}}


def exception_pairs(ai: int, bi: int, aj: int, bj: int) -> list[str]:
    """Exception cases realised by one pair of pairs."""
    found = []
    a1 = ai.bit_count() == 1 and aj.bit_count() == 1
    b1 = bi.bit_count() == 1 and bj.bit_count() == 1
    if a1 and bi & bj:
        found.append("a")
    if b1 and ai & aj:
        found.append("b")
    if a1 and b1:
        found.append("c")
    return found


def exception_classify(S: SetPairSystem) -> ExceptionReport:
    report = ExceptionReport()
    masks = S.masks
    for i in range(S.m):
        for j in range(i + 1, S.m):
            for case in exception_pairs(*masks[i], *masks[j]):
                report.witnesses.setdefault(case, (i, j))
            if len(report.witnesses) == 3:
                return report
    return report


def check_main_theorem(S: SetPairSystem) -> tuple[Fraction, ExceptionReport, bool]:
    """Sigma, the exception report, and whether the pair is consistent with the 5/6 bound.

    Also gates the weaker 29/30 bound when every side has size >= 2.  Any
    inconsistency raises :class:`ContradictionError` with a dump of ``S``.
    """
    if not is_one_cross_intersecting(S):
        raise InvalidArgumentError("check_main_theorem needs a 1-cross intersecting system")
    total = sigma(S)
    report = exception_classify(S)
    consistent = bool(report) or total <= FIVE_SIXTHS
    if not consistent:
        raise _contradiction(S, f"sigma {total} > 5/6 with no exception present")
    if all(p.a >= 2 and p.b >= 2 for p in S.pairs) and total > TWENTY_NINE_THIRTIETHS:
        raise _contradiction(S, f"sigma {total} > 29/30 with all sides of size >= 2")
    return total, report, consistent


def check_diamond(S: SetPairSystem) -> tuple[tuple[int, int] | None, bool]:
    """The diamond pattern, and whether sigma <= 5/6 holds when it is present."""
    hit = find_diamond(S)
    if hit is None:
        return None, True
    if not is_one_cross_intersecting(S):
        return hit, True
    if exception_classify(S):
        log.info("diamond %s co-occurs with an exception in %r", hit, S)
    if sigma(S) > FIVE_SIXTHS:
        raise _contradiction(S, f"diamond at {hit} but sigma > 5/6")
    return hit, True


# -- biclique view -----------------------------------------------------------


@dataclass(frozen=True)
class BicliqueView:
    """Per element v: sources S_v = {i : v in A_i} and sinks T_v = {i : v in B_i}."""

    sources: tuple[frozenset[int], ...]
    sinks: tuple[frozenset[int], ...]
    m: int
    labels: tuple[str, ...] | None = None

    def cover_count(self) -> int:
        return sum(len(s) * len(t) for s, t in zip(self.sources, self.sinks))

    def is_exact_cover(self) -> bool:
        """Every ordered (i, j), i != j, lies in exactly one S_v x T_v, and none with i == j."""
        seen = set()
        for s, t in zip(self.sources, self.sinks):
            if s & t:
                return False
            for i in s:
                for j in t:
                    if (i, j) in seen:
                        return False
                    seen.add((i, j))
        return len(seen) == self.m * (self.m - 1)


def to_bicliques(S: SetPairSystem) -> BicliqueView:
    sources = tuple(frozenset(i for i, p in enumerate(S.pairs) if v in p.A) for v in range(S.n))
    sinks = tuple(frozenset(i for i, p in enumerate(S.pairs) if v in p.B) for v in range(S.n))
    view = BicliqueView(sources, sinks, S.m, S.labels)
    if S.m >= 2 and is_one_cross_intersecting(S) and not view.is_exact_cover():
        raise _contradiction(S, "1-cross intersecting system whose bicliques are not an exact cover")
    return view


def from_bicliques(view: BicliqueView, m: int | None = None) -> SetPairSystem:
    m = view.m if m is None else m
    A = [0] * m
    B = [0] * m
    for v, (s, t) in enumerate(zip(view.sources, view.sinks)):
        if s & t:
            raise InvalidArgumentError(f"element {v}: source and sink sets meet")
        for i in s | t:
            if not 0 <= i < m:
                raise InvalidArgumentError(f"element {v}: index {i} outside 0..{m - 1}")
        for i in s:
            A[i] |= 1 << v
        for i in t:
            B[i] |= 1 << v
    labels = view.labels if view.labels is not None else [str(v) for v in range(len(view.sources))]
    return SetPairSystem.from_masks(list(zip(A, B)), labels)

