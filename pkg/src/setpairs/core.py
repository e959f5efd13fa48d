"""Set pair systems, the weight functional and the reduction operations.

A system is an ordered family of pairs ``(A_i, B_i)`` over a dense ground set
``{0, ..., n-1}``.  Every element carries a string label; ids are positions,
labels are identity.  Operations that drop elements (``remove``, ``restrict``)
compact the ids but keep labels, so ``S.named()`` is the stable view.

Sets are stored as Python ints used as bitsets; intersections are a single
``&`` and ``bit_count``.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import pynauty

A_SIDE = "A"
B_SIDE = "B"


class SetPairError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgumentError(SetPairError, ValueError):
    pass


class ResourceLimitError(SetPairError):
    pass


class ContradictionError(SetPairError):
    """A verified bound failed.  Carries the path of a counterexample dump."""

    def __init__(self, message: str, dump_path: str | None = None):
        super().__init__(message if dump_path is None else f"{message} (dump: {dump_path})")
        self.dump_path = dump_path


def mask_of(ids: Iterable[int]) -> int:
    out = 0
    for i in ids:
        out |= 1 << i
    return out


def ids_of(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


@dataclass(frozen=True)
class Element:
    id: int
    label: str | None = None


@dataclass(frozen=True)
class SetPair:
    A: frozenset[int]
    B: frozenset[int]

    @property
    def a(self) -> int:
        return len(self.A)

    @property
    def b(self) -> int:
        return len(self.B)

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.A), len(self.B)


@dataclass(frozen=True)
class SetPairSystem:
    """An indexed family of set pairs over a normalized ground set.

    Construct through :meth:`from_pairs` unless the ids are already dense and
    orphan-free; the constructor only validates.
    """

    pairs: tuple[SetPair, ...]
    labels: tuple[str, ...]
    origin: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.labels)
        used = 0
        for p in self.pairs:
            for e in p.A | p.B:
                if not 0 <= e < n:
                    raise InvalidArgumentError(f"element id {e} outside ground of size {n}")
            used |= mask_of(p.A) | mask_of(p.B)
        if used != (1 << n) - 1:
            raise InvalidArgumentError("ground contains elements used by no pair")
        if len(set(self.labels)) != n:
            raise InvalidArgumentError("element labels must be unique")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Iterable[Hashable], Iterable[Hashable]]]) -> "SetPairSystem":
        """Build a system from pairs of element names.

        Integer names keep their numeric order; any other names get ids in
        order of first appearance (A before B within a pair).
        """
        raw = [(list(A), list(B)) for A, B in pairs]
        names = [x for A, B in raw for x in (*A, *B)]
        if names and all(isinstance(x, int) and not isinstance(x, bool) for x in names):
            order = sorted(set(names))
        else:
            order = list(dict.fromkeys(names))
        index = {x: i for i, x in enumerate(order)}
        built = tuple(
            SetPair(frozenset(index[x] for x in A), frozenset(index[x] for x in B)) for A, B in raw
        )
        for (A, B), p in zip(raw, built):
            if len(A) != len(p.A) or len(B) != len(p.B):
                raise InvalidArgumentError("duplicate element inside a set")
        return cls(built, tuple(str(x) for x in order))

    @classmethod
    def from_masks(
        cls,
        masks: Sequence[tuple[int, int]],
        labels: Sequence[str] | None = None,
        origin: tuple[int, ...] | None = None,
    ) -> "SetPairSystem":
        """Build from bitmask pairs, dropping unused ids and compacting the rest."""
        used = 0
        for a, b in masks:
            used |= a | b
        keep = sorted(ids_of(used))
        if labels is None:
            labels = [str(i) for i in range(max(keep, default=-1) + 1)]
        remap = {old: new for new, old in enumerate(keep)}
        pairs = tuple(
            SetPair(frozenset(remap[e] for e in ids_of(a)), frozenset(remap[e] for e in ids_of(b)))
            for a, b in masks
        )
        return cls(pairs, tuple(labels[i] for i in keep), origin)

    # -- views --------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def ground(self) -> tuple[Element, ...]:
        return tuple(Element(i, lab) for i, lab in enumerate(self.labels))

    @cached_property
    def masks(self) -> tuple[tuple[int, int], ...]:
        return tuple((mask_of(p.A), mask_of(p.B)) for p in self.pairs)

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def element_id(self, v: int | str) -> int:
        """Resolve an element given by id (int) or label (str)."""
        if isinstance(v, str):
            try:
                return self._label_index[v]
            except KeyError:
                raise InvalidArgumentError(f"no element labelled {v!r}") from None
        if not 0 <= v < self.n:
            raise InvalidArgumentError(f"element id {v} not in ground of size {self.n}")
        return v

    def named(self) -> list[tuple[frozenset[str], frozenset[str]]]:
        lab = self.labels
        return [(frozenset(lab[e] for e in p.A), frozenset(lab[e] for e in p.B)) for p in self.pairs]

    def sizes(self) -> list[tuple[int, int]]:
        return [p.sizes for p in self.pairs]

    def swapped(self) -> "SetPairSystem":
        """The dual system (B_i, A_i); preserves being 1-cross intersecting."""
        return SetPairSystem(tuple(SetPair(p.B, p.A) for p in self.pairs), self.labels, self.origin)

    def relabel(self, element_perm: Sequence[int], pair_perm: Sequence[int] | None = None) -> "SetPairSystem":
        """Apply element bijection ``e -> element_perm[e]`` and reorder pairs.

        New pair ``k`` is old pair ``pair_perm[k]``.  Labels travel with their
        elements.
        """
        if sorted(element_perm) != list(range(self.n)):
            raise InvalidArgumentError("element_perm is not a permutation of the ground")
        if pair_perm is None:
            pair_perm = range(self.m)
        elif sorted(pair_perm) != list(range(self.m)):
            raise InvalidArgumentError("pair_perm is not a permutation of the indices")
        labels = [""] * self.n
        for old, new in enumerate(element_perm):
            labels[new] = self.labels[old]
        pairs = tuple(
            SetPair(
                frozenset(element_perm[e] for e in self.pairs[k].A),
                frozenset(element_perm[e] for e in self.pairs[k].B),
            )
            for k in pair_perm
        )
        return SetPairSystem(pairs, tuple(labels))

    def __repr__(self) -> str:
        body = ", ".join(
            "({%s},{%s})" % (",".join(sorted(A)), ",".join(sorted(B))) for A, B in self.named()
        )
        return f"SetPairSystem[{self.m}]({body})"


EMPTY = SetPairSystem((), ())


# -- arithmetic ---------------------------------------------------------------


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise InvalidArgumentError(f"binomial({n}, {k}): negative argument")
    if k > n:
        raise InvalidArgumentError(f"binomial({n}, {k}): k > n")
    return math.comb(n, k)


def weight(a: int, b: int) -> Fraction:
    """1/C(a+b, a) for side sizes a, b.  Zero sizes are allowed here (weight 1)."""
    return Fraction(1, math.comb(a + b, a))


def pair_weight(p: SetPair) -> Fraction:
    if not p.A or not p.B:
        raise InvalidArgumentError("pair weight undefined for an empty side")
    return weight(len(p.A), len(p.B))


def sigma(S: SetPairSystem) -> Fraction:
    return sum((pair_weight(p) for p in S.pairs), Fraction(0))


# -- predicates ---------------------------------------------------------------


def _require_m2(S: SetPairSystem) -> None:
    if S.m < 2:
        raise InvalidArgumentError(f"intersecting predicates need m >= 2, got m = {S.m}")


def is_cross_intersecting(S: SetPairSystem) -> bool:
    _require_m2(S)
    masks = S.masks
    for i, (ai, bi) in enumerate(masks):
        if ai & bi:
            return False
        for j, (_, bj) in enumerate(masks):
            if i != j and not ai & bj:
                return False
    return True


def is_one_cross_intersecting(S: SetPairSystem) -> bool:
    _require_m2(S)
    masks = S.masks
    for i, (ai, bi) in enumerate(masks):
        if ai & bi:
            return False
        for j, (_, bj) in enumerate(masks):
            if i != j and (ai & bj).bit_count() != 1:
                return False
    return True


def is_bounded(S: SetPairSystem, a: int, b: int) -> bool:
    return all(len(p.A) <= a and len(p.B) <= b for p in S.pairs)


# -- reductions ---------------------------------------------------------------


def restrict(S: SetPairSystem, J: Iterable[int]) -> SetPairSystem:
    """The subfamily S[J], kept in increasing index order."""
    J = sorted(set(J))
    if J and (J[0] < 0 or J[-1] >= S.m):
        raise InvalidArgumentError(f"index set {J} not contained in 0..{S.m - 1}")
    origin = tuple(S.origin[j] if S.origin else j for j in J)
    return SetPairSystem.from_masks([S.masks[j] for j in J], S.labels, origin)


def _element_mask(S: SetPairSystem, R: Iterable[int | str]) -> int:
    return mask_of(S.element_id(v) for v in R)


def remove(S: SetPairSystem, R: Iterable[int | str]) -> SetPairSystem:
    """S - R.  Sides may become empty; they are kept."""
    r = _element_mask(S, R)
    keep = ~r
    return SetPairSystem.from_masks([(a & keep, b & keep) for a, b in S.masks], S.labels, S.origin)


def safe_removal(S: SetPairSystem, R: Iterable[int | str]) -> bool:
    """True iff no v in R lies in A_i and B_j for distinct i, j."""
    r = _element_mask(S, R)
    masks = S.masks
    for i, (ai, _) in enumerate(masks):
        if not ai & r:
            continue
        for j, (_, bj) in enumerate(masks):
            if i != j and ai & bj & r:
                return False
    return True


def avoiding_indices(S: SetPairSystem, v: int | str, side: str = A_SIDE) -> frozenset[int]:
    """Indices i with v not in A_i (side "A") or not in B_i (side "B")."""
    bit = 1 << S.element_id(v)
    if side == A_SIDE:
        return frozenset(i for i, (a, _) in enumerate(S.masks) if not a & bit)
    if side == B_SIDE:
        return frozenset(i for i, (_, b) in enumerate(S.masks) if not b & bit)
    raise InvalidArgumentError(f"side must be 'A' or 'B', got {side!r}")


# -- canonical forms ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalForm:
    encoding: bytes

    def hex(self) -> str:
        return self.encoding.hex()


def nauty_graph(masks: Sequence[tuple[int, int]], n: int) -> pynauty.Graph:
    """Colored graph whose color-preserving isomorphisms are system isomorphisms.

    Vertices: 0..m-1 carry the A-sides, m..2m-1 the B-sides, 2m.. the
    elements.  A-vertex i is joined to B-vertex m+i, so pairs stay whole.
    """
    m = len(masks)
    adj: dict[int, list[int]] = {}
    for i, (a, b) in enumerate(masks):
        adj[i] = [m + i] + [2 * m + e for e in ids_of(a)]
        adj[m + i] = [2 * m + e for e in ids_of(b)]
    coloring = [set(range(m)), set(range(m, 2 * m))]
    if n:
        coloring.append(set(range(2 * m, 2 * m + n)))
    return pynauty.Graph(2 * m + n, directed=False, adjacency_dict=adj, vertex_coloring=coloring)


def encode_canonical(masks: Sequence[tuple[int, int]], n: int, lab: Sequence[int]) -> bytes:
    """Bytes of the system relabelled by a nauty canonical labelling ``lab``."""
    m = len(masks)
    elem_pos = {lab[k] - 2 * m: k - 2 * m for k in range(2 * m, 2 * m + n)}
    width = (n + 7) // 8 or 1
    out = [struct.pack(">II", m, n)]
    for k in range(m):
        a, b = masks[lab[k]]
        ca = mask_of(elem_pos[e] for e in ids_of(a))
        cb = mask_of(elem_pos[e] for e in ids_of(b))
        out.append(ca.to_bytes(width, "big") + cb.to_bytes(width, "big"))
    return b"".join(out)


def canonical_masks(masks: Sequence[tuple[int, int]], n: int) -> bytes:
    if not masks:
        return struct.pack(">II", 0, 0)
    lab = pynauty.canon_label(nauty_graph(masks, n))
    return encode_canonical(masks, n, lab)


def canonical_form(S: SetPairSystem, dual: bool = False) -> CanonicalForm:
    """Isomorphism-class encoding up to element renaming and pair reordering.

    With ``dual=True`` the role swap (A_i, B_i) -> (B_i, A_i) is also quotiented.
    """
    enc = canonical_masks(S.masks, S.n)
    if dual:
        enc = min(enc, canonical_masks([(b, a) for a, b in S.masks], S.n))
    return CanonicalForm(enc)


def automorphism_count(S: SetPairSystem) -> int:
    """Order of the group of element permutations mapping the family to itself."""
    if S.m == 0:
        return 1
    _, mant, exp, _, _ = pynauty.autgrp(nauty_graph(S.masks, S.n))
    return round(mant * 10**exp)
