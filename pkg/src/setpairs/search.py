"""Exhaustive search for m(a, b, 1) with isomorph rejection.

Partial systems grow one pair at a time.  A child is kept only when the pair
just added lies in the automorphism orbit of the pair that the canonical
labelling puts last (canonical augmentation); isomorphic siblings are merged
by canonical encoding.  Each isomorphism class is therefore visited once.

Fresh elements are introduced lazily, at most ``max_new_elements_per_pair``
per step.  Fresh elements are interchangeable, so only their counts on each
side are branched on.

:func:`naive_systems` is an independent labelled enumerator over a fixed
ground with no symmetry handling at all; the tests use it as the oracle for
the canonical engine.
"""
from __future__ import annotations

import logging
import math
import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator

import pynauty

from .analysis import FIVE_SIXTHS, exception_pairs
from .constructions import power_construction_size
from .core import (
    CanonicalForm,
    ContradictionError,
    InvalidArgumentError,
    SetPairError,
    SetPairSystem,
    encode_canonical,
    ids_of,
    nauty_graph,
    weight,
)

log = logging.getLogger(__name__)

Masks = tuple[tuple[int, int], ...]


class SearchBudgetExceeded(SetPairError):
    """The time budget ran out before the question was settled."""


@dataclass(frozen=True)
class SearchConfig:
    a: int
    b: int
    allow_exceptions: bool = False
    max_pairs: int | None = None
    max_new_elements_per_pair: int | None = None
    time_budget: float = 300.0
    worker_count: int = 1
    # prune with the 5/6 ceiling; off by default so the search does not lean
    # on the bound it is used to test
    theorem_pruning: bool = False
    split_depth: int = 2

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise InvalidArgumentError(f"bounds must be >= 1, got ({self.a}, {self.b})")
        for name in ("max_pairs", "max_new_elements_per_pair"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise InvalidArgumentError(f"{name} must be positive")
        if self.time_budget <= 0 or self.worker_count < 1:
            raise InvalidArgumentError("time_budget and worker_count must be positive")

    @property
    def fresh_cap(self) -> int:
        return self.a + self.b if self.max_new_elements_per_pair is None else self.max_new_elements_per_pair


@dataclass
class SearchOutcome:
    max_m: int
    extremal_classes: list[tuple[CanonicalForm, SetPairSystem]]
    nodes_explored: int
    proof_of_maximality: bool
    elapsed: float = 0.0

    @property
    def class_count(self) -> int:
        return len(self.extremal_classes)


# -- bounds ------------------------------------------------------------------


def _weight_sum(masks) -> Fraction:
    return sum((weight(a.bit_count(), b.bit_count()) for a, b in masks), Fraction(0))


def prune_bound(partial: SetPairSystem | Masks, cfg: SearchConfig, use_theorem: bool = True) -> int:
    """Upper bound on the size of any (a, b)-bounded completion of ``partial``.

    Every further pair weighs at least 1/C(a+b, a), so the unused share of the
    weight budget caps the number of pairs still to come.  The budget is 1,
    or 5/6 when exceptions are excluded, a, b >= 2 and ``use_theorem``.
    """
    masks = partial.masks if isinstance(partial, SetPairSystem) else partial
    budget = Fraction(1)
    if use_theorem and not cfg.allow_exceptions and cfg.a >= 2 and cfg.b >= 2:
        budget = FIVE_SIXTHS
    room = (budget - _weight_sum(masks)) * math.comb(cfg.a + cfg.b, cfg.a)
    return len(masks) + max(0, math.floor(room))


def theorem_ceiling(a: int, b: int) -> int:
    return math.floor(FIVE_SIXTHS * math.comb(a + b, a))


# -- the engine --------------------------------------------------------------


def _exact_covers(sides: list[int], n: int, cap: int) -> list[int]:
    """Subsets X of the ground, |X| <= cap, meeting every mask in ``sides`` exactly once."""
    m = len(sides)
    hits = [0] * n  # element -> bitmask of side indices containing it
    for j, s in enumerate(sides):
        for e in ids_of(s):
            hits[e] |= 1 << j
    free = [e for e in range(n) if not hits[e]]
    full = (1 << m) - 1
    out = []

    def extend(chosen: int, covered: int, size: int):
        if covered == full:
            for k in range(cap - size + 1):
                for extra in combinations(free, k):
                    x = chosen
                    for e in extra:
                        x |= 1 << e
                    out.append(x)
            return
        if size == cap:
            return
        j = (~covered & (covered + 1)).bit_length() - 1  # lowest uncovered index
        for e in ids_of(sides[j]):
            if not hits[e] & covered:
                extend(chosen | 1 << e, covered | hits[e], size + 1)

    extend(0, 0, 0)
    return out


def _fresh(start: int, count: int) -> int:
    return ((1 << count) - 1) << start


def candidate_pairs(masks: Masks, n: int, cfg: SearchConfig) -> Iterator[tuple[int, int, int]]:
    """New pairs (A, B, new ground size) that keep the system valid."""
    a, b, cap = cfg.a, cfg.b, cfg.fresh_cap
    if not masks:
        for p in range(1, a + 1):
            for q in range(1, b + 1):
                if p + q <= cap:
                    yield _fresh(0, p), _fresh(p, q), p + q
        return
    A_old = _exact_covers([bm for _, bm in masks], n, a)
    B_old = _exact_covers([am for am, _ in masks], n, b)
    for x in A_old:
        nx = x.bit_count()
        for y in B_old:
            if x & y:
                continue
            ny = y.bit_count()
            for fa in range(a - nx + 1):
                for fb in range(min(b - ny, cap - fa) + 1):
                    yield x | _fresh(n, fa), y | _fresh(n + fa, fb), n + fa + fb


def _is_canonical_child(masks: Masks, n: int) -> tuple[bool, bytes]:
    """Canonical-augmentation test for the last pair; also returns the child's encoding."""
    m = len(masks)
    g = nauty_graph(masks, n)
    lab = pynauty.canon_label(g)
    enc = encode_canonical(masks, n, lab)
    if m == 1:
        return True, enc
    orbits = pynauty.autgrp(g)[3]
    # pair vertices 0..m-1 take canonical positions 0..m-1; lab[m-1] is the canonical last pair
    return orbits[lab[m - 1]] == orbits[m - 1], enc


@dataclass
class _Stats:
    nodes: int = 0
    best: int = 0
    best_reps: dict[bytes, Masks] = field(default_factory=dict)
    timed_out: bool = False
    capped: bool = False


class _Walker:
    def __init__(self, cfg: SearchConfig, deadline: float, prune: bool,
                 on_node: Callable[[Masks, int, bytes], None] | None = None,
                 target: int | None = None, shared_best=None):
        self.cfg = cfg
        self.deadline = deadline
        self.prune = prune
        self.on_node = on_node
        self.target = target
        self.shared_best = shared_best
        self.stats = _Stats()
        self.found_target = False

    def children(self, masks: Masks, n: int) -> list[tuple[Masks, int, bytes]]:
        out = []
        seen = set()
        allow = self.cfg.allow_exceptions
        for am, bm, n2 in candidate_pairs(masks, n, self.cfg):
            if not allow and any(exception_pairs(pa, pb, am, bm) for pa, pb in masks):
                continue
            child = masks + ((am, bm),)
            ok, enc = _is_canonical_child(child, n2)
            if ok and enc not in seen:
                seen.add(enc)
                out.append((child, n2, enc))
        return out

    def _best(self) -> int:
        if self.shared_best is not None:
            return max(self.stats.best, self.shared_best.value)
        return self.stats.best

    def _record(self, masks: Masks, enc: bytes) -> None:
        st = self.stats
        m = len(masks)
        if m > st.best:
            st.best = m
            st.best_reps = {}
            if self.shared_best is not None:
                with self.shared_best.get_lock():
                    if m > self.shared_best.value:
                        self.shared_best.value = m
        if m == st.best:
            st.best_reps[enc] = masks

    def visit(self, masks: Masks, n: int, enc: bytes) -> int:
        """Explore the subtree at ``masks``; returns the deepest size reached in it."""
        st = self.stats
        st.nodes += 1
        if self.on_node is not None:
            self.on_node(masks, n, enc)
        self._record(masks, enc)
        m = len(masks)
        if self.target is not None and m >= self.target:
            self.found_target = True
            return m
        if time.monotonic() > self.deadline:
            st.timed_out = True
            return m
        if self.cfg.max_pairs is not None and m >= self.cfg.max_pairs:
            st.capped = True
            return m
        bound = None
        if self.prune:
            bound = prune_bound(masks, self.cfg, use_theorem=self.cfg.theorem_pruning)
            goal = self.target if self.target is not None else self._best()
            if bound < goal:
                return m
        deepest = m
        for child, n2, enc2 in self.children(masks, n):
            deepest = max(deepest, self.visit(child, n2, enc2))
            if self.found_target or st.timed_out:
                break
        if bound is not None and deepest > bound:
            raise ContradictionError(f"prune bound {bound} undercut by a completion of size {deepest}")
        return deepest

    def run(self, roots: list[tuple[Masks, int, bytes]]) -> None:
        for masks, n, enc in roots:
            self.visit(masks, n, enc)
            if self.found_target or self.stats.timed_out:
                return


def _system(masks: Masks) -> SetPairSystem:
    return SetPairSystem.from_masks(list(masks))


def _frontier(cfg: SearchConfig, depth: int, walker: _Walker) -> list[tuple[Masks, int, bytes]]:
    """Nodes at ``depth`` (visited, not expanded); shallower nodes are counted by ``walker``."""
    level = [((), 0, b"")]
    for _ in range(depth):
        nxt = []
        for masks, n, enc in level:
            if masks:
                walker.stats.nodes += 1
                if walker.on_node is not None:
                    walker.on_node(masks, n, enc)
                walker._record(masks, enc)
            nxt.extend(walker.children(masks, n))
        level = nxt
    return level


_worker_best = None


def _init_worker(shared):
    global _worker_best
    _worker_best = shared


def _run_subtree(args):
    cfg, deadline, root = args
    walker = _Walker(cfg, deadline, prune=True, shared_best=_worker_best)
    walker.run([root])
    st = walker.stats
    return st.nodes, st.best, st.best_reps, st.timed_out, st.capped


def search_max(cfg: SearchConfig) -> SearchOutcome:
    """m(a, b, 1) with one representative per extremal isomorphism class."""
    start = time.monotonic()
    deadline = start + cfg.time_budget
    if cfg.worker_count == 1:
        walker = _Walker(cfg, deadline, prune=True)
        walker.visit((), 0, b"")
        walker.stats.nodes -= 1  # the empty root is not a system
        nodes, best, reps = walker.stats.nodes, walker.stats.best, walker.stats.best_reps
        timed_out, capped = walker.stats.timed_out, walker.stats.capped
    else:
        shared = mp.Value("i", 0)
        head = _Walker(cfg, deadline, prune=False, shared_best=shared)
        roots = _frontier(cfg, cfg.split_depth, head)
        nodes, best, reps = head.stats.nodes, head.stats.best, dict(head.stats.best_reps)
        shared.value = best
        timed_out = capped = False
        ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
        with ProcessPoolExecutor(cfg.worker_count, mp_context=ctx, initializer=_init_worker,
                                 initargs=(shared,)) as pool:
            for w_nodes, w_best, w_reps, w_to, w_cap in pool.map(
                _run_subtree, [(cfg, deadline, r) for r in roots]
            ):
                nodes += w_nodes
                timed_out |= w_to
                capped |= w_cap
                if w_best > best:
                    best, reps = w_best, dict(w_reps)
                elif w_best == best:
                    reps.update(w_reps)
    classes = [(CanonicalForm(enc), _system(reps[enc])) for enc in sorted(reps)]
    proof = not timed_out and not capped
    if capped and cfg.max_pairs is not None and prune_bound((), cfg, use_theorem=False) <= cfg.max_pairs:
        proof = not timed_out
    outcome = SearchOutcome(best, classes, nodes, proof, time.monotonic() - start)
    _check_outcome(outcome, cfg)
    return outcome


def _check_outcome(outcome: SearchOutcome, cfg: SearchConfig) -> None:
    from .core import is_bounded, is_one_cross_intersecting

    for _, rep in outcome.extremal_classes:
        if rep.m >= 2 and not (is_one_cross_intersecting(rep) and is_bounded(rep, cfg.a, cfg.b)):
            raise ContradictionError(f"search emitted an invalid representative {rep!r}")
    if cfg.a >= 2 and cfg.b >= 2 and not cfg.allow_exceptions and outcome.max_m > theorem_ceiling(cfg.a, cfg.b):
        raise ContradictionError(f"m({cfg.a},{cfg.b},1) >= {outcome.max_m} breaks the 5/6 ceiling")
    n = min(cfg.a, cfg.b)
    if outcome.proof_of_maximality and n >= 2 and (cfg.max_pairs is None or cfg.max_pairs >= outcome.max_m):
        if outcome.max_m < power_construction_size(n) and (cfg.max_pairs is None or power_construction_size(n) <= cfg.max_pairs):
            raise ContradictionError(
                f"exhaustive search found {outcome.max_m} < construction size {power_construction_size(n)}"
            )


def feasible(m: int, cfg: SearchConfig) -> bool:
    """Whether some (a, b)-bounded 1-cross intersecting system has ``m`` pairs.

    Raises :class:`SearchBudgetExceeded` when the budget runs out first.
    """
    if m < 2:
        raise InvalidArgumentError("feasible needs m >= 2")
    walker = _Walker(cfg, time.monotonic() + cfg.time_budget, prune=True, target=m)
    walker.visit((), 0, b"")
    if walker.found_target:
        return True
    if walker.stats.timed_out:
        raise SearchBudgetExceeded(f"no verdict on m = {m} within {cfg.time_budget} s")
    return False


def enumerate_classes(cfg: SearchConfig) -> Iterator[SetPairSystem]:
    """Every isomorphism class of valid systems (m >= 1), without bound pruning.

    Raises :class:`SearchBudgetExceeded` if the budget runs out mid-way.
    """
    found: list[SetPairSystem] = []
    walker = _Walker(cfg, time.monotonic() + cfg.time_budget, prune=False,
                     on_node=lambda masks, n, enc: found.append(_system(masks)))
    walker.visit((), 0, b"")
    if walker.stats.timed_out:
        raise SearchBudgetExceeded("enumeration did not finish within the budget")
    # the root call records the empty system first
    yield from found[1:]


# -- naive reference enumerator ---------------------------------------------


def _all_pairs(ground: int, a: int, b: int) -> list[tuple[int, int]]:
    out = []
    elems = range(ground)
    for p in range(1, a + 1):
        for A in combinations(elems, p):
            rest = [e for e in elems if e not in A]
            amask = sum(1 << e for e in A)
            for q in range(1, b + 1):
                for B in combinations(rest, q):
                    out.append((amask, sum(1 << e for e in B)))
    return out


def naive_systems(a: int, b: int, ground: int, allow_exceptions: bool = True,
                  max_m: int | None = None) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every labelled (a, b)-bounded 1-cross intersecting family on {0..ground-1}.

    Families are unordered: pairs are listed in increasing candidate order.
    No isomorph rejection of any kind.
    """
    cands = _all_pairs(ground, a, b)
    k = len(cands)
    compat = [0] * k
    for i, (ai, bi) in enumerate(cands):
        for j in range(i + 1, k):
            aj, bj = cands[j]
            if (ai & bj).bit_count() == 1 and (aj & bi).bit_count() == 1:
                if allow_exceptions or not exception_pairs(ai, bi, aj, bj):
                    compat[i] |= 1 << j
                    compat[j] |= 1 << i

    def grow(chosen: list[int], allowed: int):
        yield tuple(cands[i] for i in chosen)
        if max_m is not None and len(chosen) >= max_m:
            return
        while allowed:
            low = allowed & -allowed
            i = low.bit_length() - 1
            allowed ^= low
            chosen.append(i)
            yield from grow(chosen, allowed & compat[i])
            chosen.pop()

    all_mask = (1 << k) - 1
    for i in range(k):
        yield from grow([i], compat[i] & ~((1 << (i + 1)) - 1) & all_mask)


def naive_max(a: int, b: int, ground: int, allow_exceptions: bool = True) -> int:
    return max((len(f) for f in naive_systems(a, b, ground, allow_exceptions)), default=0)


def naive_ground_cap(m: int, a: int, b: int) -> int:
    """Largest ground an (a, b)-bounded 1-cross intersecting system of m pairs can use.

    Elements lying in no A_i or in no B_j cost one incidence each; an element
    in s sets A_i and t sets B_j costs s + t incidences and covers s*t of the
    m(m-1) ordered index pairs, each exactly once.  With at most m(a+b)
    incidences, n <= m(a+b) - sum(s + t - 1) over covering elements, and
    s + t - 1 >= r*s*t for the least ratio r allowed by s + t <= m.
    """
    if m < 2:
        return m * (a + b)
    r = min(Fraction(s + t - 1, s * t) for s in range(1, m) for t in range(1, m - s + 1))
    return max(0, m * (a + b) - math.ceil(r * m * (m - 1)))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SETPAIRS_WORKERS", "1")))
    except ValueError:
        return 1
