from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from setpairs import (
    ContradictionError,
    InvalidArgumentError,
    SetPairSystem,
    bollobas_family,
    five_cycle,
    power_construction,
    restrict,
    singleton_swap,
    triangle,
)
from setpairs.analysis import (
    averaging_terms,
    check_averaging,
    check_bollobas,
    check_diamond,
    check_main_theorem,
    exception_classify,
    find_diamond,
    from_bicliques,
    one_fifth_ratio,
    one_third_ratio,
    scan_lemma_one_fifth,
    scan_lemma_one_third,
    to_bicliques,
    BicliqueView,
)
from setpairs.constructions import diamond_fixture

import oracles
from strategies import constructions, raw_systems


class TestBollobas:
    def test_equality_family(self):
        assert check_bollobas(bollobas_family(2, 2)) == (1, True)

    def test_five_cycle(self):
        assert check_bollobas(five_cycle()) == (Fraction(5, 6), False)

    def test_restriction(self):
        assert check_bollobas(restrict(five_cycle(), {0, 1, 2})) == (Fraction(1, 2), False)

    def test_requires_cross(self):
        S = SetPairSystem.from_pairs([(["x"], ["y"]), (["z"], ["w"])])
        with pytest.raises(InvalidArgumentError):
            check_bollobas(S)


class TestAveraging:
    def test_examples(self):
        assert check_averaging(five_cycle(), "A")
        assert check_averaging(power_construction(3), "B")
        assert check_averaging(SetPairSystem.from_pairs([(["x"], ["y"])]), "A")
        assert averaging_terms(SetPairSystem.from_pairs([(["x"], ["y"])]), "A") == [0, 1]

    def test_precondition(self):
        S = SetPairSystem.from_pairs([(["x"], ["x", "y"])])
        with pytest.raises(InvalidArgumentError):
            check_averaging(S, "A")
        with pytest.raises(InvalidArgumentError):
            check_averaging(five_cycle(), "C")

    @given(raw_systems(max_m=4, max_n=6), st.sampled_from("AB"))
    def test_identity_on_arbitrary_systems(self, S, side):
        # the identity needs only nonempty disjoint sides, not intersection properties
        terms = averaging_terms(S, side)
        assert [t for t in terms] == oracles.averaging_bruteforce(S, side)
        assert check_averaging(S, side)


class TestLemmaScans:
    def test_one_third_points(self):
        assert one_third_ratio(2, 2) == Fraction(2, 6) == Fraction(1, 3)
        assert one_third_ratio(2, 3) == Fraction(3, 10)

    def test_one_fifth_points(self):
        assert one_fifth_ratio(3, 2) == Fraction(2, 10) == Fraction(1, 5)
        assert one_fifth_ratio(2, 2) == Fraction(1, 6)

    def test_one_third_scan(self):
        scan = scan_lemma_one_third(100)
        assert scan.violations == []
        assert scan.equality_points == [(2, 2)]
        assert len(scan.rows) == 99 * 99

    def test_one_fifth_scan_against_integer_oracle(self):
        scan = scan_lemma_one_fifth(100)
        assert scan.violations == []
        oracle_eq = [(a, b) for a in range(2, 101) for b in range(2, 101)
                     if oracles.one_fifth_equality_integer(a, b) == 0]
        assert all(oracles.one_fifth_equality_integer(a, b) >= 0 for a in range(2, 101) for b in range(2, 101))
        assert scan.equality_points == oracle_eq == [(3, 2), (4, 2)]

    @pytest.mark.parametrize("a,b", [(2, 2), (3, 7), (10, 4), (50, 50)])
    def test_one_third_closed_form(self, a, b):
        num, den = oracles.one_third_cross_multiplied(a, b)
        assert one_third_ratio(a, b) == Fraction(num, den)

    def test_scan_range(self):
        with pytest.raises(InvalidArgumentError):
            scan_lemma_one_third(1)
        scan = scan_lemma_one_third(2)
        assert scan.ok and scan.equality_points == [(2, 2)]


class TestPatterns:
    def test_diamond_absent_in_five_cycle(self):
        S = five_cycle()
        assert find_diamond(S) is None
        (A0, B0), (A1, B1) = S.named()[:2]
        assert A0 & A1 == {"1"} and not B0 & B1

    def test_diamond_fixture(self):
        S = diamond_fixture()
        assert find_diamond(S) == (1, 2)
        assert check_diamond(S) == ((1, 2), True)

    def test_diamond_needs_size_two(self):
        assert find_diamond(power_construction(3)) is None

    def test_exceptions(self):
        r = exception_classify(triangle())
        assert r.cases == {"a"} and r.witnesses["a"] == (0, 1)
        assert exception_classify(singleton_swap()).cases == {"c"}
        assert not exception_classify(five_cycle())
        assert exception_classify(triangle().swapped()).witnesses == {"b": (0, 1)}

    @given(raw_systems(max_m=5, max_n=5))
    def test_exception_witness_invariants(self, S):
        rep = exception_classify(S)
        named = oracles.named_pairs(S)
        for case, (i, j) in rep.witnesses.items():
            assert i < j
            (Ai, Bi), (Aj, Bj) = named[i], named[j]
            if case == "a":
                assert len(Ai) == len(Aj) == 1 and Bi & Bj
            elif case == "b":
                assert len(Bi) == len(Bj) == 1 and Ai & Aj
            else:
                assert len(Ai) == len(Aj) == len(Bi) == len(Bj) == 1
        # witnesses are lexicographically first
        for case in "abc":
            first = None
            for i in range(S.m):
                for j in range(i + 1, S.m):
                    (Ai, Bi), (Aj, Bj) = named[i], named[j]
                    hit = {"a": len(Ai) == len(Aj) == 1 and bool(Bi & Bj),
                           "b": len(Bi) == len(Bj) == 1 and bool(Ai & Aj),
                           "c": len(Ai) == len(Aj) == len(Bi) == len(Bj) == 1}[case]
                    if hit and first is None:
                        first = (i, j)
            assert rep.witnesses.get(case) == first


class TestMainTheorem:
    def test_five_cycle(self):
        total, rep, ok = check_main_theorem(five_cycle())
        assert total == Fraction(5, 6) and not rep and ok

    def test_triangle(self):
        total, rep, ok = check_main_theorem(triangle())
        assert total == 1 and rep.cases == {"a"} and ok

    def test_power4(self):
        total, rep, ok = check_main_theorem(power_construction(4))
        assert total == Fraction(5, 14) and not rep and ok

    def test_precondition(self):
        with pytest.raises(InvalidArgumentError):
            check_main_theorem(bollobas_family(2, 2))

    def test_contradiction_dump(self, tmp_path, monkeypatch):
        # a cross intersecting (not 1-cross) system with sigma = 1 fed past the guard
        monkeypatch.setenv("SETPAIRS_DUMP_DIR", str(tmp_path))
        import setpairs.analysis as an
        monkeypatch.setattr(an, "is_one_cross_intersecting", lambda S: True)
        with pytest.raises(ContradictionError) as exc:
            check_main_theorem(bollobas_family(2, 2))
        assert exc.value.dump_path and (tmp_path / exc.value.dump_path.split("/")[-1]).exists()


class TestBicliques:
    def test_five_cycle_view(self):
        view = to_bicliques(five_cycle())
        assert len(view.sources) == 5
        assert all(len(s) == len(t) == 2 for s, t in zip(view.sources, view.sinks))
        assert view.sources[0] == {0, 4} and view.sinks[0] == {1, 3}
        assert view.is_exact_cover()

    def test_singleton_swap_view(self):
        view = to_bicliques(singleton_swap())
        assert [len(s) for s in view.sources] == [1, 1] and [len(t) for t in view.sinks] == [1, 1]

    def test_non_one_cross(self):
        view = to_bicliques(bollobas_family(2, 2))
        assert not view.is_exact_cover()

    @pytest.mark.parametrize("S", [five_cycle(), power_construction(3)], ids=["five_cycle", "power3"])
    def test_round_trip(self, S):
        assert from_bicliques(to_bicliques(S), S.m) == S

    def test_diagonal_violation(self):
        with pytest.raises(InvalidArgumentError):
            from_bicliques(BicliqueView((frozenset({0}),), (frozenset({0}),), 1), 1)

    @pytest.mark.parametrize("S", constructions(), ids=lambda S: f"m{S.m}")
    def test_cover_count(self, S):
        view = to_bicliques(S)
        assert view.cover_count() == S.m * (S.m - 1)
        for i, p in enumerate(S.pairs):
            assert sum(i in s for s in view.sources) == len(p.A)
            assert sum(i in t for t in view.sinks) == len(p.B)

    @given(raw_systems(max_m=5, max_n=6))
    def test_round_trip_arbitrary(self, S):
        assert from_bicliques(to_bicliques(S)) == S
