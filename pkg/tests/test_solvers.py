import math

import pytest

from helpers import S2, S3, all_patterns, naive_is_wave, oracle_g, oracle_p
from wavelab import Coloring, Permutation, exact_P, exact_g, recursive_upper_bound_g, reverse
from wavelab.solvers import _reset_caches
import wavelab.solvers


def P(text):
    return Permutation.parse(text)


class TestExactG:
    def test_examples(self):
        res = exact_g(P("2,1"), 8)
        assert res.value == 4 and res.status == "exact"
        assert res.witness.elements == (1, 2, 3, 5)  # lex-least optimum
        assert exact_g(P("1,2"), 8).value == 4
        assert exact_g(P("2,1"), 2).value == 2
        assert exact_g(P("1"), 5).value == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            exact_g(P("2,1"), 0)
        with pytest.raises(ValueError):
            exact_g(P("2,1"), 5, "loose")

    def test_agrees_with_enumeration_oracle(self):
        for pi in S2 + S3:
            for weak in (False, True):
                mode = "weak" if weak else "strict"
                for n in range(1, 13):
                    want_val, want_set = oracle_g(pi, n, weak)
                    res = exact_g(pi, n, mode)
                    assert (res.value, res.witness.elements) == (want_val, want_set), (
                        pi,
                        n,
                        mode,
                    )

    def test_witness_is_wave_free_and_sized(self):
        for pi in S3:
            res = exact_g(pi, 20)
            assert len(res.witness) == res.value
            from wavelab import find_wave

            assert find_wave(res.witness, pi) is None

    def test_monotone_in_n(self):
        for pi in S2 + S3:
            prev = 0
            for n in range(1, 31):
                v = exact_g(pi, n).value
                assert prev <= v <= prev + 1
                prev = v

    def test_reversal_symmetry(self):
        for pi in S3:
            for n in range(1, 31):
                assert exact_g(pi, n).value == exact_g(reverse(pi), n).value

    def test_weak_at_most_strict(self):
        for pi in S2 + S3:
            for n in range(1, 16):
                assert exact_g(pi, n, "weak").value <= exact_g(pi, n).value

    def test_descending_closed_form_small(self):
        for n in range(3, 65):
            assert exact_g(P("2,1"), n).value == math.floor(math.log2(n - 1)) + 2

    def test_length_two_patterns_beyond_table_cap(self):
        # n > 64 exercises the tableless path with the doubling-span bounds
        from wavelab import find_wave

        for n in (100, 200):
            up = exact_g(P("2,1"), n)
            down = exact_g(P("1,2"), n)
            assert up.value == down.value == math.floor(math.log2(n - 1)) + 2
            assert len(down.witness) == down.value
            assert find_wave(down.witness, P("1,2")) is None

    def test_longer_patterns_against_oracle_sampled(self):
        import random

        rng = random.Random(99)
        for k in (4, 5):
            pats = [p.values for p in all_patterns(k)]
            rng.shuffle(pats)
            for vals in pats[:4]:
                pi = Permutation(vals)
                for weak in (False, True):
                    mode = "weak" if weak else "strict"
                    want = oracle_g(pi, 11, weak)
                    got = exact_g(pi, 11, mode)
                    assert (got.value, got.witness.elements) == want, (vals, mode)

    def test_concurrent_calls_are_deterministic(self):
        import threading

        results = {}

        def work(tag):
            r = exact_g(P("2,3,1"), 26)
            results[tag] = (r.value, r.witness.elements)

        threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(set(results.values())) == 1

    def test_fallback_engine_matches_table_engine(self, monkeypatch):
        # force the no-table code path (incl. the length-2 doubling bounds)
        # and require identical values *and* witnesses
        reference = {}
        for pi in (P("2,1"), P("1,2"), P("3,2,1"), P("1,3,2")):
            for n in range(1, 31 if len(pi) == 2 else 15):
                r = exact_g(pi, n)
                reference[(pi.values, n)] = (r.value, r.witness.elements)
        monkeypatch.setattr(wavelab.solvers, "MASK_TABLE_CAP", 0)
        _reset_caches()
        try:
            for (vals, n), want in reference.items():
                r = exact_g(Permutation(vals), n)
                assert (r.value, r.witness.elements) == want, (vals, n)
        finally:
            _reset_caches()

    def test_budget_exhaustion_degrades_gracefully(self):
        from wavelab import find_wave

        pi = P("2,1,4,3")  # pattern no other test warms up
        res = exact_g(pi, 25, node_budget=10)
        assert res.status == "lower-bound"
        assert res.value == len(res.witness)
        if len(res.witness):
            assert find_wave(res.witness, pi) is None
        # the aborted run is never cached and a full retry certifies
        full = exact_g(pi, 25)
        assert full.status == "exact" and full.value >= res.value


class TestExactP:
    def test_pigeonhole_family(self):
        one = P("1")
        for r in range(1, 9):
            res = exact_P(one, r)
            assert res.value == r + 1 and res.status == "exact"
            assert res.extremal.domain_size == r
        # full-enumeration oracle for the small ones
        for r in range(1, 4):
            assert oracle_p(one, r) == r + 1

    def test_descending_pair_values(self):
        assert exact_P(P("2,1"), 1).value == 4
        assert oracle_p(P("2,1"), 1) == 4
        assert exact_P(P("2,1"), 2).value == 9
        assert oracle_p(P("2,1"), 2) == 9
        # pinned by the exhaustive backtracking oracle ahead of the build
        assert exact_P(P("2,1"), 3).value == 15

    def test_weak_values(self):
        assert exact_P(P("2,1"), 1, "weak").value == 3
        assert exact_P(P("2,1"), 2, "weak").value == 7
        assert oracle_p(P("2,1"), 2, weak=True) == 7
        assert exact_P(P("2,1"), 3, "weak").value == 11

    def test_reversal_symmetry(self):
        for r in (1, 2):
            for mode in ("strict", "weak"):
                assert (
                    exact_P(P("1,2"), r, mode).value
                    == exact_P(P("2,1"), r, mode).value
                )

    def test_extremal_coloring_verifies(self):
        from wavelab import verify_coloring_wave_free

        res = exact_P(P("2,1"), 2)
        assert res.extremal.domain_size == res.value - 1
        assert verify_coloring_wave_free(res.extremal, P("2,1"))

    def test_recursive_inequality_at_exact_values(self):
        # p-hat(pi, 2r) >= 2 p-hat(pi, r) + p-hat(reduced, r) for pi starting
        # with its maximum; strict and weak desk instances
        p_hat = lambda pi, r, mode: exact_P(P(pi), r, mode).value - 1
        assert p_hat("2,1", 2, "strict") >= 2 * p_hat("2,1", 1, "strict") + p_hat(
            "1", 1, "strict"
        )
        assert p_hat("2,1", 2, "weak") >= 2 * p_hat("2,1", 1, "weak") + p_hat(
            "1", 1, "weak"
        )

    def test_budget_exhaustion_degrades_gracefully(self):
        res = exact_P(P("2,1"), 3, node_budget=40)
        assert res.status == "lower-bound"
        assert res.value == res.extremal.domain_size + 1
        from wavelab import verify_coloring_wave_free

        assert verify_coloring_wave_free(res.extremal, P("2,1"))

    def test_validation(self):
        with pytest.raises(ValueError):
            exact_P(P("2,1"), 0)


class TestRecursiveUpperBound:
    @pytest.mark.parametrize(
        "pat,n,expected",
        [("2,1", 256, 480), ("3,2,1", 256, 115200), ("1,4,2,3", 256, 161280)],
    )
    def test_examples(self, pat, n, expected):
        assert recursive_upper_bound_g(P(pat), n) == expected

    def test_single_value_base(self):
        assert recursive_upper_bound_g(P("1"), 1024) == 2

    def test_needs_n_at_least_two(self):
        with pytest.raises(ValueError):
            recursive_upper_bound_g(P("2,1"), 1)

    def test_dominates_exact_values(self):
        for pi in S3:
            for n in (8, 16, 24):
                assert recursive_upper_bound_g(pi, n) >= exact_g(pi, n).value


class TestColoring:
    def test_parse_and_str(self):
        c = Coloring.parse("1,1,2")
        assert c.assignment == (1, 1, 2) and c.palette == 2
        c2 = Coloring.parse("palette: 4\n1,1,2\n")
        assert c2.palette == 4
        assert str(c2) == "1,1,2"

    def test_validation(self):
        with pytest.raises(ValueError):
            Coloring((1, 3), 2)
        with pytest.raises(ValueError):
            Coloring((1, 0), 2)

    def test_classes_and_restriction(self):
        c = Coloring((1, 1, 1, 2, 2, 2, 1), 2)
        assert c.color_class(1) == (1, 2, 3, 7)
        assert c.restricted(5).assignment == (1, 1, 1, 2, 2)
