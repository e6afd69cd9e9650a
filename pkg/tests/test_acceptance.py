"""End-to-end value reproduction gate.

Each test covers one numbered criterion and prints a single PASS line on
success; a failure shows up as the usual pytest failure for that criterion.
Extension scans are cached at module level so criteria sharing a group pair
do not repeat the exact counting.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from nilprob import constants
from nilprob.catalog import almost_simple_pair, group_from_spec
from nilprob.engine import (
    alt_bound,
    build_extension,
    monte_carlo_nu,
    nu_exact,
    plan_extensions,
    tau,
)
from nilprob.group import is_nilpotent_pair, is_nilpotent_subgroup

FAST_PAIRS = {
    "PSL(2,7)": ("psl2:7", Fraction(3, 56)),
    "PSL(2,8)": ("psl2:8", Fraction(1, 56)),
    "PSL(2,11)": ("psl2:11", Fraction(2, 165)),
    "PSL(2,13)": ("psl2:13", Fraction(3, 364)),
    "PSL(3,3)": ("file:psl33", Fraction(1, 234)),
    "M11": ("file:m11", Fraction(1, 440)),
}

SLOW_PAIRS = {
    "PSL(3,4)": ("file:psl34", Fraction(13, 4032)),
    "PSU(4,2)": ("file:psu42", Fraction(67, 25920)),
    "M12": ("file:m12", Fraction(7, 11880)),
    "PSp(6,2)": ("file:psp62", Fraction(1, 4536)),
    "Alt(8)": ("alt:8", Fraction(19, 6720)),
    "Alt(9)": ("alt:9", Fraction(1, 2160)),
}

_scans: dict = {}


def scan(pair_spec: str) -> dict:
    """Label -> (plan, report) for every surviving extension row, cached."""
    if pair_spec not in _scans:
        pair = almost_simple_pair(pair_spec)
        planned, _ = plan_extensions(pair.ambient, pair.socle)
        rows = {}
        for plan in planned:
            T = build_extension(pair.socle, plan)
            rows[plan.label] = (plan, tau(T, pair.socle, check_pairs=3))
        _scans[pair_spec] = rows
    return _scans[pair_spec]


def tilde(pair_spec: str) -> Fraction:
    return max(report.value for _, report in scan(pair_spec).values())


def passed(capsys, n: int, detail: str) -> None:
    with capsys.disabled():
        print(f"criterion {n} PASS: {detail}")


class TestCriteria:
    def test_criterion_1_small_exact_values(self, capsys):
        started = time.perf_counter()
        assert nu_exact(group_from_spec("sym:3")).value == Fraction(1, 2)
        assert nu_exact(group_from_spec("alt:5")).value == Fraction(1, 12)
        assert tilde("alt:5") == Fraction(1, 12)
        assert tilde("alt:6") == Fraction(1, 36)
        assert tilde("alt:7") == Fraction(1, 210)
        elapsed = time.perf_counter() - started
        assert elapsed < 5.0
        passed(capsys, 1, f"five small exact values in {elapsed:.2f} s")

    def test_criterion_2_fast_rows(self, capsys):
        started = time.perf_counter()
        for name, (spec, expected) in FAST_PAIRS.items():
            assert tilde(spec) == expected, name
        elapsed = time.perf_counter() - started
        assert elapsed < 600.0
        passed(capsys, 2, f"six fast rows exact in {elapsed:.1f} s")

    @pytest.mark.slow
    def test_criterion_3_slow_rows(self, capsys):
        started = time.perf_counter()
        for name, (spec, expected) in SLOW_PAIRS.items():
            assert tilde(spec) == expected, name

        # Two printed constants are arithmetically impossible and are pinned
        # here at the computed values instead.  Any coset value over a socle
        # S is favorable/|S|^2, so its reduced denominator divides |S|^2.
        assert 23760 % 11 == 0 and (25920**2) % 11 != 0
        assert Fraction(67, 23760) != tilde("file:psu42")
        assert 9720 % 3**5 == 0 and (20160**2) % 3**5 != 0
        assert Fraction(19, 9720) != tilde("alt:8")

        elapsed = time.perf_counter() - started
        assert elapsed < 7200.0
        passed(
            capsys,
            3,
            "six slow rows exact in "
            f"{elapsed:.0f} s (PSU(4,2) and Alt(8) pinned at 67/25920 and "
            "19/6720; the printed denominators 23760 and 9720 cannot divide "
            "the squared socle orders)",
        )

    @pytest.mark.slow
    def test_criterion_4_extension_table(self, capsys):
        rows = scan("file:psl34")
        matched = {}
        for spec_row in constants.TABLE2:
            hits = [
                (plan, report)
                for plan, report in rows.values()
                if all(
                    plan.invariants.get(k) == v
                    for k, v in spec_row.selector.items()
                )
            ]
            assert len(hits) == 1, f"{spec_row.label}: {len(hits)} matches"
            matched[spec_row.label] = hits[0][1].value
            assert hits[0][1].value == spec_row.expected, spec_row.label

        assert matched["S"] == Fraction(5, 4032)
        assert matched["S.2_1"] == Fraction(13, 4032)
        assert matched["S.2_2"] == Fraction(19, 6720)
        assert matched["S.2_3"] == Fraction(5, 4032)
        assert matched["S.2^2"] == Fraction(13, 4032)
        assert matched["S.6"] == Fraction(1, 2520)
        # the order-3 row is computed here though absent from the printed table
        assert matched["S.3"] == Fraction(1, 2016)
        top = max(report.value for _, report in rows.values())
        assert top == constants.TABLE2_MAX == Fraction(13, 4032)
        assert top == tilde("file:psl34")
        passed(capsys, 4, "all seven extension rows and the maximum 13/4032")

    def test_criterion_5_alternating_bound(self, capsys):
        pi = Fraction(15403, 18144)
        assert alt_bound(pi, pi, 10) == Fraction(12007, 181440)
        passed(capsys, 5, "degree-10 bound 12007/181440")

    @pytest.mark.slow
    def test_criterion_6_oracle_equivalence(self, capsys):
        checked = 0

        def closure_oracle_sweep(G, pairs):
            nonlocal checked
            tb = G.tables
            cache = {}
            for i, j in pairs:
                fast = is_nilpotent_pair(G.element(i), G.element(j))
                idx = tb.subgroup_closure([int(i), int(j)])
                key = idx.tobytes()
                if key not in cache:
                    cache[key] = is_nilpotent_subgroup(
                        [G.element(int(v)) for v in idx]
                    )
                assert fast == cache[key], (G.describe(), i, j)
                checked += 1

        for spec in ("sym:4", "sym:5", "alt:5"):
            G = group_from_spec(spec)
            closure_oracle_sweep(
                G, ((i, j) for i in range(G.order) for j in range(G.order))
            )

        rng = np.random.default_rng(20260818)
        for spec in ("pgl2:7", "file:m11"):
            G = group_from_spec(spec)
            picks = rng.integers(0, G.order, size=(10_000, 2))
            closure_oracle_sweep(G, ((int(a), int(b)) for a, b in picks))

        assert checked == 24**2 + 120**2 + 60**2 + 2 * 10_000
        passed(capsys, 6, f"pair test vs subgroup oracle on {checked} pairs")

    @pytest.mark.slow
    def test_criterion_7_pair_constancy(self, capsys):
        rows_seen = 0
        for spec, _ in list(FAST_PAIRS.values()) + list(SLOW_PAIRS.values()):
            for label, (plan, report) in scan(spec).items():
                if label == "1":
                    continue  # no generating pair to vary
                assert report.notes == (
                    "agreement verified on 3 generating pairs",
                ), (spec, label)
                rows_seen += 1
        assert rows_seen >= 12
        passed(
            capsys,
            7,
            f"3-pair agreement rechecked on {rows_seen} nontrivial rows",
        )

    @pytest.mark.slow
    def test_criterion_8_threshold_sweep(self, capsys):
        specs = (
            [f"sym:{n}" for n in range(1, 7)]
            + [f"alt:{n}" for n in range(1, 8)]
            + [f"cyc:{n}" for n in list(range(1, 25)) + [30]]
            + [f"dih:{n}" for n in range(3, 21)]
            + [f"psl2:{q}" for q in (4, 5, 7, 8, 9, 11, 13)]
            + [f"pgl2:{q}" for q in (5, 7, 9, 11, 13)]
            + [f"pgammal2:{q}" for q in (4, 5, 8, 9)]
        )
        threshold = Fraction(1, 12)
        for spec in specs:
            G = group_from_spec(spec)
            assert G.order <= 2520, spec
            value = nu_exact(G).value
            if value > threshold:
                assert G.is_solvable(), spec
            assert (value == 1) == G.is_nilpotent(), spec
            if not G.is_nilpotent():
                assert value <= Fraction(1, 2), spec
        passed(capsys, 8, f"threshold laws on {len(specs)} catalog groups")

    @pytest.mark.slow
    def test_criterion_9_sampling_calibration(self, capsys):
        G = group_from_spec("alt:5")
        truth = 1 / 12
        covered = 0
        for seed in range(100):
            lo, hi = monte_carlo_nu(G, samples=10_000, seed=seed).ci
            covered += lo <= truth <= hi
        assert covered >= 93

        again = [monte_carlo_nu(G, samples=10_000, seed=0) for _ in range(2)]
        assert again[0].favorable == again[1].favorable
        assert again[0].ci == again[1].ci
        passed(capsys, 9, f"{covered}/100 intervals cover 1/12, reruns identical")
