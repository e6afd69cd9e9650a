from fractions import Fraction

import pytest

from nilprob.catalog import (
    almost_simple_pair,
    alt_group,
    cyclic_group,
    dihedral_group,
    group_from_spec,
    sym_group,
)
from nilprob.engine import (
    CosetContext,
    alt_bound,
    monte_carlo_nu,
    nu_coset,
    nu_exact,
    nu_tilde,
    pi_coset,
    plan_extensions,
    solvability_threshold_check,
    tau,
    wilson_interval,
)
from nilprob.errors import BudgetExceededError, VerificationError
from nilprob.group import FiniteGroup, closure, is_nilpotent_pair
from nilprob.perm import Permutation


def P(cycles: str, degree: int) -> Permutation:
    return Permutation.from_cycles(cycles, degree)


def brute_force_coset_value(ctx: CosetContext) -> Fraction:
    """Direct double loop over the two cosets, object-level pair test."""
    n_elems = list(ctx.normal.elements())
    favorable = 0
    for n1 in n_elems:
        a = n1 * ctx.rep1
        for n2 in n_elems:
            if is_nilpotent_pair(a, n2 * ctx.rep2):
                favorable += 1
    return Fraction(favorable, len(n_elems) ** 2)


class TestNuExact:
    def test_sym3(self):
        assert nu_exact(sym_group(3)).value == Fraction(1, 2)

    def test_sym4(self):
        assert nu_exact(sym_group(4)).value == Fraction(1, 3)

    def test_alt5(self):
        assert nu_exact(alt_group(5)).value == Fraction(1, 12)

    def test_nilpotent_groups_have_value_one(self):
        assert nu_exact(cyclic_group(6)).value == 1
        assert nu_exact(dihedral_group(4)).value == 1

    def test_counts_are_reduced_consistently(self):
        r = nu_exact(sym_group(3))
        assert r.total == 36
        assert Fraction(r.favorable, r.total) == r.value

    def test_agrees_with_brute_force_on_small_groups(self):
        for spec in ("sym:3", "dih:5", "cyc:8", "alt:4"):
            G = group_from_spec(spec)
            ctx = CosetContext.for_group(G)
            assert nu_exact(G).value == brute_force_coset_value(ctx), spec

    def test_full_method_matches_classes(self):
        for spec in ("sym:4", "dih:6", "psl2:5", "alt:6"):
            G = group_from_spec(spec)
            assert (
                nu_coset(CosetContext.for_group(G), method="full").value
                == nu_exact(G, method="classes").value
            ), spec

    def test_quotient_never_decreases_value(self):
        v4 = [P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4)]
        from nilprob.group import quotient_group

        G = sym_group(4)
        assert nu_exact(G).value <= nu_exact(quotient_group(G, v4)).value

    def test_budget_refused(self):
        with pytest.raises(BudgetExceededError):
            nu_exact(sym_group(5), budget=100)


class TestNuCoset:
    def test_transposition_coset_of_sym3(self):
        ctx = CosetContext(
            ambient=sym_group(3),
            normal=alt_group(3),
            rep1=P("(1 2)", 3),
            rep2=P("(1 2)", 3),
        )
        report = nu_coset(ctx)
        assert report.value == brute_force_coset_value(ctx)
        assert report.value == Fraction(1, 3)

    def test_mixed_reps_against_brute_force(self):
        ctx = CosetContext(
            ambient=sym_group(4),
            normal=alt_group(4),
            rep1=P("(1 2)", 4),
            rep2=P("(1 2 3 4)", 4),
        )
        assert nu_coset(ctx).value == brute_force_coset_value(ctx)

    def test_identity_reps_reduce_to_subgroup_value(self):
        ctx = CosetContext(
            ambient=sym_group(4),
            normal=alt_group(4),
            rep1=Permutation.identity(4),
            rep2=Permutation.identity(4),
        )
        assert nu_coset(ctx).value == nu_exact(alt_group(4)).value

    def test_non_normal_subgroup_rejected(self):
        ctx = CosetContext(
            ambient=sym_group(3),
            normal=FiniteGroup([P("(1 2)", 3)]),
            rep1=Permutation.identity(3),
            rep2=Permutation.identity(3),
        )
        with pytest.raises(VerificationError):
            nu_coset(ctx)

    def test_rep_outside_ambient_rejected(self):
        ctx = CosetContext(
            ambient=alt_group(4),
            normal=alt_group(4),
            rep1=P("(1 2)", 4),
            rep2=Permutation.identity(4),
        )
        with pytest.raises(ValueError):
            nu_coset(ctx)


class TestPi:
    def test_alt5_generation_probability(self):
        ctx = CosetContext.for_group(alt_group(5))
        assert pi_coset(ctx).value == Fraction(19, 30)

    def test_generation_and_nilpotency_disjoint(self):
        # a generating pair of a non-nilpotent group is never nilpotent
        for spec in ("sym:4", "alt:5"):
            G = group_from_spec(spec)
            ctx = CosetContext.for_group(G)
            assert pi_coset(ctx).value + nu_exact(G).value <= 1, spec

    def test_trivial_group_generates_itself(self):
        ctx = CosetContext.for_group(cyclic_group(1))
        assert pi_coset(ctx).value == 1

    def test_cyclic_generation(self):
        # ordered pairs generating C6: phi(6)*6 + (remaining with lcm 6)
        ctx = CosetContext.for_group(cyclic_group(6))
        from nilprob.group import generating_pairs_count

        expected = Fraction(generating_pairs_count(cyclic_group(6)), 36)
        assert pi_coset(ctx).value == expected


class TestTau:
    def test_trivial_quotient_reduces_to_nu(self):
        report = tau(alt_group(5), alt_group(5))
        assert report.value == Fraction(1, 12)

    def test_sym3_over_alt3(self):
        report = tau(sym_group(3), alt_group(3))
        assert report.value == Fraction(1, 3)
        assert report.witness is not None

    def test_sym4_over_alt4(self):
        ctx = CosetContext(
            ambient=sym_group(4),
            normal=alt_group(4),
            rep1=P("(1 2)", 4),
            rep2=P("(1 2)", 4),
        )
        assert tau(sym_group(4), alt_group(4)).value == brute_force_coset_value(ctx)

    def test_independent_of_chosen_pair(self):
        # constancy across generating pairs is checked internally; the note
        # records how many pairs were compared
        report = tau(sym_group(5), alt_group(5), check_pairs=3)
        assert any("pair" in n for n in report.notes)

    def test_non_nilpotent_quotient_rejected(self):
        v4 = FiniteGroup([P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4)])
        with pytest.raises(VerificationError):
            tau(sym_group(4), v4)

    def test_not_two_generated_quotient_rejected(self):
        cube = FiniteGroup([P("(1 2)", 6), P("(3 4)", 6), P("(5 6)", 6)])
        trivial = FiniteGroup([Permutation.identity(6)])
        with pytest.raises(VerificationError):
            tau(cube, trivial)


class TestExtensionPlanning:
    def test_alt5_rows(self):
        pair = almost_simple_pair("alt:5")
        planned, skipped = plan_extensions(pair.ambient, pair.socle)
        assert [p.label for p in planned] == ["1", "2"]
        assert skipped == []

    def test_alt6_rows(self):
        pair = almost_simple_pair("alt:6")
        planned, skipped = plan_extensions(pair.ambient, pair.socle)
        labels = [p.label for p in planned]
        assert labels[0] == "1"
        assert sum(1 for lab in labels if lab.startswith("2")) == 4
        assert "2^2" in labels
        assert skipped == []

    def test_trivial_outer_single_row(self):
        pair = almost_simple_pair("file:m11")
        planned, skipped = plan_extensions(pair.ambient, pair.socle)
        assert [p.label for p in planned] == ["1"]
        assert skipped == []


class TestNuTilde:
    def test_alt5(self):
        pair = almost_simple_pair("alt:5")
        result = nu_tilde(pair.ambient, pair.socle)
        assert result.best.value == Fraction(1, 12)
        assert [r.label for r in result.rows] == ["1", "2"]
        assert "extension 1 " in result.best.witness

    def test_alt6(self):
        pair = almost_simple_pair("alt:6")
        result = nu_tilde(pair.ambient, pair.socle)
        assert result.best.value == Fraction(1, 36)
        by_label = {r.label: r.value for r in result.rows}
        assert by_label["1"] == Fraction(1, 36)
        assert Fraction(1, 45) in by_label.values()

    def test_alt7(self):
        pair = almost_simple_pair("alt:7")
        result = nu_tilde(pair.ambient, pair.socle)
        assert result.best.value == Fraction(1, 210)

    def test_value_bounds_every_row(self):
        pair = almost_simple_pair("psl2:5")
        result = nu_tilde(pair.ambient, pair.socle)
        assert all(r.value <= result.best.value for r in result.rows)


class TestMonotoneComparisons:
    def test_sym5_below_alt5_extension_maximum(self):
        pair = almost_simple_pair("alt:5")
        tilde = nu_tilde(pair.ambient, pair.socle).best.value
        assert nu_exact(sym_group(5)).value <= tilde

    def test_pgl27_below_psl27_extension_maximum(self):
        pair = almost_simple_pair("psl2:7")
        tilde = nu_tilde(pair.ambient, pair.socle).best.value
        assert nu_exact(group_from_spec("pgl2:7")).value <= tilde


class TestAltBound:
    def test_degree10_value(self):
        pi = Fraction(15403, 18144)
        assert alt_bound(pi, pi, 10) == Fraction(12007, 181440)

    def test_can_be_negative(self):
        assert alt_bound(Fraction(1), Fraction(1), 10) == Fraction(-1, 10)

    def test_degree_floor(self):
        with pytest.raises(ValueError):
            alt_bound(Fraction(1, 2), Fraction(1, 2), 9)

    def test_range_check(self):
        with pytest.raises(ValueError):
            alt_bound(Fraction(3, 2), Fraction(1, 2), 10)


class TestSampling:
    def test_wilson_edges(self):
        lo, hi = wilson_interval(0, 100, 1.96)
        assert lo == 0.0 and hi < 0.05
        lo, hi = wilson_interval(100, 100, 1.96)
        assert hi > 0.999 and lo > 0.95

    def test_wilson_contains_point_estimate(self):
        lo, hi = wilson_interval(37, 500, 1.96)
        assert lo < 37 / 500 < hi

    def test_deterministic_reruns(self):
        a = monte_carlo_nu(alt_group(5), samples=5000, seed=11, workers=3)
        b = monte_carlo_nu(alt_group(5), samples=5000, seed=11, workers=3)
        assert a.favorable == b.favorable
        assert a.ci == b.ci

    def test_worker_split_changes_stream(self):
        a = monte_carlo_nu(alt_group(5), samples=5000, seed=11, workers=1)
        b = monte_carlo_nu(alt_group(5), samples=5000, seed=11, workers=4)
        # different substream layout, same distribution
        assert a.samples == b.samples == 5000

    def test_interval_brackets_exact_value(self):
        report = monte_carlo_nu(alt_group(5), samples=20000, seed=3)
        lo, hi = report.ci
        assert lo <= 1 / 12 <= hi

    def test_coset_target(self):
        ctx = CosetContext(
            ambient=sym_group(3),
            normal=alt_group(3),
            rep1=P("(1 2)", 3),
            rep2=P("(1 2)", 3),
        )
        report = monte_carlo_nu(ctx, samples=20000, seed=3)
        lo, hi = report.ci
        assert lo <= 1 / 3 <= hi

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            monte_carlo_nu(alt_group(5), samples=0, seed=1)
        with pytest.raises(ValueError):
            monte_carlo_nu(alt_group(5), samples=10, seed=1, workers=0)


class TestSolvabilityCheck:
    def test_sym4_exceeds_and_is_solvable(self):
        report = solvability_threshold_check(sym_group(4))
        assert report.exceeds and report.solvable and report.consistent

    def test_alt5_sits_on_threshold(self):
        report = solvability_threshold_check(alt_group(5))
        assert report.nu == Fraction(1, 12)
        assert not report.exceeds
        assert report.consistent

    def test_threshold_is_strict(self):
        report = solvability_threshold_check(alt_group(5))
        assert report.threshold == Fraction(1, 12)
