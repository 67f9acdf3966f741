"""Cover-branch verification: inclusions, certificates, refutations."""

import math

import numpy as np
import pytest

from conclab.freegroup import (
    A1,
    A2,
    ActionConvention,
    BallFrame,
    NormWitness,
    PrefixSet,
    RefutationSearchResult,
    SeparationCertificate,
    TranslatedClass,
    W0,
    act,
    count_inclusion_exceptions,
    designated_candidate,
    distance_to_class,
    evaluate_A2_claim,
    neighborhood_disjointness,
    project_to_class,
    restricted_norm,
    sample_cover_vectors,
    translate_bounds,
    verify_A1_separation,
)
from conclab.l2vec import delta
from conclab.streams import SampleStream
from conclab.words import IDENTITY, classify_prefix, enumerate_ball, inverse, multiply, word


BALL8 = enumerate_ball(8)


class TestSetInclusions:
    def test_a_powers_shift_classes_exactly(self):
        # a^i W_j = W_{i+j}, checked exhaustively over the ball
        for i in (-2, -1, 1, 2, 3):
            g = multiply(IDENTITY, word("a" * i if i > 0 else "A" * -i))
            for w in enumerate_ball(6):
                assert classify_prefix(multiply(g, w)) == classify_prefix(w) + i

    def test_b_moves_nonzero_classes_into_w0(self):
        for letter in ("b", "B"):
            g = word(letter)
            for w in BALL8:
                if classify_prefix(w) != 0:
                    assert classify_prefix(multiply(g, w)) == 0

    def test_a_power_times_w0_lands_in_wi_ball8(self):
        for i in (1, 2, 3, 4):
            g = word("a" * i)
            for w in BALL8:
                if classify_prefix(w) == 0:
                    assert classify_prefix(multiply(g, w)) == i

    def test_pullback_inclusion_ball8(self):
        assert count_inclusion_exceptions(8, ActionConvention.PAPER) == 0
        assert count_inclusion_exceptions(8, ActionConvention.INVERSE) == 0

    def test_translate_bounds_certified_on_ball(self):
        cases = [
            (word("a"), W0),
            (word("aa"), PrefixSet(frozenset({-2, 1}))),
            (word("b"), W0),
            (word("B"), W0),
            (word("b"), PrefixSet(frozenset({0}), complement=True)),
            (word("ba"), W0),  # no certificate expected, must return None bounds
        ]
        for g, region in cases:
            sub, sup = translate_bounds(g, region)
            image = {multiply(g, w) for w in enumerate_ball(6) if region.contains_word(w)}
            if sub is not None:
                # every ball word claimed by the subset must be hit by the image
                for w in enumerate_ball(5):
                    if sub.contains_word(w):
                        assert multiply(inverse(g), w) in set(enumerate_ball(7))
                        assert region.contains_word(multiply(inverse(g), w))
            if sup is not None:
                for w in image:
                    assert sup.contains_word(w)


class TestPrefixSet:
    def test_membership(self):
        assert W0.contains_word(IDENTITY)
        assert not W0.contains_word(word("a"))
        comp = W0.complemented()
        assert comp.contains_word(word("a"))
        assert not comp.contains_word(word("ba"))

    def test_includes(self):
        u = PrefixSet(frozenset({0, 1}))
        v = PrefixSet(frozenset({0}))
        assert u.includes(v)
        assert not v.includes(u)
        assert PrefixSet(frozenset({2}), True).includes(v)
        assert not v.includes(PrefixSet(frozenset({2}), True))


class TestProjection:
    def test_member_projects_to_itself(self):
        frame = BallFrame(4)
        f = delta(word("a"))
        assert project_to_class(A1, f, frame) == f
        assert distance_to_class(A1, f) == 0.0

    def test_projection_lands_on_boundary(self):
        frame = BallFrame(4)
        f = delta(IDENTITY)  # all mass in W_0, far from A1
        p = project_to_class(A1, f, frame)
        assert p.norm() == pytest.approx(1.0, rel=1e-12)
        assert restricted_norm({0}, p) == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert f.distance(p) == pytest.approx(distance_to_class(A1, f), rel=1e-12)

    def test_distance_formula(self):
        # mass split 0.8 / 0.6: nearest A1 point sits at (1/3, sqrt(8)/3)
        f = delta(IDENTITY).scale(0.8).add(delta(word("a")).scale(0.6))
        want = math.hypot(0.8 - 1 / 3, 0.6 - math.sqrt(8) / 3)
        assert distance_to_class(A1, f) == pytest.approx(want, rel=1e-12)


class TestVectorizedPathAgreement:
    def test_translated_mask_matches_dict_action(self):
        # the bulk mask path and the dict rekey path are independent
        # implementations of the same translated-norm computation
        frame = BallFrame(4)
        rows = sample_cover_vectors(A1, frame, SampleStream(71, 0), 40)
        for g_text in ("b", "B", "a", "aa"):
            g = word(g_text)
            for conv in ActionConvention:
                mask = frame.translated_mask(g, W0, conv)
                for row in rows:
                    bulk = float(np.sqrt(np.sum(row[mask] ** 2)))
                    f = frame.to_vector(row)
                    direct = restricted_norm({0}, act(g, f, conv))
                    assert bulk == pytest.approx(direct, abs=1e-12)


class TestConditionedSampler:
    def test_samples_satisfy_class(self):
        frame = BallFrame(5)
        for cover in (A1, A2):
            rows = sample_cover_vectors(cover, frame, SampleStream(31, 0), 500)
            norms = np.linalg.norm(rows, axis=1)
            assert np.max(np.abs(norms - 1.0)) < 1e-9
            mask = frame.mask(cover.region)
            mass = np.sqrt(np.einsum("ij,ij->i", rows[:, mask], rows[:, mask]))
            if cover.op == "le":
                assert np.all(mass <= cover.threshold + 1e-9)
            else:
                assert np.all(mass >= cover.threshold - 1e-9)

    def test_deterministic(self):
        frame = BallFrame(4)
        a = sample_cover_vectors(A1, frame, SampleStream(5, 9), 50)
        b = sample_cover_vectors(A1, frame, SampleStream(5, 9), 50)
        assert np.array_equal(a, b)


class TestCertificates:
    def test_low_mass_branch_certificate(self):
        result = neighborhood_disjointness(
            (A1, TranslatedClass(A1, word("b"))), 1.0 / 12.0, NormWitness(W0)
        )
        assert isinstance(result, SeparationCertificate)
        assert result.gap == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert result.margin == pytest.approx(1.0 / 6.0, abs=1e-12)
        assert result.interval_first == pytest.approx((0.0, 1.0 / 3.0))
        assert result.interval_second[0] == pytest.approx(2.0 / 3.0)

    def test_certificate_under_inverse_convention(self):
        result = neighborhood_disjointness(
            (A1, TranslatedClass(A1, word("b"))),
            1.0 / 12.0,
            NormWitness(W0),
            convention=ActionConvention.INVERSE,
        )
        assert isinstance(result, SeparationCertificate)
        assert result.margin == pytest.approx(1.0 / 6.0, abs=1e-12)

    def test_same_class_refutes_trivially(self):
        result = neighborhood_disjointness(
            (A1, A1), 0.05, NormWitness(W0), samples=10, stream=SampleStream(41)
        )
        assert isinstance(result, RefutationSearchResult)
        assert result.refuted
        assert result.nearest_distance == pytest.approx(0.0, abs=1e-9)

    def test_high_mass_branch_has_no_certificate(self):
        for i in (1, 2, 3, 4):
            result = neighborhood_disjointness(
                (A2, TranslatedClass(A2, word("a" * i))),
                1.0 / 12.0,
                NormWitness(W0),
                samples=40,
                stream=SampleStream(42, i),
            )
            assert isinstance(result, RefutationSearchResult)
            # an explicit common point exists: disjointness is refuted
            assert result.refuted
            assert result.common_point is not None
            for side in (TranslatedClass(A2), TranslatedClass(A2, word("a" * i))):
                pulled = (
                    act(inverse(side.translator), result.common_point)
                    if side.translator != IDENTITY
                    else result.common_point
                )
                assert distance_to_class(side.base, pulled) <= 1.0 / 12.0

    def test_witness_family_enforced(self):
        with pytest.raises(TypeError):
            neighborhood_disjointness((A1, A2), 0.1, lambda f: f.norm())

    def test_search_skippable(self):
        result = neighborhood_disjointness(
            (A2, TranslatedClass(A2, word("a"))),
            1.0 / 12.0,
            NormWitness(W0),
            search_on_failure=False,
        )
        assert isinstance(result, RefutationSearchResult)
        assert not result.refuted
        assert result.samples_used == 0


class TestA1Branch:
    def test_report(self):
        report = verify_A1_separation(5000, 5, SampleStream(51))
        assert report.inclusion_exceptions == 0
        assert report.chain_violations == 0
        assert report.min_translated_norm >= 2.0 / 3.0
        assert report.certificate.margin == pytest.approx(1.0 / 6.0, abs=1e-12)
        assert report.violating_vectors == ()

    def test_single_atom_chase(self):
        # f = delta_a: the b-translate has all its mass inside W_0
        f = delta(word("a"))
        moved = act(word("b"), f, ActionConvention.PAPER)
        assert restricted_norm({0}, moved) == 1.0
        assert restricted_norm({0}, moved) >= 2.0 / 3.0

    def test_deterministic(self):
        a = verify_A1_separation(2000, 4, SampleStream(52))
        b = verify_A1_separation(2000, 4, SampleStream(52))
        assert a.min_translated_norm == b.min_translated_norm


class TestA2Branch:
    def test_candidate_evaluation(self):
        candidate = designated_candidate()
        assert candidate.norm() == pytest.approx(1.0, rel=1e-12)
        values = [restricted_norm({-i}, candidate) for i in (1, 2, 3, 4)]
        assert min(values) == pytest.approx(math.sqrt(2.0) / 3.0, abs=1e-12)

    def test_identity_atom_satisfies_stated_bound(self):
        f = delta(IDENTITY)
        assert all(restricted_norm({-i}, f) == 0.0 for i in (1, 2, 3, 4))

    def test_report(self):
        report = evaluate_A2_claim(5000, 5, SampleStream(61))
        assert report.pigeonhole_exceptions == 0
        assert report.candidate_min == pytest.approx(math.sqrt(2.0) / 3.0, abs=1e-12)
        assert not report.candidate_meets_stated_bound
        assert 0.0 <= report.fraction_below_one_sixth <= 1.0
        assert set(report.min_norm_quantiles) == {0, 25, 50, 75, 100}
        assert report.min_norm_quantiles[0] <= report.min_norm_quantiles[100]

    def test_pigeonhole_bound_is_tight_for_candidate(self):
        candidate = designated_candidate()
        min_sq = min(restricted_norm({-i}, candidate) for i in (1, 2, 3, 4)) ** 2
        assert min_sq == pytest.approx((1.0 - 1.0 / 9.0) / 4.0, abs=1e-12)

    def test_index_range_guard(self):
        with pytest.raises(ValueError):
            evaluate_A2_claim(100, 5, SampleStream(1), index_range=())


class TestSerialization:
    def test_vector_json_round_trip(self):
        from conclab.freegroup import vector_from_json, vector_to_json
        from conclab.l2vec import L2Vector

        f = L2Vector({IDENTITY: 1.0 / 3.0, word("aaBa"): 0.25, word("A"): -0.5})
        text = vector_to_json(f)
        assert '"aaBa":0.25' in text
        assert '""' in text  # the identity serializes as the empty string
        assert vector_from_json(text) == f
