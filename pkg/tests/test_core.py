import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcnfchaos import (
    BcnfParams,
    GeneralPwlMap,
    TangentState,
    WordSet,
    apply,
    apply_inverse,
    gamma,
    gamma_set,
    is_generated_by,
    itineraries,
    lyapunov_estimate,
    normalize_to_bcnf,
    phi,
    tangent_step,
)
from bcnfchaos.core import orbit, word_product
from bcnfchaos.errors import DegenerateMap, DegenerateTangent, NotInvertible

from conftest import POINT_A

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
positive_delta = st.floats(min_value=0.01, max_value=2.0)


class TestApply:
    def test_origin_maps_to_translation(self):
        assert apply(POINT_A, (0.0, 0.0)) == (1.0, 0.0)

    def test_seed_image_lands_on_axis(self):
        # the image of (0, beta) is (beta + 1, 0) for any parameters
        assert apply(POINT_A, (0.0, 0.25)) == (1.25, 0.0)
        assert apply(BcnfParams(2.0, -3.0, 0.9, 0.1), (0.0, 0.25)) == (1.25, 0.0)

    def test_left_branch_hand_value(self):
        x = apply(BcnfParams(0.7, 0.0, 0.3, 0.3), (-1.0, 0.0))
        assert x == pytest.approx((0.3, 0.3), abs=1e-15)

    @given(x2=finite, tau_L=finite, tau_R=finite, delta_L=finite, delta_R=finite)
    @settings(max_examples=200)
    def test_branches_agree_on_switching_line(self, x2, tau_L, tau_R, delta_L, delta_R):
        m = BcnfParams(tau_L, tau_R, delta_L, delta_R)
        left = (m.tau_L * 0.0 + x2 + 1.0, -m.delta_L * 0.0)
        right = (m.tau_R * 0.0 + x2 + 1.0, -m.delta_R * 0.0)
        assert left == right

    def test_branch_agreement_at_scale(self, rng):
        # the same identity over 1e4 random (x2, parameter) draws, exactly
        draws = rng.uniform(-100.0, 100.0, size=(10_000, 5))
        x2 = draws[:, 0]
        left1 = draws[:, 1] * 0.0 + x2 + 1.0
        right1 = draws[:, 2] * 0.0 + x2 + 1.0
        left2 = -draws[:, 3] * 0.0
        right2 = -draws[:, 4] * 0.0
        assert (left1 == right1).all() and (left2 == right2).all()


class TestApplyInverse:
    def test_inverse_of_origin_image(self):
        assert apply_inverse(POINT_A, (1.0, 0.0)) == (0.0, 0.0)

    def test_round_trip(self, rng):
        for _ in range(50):
            m = BcnfParams(*rng.uniform(-2, 2, 2), *rng.uniform(0.05, 1.5, 2))
            pts = rng.uniform(-10, 10, size=(200, 2))
            for p in pts:
                x = (float(p[0]), float(p[1]))
                back = apply_inverse(m, apply(m, x))
                assert math.hypot(back[0] - x[0], back[1] - x[1]) < 1e-10

    def test_preimage_of_seed_first_coordinate(self):
        # f^{-1}((0, beta)) has first coordinate -beta / delta_L
        x = apply_inverse(POINT_A, (0.0, 0.25))
        assert x[0] == pytest.approx(-0.25 / 0.3, abs=1e-15)
        assert x[0] < 0.0

    def test_rejects_noninvertible(self):
        with pytest.raises(NotInvertible):
            apply_inverse(BcnfParams(0.7, -1.4, 0.3, -0.3), (1.0, 0.0))
        with pytest.raises(NotInvertible):
            apply_inverse(BcnfParams(0.7, -1.4, 0.0, 0.3), (1.0, 0.0))


@given(tau_L=finite, tau_R=finite, delta_L=finite, delta_R=finite)
@settings(max_examples=100)
def test_branch_matrices_differ_in_first_column_only(tau_L, tau_R, delta_L, delta_R):
    m = BcnfParams(tau_L, tau_R, delta_L, delta_R)
    diff = m.A_R - m.A_L
    assert diff[0, 1] == 0.0 and diff[1, 1] == 0.0
    assert np.array_equal(diff[:, 0], m.zeta)


def test_lozi_parameter_structure():
    m = BcnfParams(1.7, -1.7, 0.5, 0.5)
    assert np.linalg.det(m.A_L) == pytest.approx(np.linalg.det(m.A_R), abs=1e-15)
    assert np.trace(m.A_L) == -np.trace(m.A_R)


class TestGamma:
    def test_right_of_line(self):
        assert gamma(TangentState((1.0, 0.0), (-3.0, 2.0))) == "R"

    def test_on_line_direction_decides(self):
        assert gamma(TangentState((0.0, 1.0), (-1.0, 0.0))) == "L"
        assert gamma(TangentState((0.0, 1.0), (1.0, 0.0))) == "R"

    def test_vertical_direction_tie_is_harmless(self):
        s = TangentState((0.0, 1.0), (0.0, 1.0))
        assert gamma(s) == "R"
        m = BcnfParams(0.7, -1.4, 0.3, 0.9)
        v = np.array([0.0, 1.0])
        assert np.array_equal(m.A_L @ v, m.A_R @ v)

    def test_gamma_set_branches(self):
        assert gamma_set((-2.0, 5.0)) == {"L"}
        assert gamma_set((0.0, -1.0)) == {"L", "R"}
        assert gamma_set((3.0, 0.0)) == {"R"}


class TestTangentStep:
    def test_hand_value(self):
        m = BcnfParams(0.0, -1.4, 0.3, 0.3)
        s = tangent_step(m, TangentState((1.0, 0.0), (1.0, 0.0)))
        assert s.x == pytest.approx((-0.4, -0.3), abs=1e-15)
        assert s.v == pytest.approx((-1.4, -0.3), abs=1e-15)

    def test_iteration_matches_word_product(self, rng):
        # off the switching line the n-step tangent equals the word matrix
        # acting on the initial direction
        m = BcnfParams(0.7, -1.4, 0.3, 0.3)
        checked = 0
        while checked < 20:
            x = (float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
            pts = [x] + orbit(m, x, 7)
            if min(abs(p[0]) for p in pts[:8]) < 1e-6:
                continue
            word = "".join("L" if p[0] < 0 else "R" for p in pts[:8])
            v = (float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
            s = TangentState(x, v)
            for _ in range(8):
                s = tangent_step(m, s)
            mat = phi(m, word)
            expected = mat @ np.asarray(v)
            assert s.v == pytest.approx(tuple(expected), abs=1e-12)
            checked += 1

    def test_zero_vector_stays_zero(self):
        m = POINT_A
        s = TangentState((0.3, 0.2), (0.0, 0.0))
        for _ in range(5):
            s = tangent_step(m, s)
        assert s.v == (0.0, 0.0)
        assert s.x == pytest.approx(orbit(m, (0.3, 0.2), 5)[-1])


class TestItineraries:
    def test_orbit_off_line_has_single_word(self):
        m = POINT_A
        words = itineraries(m, (0.3, 0.2), 5)
        assert len(words) == 1

    def test_branching_when_an_iterate_grazes(self):
        # x in x1 > 0 whose image lies exactly on the switching line and whose
        # second image lands in x1 < 0 produces the two-word set {RLL, RRL}
        m = POINT_A
        x = apply_inverse(m, (0.0, -1.5))
        assert x[0] > 0.0
        assert itineraries(m, x, 3) == {"RLL", "RRL"}

    def test_origin_starts_on_line(self):
        assert itineraries(POINT_A, (0.0, 0.0), 1) == {"L", "R"}

    def test_cardinality_is_two_to_the_hits(self, rng):
        m = POINT_A
        for _ in range(50):
            x = (float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
            pts = [x] + orbit(m, x, 5)
            hits = sum(abs(p[0]) <= 1e-12 for p in pts[:6])
            assert len(itineraries(m, x, 6)) == 2**hits


class TestWordProducts:
    def test_single_symbol(self):
        assert np.array_equal(phi(POINT_A, "R"), POINT_A.A_R)

    def test_first_symbol_applied_first(self):
        m = POINT_A
        assert np.array_equal(phi(m, "RL"), m.A_L @ m.A_R)
        assert not np.array_equal(phi(m, "RL"), phi(m, "LR"))

    def test_against_tangent_iteration(self):
        m = BcnfParams(1.0, -2.0, 0.3, 0.3)
        expected = m.A_L @ m.A_L @ m.A_R
        assert np.allclose(phi(m, "RLL"), expected, atol=1e-15)
        # drive the tangent map along an orbit realising RLL
        x = (0.4, -1.9)
        pts = [x] + orbit(m, x, 2)
        word = "".join("L" if p[0] < 0 else "R" for p in pts)
        assert word == "RLL"
        s = TangentState(x, (1.0, 0.5))
        for _ in range(3):
            s = tangent_step(m, s)
        assert s.v == pytest.approx(tuple(expected @ np.array([1.0, 0.5])), abs=1e-12)


def _decomposes(word: str, pieces: tuple[str, ...]) -> bool:
    if word == "":
        return True
    return any(
        word.startswith(p) and _decomposes(word[len(p):], pieces) for p in pieces
    )


class TestIsGeneratedBy:
    def test_member_is_generated(self):
        assert is_generated_by("RLL", WordSet(("R", "RL", "RLL")))

    def test_forbidden_block(self):
        ws = WordSet(("R", "RL", "RLL"))
        assert not is_generated_by("RLLLR", ws)
        assert not is_generated_by("LLL", ws)

    def test_needs_backtracking(self):
        # greedy longest-match would strand the tail here
        assert is_generated_by("RLRLL", WordSet(("RL", "RLL")))

    def test_against_bruteforce(self, rng):
        alphabet = "LR"
        for _ in range(300):
            pieces = tuple(
                "".join(rng.choice(list(alphabet), size=rng.integers(1, 4)))
                for _ in range(rng.integers(1, 4))
            )
            word = "".join(rng.choice(list(alphabet), size=rng.integers(1, 9)))
            assert is_generated_by(word, pieces) == _decomposes(word, pieces)


class TestLyapunovEstimate:
    def test_single_step_off_line(self):
        m = POINT_A
        v = (0.4, -1.0)
        est = lyapunov_estimate(m, TangentState((2.0, 0.3), v), 1)
        grown = m.A_R @ np.asarray(v)
        assert est == pytest.approx(math.log(np.linalg.norm(grown) / np.linalg.norm(v)), abs=1e-12)

    def test_directional_split_on_switching_line(self):
        # one-sided derivatives differ by side: the leftward direction is
        # stretched by the left matrix, the rightward one by the right matrix
        m = POINT_A
        left = lyapunov_estimate(m, TangentState((0.0, 2.0), (-1.0, 0.0)), 1)
        right = lyapunov_estimate(m, TangentState((0.0, 2.0), (1.0, 0.0)), 1)
        assert left == pytest.approx(math.log(math.hypot(m.tau_L, m.delta_L)), abs=1e-12)
        assert right == pytest.approx(math.log(math.hypot(m.tau_R, m.delta_R)), abs=1e-12)

    def test_eigenvector_at_fixed_point(self):
        m = POINT_A
        fixed = np.linalg.solve(np.eye(2) - m.A_R, m.b)
        assert fixed[0] > 0.0
        lam = np.linalg.eigvals(m.A_R).real
        dominant = lam[np.argmax(np.abs(lam))]
        v = (1.0, -m.delta_R / dominant)
        # the fixed point repels, so keep the run short enough that rounding
        # drift (growing like |dominant|^n * 1e-16) stays negligible
        est = lyapunov_estimate(m, TangentState(tuple(fixed), v), 60)
        assert est == pytest.approx(math.log(abs(dominant)), abs=1e-9)

    def test_zero_direction_rejected(self):
        with pytest.raises(DegenerateTangent):
            lyapunov_estimate(POINT_A, TangentState((1.0, 1.0), (0.0, 0.0)), 10)


class TestNormalization:
    def test_normal_form_is_its_own_normalization(self):
        g = GeneralPwlMap(a_L=0.7, a_R=-1.4, b=1.0, c_L=-0.3, c_R=-0.3, d=0.0, p=1.0, q=0.0)
        params, change = normalize_to_bcnf(g)
        assert params == BcnfParams(0.7, -1.4, 0.3, 0.3)
        assert change((2.0, 3.0)) == (2.0, 3.0)

    def test_degenerate_inputs(self):
        with pytest.raises(DegenerateMap):
            normalize_to_bcnf(GeneralPwlMap(1, 1, 0.0, 1, 1, 1, 1, 1))
        with pytest.raises(DegenerateMap):
            normalize_to_bcnf(GeneralPwlMap(1, 1, 1.0, 1, 1, 1, 0.0, 0.0))

    def test_conjugacy_on_random_points(self, rng):
        g = GeneralPwlMap(a_L=0.5, a_R=-1.2, b=2.0, c_L=0.3, c_R=-0.4, d=0.5, p=1.0, q=1.0)
        assert g.xi == pytest.approx(2.5)
        params, change = normalize_to_bcnf(g)
        assert params.tau_L == pytest.approx(0.5 + 0.5)
        for _ in range(100):
            x = (float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
            lhs = change(g.apply(x))
            rhs = apply(params, change(x))
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_negative_xi_swaps_pieces(self, rng):
        g = GeneralPwlMap(a_L=0.5, a_R=-1.2, b=2.0, c_L=0.3, c_R=-0.4, d=0.5, p=-1.0, q=-1.0)
        assert g.xi < 0.0
        params, change = normalize_to_bcnf(g)
        assert params.tau_L == pytest.approx(-1.2 + 0.5)  # right piece becomes left
        for _ in range(100):
            x = (float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
            assert change(g.apply(x)) == pytest.approx(apply(params, change(x)), abs=1e-9)


class TestWordSet:
    def test_canonical_family(self):
        ws = WordSet.canonical(2)
        assert tuple(ws) == ("R", "RL", "RLL")
        assert ws.l_max == 3
        assert "RL" in ws

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            WordSet(())
        with pytest.raises(ValueError):
            WordSet(("R", ""))
        with pytest.raises(ValueError):
            WordSet(("RX",))

    def test_word_product_matches_power_form(self):
        m = POINT_A
        assert word_product(m, "RLL") == word_product(m, "RLL")
        assert np.allclose(phi(m, "RLLL"), np.linalg.matrix_power(m.A_L, 3) @ m.A_R)
