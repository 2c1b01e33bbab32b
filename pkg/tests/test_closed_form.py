import itertools

import numpy as np
import pytest

from octoewl import closed_form as cf
from octoewl.algebra import Octonion, basis_octonion, oct_mul
from octoewl.errors import InvalidStrategyError
from octoewl.ewl import build_instance, canonical_eta, outcome_labels, simulate_batch
from octoewl.quantum import SU2Strategy, haar_coefficients

ETA3 = canonical_eta(3)
ETA2 = canonical_eta(2)
N = SU2Strategy.identity()
F3 = SU2Strategy.flip(ETA3)
F2 = SU2Strategy.flip(ETA2)


def i(j):
    return basis_octonion(j)


def point_mass(label):
    labels = outcome_labels(len(label))
    out = np.zeros(len(labels))
    out[labels.index(label)] = 1.0
    return out


def test_embed_player_identity_flags():
    assert cf.embed_player(1, N, (0, 0)) == i(0)
    assert cf.embed_player(1, N, (1, 0)) == -i(0)
    assert cf.embed_player(1, N, (0, 1)) == i(0)


@pytest.mark.parametrize("player, top", [(1, 4), (2, 6), (3, 7)])
def test_flip_embeds_to_top_unit(player, top):
    for flags in itertools.product((0, 1), repeat=2):
        assert cf.embed_player(player, F3, flags).isclose(i(top), atol=1e-15)


@pytest.mark.parametrize("player, top", [(1, 4), (2, 6), (3, 7)])
def test_embedding_equals_complex_product(player, top):
    rng = np.random.default_rng(player)
    a0, a1, b0, b1 = haar_coefficients(rng)
    eta_bar = Octonion([ETA3.real, -ETA3.imag, 0, 0, 0, 0, 0, 0])
    a = Octonion([a0, a1, 0, 0, 0, 0, 0, 0])
    b = Octonion([b0, b1, 0, 0, 0, 0, 0, 0])
    expected = a + oct_mul(oct_mul(b, eta_bar), i(top))
    assert cf.embed_player(player, [a0, a1, b0, b1]).isclose(expected, atol=1e-14)


def test_embedding_matches_printed_coefficients():
    a0, a1, b0, b1 = haar_coefficients(np.random.default_rng(9))
    s = cf.embed_player(1, [a0, a1, b0, b1])
    r3 = np.sqrt(3) / 2
    np.testing.assert_allclose(
        s.e, [a0, a1, r3 * b0 - 0.5 * b1, 0, 0.5 * b0 + r3 * b1, 0, 0, 0], atol=1e-15
    )


def test_embeddings_stay_in_their_subalgebras():
    c = haar_coefficients(np.random.default_rng(10))
    for player, support in cf.PLAYER_BASES.items():
        for flags in itertools.product((0, 1), repeat=2):
            e = cf.embed_player(player, c, flags).e
            outside = np.setdiff1d(np.arange(8), support)
            assert np.all(e[outside] == 0)
            assert abs(e @ e - 1) <= 1e-12


def test_embed_player_rejects_bad_input():
    with pytest.raises(ValueError):
        cf.embed_player(4, N)
    with pytest.raises(InvalidStrategyError):
        cf.embed_player(1, [1, 1, 0, 0])
    with pytest.raises(ValueError):
        cf.embed_player(1, N, (2, 0))


def test_all_n_hand_values():
    xp, xm, yp, ym = (Octonion(v) for v in cf.triple_products(*[N.coefficients] * 3))
    assert xp.isclose(Octonion.real(0))
    assert xm.isclose(i(0))
    np.testing.assert_allclose(cf.theorem1_distribution(N, N, N), point_mass("NNN"), atol=1e-15)


def test_all_f_hand_values():
    xp, xm, yp, ym = (Octonion(v) for v in cf.triple_products(*[F3.coefficients] * 3))
    assert oct_mul(i(4), i(6)) == i(3)
    assert xp.isclose(i(1), atol=1e-15)
    np.testing.assert_allclose(cf.theorem1_distribution(F3, F3, F3), point_mass("FFF"), atol=1e-15)


def test_single_flip_hand_values():
    _, _, yp, _ = (Octonion(v) for v in cf.triple_products(F3.coefficients, N.coefficients, N.coefficients))
    assert yp.isclose(i(4), atol=1e-15)
    np.testing.assert_allclose(cf.theorem1_distribution(F3, N, N), point_mass("FNN"), atol=1e-15)
    _, _, _, ym = (Octonion(v) for v in cf.triple_products(N.coefficients, F3.coefficients, F3.coefficients))
    assert ym.isclose(i(2), atol=1e-15)
    np.testing.assert_allclose(cf.theorem1_distribution(N, F3, F3), point_mass("NFF"), atol=1e-15)


@pytest.mark.parametrize("profile", ["".join(p) for p in itertools.product("NF", repeat=3)])
def test_theorem1_classical_profiles(profile):
    strategies = [N if c == "N" else F3 for c in profile]
    np.testing.assert_allclose(cf.theorem1_distribution(*strategies), point_mass(profile), atol=1e-12)


def test_theorem1_matches_oracle_on_random_triples():
    coeffs = haar_coefficients(np.random.default_rng(11), (5000, 3))
    closed = cf.theorem1_batch(coeffs)
    assert np.abs(closed - simulate_batch(build_instance(3), coeffs)).max() <= 1e-9
    assert np.abs(closed.sum(axis=1) - 1).max() <= 1e-12
    assert closed.min() >= 0 and closed.max() <= 1 + 1e-12


def test_theorem1_distribution_single_matches_batch():
    c = haar_coefficients(np.random.default_rng(12), 3)
    np.testing.assert_array_equal(cf.theorem1_distribution(*c), cf.theorem1_batch(c[None])[0])


def test_left_association_matters():
    c = haar_coefficients(np.random.default_rng(13), 3)
    s = cf.embed_player(1, c[0], (1, 0))
    t = cf.embed_player(2, c[1], (1, 0))
    u = cf.embed_player(3, c[2], (0, 1))
    assert not oct_mul(oct_mul(s, t), u).isclose(oct_mul(s, oct_mul(t, u)), atol=1e-6)


def test_landsburg_identity_and_flips():
    np.testing.assert_allclose(cf.landsburg_distribution(N, N), point_mass("NN"), atol=1e-15)
    np.testing.assert_allclose(cf.landsburg_distribution(F2, F2), point_mass("FF"), atol=1e-15)
    np.testing.assert_allclose(cf.landsburg_distribution(N, F2), point_mass("NF"), atol=1e-15)
    np.testing.assert_allclose(cf.landsburg_distribution(F2, N), point_mass("FN"), atol=1e-15)


def test_landsburg_quaternions_are_unit():
    c = haar_coefficients(np.random.default_rng(14), 2)
    p, q = cf.landsburg_quaternions(*c)
    assert abs(p.norm2() - 1) <= 1e-12 and abs(q.norm2() - 1) <= 1e-12


def test_landsburg_matches_oracle():
    coeffs = haar_coefficients(np.random.default_rng(15), (10_000, 2))
    assert np.abs(cf.landsburg_batch(coeffs) - simulate_batch(build_instance(2), coeffs)).max() <= 1e-9


def test_parallelogram_identities():
    coeffs = haar_coefficients(np.random.default_rng(16), (1000, 3))
    xp, xm, yp, ym = cf.triple_products(coeffs[:, 0], coeffs[:, 1], coeffs[:, 2])
    np.testing.assert_allclose((xp**2).sum(1) + (xm**2).sum(1), 1, atol=1e-10)
    np.testing.assert_allclose((yp**2).sum(1) + (ym**2).sum(1), 1, atol=1e-10)


def test_vanishing_report_values():
    all_f = cf.vanishing_projection_report(F3, F3, F3)
    assert all_f.max_unused_x <= 1e-15
    # Y+ = i1 at all-F, and index 1 is read only from the X group
    assert all_f.max_unused_y == pytest.approx(1.0, abs=1e-12)
    all_n = cf.vanishing_projection_report(N, N, N)
    assert all_n.max_unused_x == 0.0
    assert all_n.max_unused_y == pytest.approx(1.0)
    assert all_n.x_norm2 == pytest.approx(1.0) and all_n.y_norm2 == pytest.approx(1.0)


def test_unused_coordinates_carry_unit_mass():
    coeffs = haar_coefficients(np.random.default_rng(17), (1000, 3))
    xp, xm, yp, ym = cf.triple_products(coeffs[:, 0], coeffs[:, 1], coeffs[:, 2])
    x_unused, y_unused = [2, 4, 5, 6], [0, 1, 3, 7]
    mass = (xp[:, x_unused] ** 2 + xm[:, x_unused] ** 2).sum(1) + (yp[:, y_unused] ** 2 + ym[:, y_unused] ** 2).sum(1)
    np.testing.assert_allclose(mass, 1.0, atol=1e-12)
