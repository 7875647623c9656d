import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udqubit.errors import CompletenessViolation, NormViolation, ShapeViolation
from udqubit.qcore import (
    AffineChannel,
    KrausSet,
    Tolerances,
    affine_from_kraus,
    apply_kraus,
    bloch_from_angles,
    bloch_from_density,
    check_density,
    choi_of_channel,
    completeness_residual,
    compose_all,
    configure_tolerances,
    density_from_bloch,
    is_psd,
    min_eigenvalue,
    tolerances,
)

angles = st.floats(0, 2 * math.pi)
unit = st.floats(-1, 1)


@st.composite
def bloch_vectors(draw):
    v = np.array([draw(unit), draw(unit), draw(unit)])
    n = np.linalg.norm(v)
    return v / n * draw(st.floats(0, 1)) if n > 1e-6 else np.zeros(3)


@st.composite
def kraus_sets(draw):
    """Random CPTP maps: an isometry sliced into two 2x2 blocks."""
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    q, _ = np.linalg.qr(m)
    return KrausSet((q[:2], q[2:]), label="random")


@given(angles, angles)
def test_input_state_is_pure(theta, phi):
    assert np.linalg.norm(bloch_from_angles(theta, phi)) == pytest.approx(1.0, abs=1e-15)


def test_coherence_sign_convention():
    # rho_01 = e^{i phi} sin(theta) / 2
    theta, phi = 0.7, 0.3
    rho = density_from_bloch(bloch_from_angles(theta, phi))
    assert rho[0, 1] == pytest.approx(np.exp(1j * phi) * math.sin(theta) / 2, abs=1e-15)
    assert rho[0, 0].real == pytest.approx(math.cos(theta / 2) ** 2, abs=1e-15)


@given(bloch_vectors())
def test_density_round_trip(z):
    rho = check_density(density_from_bloch(z))
    np.testing.assert_allclose(bloch_from_density(rho), z, atol=1e-14)


def test_norm_violation():
    with pytest.raises(NormViolation):
        density_from_bloch([0.0, 0.0, 1.0 + 1e-6])
    # rounding-level excess is tolerated
    density_from_bloch([0.0, 0.0, 1.0 + 1e-12])


@pytest.mark.parametrize(
    "rho",
    [
        np.eye(3) / 3,
        np.array([[0.5, 0.1], [0.2, 0.5]]),
        np.array([[0.6, 0], [0, 0.6]]),
        np.array([[1.2, 0], [0, -0.2]]),
    ],
)
def test_invalid_density(rho):
    with pytest.raises(ShapeViolation):
        check_density(rho)


def test_kraus_ops_read_only():
    k = KrausSet([np.eye(2)])
    with pytest.raises(ValueError):
        k.ops[0][0, 0] = 2
    with pytest.raises(ShapeViolation):
        KrausSet([np.eye(3)])


def test_incomplete_kraus_rejected():
    k = KrausSet([0.9 * np.eye(2)], label="lossy")
    assert completeness_residual(k) == pytest.approx(0.19)
    with pytest.raises(CompletenessViolation, match="lossy"):
        apply_kraus(k, np.eye(2) / 2)
    with pytest.raises(CompletenessViolation):
        affine_from_kraus(k)


@settings(max_examples=50)
@given(kraus_sets(), bloch_vectors())
def test_affine_extraction_matches_kraus_action(k, z):
    ch = affine_from_kraus(k)
    expected = bloch_from_density(apply_kraus(k, density_from_bloch(z)))
    np.testing.assert_allclose(ch(z), expected, atol=1e-13)


@settings(max_examples=50)
@given(kraus_sets())
def test_choi_is_psd_with_unit_partial_trace(k):
    choi = choi_of_channel(k)
    assert is_psd(choi)
    # tracing out the output leaves I/2 on the reference
    red = np.einsum("ajbj->ab", choi.reshape(2, 2, 2, 2))
    np.testing.assert_allclose(red, np.eye(2) / 2, atol=1e-14)


def test_non_cp_map_has_negative_choi_eigenvalue():
    # transpose map, written as the Choi of the swap operator
    swap = np.eye(4)[[0, 2, 1, 3]] / 2
    assert min_eigenvalue(swap) == pytest.approx(-0.5)
    assert not is_psd(swap)


@given(bloch_vectors())
def test_compose_all_applies_in_listed_order(z):
    rot = AffineChannel(np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1.0]]), np.zeros(3))
    shrink = AffineChannel(np.diag([0.5, 0.5, 0.25]), np.array([0, 0, -0.5]))
    both = compose_all([rot, shrink])
    np.testing.assert_allclose(both(z), shrink(rot(z)), atol=1e-15)
    np.testing.assert_allclose(rot.then(shrink)(z), shrink(rot(z)), atol=1e-15)
    np.testing.assert_allclose(compose_all([])(z), z)


def test_configure_tolerances_returns_previous():
    before = tolerances()
    prev = configure_tolerances(fisher=1e-4)
    assert prev == before
    assert tolerances().fisher == 1e-4 and tolerances().closed == before.closed
    configure_tolerances(prev)
    assert tolerances() == Tolerances()
    with pytest.raises(KeyError):
        configure_tolerances(bogus=1.0)
