import cmath
import math

import numpy as np
import pytest

import bergman

STD1 = {"family": "standard", "alpha": 1}


def test_standard_moments_closed_form():
    # (1 - r^2)^a: omega_n = B((n+1)/2, a+1) / 2.
    for n in range(6):
        exact = 0.5 * math.gamma((n + 1) / 2) * math.gamma(2) / math.gamma((n + 1) / 2 + 2)
        assert bergman.moment(STD1, n) == pytest.approx(exact, rel=1e-12)


def test_classify_standard():
    rep = bergman.classify(STD1)
    assert rep["in_Dhat"] and rep["regular"]


def test_kernel_closed_form():
    z, zeta = 0.3 + 0.2j, -0.1 + 0.5j
    value, err, terms = bergman.kernel_eval(STD1, z, zeta)
    exact = 2.0 / (1 - z.conjugate() * zeta) ** 3
    assert abs(value - exact) < 1e-10 * abs(exact)
    assert terms > 0


def test_identity_measure_gives_identity_matrix():
    measure = {"type": "weighted", "weight": STD1}
    T = bergman.toeplitz_matrix(measure, STD1, 8)
    assert np.allclose(T, np.eye(8), atol=1e-9)
    assert bergman.berezin(measure, STD1, 0.4 + 0.1j) == pytest.approx(1.0, rel=1e-9)


def test_rotation_composition_is_unitary():
    phi = {"type": "poly", "coeffs": [[0, 0], [math.cos(1.0), math.sin(1.0)]]}
    C = bergman.composition_matrix(phi, STD1, 16)
    n = min(C.shape)
    assert np.allclose(np.abs(np.diag(C[:n, :n])), 1.0, atol=1e-10)


def test_schatten_norm_of_diagonal():
    rep = bergman.schatten_norm(np.diag([1.0, 0.5, 0.25]).astype(complex), 2.0)
    assert rep["value"] == pytest.approx(math.sqrt(1 + 0.25 + 0.0625), rel=1e-12)


def test_errors_are_raised():
    with pytest.raises(bergman.ConfigError):
        bergman.moment({"family": "standard", "alpha": -2}, 0)
    with pytest.raises(bergman.DomainError):
        bergman.kernel_diag(STD1, 1.5)


def test_geometry_suite_passes():
    rep = bergman.run_suite("geometry")
    assert rep["passed"], rep
