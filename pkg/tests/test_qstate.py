import numpy as np
import pytest
from reuploader import qstate
from reuploader.errors import InvalidArgument

generator = np.random.Generator(np.random.PCG64(20240101))


def random_states(count):
    amps = generator.normal(size=(count, 2)) + 1j * generator.normal(size=(count, 2))
    return amps / np.linalg.norm(amps, axis=-1, keepdims=True)


def random_unitaries(count):
    angles = generator.uniform(-np.pi, np.pi, size=(count, 3))
    return qstate.su2(angles[:, 0], angles[:, 1], angles[:, 2])


def eigenvalue_trace_distance(s, t):
    # Closed form eigenvalues of the traceless Hermitian 2x2 difference
    delta = qstate.density_matrix(s) - qstate.density_matrix(t)
    a = np.real(delta[..., 0, 0])
    b = delta[..., 0, 1]
    d = np.real(delta[..., 1, 1])
    mean = (a + d) / 2
    radius = np.sqrt(((a - d) / 2) ** 2 + np.abs(b) ** 2)
    return (np.abs(mean + radius) + np.abs(mean - radius)) / 2


def test_state_validation():
    s = qstate.state(1, 0)
    assert np.array_equal(s, qstate.ZERO)
    with pytest.raises(InvalidArgument):
        qstate.state(1, 1)
    with pytest.raises(InvalidArgument):
        qstate.fidelity(np.array([1, 1, 0]), qstate.ZERO)


def test_rotations():
    assert np.allclose(qstate.rotation_z(0), np.eye(2), atol=1e-15)
    a, c = 0.4, -1.3
    assert np.allclose(qstate.rotation_z(a) @ qstate.rotation_z(c), qstate.rotation_z(a + c), atol=1e-12)
    assert qstate.fidelity(qstate.apply(qstate.rotation_z(np.pi), qstate.ZERO), qstate.ZERO) == pytest.approx(1, abs=1e-12)
    for bad in (np.nan, np.inf, -np.inf):
        with pytest.raises(InvalidArgument):
            qstate.rotation_y(bad)
        with pytest.raises(InvalidArgument):
            qstate.rotation_z(bad)
        with pytest.raises(InvalidArgument):
            qstate.su2(0, bad, 0)


def test_su2():
    assert np.allclose(qstate.su2(0, 0, 0), np.eye(2), atol=1e-15)
    assert np.allclose(qstate.su2(0.7, 0, -0.2), qstate.rotation_z(0.5), atol=1e-12)

    # Matrix product written out by hand
    a, b, c = 0.3, 1.1, -0.7
    rz = lambda t: np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]])
    ry = lambda t: np.array([[np.cos(t / 2), -np.sin(t / 2)], [np.sin(t / 2), np.cos(t / 2)]])
    expected = rz(a).dot(ry(b)).dot(rz(c)).dot(np.array([1, 0]))
    assert np.allclose(qstate.apply(qstate.su2(a, b, c), qstate.ZERO), expected, atol=1e-12)


def test_apply():
    s = random_states(1)[0]
    assert np.allclose(qstate.apply(qstate.IDENTITY, s), s, atol=1e-15)
    flipped = qstate.apply(qstate.rotation_y(np.pi), qstate.ZERO)
    assert qstate.fidelity(flipped, qstate.ONE) == pytest.approx(1, abs=1e-12)

    u, s = random_unitaries(1000), random_states(1000)
    assert qstate.is_unitary(u, 1e-12)
    evolved = qstate.apply(u, s)
    assert np.max(np.abs(np.linalg.norm(evolved, axis=-1) - 1)) < 1e-12

    with pytest.raises(InvalidArgument):
        qstate.apply(np.array([[1, 1], [0, 1]]), qstate.ZERO)


def test_fidelity():
    plus = qstate.state(1 / np.sqrt(2), 1 / np.sqrt(2))
    assert qstate.fidelity(qstate.ZERO, qstate.ZERO) == pytest.approx(1)
    assert qstate.fidelity(qstate.ZERO, qstate.ONE) == pytest.approx(0)
    assert qstate.fidelity(plus, qstate.ZERO) == pytest.approx(0.5)

    s, t = random_states(1000), random_states(1000)
    f = qstate.fidelity(s, t)
    assert np.all(f >= 0) and np.all(f <= 1 + 1e-12)
    assert np.allclose(f, qstate.fidelity(t, s), atol=1e-15)


def test_bloch_vector():
    plus = qstate.state(1 / np.sqrt(2), 1 / np.sqrt(2))
    assert np.allclose(qstate.bloch_vector(qstate.ZERO), (0, 0, 1))
    assert np.allclose(qstate.bloch_vector(qstate.ONE), (0, 0, -1))
    assert np.allclose(qstate.bloch_vector(plus), (1, 0, 0))
    r = qstate.bloch_vector(random_states(1000))
    assert np.max(np.abs(np.linalg.norm(r, axis=-1) - 1)) < 1e-10


def test_trace_distance():
    s = random_states(1)[0]
    assert qstate.trace_distance(qstate.ZERO, qstate.ONE) == pytest.approx(1)
    assert qstate.trace_distance(s, s) == pytest.approx(0, abs=1e-12)


def test_metric_identities():
    s, t = random_states(10000), random_states(10000)
    d = qstate.trace_distance(s, t)
    f = qstate.fidelity(s, t)
    assert np.max(np.abs(d ** 2 + f - 1)) < 1e-10
    assert np.max(np.abs(d - eigenvalue_trace_distance(s, t))) < 1e-10


def test_global_phase_invariance():
    s, t = random_states(100), random_states(100)
    phase = np.exp(1j * generator.uniform(-np.pi, np.pi, size=(100, 1)))
    assert np.allclose(qstate.fidelity(s * phase, t), qstate.fidelity(s, t), atol=1e-12)
    assert np.allclose(qstate.trace_distance(s, t * phase), qstate.trace_distance(s, t), atol=1e-12)
    assert np.allclose(qstate.bloch_vector(s * phase), qstate.bloch_vector(s), atol=1e-12)
