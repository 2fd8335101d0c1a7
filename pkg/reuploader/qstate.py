"""
Single-qubit linear algebra on numpy arrays.

A state is a complex array whose last axis holds the two amplitudes,
a unitary is a complex array whose last two axes hold a 2x2 matrix and a
Bloch vector is a real array whose last axis holds (rx, ry, rz). Leading
axes broadcast, so a whole dataset can be evolved in one call.
"""

import numpy as np
from reuploader import const
from reuploader.errors import InvalidArgument

ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def _angle(angle):
    angle = np.asarray(angle, dtype=float)
    if not np.all(np.isfinite(angle)):
        raise InvalidArgument("Rotation angle must be finite, got %r" % (angle,))
    return angle


def _state(s):
    s = np.asarray(s, dtype=complex)
    if s.shape[-1:] != (2,):
        raise InvalidArgument("Qubit state must have two amplitudes, got shape %s" % (s.shape,))
    norm = np.sum(np.abs(s) ** 2, axis=-1)
    if np.any(np.abs(norm - 1) > const.NORM_TOLERANCE):
        raise InvalidArgument("Qubit state is not normalized, |amp0|^2 + |amp1|^2 = %r" % (norm,))
    return s


def _unitary(u):
    u = np.asarray(u, dtype=complex)
    if u.shape[-2:] != (2, 2):
        raise InvalidArgument("Expected 2x2 matrix, got shape %s" % (u.shape,))
    if not is_unitary(u):
        raise InvalidArgument("Matrix is not unitary")
    return u


def is_unitary(u, tolerance=const.UNITARY_TOLERANCE):
    u = np.asarray(u, dtype=complex)
    product = np.conj(np.swapaxes(u, -1, -2)) @ u
    return bool(np.all(np.abs(product - IDENTITY) < tolerance))


def state(amp0, amp1):
    return _state(np.stack(np.broadcast_arrays(
        np.asarray(amp0, dtype=complex),
        np.asarray(amp1, dtype=complex)), axis=-1))


def rotation_y(angle):
    """
    Ry(a) = [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]]
    """
    half = _angle(angle) / 2
    cos, sin = np.cos(half), np.sin(half)
    u = np.empty(half.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = cos
    u[..., 0, 1] = -sin
    u[..., 1, 0] = sin
    u[..., 1, 1] = cos
    return u


def rotation_z(angle):
    """
    Rz(a) = diag(exp(-ia/2), exp(ia/2))
    """
    half = _angle(angle) / 2
    u = np.zeros(half.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = np.exp(-1j * half)
    u[..., 1, 1] = np.exp(1j * half)
    return u


def su2(a, b, c):
    """
    General rotation in ZYZ Euler form, Rz(a) Ry(b) Rz(c)
    """
    return rotation_z(a) @ rotation_y(b) @ rotation_z(c)


def evolve(u, s):
    # No validation, used on the hot path of the classifier
    return (u @ s[..., None])[..., 0]


def apply(u, s):
    return evolve(_unitary(u), _state(s))


def fidelity(s, t):
    s, t = _state(s), _state(t)
    return np.abs(np.sum(np.conj(t) * s, axis=-1)) ** 2


def bloch_vector(s):
    s = _state(s)
    amp0, amp1 = s[..., 0], s[..., 1]
    return np.stack((
        2 * np.real(amp0 * np.conj(amp1)),
        2 * np.imag(np.conj(amp0) * amp1),
        np.abs(amp0) ** 2 - np.abs(amp1) ** 2), axis=-1)


def trace_distance(s, t):
    """
    Half the Euclidean distance between the Bloch vectors of two pure states,
    equal to 1/2 tr|rho - sigma| for a single qubit
    """
    return np.linalg.norm(bloch_vector(s) - bloch_vector(t), axis=-1) / 2


def density_matrix(s):
    s = _state(s)
    return s[..., :, None] * np.conj(s[..., None, :])
