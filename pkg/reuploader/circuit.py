"""
Single-qubit data re-uploading classifier.

Parameters are a flat vector laid out layer by layer: three rotation angles
followed by one weight per data component, so each layer contributes 3 + d
entries. Layer l rotates the qubit by su2(phi_1, phi_2, phi_3) where
phi_k = theta_k + w_k * x_k for k <= d and phi_k = theta_k otherwise.
The circuit starts from |0>.
"""

import logging
import numpy as np
from collections import namedtuple
from reuploader import const, qstate
from reuploader.data import rng
from reuploader.errors import InvalidArgument, EmptyDataset

logger = logging.getLogger(__name__)

Decision = namedtuple("Decision", ("label", "p_zero", "bias"))


class CircuitShape(namedtuple("CircuitShape", ("layers", "data_dim"))):
    __slots__ = ()

    def __new__(cls, layers, data_dim=2):
        if int(layers) != layers or layers < 1:
            raise InvalidArgument("Layer count must be a positive integer, got %r" % (layers,))
        if data_dim not in (1, 2, 3):
            raise InvalidArgument("Data dimension must be 1, 2 or 3, got %r" % (data_dim,))
        return super(CircuitShape, cls).__new__(cls, int(layers), int(data_dim))

    @property
    def param_count(self):
        return (3 + self.data_dim) * self.layers


def param_count(shape):
    return shape.param_count


def _params(shape, params):
    params = np.asarray(params, dtype=float)
    if params.shape != (shape.param_count,):
        raise InvalidArgument("%s expects %d parameters, got shape %s" % (
            shape, shape.param_count, params.shape))
    if not np.all(np.isfinite(params)):
        raise InvalidArgument("Parameters must be finite")
    return params


def _features(shape, x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != shape.data_dim:
        raise InvalidArgument("Expected data points with %d components, got shape %s" % (
            shape.data_dim, x.shape))
    return x


def _bias(bias):
    if not 0 <= bias <= 1:
        raise InvalidArgument("Bias must lie within [0, 1], got %r" % (bias,))
    return bias


def split_params(shape, params):
    """
    Return angles of shape (N, 3) and weights of shape (N, d)
    """
    layers = _params(shape, params).reshape(shape.layers, 3 + shape.data_dim)
    return layers[:, :3], layers[:, 3:]


def layer_angles(params, layer_index, x):
    x = np.asarray(x, dtype=float).ravel()
    params = np.asarray(params, dtype=float)
    width = 3 + len(x)
    if not 1 <= len(x) <= 3 or len(params) % width:
        raise InvalidArgument("%d parameters do not fit %d-dimensional data" % (len(params), len(x)))
    layers = len(params) // width
    if not 0 <= layer_index < layers:
        raise InvalidArgument("Layer index %r out of range for %d layers" % (layer_index, layers))
    row = params[layer_index * width:(layer_index + 1) * width]
    phi = row[:3].copy()
    phi[:len(x)] += row[3:] * x
    return tuple(float(j) for j in phi)


def data_angles(shape, params, features):
    """
    Rotation angles for every point and layer, shape (M, N, 3)
    """
    thetas, weights = split_params(shape, params)
    features = _features(shape, features)
    angles = np.repeat(thetas[None, :, :], len(features), axis=0)
    angles[:, :, :shape.data_dim] += weights[None, :, :] * features[:, None, :]
    return angles


def evolve_angles(angles):
    """
    Run the layers L(N)...L(1)|0> for a stack of per-point angles (M, N, 3)
    """
    states = np.repeat(qstate.ZERO[None, :], angles.shape[0], axis=0)
    for layer in range(angles.shape[1]):
        u = qstate.su2(angles[:, layer, 0], angles[:, layer, 1], angles[:, layer, 2])
        states = qstate.evolve(u, states)
    return states


def forward_batch(shape, params, features):
    return evolve_angles(data_angles(shape, params, features))


def forward(shape, params, x):
    return forward_batch(shape, params, np.asarray(x, dtype=float).reshape(1, -1))[0]


def p_zero(shape, params, features):
    return np.abs(forward_batch(shape, params, features)[:, 0]) ** 2


def predict(shape, params, features, bias=const.DEFAULT_BIAS):
    # Ties p_zero == bias go to class B
    return np.where(p_zero(shape, params, features) > _bias(bias), const.CLASS_A, const.CLASS_B)


def classify(shape, params, x, bias=const.DEFAULT_BIAS):
    p = float(p_zero(shape, params, np.asarray(x, dtype=float).reshape(1, -1))[0])
    return Decision(const.CLASS_A if p > _bias(bias) else const.CLASS_B, p, bias)


def accuracy(shape, params, bias, data):
    if not len(data):
        raise EmptyDataset("Accuracy of an empty dataset is undefined")
    correct = np.count_nonzero(predict(shape, params, data.features, bias) == data.labels)
    return correct / len(data)


def tune_bias(shape, params, train):
    """
    Smallest threshold among {0, p_zero(x_i), 1} maximizing training accuracy
    """
    if not len(train):
        raise EmptyDataset("Bias tuning needs at least one training point")
    p = p_zero(shape, params, train.features)
    candidates = np.unique(np.clip(np.concatenate(([0.0], p, [1.0])), 0.0, 1.0))
    hits = (p[None, :] > candidates[:, None]) == (train.labels == const.CLASS_A)[None, :]
    best = candidates[np.argmax(np.count_nonzero(hits, axis=1))]
    logger.debug("Tuned bias to %.6f", best)
    return float(best)


def label_states(labels):
    labels = np.asarray(labels)
    return np.where((labels == const.CLASS_A)[..., None], qstate.ZERO, qstate.ONE)


def mirror_params(shape, params):
    """
    Parameters whose every prediction is the complement of the original.

    A half turn added to the middle angle of the last layer swaps the final
    amplitudes up to phase, so p_zero becomes 1 - p_zero for every point.
    The angle is wrapped back into [-pi, pi].
    """
    mirrored = _params(shape, params).copy()
    j = (shape.layers - 1) * (3 + shape.data_dim) + 1
    mirrored[j] += -np.pi if mirrored[j] >= 0 else np.pi
    return mirrored


def initial_params(shape, seed):
    """
    Angles uniform in [-pi, pi], weights uniform in [-1, 1]
    """
    generator = rng(seed)
    angles = generator.uniform(-np.pi, np.pi, size=(shape.layers, 3))
    weights = generator.uniform(-1.0, 1.0, size=(shape.layers, shape.data_dim))
    return np.hstack((angles, weights)).ravel()
