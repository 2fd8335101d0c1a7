import logging
import numpy as np
from reuploader import const, qstate
from reuploader.circuit import data_angles, evolve_angles, forward_batch, label_states
from reuploader.errors import InvalidArgument, EmptyDataset, UnsupportedOperation

logger = logging.getLogger(__name__)


def _kind(kind):
    if kind not in const.COSTS:
        raise InvalidArgument("Unknown cost %r, expected one of %s" % (kind, ", ".join(const.COSTS)))
    return kind


def _data(data):
    if not len(data):
        raise EmptyDataset("Cost of an empty dataset is undefined")
    return data


def per_point_terms(kind, shape, params, data):
    """
    Per-point contributions in dataset order: 1 - F for the fidelity cost,
    the trace distance to the label state for the trace cost
    """
    _kind(kind)
    states = forward_batch(shape, params, _data(data).features)
    targets = label_states(data.labels)
    if kind == const.FIDELITY:
        return 1 - qstate.fidelity(states, targets)
    return qstate.trace_distance(targets, states)


def fidelity_cost(shape, params, data):
    return float(np.sum(per_point_terms(const.FIDELITY, shape, params, data)))


def trace_cost(shape, params, data):
    # Unsquared distances
    return float(np.sum(per_point_terms(const.TRACE, shape, params, data)))


def evaluate(kind, shape, params, data):
    if _kind(kind) == const.FIDELITY:
        return fidelity_cost(shape, params, data)
    return trace_cost(shape, params, data)


def gradient_fd(kind, shape, params, data, h=const.FD_STEP):
    if not h > 0:
        raise InvalidArgument("Finite difference step must be positive, got %r" % (h,))
    _kind(kind)
    point = np.array(params, dtype=float)
    grad = np.empty_like(point)
    for i in range(len(point)):
        original = point[i]
        point[i] = original + h
        upper = evaluate(kind, shape, point, data)
        point[i] = original - h
        lower = evaluate(kind, shape, point, data)
        point[i] = original
        grad[i] = (upper - lower) / (2 * h)
    return grad


def gradient_shift(shape, params, data, kind=const.FIDELITY):
    """
    Exact gradient of the fidelity cost by the parameter-shift rule.

    Every angle phi enters a single half-angle rotation, hence
    dF/dphi = [F(phi + pi/2) - F(phi - pi/2)] / 2 per data point. Weights
    pick up the data component through the chain rule.
    """
    if kind != const.FIDELITY:
        raise UnsupportedOperation("Parameter-shift gradient is available for the fidelity cost only")
    angles = data_angles(shape, params, _data(data).features)
    targets = label_states(data.labels)
    width = 3 + shape.data_dim
    grad = np.zeros(shape.param_count)
    for layer in range(shape.layers):
        for k in range(3):
            shifted = angles.copy()
            shifted[:, layer, k] += np.pi / 2
            upper = qstate.fidelity(evolve_angles(shifted), targets)
            shifted[:, layer, k] -= np.pi
            lower = qstate.fidelity(evolve_angles(shifted), targets)
            dterm = -(upper - lower) / 2
            grad[layer * width + k] = np.sum(dterm)
            if k < shape.data_dim:
                grad[layer * width + 3 + k] = np.sum(dterm * data.features[:, k])
    return grad


def objective(kind, shape, data):
    _kind(kind)
    _data(data)

    def wrapped(params):
        if not np.all(np.isfinite(params)):
            return np.nan
        return evaluate(kind, shape, params, data)
    return wrapped


def gradient(kind, shape, data, method="fd", h=const.FD_STEP):
    _kind(kind)
    if method == "fd":
        return lambda params: gradient_fd(kind, shape, params, data, h)
    if method == "shift":
        if kind != const.FIDELITY:
            raise UnsupportedOperation("Parameter-shift gradient is available for the fidelity cost only")
        return lambda params: gradient_shift(shape, params, data)
    raise InvalidArgument("Unknown gradient method %r, expected one of %s" % (method, ", ".join(const.GRADIENTS)))
