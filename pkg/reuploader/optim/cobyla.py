"""
Derivative-free minimization by linear approximation, unconstrained case.

The method keeps n + 1 interpolation points, fits the linear model through
them and steps to the minimizer of that model on the trust region of radius
rho around the best point. Poorly shaped simplices are repaired before the
model is trusted and rho only shrinks once a trial step fails on a well
shaped simplex.
"""

import logging
import numpy as np
from time import perf_counter
from reuploader import const
from reuploader.optim import Tracker, BudgetExhausted, XTOL, MAX_EVALS

logger = logging.getLogger(__name__)

# Acceptable simplex: every vertex within BETA * rho of the best point and
# at least ALPHA * rho away from the opposite face
ALPHA = 0.25
BETA = 2.1
GEOMETRY_STEP = 0.5
SUFFICIENT_RATIO = 0.1


def _rebuild(tracker, points, values, rho):
    pivot = points[0]
    for i in range(len(pivot)):
        vertex = pivot.copy()
        vertex[i] += rho
        points[i + 1], values[i + 1] = vertex, tracker(vertex)


def cobyla(objective, x0, opts):
    started = perf_counter()
    tracker = Tracker(objective, opts)
    x0, f0 = tracker.start(x0)
    n = len(x0)
    rho = opts.rho_begin

    points = np.empty((n + 1, n))
    values = np.empty(n + 1)
    points[0], values[0] = x0, f0
    reason, n_iter = MAX_EVALS, 0

    try:
        _rebuild(tracker, points, values, rho)
        while True:
            best = int(np.argmin(values))
            if best:
                points[[0, best]] = points[[best, 0]]
                values[[0, best]] = values[[best, 0]]
            pivot, f_pivot = points[0].copy(), values[0]
            edges = points[1:] - pivot
            try:
                inverse = np.linalg.inv(edges)
            except np.linalg.LinAlgError:
                logger.debug("Degenerate simplex, rebuilding around the best point")
                _rebuild(tracker, points, values, rho)
                continue

            slopes = inverse @ (values[1:] - f_pivot)
            if not np.all(np.isfinite(slopes)):
                # A vertex sits where the objective is undefined, pull it halfway in
                j = int(np.argmax(values[1:]))
                vertex = pivot + GEOMETRY_STEP * (points[j + 1] - pivot)
                points[j + 1], values[j + 1] = vertex, tracker(vertex)
                n_iter += 1
                continue

            lengths = np.linalg.norm(edges, axis=1)
            heights = 1 / np.linalg.norm(inverse, axis=0)
            if np.any(lengths > BETA * rho) or np.any(heights < ALPHA * rho):
                if np.any(lengths > BETA * rho):
                    j = int(np.argmax(lengths))
                else:
                    j = int(np.argmin(heights))
                normal = inverse[:, j] / np.linalg.norm(inverse[:, j])
                if np.dot(slopes, normal) > 0:
                    normal = -normal
                vertex = pivot + GEOMETRY_STEP * rho * normal
                points[j + 1], values[j + 1] = vertex, tracker(vertex)
                n_iter += 1
                continue

            slope = np.linalg.norm(slopes)
            if slope > 0:
                n_iter += 1
                step = -rho * slopes / slope
                trial = pivot + step
                f_trial = tracker(trial)
                ratio = (f_pivot - f_trial) / (rho * slope)
                # The trial replaces the vertex whose removal keeps the
                # simplex fattest, far vertices are preferred
                weights = np.abs(inverse.T @ step) * np.maximum(1.0, lengths / rho) ** 2
                j = int(np.argmax(weights))
                points[j + 1], values[j + 1] = trial, f_trial
                if ratio >= SUFFICIENT_RATIO:
                    continue

            if rho <= opts.rho_end:
                reason = XTOL
                break
            rho = rho / 2
            if rho <= 1.5 * opts.rho_end:
                rho = opts.rho_end
            logger.debug("Trust radius reduced to %g", rho)
    except BudgetExhausted:
        logger.debug("COBYLA ran out of %d evaluations", opts.max_evals)

    return tracker.report(const.COBYLA, reason, started, n_iter)
