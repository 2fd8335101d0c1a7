import logging
import numpy as np
from collections import deque
from time import perf_counter
from reuploader import const
from reuploader.optim import Tracker, BudgetExhausted, armijo, FTOL, XTOL, MAX_EVALS

logger = logging.getLogger(__name__)


def two_loop(grad, pairs):
    """
    Apply the inverse Hessian approximation held in (s, y, rho) pairs to grad,
    oldest pair first in the deque
    """
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        alpha = rho * np.dot(s, q)
        q -= alpha * y
        alphas.append(alpha)
    s, y, _ = pairs[-1]
    r = q * (np.dot(s, y) / np.dot(y, y))
    for (s, y, rho), alpha in zip(pairs, reversed(alphas)):
        beta = rho * np.dot(y, r)
        r += s * (alpha - beta)
    return r


def lbfgs(objective, gradient, x0, opts):
    """
    Limited memory BFGS without bounds
    """
    started = perf_counter()
    tracker = Tracker(objective, opts)
    x, f = tracker.start(x0)
    grad_func = tracker.gradient_from(gradient)
    pairs = deque(maxlen=opts.memory)
    reason, n_iter, message = MAX_EVALS, 0, ""

    try:
        g = grad_func(x)
        while True:
            if np.max(np.abs(g)) < opts.f_tol:
                reason = FTOL
                break
            n_iter += 1
            if pairs:
                direction = -two_loop(g, pairs)
            else:
                direction = -g / max(1.0, np.linalg.norm(g))
            if not np.dot(g, direction) < 0:
                pairs.clear()
                direction = -g / max(1.0, np.linalg.norm(g))

            accepted = armijo(tracker, x, f, g, direction)
            if accepted is None and pairs:
                # Memory led us astray, fall back to steepest descent once
                pairs.clear()
                direction = -g / max(1.0, np.linalg.norm(g))
                accepted = armijo(tracker, x, f, g, direction)
            if accepted is None:
                reason, message = XTOL, "line search failed"
                break

            step, x_new, f_new = accepted
            s = x_new - x
            if np.max(np.abs(s)) < opts.x_tol:
                reason = XTOL
                break
            g_new = grad_func(x_new)
            y = g_new - g
            curvature = np.dot(s, y)
            if curvature > const.CURVATURE_EPSILON:
                pairs.append((s, y, 1.0 / curvature))
            x, f, g = x_new, f_new, g_new
    except BudgetExhausted:
        logger.debug("L-BFGS ran out of %d evaluations", opts.max_evals)

    return tracker.report(const.LBFGS, reason, started, n_iter, message)
