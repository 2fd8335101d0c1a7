import logging
import numpy as np
from time import perf_counter
from reuploader import const
from reuploader.optim import Tracker, BudgetExhausted, armijo, FTOL, XTOL, MAX_EVALS

logger = logging.getLogger(__name__)


def damped_update(hessian, s, y):
    """
    BFGS update with Powell's damping, keeps the approximation positive definite
    even when s'y is small or negative
    """
    bs = hessian @ s
    sbs = float(np.dot(s, bs))
    sy = float(np.dot(s, y))
    if sbs <= 0:
        return hessian
    if sy < const.POWELL_DAMPING * sbs:
        theta = (1 - const.POWELL_DAMPING) * sbs / (sbs - sy)
        r = theta * y + (1 - theta) * bs
    else:
        r = y
    return hessian - np.outer(bs, bs) / sbs + np.outer(r, r) / float(np.dot(s, r))


def solve_subproblem(hessian, g):
    """
    Minimize g'p + p'Bp/2 as the least squares problem ||L'p + L^-1 g||
    where B = LL'. Indefinite approximations are re-damped with a growing
    multiple of the identity until Cholesky succeeds
    """
    n = len(g)
    shift = 0.0
    scale = max(1.0, np.max(np.abs(np.diag(hessian))))
    while True:
        try:
            lower = np.linalg.cholesky(hessian + shift * np.eye(n))
            break
        except np.linalg.LinAlgError:
            shift = max(2 * shift, 1e-8 * scale)
    z = np.linalg.solve(lower, -g)
    return np.linalg.solve(lower.T, z), shift


def slsqp(objective, gradient, x0, opts):
    """
    Sequential quadratic programming without constraints: each iteration
    solves the quadratic model built from a damped BFGS Hessian and
    performs an Armijo line search along its minimizer
    """
    started = perf_counter()
    tracker = Tracker(objective, opts)
    x, f = tracker.start(x0)
    grad_func = tracker.gradient_from(gradient)
    n = len(x)
    hessian = np.eye(n)
    scaled = False
    reason, n_iter, message = MAX_EVALS, 0, ""

    try:
        g = grad_func(x)
        while True:
            if np.max(np.abs(g)) < opts.f_tol:
                reason = FTOL
                break
            n_iter += 1
            direction, shift = solve_subproblem(hessian, g)
            if shift:
                logger.debug("Re-damped Hessian approximation by %g", shift)
            if not np.dot(g, direction) < 0:
                hessian = np.eye(n)
                direction = -g

            accepted = armijo(tracker, x, f, g, direction)
            if accepted is None:
                if np.array_equal(hessian, np.eye(n)):
                    reason, message = XTOL, "line search failed"
                    break
                hessian = np.eye(n)
                continue

            step, x_new, f_new = accepted
            s = x_new - x
            if np.max(np.abs(s)) < opts.x_tol:
                reason = XTOL
                break
            g_new = grad_func(x_new)
            y = g_new - g
            if not scaled and np.dot(s, y) > const.CURVATURE_EPSILON:
                hessian = np.eye(n) * (np.dot(y, y) / np.dot(s, y))
                scaled = True
            hessian = damped_update(hessian, s, y)
            x, f, g = x_new, f_new, g_new
    except BudgetExhausted:
        logger.debug("SLSQP ran out of %d evaluations", opts.max_evals)

    return tracker.report(const.SLSQP, reason, started, n_iter, message)
