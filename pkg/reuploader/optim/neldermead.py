import logging
import numpy as np
from time import perf_counter
from reuploader import const
from reuploader.optim import Tracker, BudgetExhausted, FTOL, MAX_EVALS

logger = logging.getLogger(__name__)


def coefficients(n):
    """
    Dimension adaptive reflection, expansion, contraction and shrink
    coefficients. A single variable keeps the classic (1, 2, 1/2, 1/2)
    as the adaptive shrink would collapse the simplex
    """
    if n < 2:
        return 1.0, 2.0, 0.5, 0.5
    return 1.0, 1 + 2 / n, 0.75 - 1 / (2 * n), 1 - 1 / n


def nelder_mead(objective, x0, opts):
    started = perf_counter()
    tracker = Tracker(objective, opts)
    x0, f0 = tracker.start(x0)
    n = len(x0)
    alpha, beta, gamma, delta = coefficients(n)

    simplex = np.empty((n + 1, n))
    values = np.empty(n + 1)
    simplex[0], values[0] = x0, f0
    reason, n_iter = MAX_EVALS, 0

    try:
        for i in range(n):
            vertex = x0.copy()
            vertex[i] += const.SIMPLEX_OFFSET * max(abs(x0[i]), 1.0)
            simplex[i + 1], values[i + 1] = vertex, tracker(vertex)

        while True:
            order = np.argsort(values, kind="stable")
            simplex, values = simplex[order], values[order]
            spread = np.max(np.abs(values[1:] - values[0]))
            diameter = np.max(np.abs(simplex[1:] - simplex[0]))
            if spread < opts.f_tol and diameter < opts.x_tol:
                reason = FTOL
                break
            n_iter += 1

            centroid = np.mean(simplex[:-1], axis=0)
            worst = simplex[-1]
            reflected = centroid + alpha * (centroid - worst)
            f_reflected = tracker(reflected)

            if f_reflected < values[0]:
                expanded = centroid + beta * (reflected - centroid)
                f_expanded = tracker(expanded)
                if f_expanded < f_reflected:
                    simplex[-1], values[-1] = expanded, f_expanded
                else:
                    simplex[-1], values[-1] = reflected, f_reflected
                continue

            if f_reflected < values[-2]:
                simplex[-1], values[-1] = reflected, f_reflected
                continue

            if f_reflected < values[-1]:
                contracted = centroid + gamma * (reflected - centroid)
                f_contracted = tracker(contracted)
                accepted = f_contracted <= f_reflected
            else:
                contracted = centroid + gamma * (worst - centroid)
                f_contracted = tracker(contracted)
                accepted = f_contracted < values[-1]

            if accepted:
                simplex[-1], values[-1] = contracted, f_contracted
                continue

            for j in range(1, n + 1):
                simplex[j] = simplex[0] + delta * (simplex[j] - simplex[0])
                values[j] = tracker(simplex[j])
    except BudgetExhausted:
        logger.debug("Nelder-Mead ran out of %d evaluations", opts.max_evals)

    return tracker.report(const.NELDER_MEAD, reason, started, n_iter)
