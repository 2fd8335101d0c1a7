import logging
import numpy as np
from collections import namedtuple
from reuploader import const
from reuploader.optim import OptimizeOptions, minimize

logger = logging.getLogger(__name__)

BATTERY_MAX_EVALS = 20000
BATTERY_TOLERANCE = 1e-4

Problem = namedtuple("Problem", ("name", "func", "x0", "f_min", "x_min"))
BatteryResult = namedtuple("BatteryResult", (
    "problem", "method", "f_best", "n_evals", "reason", "deterministic", "passed"))


def sphere(x):
    x = np.asarray(x)
    return float(np.sum(x ** 2))


def rosenbrock(x):
    x = np.asarray(x)
    return float(np.sum(100 * (x[1:] - x[:-1] ** 2) ** 2 + (1 - x[:-1]) ** 2))


def beale(x):
    x, y = x
    return (1.5 - x + x * y) ** 2 + (2.25 - x + x * y ** 2) ** 2 + (2.625 - x + x * y ** 3) ** 2


PROBLEMS = (
    Problem("sphere-2", sphere, np.ones(2), 0.0, np.zeros(2)),
    Problem("sphere-5", sphere, np.ones(5), 0.0, np.zeros(5)),
    Problem("sphere-10", sphere, np.ones(10), 0.0, np.zeros(10)),
    Problem("rosenbrock", rosenbrock, np.array([-1.2, 1.0]), 0.0, np.ones(2)),
    Problem("beale", beale, np.array([1.0, 1.0]), 0.0, np.array([3.0, 0.5])),
)


def run_battery(methods=const.METHODS, problems=PROBLEMS, max_evals=BATTERY_MAX_EVALS,
        tolerance=BATTERY_TOLERANCE):
    """
    Run every method on every problem twice, a method passes when it gets
    within tolerance of the known optimum and both runs agree bit for bit
    """
    opts = OptimizeOptions(max_evals=max_evals)
    results = []
    for problem in problems:
        for method in methods:
            first = minimize(problem.func, problem.x0, method, opts)
            second = minimize(problem.func, problem.x0, method, opts)
            deterministic = first.same_outcome(second)
            passed = deterministic and first.f_best - problem.f_min < tolerance
            logger.info("%s on %s: f_best=%.3g after %d evaluations, %s",
                method, problem.name, first.f_best, first.n_evals,
                "passed" if passed else "FAILED")
            results.append(BatteryResult(problem.name, method, first.f_best,
                first.n_evals, first.reason, deterministic, passed))
    return results
