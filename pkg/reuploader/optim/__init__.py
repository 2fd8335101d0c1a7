import logging
import numpy as np
from time import perf_counter
from reuploader import const
from reuploader.errors import InvalidArgument, InvalidStart

logger = logging.getLogger(__name__)

FTOL = "ftol"
XTOL = "xtol"
MAX_EVALS = "maxevals"


class OptimizeOptions(object):
    def __init__(self, max_evals=const.MAX_EVALS, f_tol=const.F_TOL, x_tol=const.X_TOL,
            memory=const.LBFGS_MEMORY, rho_begin=const.RHO_BEGIN, rho_end=const.RHO_END,
            fd_step=const.FD_STEP):
        if int(max_evals) != max_evals or max_evals < 1:
            raise InvalidArgument("max_evals must be a positive integer, got %r" % (max_evals,))
        for name, value in (("f_tol", f_tol), ("x_tol", x_tol), ("rho_begin", rho_begin),
                ("rho_end", rho_end), ("fd_step", fd_step)):
            if not value > 0:
                raise InvalidArgument("%s must be positive, got %r" % (name, value))
        if rho_end > rho_begin:
            raise InvalidArgument("rho_end must not exceed rho_begin")
        if int(memory) != memory or memory < 1:
            raise InvalidArgument("L-BFGS memory must be a positive integer, got %r" % (memory,))
        self.max_evals = int(max_evals)
        self.f_tol = f_tol
        self.x_tol = x_tol
        self.memory = int(memory)
        self.rho_begin = rho_begin
        self.rho_end = rho_end
        self.fd_step = fd_step

    def serialize(self):
        return dict(
            max_evals=self.max_evals, f_tol=self.f_tol, x_tol=self.x_tol,
            memory=self.memory, rho_begin=self.rho_begin, rho_end=self.rho_end,
            fd_step=self.fd_step, armijo_c1=const.ARMIJO_C1,
            max_backtracks=const.MAX_BACKTRACKS, simplex_offset=const.SIMPLEX_OFFSET,
            powell_damping=const.POWELL_DAMPING)


class OptimizerReport(object):
    def __init__(self, method, x_best, f_best, n_evals, reason, wall_time,
            n_iter=0, n_grad_evals=0, nan_count=0, options=None, message=""):
        self.method = method
        self.x_best = x_best
        self.f_best = f_best
        self.n_evals = n_evals
        self.reason = reason
        self.wall_time = wall_time
        self.n_iter = n_iter
        self.n_grad_evals = n_grad_evals
        self.nan_count = nan_count
        self.options = options or {}
        self.message = message

    @property
    def converged(self):
        return self.reason in (FTOL, XTOL)

    def same_outcome(self, other):
        """
        Everything but the wall time matches bit for bit
        """
        return self.method == other.method and \
            np.array_equal(self.x_best, other.x_best) and \
            self.f_best == other.f_best and \
            self.n_evals == other.n_evals and \
            self.reason == other.reason and \
            self.n_iter == other.n_iter and \
            self.n_grad_evals == other.n_grad_evals

    def __repr__(self):
        return "%s (f_best=%.6g, n_evals=%d, reason=%s, nan_count=%d)" % (
            self.method, self.f_best, self.n_evals, self.reason, self.nan_count)


class BudgetExhausted(Exception):
    pass


class Tracker(object):
    """
    Wraps the objective: counts evaluations, enforces the budget, turns
    NaN and infinities into +inf and remembers the incumbent
    """
    def __init__(self, objective, opts):
        self.objective = objective
        self.opts = opts
        self.n_evals = 0
        self.n_grad_evals = 0
        self.nan_count = 0
        self.x_best = None
        self.f_best = np.inf

    def __call__(self, x):
        if self.n_evals >= self.opts.max_evals:
            raise BudgetExhausted()
        value = float(self.objective(x))
        self.n_evals += 1
        if not np.isfinite(value):
            self.nan_count += 1
            return np.inf
        if value < self.f_best:
            self.f_best = value
            self.x_best = np.array(x, dtype=float)
        return value

    def start(self, x0):
        x0 = np.array(x0, dtype=float).ravel()
        if not len(x0) or not np.all(np.isfinite(x0)):
            raise InvalidStart("Starting point must be a non-empty finite vector")
        f0 = self(x0)
        if not np.isfinite(f0):
            raise InvalidStart("Objective is not finite at the starting point")
        return x0, f0

    def gradient_from(self, gradient):
        """
        Use the supplied gradient, otherwise central differences through the tracker
        """
        if gradient is not None:
            def counted(x):
                self.n_grad_evals += 1
                return np.asarray(gradient(x), dtype=float)
            return counted

        def central(x):
            h = self.opts.fd_step
            point = np.array(x, dtype=float)
            grad = np.empty_like(point)
            for i in range(len(point)):
                original = point[i]
                point[i] = original + h
                upper = self(point)
                point[i] = original - h
                lower = self(point)
                point[i] = original
                grad[i] = (upper - lower) / (2 * h)
            self.n_grad_evals += 1
            return grad
        return central

    def report(self, method, reason, started, n_iter=0, message=""):
        return OptimizerReport(
            method, self.x_best, self.f_best, self.n_evals, reason,
            perf_counter() - started, n_iter=n_iter,
            n_grad_evals=self.n_grad_evals, nan_count=self.nan_count,
            options=self.opts.serialize(), message=message)


def armijo(func, x, f, grad, direction):
    """
    Backtracking line search halving the step until the sufficient decrease
    condition holds. Returns (step, x_new, f_new) or None
    """
    slope = float(np.dot(grad, direction))
    step = 1.0
    for _ in range(const.MAX_BACKTRACKS):
        candidate = x + step * direction
        value = func(candidate)
        if np.isfinite(value) and value <= f + const.ARMIJO_C1 * step * slope:
            return step, candidate, value
        step /= 2
    return None


def minimize(objective, x0, method, opts=None, gradient=None):
    """
    Minimize objective from x0 with one of lbfgs, cobyla, neldermead, slsqp
    """
    opts = opts or OptimizeOptions()
    if method == const.NELDER_MEAD:
        from reuploader.optim.neldermead import nelder_mead
        return nelder_mead(objective, x0, opts)
    elif method == const.COBYLA:
        from reuploader.optim.cobyla import cobyla
        return cobyla(objective, x0, opts)
    elif method == const.LBFGS:
        from reuploader.optim.lbfgs import lbfgs
        return lbfgs(objective, gradient, x0, opts)
    elif method == const.SLSQP:
        from reuploader.optim.slsqp import slsqp
        return slsqp(objective, gradient, x0, opts)
    raise InvalidArgument("Unknown method %r, expected one of %s" % (method, ", ".join(const.METHODS)))
