import json
import logging
import numpy as np
from collections import namedtuple, OrderedDict
from datetime import datetime
from functools import partial
from multiprocessing import Pool
from time import perf_counter
from setproctitle import setproctitle
from reuploader import const, cost, data
from reuploader.circuit import CircuitShape, initial_params, mirror_params, tune_bias, accuracy
from reuploader.decorators import MyEncoder
from reuploader.errors import InvalidArgument
from reuploader.optim import OptimizeOptions, OptimizerReport, minimize
from reuploader.relational import RelationalMixin

logger = logging.getLogger(__name__)

RepetitionResult = namedtuple("RepetitionResult", (
    "rep", "train_acc", "test_acc", "bias", "final_cost", "rep_seed", "params", "report"))

COORDINATES = ("cost", "pattern", "method", "mode", "layers", "train_size",
    "test_size", "reps", "master_seed")


def _choice(name, value, choices):
    if value not in choices:
        raise InvalidArgument("Invalid %s %r, expected one of %s" % (name, value, ", ".join(choices)))
    return value


def _count(name, value, minimum=1):
    if int(value) != value or value < minimum:
        raise InvalidArgument("%s must be an integer >= %d, got %r" % (name, minimum, value))
    return int(value)


class ExperimentCell(object):
    """
    One point of the experiment grid: which cost, pattern, optimizer and
    dataset mode, how many layers and how much data
    """
    def __init__(self, cost, pattern, method, mode, layers=const.DEFAULT_LAYERS,
            train_size=1, test_size=const.DEFAULT_TEST_SIZE, repetitions=None,
            master_seed=const.DEFAULT_MASTER_SEED, tune_bias=False, gradient="fd",
            pinned_seeds=False, max_evals=const.MAX_EVALS):
        self.cost = _choice("cost", cost, const.COSTS)
        self.pattern = _choice("pattern", pattern, const.PATTERNS)
        self.method = _choice("method", method, const.METHODS)
        self.mode = _choice("mode", mode, const.MODES)
        self.gradient = _choice("gradient", gradient, const.GRADIENTS)
        if self.gradient == "shift" and self.cost != const.FIDELITY:
            raise InvalidArgument("Parameter-shift gradient requires the fidelity cost")
        self.layers = _count("layers", layers)
        self.train_size = _count("train_size", train_size)
        self.test_size = _count("test_size", test_size)
        if repetitions is None:
            repetitions = const.RANDOM_REPETITIONS if mode == const.RANDOM else 1
        self.repetitions = _count("repetitions", repetitions)
        self.master_seed = _count("master_seed", master_seed, 0)
        self.tune_bias = bool(tune_bias)
        self.pinned_seeds = bool(pinned_seeds)
        self.max_evals = _count("max_evals", max_evals)

    def replace(self, **changes):
        fields = dict(
            cost=self.cost, pattern=self.pattern, method=self.method, mode=self.mode,
            layers=self.layers, train_size=self.train_size, test_size=self.test_size,
            repetitions=self.repetitions, master_seed=self.master_seed,
            tune_bias=self.tune_bias, gradient=self.gradient,
            pinned_seeds=self.pinned_seeds, max_evals=self.max_evals)
        fields.update(changes)
        return ExperimentCell(**fields)

    @property
    def shape(self):
        return CircuitShape(self.layers, 2)

    def coordinates(self):
        return OrderedDict([
            ("cost", self.cost), ("pattern", self.pattern), ("method", self.method),
            ("mode", self.mode), ("layers", self.layers), ("train_size", self.train_size),
            ("test_size", self.test_size), ("reps", self.repetitions),
            ("master_seed", self.master_seed)])

    def key(self):
        return "|".join([str(j) for j in self.coordinates().values()] + [
            "bias=%s" % ("tuned" if self.tune_bias else const.DEFAULT_BIAS),
            "gradient=%s" % self.gradient, "pinned=%d" % self.pinned_seeds,
            "max_evals=%d" % self.max_evals])

    def rep_seed(self, rep_index):
        """
        Fixed mode and pinned cells reuse the stream of repetition 0
        """
        stream = 0 if self.mode == const.FIXED or self.pinned_seeds else rep_index
        return data.derive_seed(self.master_seed, self.pattern, self.mode, stream)

    def seeds(self, rep_seed):
        """
        Data and initialization seeds derived from one repetition seed; the
        test stream does not depend on the training size
        """
        return dict(
            train=data.derive_seed(rep_seed, "train", self.train_size),
            test=data.derive_seed(rep_seed, "test", self.test_size),
            init=data.derive_seed(rep_seed, "init", self.layers, self.train_size))

    def __repr__(self):
        return "%s/%s/%s/%s N=%d train=%d" % (self.cost, self.pattern, self.method,
            self.mode, self.layers, self.train_size)


class AccuracyRecord(object):
    def __init__(self, coordinates, train_accs=(), test_accs=(), final_costs=(),
            rep_seeds=(), biases=(), total_evals=0, wall_time=0.0, messages=(), summary=None):
        self.coordinates = OrderedDict(coordinates)
        self.train_accs = list(train_accs)
        self.test_accs = list(test_accs)
        self.final_costs = list(final_costs)
        self.rep_seeds = list(rep_seeds)
        self.biases = list(biases)
        self.total_evals = total_evals
        self.wall_time = wall_time
        self.messages = list(messages)
        if summary is None:
            summary = dict(
                mean_train_acc=float(np.mean(self.train_accs)),
                min_train_acc=float(min(self.train_accs)),
                max_train_acc=float(max(self.train_accs)),
                mean_test_acc=float(np.mean(self.test_accs)),
                min_test_acc=float(min(self.test_accs)),
                max_test_acc=float(max(self.test_accs)),
                mean_final_cost=float(np.mean(self.final_costs)))
        self.summary = summary

    def __getattr__(self, name):
        summary = self.__dict__.get("summary") or {}
        coordinates = self.__dict__.get("coordinates") or {}
        if name in summary:
            return summary[name]
        if name in coordinates:
            return coordinates[name]
        raise AttributeError(name)

    def row(self):
        row = OrderedDict([(key, self.coordinates[key]) for key in COORDINATES[:-1]])
        for key in ("mean_train_acc", "min_train_acc", "max_train_acc",
                "mean_test_acc", "min_test_acc", "max_test_acc", "mean_final_cost"):
            row[key] = self.summary[key]
        row["total_evals"] = self.total_evals
        row["master_seed"] = self.coordinates["master_seed"]
        row["rep_seeds"] = ";".join([str(j) for j in self.rep_seeds])
        return row

    def __eq__(self, other):
        """
        Rows match field by field, NaN summaries of failed repetitions included
        """
        if not isinstance(other, AccuracyRecord):
            return False
        mine, theirs = self.row(), other.row()
        if list(mine) != list(theirs):
            return False
        for key, value in mine.items():
            if isinstance(value, float) and isinstance(theirs[key], float):
                if not (value == theirs[key] or np.isnan(value) and np.isnan(theirs[key])):
                    return False
            elif value != theirs[key]:
                return False
        return True

    def __ne__(self, other):
        return not self == other

    def serialize(self):
        return dict(
            coordinates=self.coordinates, train_accs=self.train_accs,
            test_accs=self.test_accs, final_costs=self.final_costs,
            rep_seeds=self.rep_seeds, biases=self.biases,
            total_evals=self.total_evals, wall_time=self.wall_time,
            messages=self.messages, summary=self.summary)

    @classmethod
    def deserialize(cls, obj):
        return cls(**obj)

    def __repr__(self):
        return "%s/%s/%s/%s N=%d train=%d: train %.3f test %.3f over %d repetitions" % (
            self.cost, self.pattern, self.method, self.mode, self.layers,
            self.train_size, self.mean_train_acc, self.mean_test_acc, self.reps)


class Checkpoint(RelationalMixin):
    """
    Completed cells of a sweep, keyed by every setting that affects the result
    """
    SQL_CREATE_TABLES = "checkpoint_tables.sql"

    def store(self, cell, record):
        self.sql_execute("checkpoint_insert.sql", cell.key(), datetime.utcnow(),
            json.dumps(record.serialize(), cls=MyEncoder))

    def load(self, cell):
        buf, = self.get("select record from record where cell_key = ?", cell.key())
        return AccuracyRecord.deserialize(json.loads(buf))

    def keys(self):
        return [j["cell_key"] for j in self.iterfetch("select cell_key from record order by created")]


def run_repetition(cell, rep_index, rep_seed=None, seeds=None):
    """
    Generate data, train from the seeded initialization and score the result
    """
    if rep_seed is None:
        rep_seed = cell.rep_seed(rep_index)
    seeds = seeds or cell.seeds(rep_seed)
    shape = cell.shape
    train = data.generate(cell.pattern, cell.train_size, seeds["train"])
    test = data.generate(cell.pattern, cell.test_size, seeds["test"])
    x0 = initial_params(shape, seeds["init"])
    opts = OptimizeOptions(max_evals=cell.max_evals)

    try:
        gradient = None
        if cell.method in const.GRADIENT_METHODS:
            gradient = cost.gradient(cell.cost, shape, train, cell.gradient)
        report = minimize(cost.objective(cell.cost, shape, train), x0, cell.method, opts, gradient)
        params = report.x_best
    except Exception as e:
        logger.exception("Optimizer failed on %s repetition %d", cell, rep_index)
        report = OptimizerReport(cell.method, x0, float("nan"), 0, "failed", 0.0,
            options=opts.serialize(), message=str(e))
        params = x0

    bias = tune_bias(shape, params, train) if cell.tune_bias else const.DEFAULT_BIAS
    result = RepetitionResult(rep_index,
        accuracy(shape, params, bias, train),
        accuracy(shape, params, bias, test),
        bias, report.f_best, rep_seed, params, report)
    logger.debug("%s repetition %d: train %.3f test %.3f after %d evaluations",
        cell, rep_index, result.train_acc, result.test_acc, report.n_evals)
    return result


def chance_floor(cell, draws=const.RANDOM_REPETITIONS):
    """
    Mean test accuracy of untrained classifiers at the default bias.

    Draw k scores the initialization of repetition k on that repetition's
    test set together with its mirrored parameters, the initialization
    distribution being symmetric under the mirror.
    """
    draws = _count("draws", draws)
    stream = cell.replace(mode=const.RANDOM, pinned_seeds=False)
    shape = cell.shape
    scores = []
    for rep_index in range(draws):
        seeds = stream.seeds(stream.rep_seed(rep_index))
        test = data.generate(cell.pattern, cell.test_size, seeds["test"])
        params = initial_params(shape, seeds["init"])
        plain = accuracy(shape, params, const.DEFAULT_BIAS, test)
        mirrored = accuracy(shape, mirror_params(shape, params), const.DEFAULT_BIAS, test)
        logger.debug("%s draw %d: untrained accuracy %.4f, mirrored %.4f",
            cell, rep_index, plain, mirrored)
        scores.append((plain + mirrored) / 2)
    return float(np.mean(scores))


def _worker_init(title):
    setproctitle("reuploader: worker %s" % title)


def _repetition_job(cell, rep_index):
    return run_repetition(cell, rep_index)


def run_cell(cell, workers=1):
    started = perf_counter()
    reps = range(cell.repetitions)
    if workers > 1 and cell.repetitions > 1:
        with Pool(min(workers, cell.repetitions), initializer=_worker_init, initargs=(repr(cell),)) as pool:
            results = pool.map(partial(_repetition_job, cell), reps)
    else:
        results = [run_repetition(cell, j) for j in reps]

    record = AccuracyRecord(cell.coordinates(),
        train_accs=[j.train_acc for j in results],
        test_accs=[j.test_acc for j in results],
        final_costs=[j.final_cost for j in results],
        rep_seeds=[j.rep_seed for j in results],
        biases=[j.bias for j in results],
        total_evals=sum([j.report.n_evals for j in results]),
        wall_time=perf_counter() - started,
        messages=[j.report.message for j in results if j.report.message])
    logger.info("%s", record)
    return record


def run_sweep(template, sizes, checkpoint=None, workers=1, callback=None):
    """
    One record per training size in increasing order, completed cells found
    in the checkpoint are not run again
    """
    sizes = sorted(set(sizes))
    if not sizes:
        raise InvalidArgument("Training size list is empty")
    records = []
    for size in sizes:
        cell = template.replace(train_size=size)
        record = None
        if checkpoint:
            try:
                record = checkpoint.load(cell)
                logger.info("Skipping %s, found in checkpoint", cell)
            except Checkpoint.DoesNotExist:
                pass
        if record is None:
            record = run_cell(cell, workers)
            if checkpoint:
                checkpoint.store(cell, record)
        records.append(record)
        if callback:
            callback(records)
    return records


def preset(name, master_seed=const.DEFAULT_MASTER_SEED, test_size=const.DEFAULT_TEST_SIZE, **overrides):
    """
    Return (template cell, training sizes) pairs of a named experiment
    """
    def cell(cost, pattern, method, mode, layers=const.DEFAULT_LAYERS):
        sizes = const.FIXED_TRAIN_SIZES if mode == const.FIXED else const.RANDOM_TRAIN_SIZES
        return ExperimentCell(cost, pattern, method, mode, layers, sizes[0], test_size,
            master_seed=master_seed, **overrides), sizes

    if name == "fig4":
        return [cell(c, p, m, mode)
            for c in const.COSTS
            for p in const.PATTERNS
            for m in const.METHODS
            for mode in const.MODES]
    if name == "figA1":
        return [cell(const.FIDELITY, const.CIRCLE, const.LBFGS, const.FIXED)]
    if name == "figA2":
        return [cell(const.FIDELITY, const.CIRCLE, const.LBFGS, const.RANDOM, layers)
            for layers in range(1, 6)]
    raise InvalidArgument("Unknown preset %r, expected one of fig4, figA1, figA2" % (name,))
