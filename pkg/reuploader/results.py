import csv
import logging
from collections import OrderedDict
from reuploader import const
from reuploader.decorators import path_context
from reuploader.errors import InvalidArgument, ParseError
from reuploader.harness import AccuracyRecord, COORDINATES

logger = logging.getLogger(__name__)

FIELDS = ["cost", "pattern", "method", "mode", "layers", "train_size", "test_size", "reps",
    "mean_train_acc", "min_train_acc", "max_train_acc",
    "mean_test_acc", "min_test_acc", "max_test_acc",
    "mean_final_cost", "total_evals", "master_seed", "rep_seeds"]

INTEGERS = ("layers", "train_size", "test_size", "reps", "total_evals", "master_seed")
FLOATS = ("mean_train_acc", "min_train_acc", "max_train_acc",
    "mean_test_acc", "min_test_acc", "max_test_acc", "mean_final_cost")

PEAK_FIELDS = ["cost", "pattern", "method", "mode", "layers", "train_size", "mean_test_acc", "mean_train_acc"]


def _format(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


@path_context
def emit_csv(records, path):
    if not records:
        raise InvalidArgument("No records to write")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FIELDS)
        for record in records:
            row = record.row()
            writer.writerow([_format(row[j]) for j in FIELDS])
    logger.info("Wrote %d records to %s", len(records), path)


@path_context
def load_results(path):
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if reader.line_num == 1:
                if row != FIELDS:
                    raise ParseError(1, "unexpected header, expected %s" % ",".join(FIELDS))
                continue
            if len(row) != len(FIELDS):
                raise ParseError(reader.line_num, "expected %d columns, got %d" % (len(FIELDS), len(row)))
            values = dict(zip(FIELDS, row))
            try:
                for key in INTEGERS:
                    values[key] = int(values[key])
                for key in FLOATS:
                    values[key] = float(values[key])
                rep_seeds = [int(j) for j in values["rep_seeds"].split(";") if j]
            except ValueError as e:
                raise ParseError(reader.line_num, str(e))
            records.append(AccuracyRecord(
                [(key, values[key]) for key in COORDINATES],
                rep_seeds=rep_seeds,
                total_evals=values["total_evals"],
                summary=dict([(key, values[key]) for key in FLOATS])))
    return records


def peak_table(records):
    """
    Best mean test accuracy of every (cost, pattern, method, mode, layers)
    curve, ties resolved towards fewer training samples
    """
    best = OrderedDict()
    for record in sorted(records, key=lambda r: r.train_size):
        key = record.cost, record.pattern, record.method, record.mode, record.layers
        if key not in best or record.mean_test_acc > best[key].mean_test_acc:
            best[key] = record
    return [OrderedDict([
        ("cost", r.cost), ("pattern", r.pattern), ("method", r.method), ("mode", r.mode),
        ("layers", r.layers), ("train_size", r.train_size),
        ("mean_test_acc", r.mean_test_acc), ("mean_train_acc", r.mean_train_acc)])
        for key, r in sorted(best.items())]


def cost_gaps(peaks):
    """
    Fidelity minus trace distance peak test accuracy where both costs were run
    """
    by_key = dict(((p["cost"], p["pattern"], p["method"], p["mode"], p["layers"]), p) for p in peaks)
    gaps = []
    for (kind, pattern, method, mode, layers), peak in sorted(by_key.items()):
        other = by_key.get((const.TRACE, pattern, method, mode, layers))
        if kind == const.FIDELITY and other:
            gaps.append(OrderedDict([
                ("pattern", pattern), ("method", method), ("mode", mode), ("layers", layers),
                ("gap", peak["mean_test_acc"] - other["mean_test_acc"])]))
    return gaps


@path_context
def emit_peaks(peaks, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PEAK_FIELDS)
        for peak in peaks:
            writer.writerow([_format(peak[j]) for j in PEAK_FIELDS])
