import logging
import math
from collections import OrderedDict
from jinja2 import Environment, PackageLoader, select_autoescape
from reuploader import const
from reuploader.circuit import predict
from reuploader.decorators import path_context
from reuploader.errors import InvalidArgument

logger = logging.getLogger(__name__)

env = Environment(
    loader=PackageLoader("reuploader", "templates/plot"),
    autoescape=select_autoescape(["svg"]),
    trim_blocks=True, lstrip_blocks=True)

WIDTH, HEIGHT = 720, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 50, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
CURVE_KEYS = ("cost", "pattern", "method", "mode", "layers", "test_size", "reps")

MAP_SIZE = 440
MAP_MARGIN = 40
CLASS_COLORS = {const.CLASS_A: "#1f77b4", const.CLASS_B: "#ff7f0e"}


def _points(xs, ys):
    return " ".join(["%.2f,%.2f" % (x, y) for x, y in zip(xs, ys)])


def accuracy_chart(records):
    """
    Chart context for train (dashed) and test (solid) accuracy versus training
    size, one colour per curve
    """
    if not records:
        raise InvalidArgument("No records to plot")
    curves = OrderedDict()
    for record in sorted(records, key=lambda r: r.train_size):
        curves.setdefault(tuple(record.coordinates[j] for j in CURVE_KEYS), []).append(record)

    sizes = [r.train_size for r in records]
    lo, hi = min(sizes), max(sizes)
    if lo == hi:
        lo, hi = lo - 1, hi + 1
    plot_width = WIDTH - LEFT - RIGHT
    plot_height = HEIGHT - TOP - BOTTOM

    def sx(size):
        return LEFT + (size - lo) / (hi - lo) * plot_width

    def sy(acc):
        return TOP + (1 - acc) * plot_height

    common = [j for j, key in enumerate(CURVE_KEYS) if len(set(c[j] for c in curves)) == 1]
    first = next(iter(curves))
    title = " / ".join(["%s=%s" % (CURVE_KEYS[j], first[j]) for j in common])

    series = []
    for index, (key, members) in enumerate(curves.items()):
        xs = [sx(r.train_size) for r in members]
        band = None
        if any(r.max_test_acc > r.min_test_acc for r in members):
            band = _points(xs + xs[::-1],
                [sy(r.max_test_acc) for r in members] + [sy(r.min_test_acc) for r in members][::-1])
        series.append(dict(
            color=PALETTE[index % len(PALETTE)],
            label=", ".join(["%s=%s" % (CURVE_KEYS[j], key[j])
                for j in range(len(CURVE_KEYS)) if j not in common]) or "accuracy",
            train=_points(xs, [sy(r.mean_train_acc) for r in members]),
            test=_points(xs, [sy(r.mean_test_acc) for r in members]),
            markers=[(x, sy(r.mean_test_acc)) for x, r in zip(xs, members)],
            band=band))

    return dict(
        width=WIDTH, height=HEIGHT, left=LEFT, top=TOP,
        right=WIDTH - RIGHT, bottom=HEIGHT - BOTTOM,
        title=title, series=series,
        xticks=[(sx(s), s) for s in sorted(set(sizes))],
        yticks=[(sy(j / 4), "%.2f" % (j / 4)) for j in range(5)])


@path_context
def emit_svg(records, path):
    buf = env.get_template("accuracy.svg").render(accuracy_chart(records))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(buf)
    logger.info("Wrote accuracy chart to %s", path)


def decision_map(shape, params, bias, dataset, title=""):
    """
    Map context: every point coloured by predicted class, the true boundary
    drawn on top and misclassified points outlined
    """
    predicted = predict(shape, params, dataset.features, bias)
    scale = (MAP_SIZE - 2 * MAP_MARGIN) / 2

    def sx(x):
        return MAP_MARGIN + (x + 1) * scale

    def sy(y):
        return MAP_MARGIN + (1 - y) * scale

    points = [dict(x=sx(x1), y=sy(x2), color=CLASS_COLORS[int(p)], wrong=int(p) != int(label))
        for (x1, x2), p, label in zip(dataset.features, predicted, dataset.labels)]
    boundary = None
    if dataset.pattern == const.CIRCLE:
        boundary = dict(kind="circle", cx=sx(0), cy=sy(0), r=math.sqrt(const.CIRCLE_RADIUS_SQUARED) * scale)
    elif dataset.pattern == const.LINE:
        boundary = dict(kind="line", x1=sx(-1), y1=sy(-1), x2=sx(1), y2=sy(1))
    correct = sum([1 for j in points if not j["wrong"]])
    return dict(size=MAP_SIZE, margin=MAP_MARGIN, extent=MAP_SIZE - 2 * MAP_MARGIN,
        points=points, boundary=boundary,
        title="%s accuracy %.3f" % (title, correct / len(points)))


@path_context
def emit_map(shape, params, bias, dataset, title, path):
    buf = env.get_template("decision_map.svg").render(decision_map(shape, params, bias, dataset, title))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(buf)
    logger.info("Wrote decision map to %s", path)
