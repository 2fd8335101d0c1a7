import csv
import hashlib
import logging
import numpy as np
from collections import namedtuple
from reuploader import const
from reuploader.decorators import path_context
from reuploader.errors import InvalidArgument, EmptyDataset, ParseError, ValidationError

logger = logging.getLogger(__name__)

HEADER = ["x1", "x2", "label"]

LabeledPoint = namedtuple("LabeledPoint", ("x1", "x2", "label"))


def _scalar_or_array(labels):
    return labels if labels.ndim else int(labels)


def label_circle(x1, x2):
    """
    Class A strictly inside the circle of radius sqrt(2/pi), boundary goes to B
    """
    inside = np.asarray(x1) ** 2 + np.asarray(x2) ** 2 < const.CIRCLE_RADIUS_SQUARED
    return _scalar_or_array(np.where(inside, const.CLASS_A, const.CLASS_B))


def label_line(x1, x2):
    """
    Class A strictly above the line y = x, points on the line go to B
    """
    above = np.asarray(x2) > np.asarray(x1)
    return _scalar_or_array(np.where(above, const.CLASS_A, const.CLASS_B))


LABELERS = {
    const.CIRCLE: label_circle,
    const.LINE: label_line,
}


def labeler(pattern):
    try:
        return LABELERS[pattern]
    except KeyError:
        raise InvalidArgument("Unknown pattern %r, expected one of %s" % (pattern, ", ".join(const.PATTERNS)))


def derive_seed(*coordinates):
    """
    Stable 64-bit seed from a master seed and arbitrary cell coordinates
    """
    buf = ":".join([str(j) for j in coordinates]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(buf).digest()[:8], "big")


def rng(seed):
    # PCG64 gives the same stream on every platform for a given seed
    return np.random.Generator(np.random.PCG64(seed))


class Dataset(object):
    def __init__(self, features, labels, seed=None, pattern=None):
        features = np.array(features, dtype=float)
        labels = np.array(labels, dtype=int)
        if not len(labels):
            raise EmptyDataset("Dataset contains no points")
        if features.ndim != 2 or features.shape[0] != labels.shape[0]:
            raise InvalidArgument("Expected %d feature rows, got shape %s" % (len(labels), features.shape))
        if not np.all(np.isin(labels, (const.CLASS_A, const.CLASS_B))):
            raise ValidationError("Labels must be %d or %d" % (const.CLASS_A, const.CLASS_B))
        if not np.all(np.isfinite(features)) or np.any(np.abs(features) > 1):
            raise ValidationError("Coordinates must lie within [-1, 1]")
        features.setflags(write=False)
        labels.setflags(write=False)
        self.features = features
        self.labels = labels
        self.seed = seed
        self.pattern = pattern

    @property
    def data_dim(self):
        return self.features.shape[1]

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        for (x1, x2), label in zip(self.features, self.labels):
            yield LabeledPoint(float(x1), float(x2), int(label))

    def __add__(self, other):
        return Dataset(
            np.concatenate((self.features, other.features)),
            np.concatenate((self.labels, other.labels)),
            pattern=self.pattern if self.pattern == other.pattern else None)

    def __eq__(self, other):
        return isinstance(other, Dataset) and \
            np.array_equal(self.features, other.features) and \
            np.array_equal(self.labels, other.labels)

    def __ne__(self, other):
        return not self == other

    def class_fraction(self, label=const.CLASS_A):
        return np.count_nonzero(self.labels == label) / len(self)

    def relabel(self, pattern=None):
        """
        Labels recomputed from coordinates alone
        """
        func = labeler(pattern or self.pattern)
        return func(self.features[:, 0], self.features[:, 1])

    def __repr__(self):
        return "Dataset(pattern=%s, size=%d, seed=%s)" % (self.pattern, len(self), self.seed)


def generate(pattern, n, seed):
    func = labeler(pattern)
    if int(n) != n or n < 1:
        raise InvalidArgument("Dataset size must be a positive integer, got %r" % (n,))
    features = rng(seed).uniform(-1.0, 1.0, size=(int(n), 2))
    return Dataset(features, func(features[:, 0], features[:, 1]), seed=seed, pattern=pattern)


@path_context
def save_csv(dataset, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for x1, x2, label in dataset:
            writer.writerow(["%.17g" % x1, "%.17g" % x2, "%d" % label])
    logger.debug("Wrote %d points to %s", len(dataset), path)


@path_context
def load_csv(path, seed=None, pattern=None):
    features, labels = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if reader.line_num == 1:
                if row != HEADER:
                    raise ParseError(1, "expected header %s" % ",".join(HEADER))
                continue
            if len(row) != 3:
                raise ParseError(reader.line_num, "expected 3 columns, got %d" % len(row))
            try:
                x1, x2 = float(row[0]), float(row[1])
            except ValueError:
                raise ParseError(reader.line_num, "coordinates are not numbers: %s" % ",".join(row))
            if row[2] not in ("0", "1"):
                raise ParseError(reader.line_num, "label must be 0 or 1, got %r" % row[2])
            if not (-1 <= x1 <= 1 and -1 <= x2 <= 1):
                raise ValidationError("line %d: coordinate outside [-1, 1]" % reader.line_num)
            features.append((x1, x2))
            labels.append(int(row[2]))
    if not labels:
        raise EmptyDataset("No points in %s" % path)
    return Dataset(features, labels, seed=seed, pattern=pattern)
