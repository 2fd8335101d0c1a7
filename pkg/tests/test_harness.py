import os
import numpy as np
import pytest
import sqlite3
from reuploader import const, data, harness
from reuploader.circuit import accuracy, initial_params, mirror_params, evolve_angles
from reuploader.errors import InvalidArgument
from reuploader.harness import (AccuracyRecord, Checkpoint, ExperimentCell, preset,
    run_cell, run_repetition, run_sweep)
from reuploader.results import FIELDS, emit_csv

WORKERS = os.cpu_count() or 1


def small(**changes):
    fields = dict(cost=const.FIDELITY, pattern=const.CIRCLE, method=const.LBFGS,
        mode=const.RANDOM, layers=2, train_size=5, test_size=50, repetitions=3, max_evals=300)
    fields.update(changes)
    return ExperimentCell(**fields)


def test_cell_defaults():
    cell = ExperimentCell(const.FIDELITY, const.LINE, const.COBYLA, const.RANDOM)
    assert cell.repetitions == 20
    assert cell.test_size == 4000
    assert cell.master_seed == 42
    assert ExperimentCell(const.TRACE, const.LINE, const.COBYLA, const.FIXED).repetitions == 1
    assert small(repetitions=5).repetitions == 5


def test_cell_validation():
    with pytest.raises(InvalidArgument):
        small(cost="hinge")
    with pytest.raises(InvalidArgument):
        small(method="adam")
    with pytest.raises(InvalidArgument):
        small(train_size=0)
    with pytest.raises(InvalidArgument):
        small(layers=1.5)
    with pytest.raises(InvalidArgument):
        small(cost=const.TRACE, gradient="shift")


def test_seeds():
    cell = small()
    assert cell.rep_seed(0) != cell.rep_seed(1)
    fixed = small(mode=const.FIXED, repetitions=2)
    assert fixed.rep_seed(0) == fixed.rep_seed(1)
    pinned = small(pinned_seeds=True)
    assert pinned.rep_seed(0) == pinned.rep_seed(5)

    seeds = cell.seeds(cell.rep_seed(0))
    other = cell.replace(train_size=40).seeds(cell.rep_seed(0))
    assert seeds["test"] == other["test"]
    assert seeds["train"] != other["train"]
    assert len(set(seeds.values())) == 3


def test_cell_key_tracks_settings():
    cell = small()
    assert cell.key() == small().key()
    assert cell.key() != small(tune_bias=True).key()
    assert cell.key() != small(train_size=6).key()
    assert cell.key() != small(max_evals=301).key()


@pytest.mark.parametrize("pattern", const.PATTERNS)
def test_chance_floor(pattern):
    cell = ExperimentCell(const.FIDELITY, pattern, const.LBFGS, const.RANDOM)
    assert cell.test_size == 4000 and cell.layers == 5
    assert harness.chance_floor(cell, 20) == pytest.approx(0.5, abs=0.03)

    # Each draw pairs an initialization with its complement on the same test set
    seeds = cell.seeds(cell.rep_seed(3))
    test = data.generate(pattern, cell.test_size, seeds["test"])
    params = initial_params(cell.shape, seeds["init"])
    plain = accuracy(cell.shape, params, const.DEFAULT_BIAS, test)
    mirrored = accuracy(cell.shape, mirror_params(cell.shape, params), const.DEFAULT_BIAS, test)
    assert plain + mirrored == pytest.approx(1.0, abs=1e-12)


def test_chance_floor_ignores_pinning():
    fixed = ExperimentCell(const.FIDELITY, const.CIRCLE, const.LBFGS, const.FIXED, 2, test_size=500)
    assert harness.chance_floor(fixed, 4) == harness.chance_floor(fixed.replace(mode=const.RANDOM), 4)
    with pytest.raises(InvalidArgument):
        harness.chance_floor(fixed, 0)


@pytest.mark.parametrize("kind", const.COSTS)
@pytest.mark.parametrize("method", const.METHODS)
def test_single_sample_memorization(kind, method):
    cell = ExperimentCell(kind, const.LINE, method, const.FIXED, const.DEFAULT_LAYERS, 1, 20)
    result = run_repetition(cell, 0)
    assert result.train_acc == 1.0
    assert result.report.n_evals <= cell.max_evals


def test_same_data_same_accuracy():
    cell = small(train_size=30, test_size=30)
    rep_seed = cell.rep_seed(0)
    seeds = dict(train=11, test=11, init=12)
    result = run_repetition(cell, 0, rep_seed, seeds)
    assert result.train_acc == result.test_acc


def test_optimizer_failure_is_recorded(monkeypatch):
    def explode(*args, **kwargs):
        raise RuntimeError("diverged")
    monkeypatch.setattr(harness, "minimize", explode)
    cell = small(repetitions=2)
    result = run_repetition(cell, 0)
    assert result.report.reason == "failed"
    assert "diverged" in result.report.message
    record = run_cell(cell)
    assert record.messages == ["diverged", "diverged"]


def test_run_cell_fixed_mode():
    cell = small(mode=const.FIXED, repetitions=None)
    record = run_cell(cell)
    assert record.reps == 1
    assert len(record.test_accs) == 1
    assert record.mean_test_acc == record.test_accs[0]


def test_run_cell_pinned_has_no_variance():
    record = run_cell(small(pinned_seeds=True))
    assert record.min_test_acc == record.max_test_acc == record.mean_test_acc
    assert len(set(record.rep_seeds)) == 1


def test_run_cell_statistics():
    record = run_cell(small(tune_bias=True))
    assert record.min_train_acc <= record.mean_train_acc <= record.max_train_acc
    assert record.min_test_acc <= record.mean_test_acc <= record.max_test_acc
    assert all(0 <= j <= 1 for j in record.train_accs + record.test_accs)
    assert all(0 <= j <= 1 for j in record.biases)
    assert record.total_evals > 0
    assert len(record.rep_seeds) == 3


def test_run_cell_reproducible_from_seeds():
    cell = small()
    record = run_cell(cell)
    for rep, rep_seed in enumerate(record.rep_seeds):
        result = run_repetition(cell, rep, rep_seed)
        assert result.test_acc == record.test_accs[rep]


def test_worker_count_does_not_matter():
    cell = small(repetitions=4)
    assert run_cell(cell, workers=1) == run_cell(cell, workers=2)


def test_train_above_chance():
    record = run_cell(small(train_size=20, test_size=100, layers=3, max_evals=2000))
    assert record.mean_train_acc >= 0.45


def test_record_serialization():
    record = run_cell(small())
    copy = AccuracyRecord.deserialize(record.serialize())
    assert copy == record
    assert list(record.row().keys()) == FIELDS
    assert "over 3 repetitions" in repr(record)


def test_checkpoint_open_failure_names_database(tmp_path):
    path = tmp_path / "checkpoint.sqlite"
    path.mkdir()
    with pytest.raises(sqlite3.OperationalError) as excinfo:
        Checkpoint.at(str(path)).keys()
    assert str(path) in str(excinfo.value)


def test_sweep_order_and_checkpoint(tmp_path, monkeypatch):
    checkpoint = Checkpoint.at(str(tmp_path / "checkpoint.sqlite"))
    template = small(repetitions=2)
    seen = []
    records = run_sweep(template, [15, 5, 10, 5], checkpoint, callback=lambda r: seen.append(len(r)))
    assert [j.train_size for j in records] == [5, 10, 15]
    assert seen == [1, 2, 3]
    assert len(checkpoint.keys()) == 3

    def refuse(*args, **kwargs):
        raise AssertionError("cell should come from the checkpoint")
    monkeypatch.setattr(harness, "run_cell", refuse)
    assert run_sweep(template, [5, 10, 15], checkpoint) == records

    with pytest.raises(InvalidArgument):
        run_sweep(template, [])


def test_interrupted_sweep_matches(tmp_path):
    template = small(repetitions=2)
    fresh = run_sweep(template, [5, 10, 15])
    emit_csv(fresh, str(tmp_path / "fresh.csv"))

    checkpoint = Checkpoint.at(str(tmp_path / "resumed.sqlite"))
    run_sweep(template, [5, 10], checkpoint)
    resumed = run_sweep(template, [5, 10, 15], checkpoint)
    emit_csv(resumed, str(tmp_path / "resumed.csv"))

    assert (tmp_path / "fresh.csv").read_bytes() == (tmp_path / "resumed.csv").read_bytes()


def test_presets():
    grid = preset("fig4")
    assert len(grid) == 32
    combos = set((t.cost, t.pattern, t.method, t.mode) for t, sizes in grid)
    assert len(combos) == 32
    for template, sizes in grid:
        if template.mode == const.FIXED:
            assert tuple(sizes) == const.FIXED_TRAIN_SIZES
            assert template.repetitions == 1
        else:
            assert tuple(sizes) == const.RANDOM_TRAIN_SIZES
            assert template.repetitions == 20
    assert [t.layers for t, sizes in preset("figA2")] == [1, 2, 3, 4, 5]
    template, sizes = preset("figA1")[0]
    assert max(sizes) == 250
    with pytest.raises(InvalidArgument):
        preset("fig9")


# Long reproductions of the published accuracy figures


def peak(records):
    return max(j.mean_test_acc for j in records)


@pytest.mark.slow
def test_fixed_circle_benchmark():
    cell = ExperimentCell(const.FIDELITY, const.CIRCLE, const.LBFGS, const.FIXED, 5, 200)
    assert run_cell(cell).mean_test_acc >= 0.86


@pytest.mark.slow
def test_layer_scaling():
    peaks = {}
    for layers in (1, 5):
        template = ExperimentCell(const.FIDELITY, const.CIRCLE, const.LBFGS, const.RANDOM, layers)
        peaks[layers] = peak(run_sweep(template, const.RANDOM_TRAIN_SIZES, workers=WORKERS))
    assert peaks[5] - peaks[1] >= 0.15
    assert peaks[5] >= 0.82


@pytest.mark.slow
@pytest.mark.parametrize("method", const.METHODS)
def test_fixed_line_convergence(method):
    cell = ExperimentCell(const.FIDELITY, const.LINE, method, const.FIXED, 5, 125)
    assert run_cell(cell).mean_test_acc >= 0.92


@pytest.mark.slow
def test_random_mode_peaks():
    template = ExperimentCell(const.FIDELITY, const.CIRCLE, const.LBFGS, const.RANDOM)
    records = run_sweep(template, const.RANDOM_TRAIN_SIZES, workers=WORKERS)
    assert 0.83 <= peak(records) <= 0.93

    template = ExperimentCell(const.FIDELITY, const.LINE, const.SLSQP, const.RANDOM)
    records = run_sweep(template, const.RANDOM_TRAIN_SIZES, workers=WORKERS)
    assert peak(records) >= 0.92


@pytest.mark.slow
@pytest.mark.parametrize("method", const.METHODS)
def test_trace_cost_trails_fidelity(method):
    peaks = {}
    for kind in const.COSTS:
        template = ExperimentCell(kind, const.CIRCLE, method, const.FIXED)
        peaks[kind] = peak(run_sweep(template, const.FIXED_TRAIN_SIZES))
    assert peaks[const.FIDELITY] - peaks[const.TRACE] >= 0.05


def grid_search(train, resolution=21):
    """
    Single layer parameters from a regular grid minimizing the fidelity cost
    """
    angles = np.linspace(-np.pi, np.pi, resolution)
    weights = np.linspace(-2, 2, resolution)
    targets = train.labels == const.CLASS_A
    best_cost, best_params = np.inf, None
    rest = np.stack(np.meshgrid(angles, weights, weights, indexing="ij"), axis=-1).reshape(-1, 3)
    for t1 in angles:
        for t2 in angles:
            # (K, 5) candidates sharing the first two angles
            params = np.hstack((np.full((len(rest), 1), t1), np.full((len(rest), 1), t2), rest))
            phi = np.repeat(params[:, None, :3], len(train), axis=1)
            phi[:, :, :2] += params[:, None, 3:] * train.features[None, :, :]
            states = evolve_angles(phi.reshape(-1, 1, 3)).reshape(len(rest), len(train), 2)
            p = np.abs(states[:, :, 0]) ** 2
            costs = np.sum(np.where(targets[None, :], 1 - p, p), axis=1)
            j = int(np.argmin(costs))
            if costs[j] < best_cost:
                best_cost, best_params = costs[j], params[j]
    return best_params


@pytest.mark.slow
def test_single_layer_matches_grid_search():
    cell = ExperimentCell(const.FIDELITY, const.CIRCLE, const.LBFGS, const.FIXED, 1, 10)
    seeds = cell.seeds(cell.rep_seed(0))
    train = data.generate(const.CIRCLE, 10, seeds["train"])
    test = data.generate(const.CIRCLE, cell.test_size, seeds["test"])
    oracle = accuracy(cell.shape, grid_search(train), const.DEFAULT_BIAS, test)
    result = run_repetition(cell, 0)
    assert result.test_acc == pytest.approx(oracle, abs=0.05)
