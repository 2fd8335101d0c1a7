# coding: utf-8

import click
import logging
import os
import re
import sqlite3
import sys
from datetime import timedelta
from reuploader import const, config
from reuploader.common import SizeList, setup_logging, attach_sql_log
from reuploader.errors import (BatteryFailure, ConfigError, InvalidArgument,
    ParseError, UnsupportedOperation, ValidationError)

try:
    import coverage
    cov = coverage.process_startup()
    if cov:
        click.echo("Enabling coverage tracking")
except ImportError:
    pass

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_BATTERY = 3


def _naturaldelta(seconds):
    from humanize import naturaldelta
    return naturaldelta(timedelta(seconds=seconds))


def _slug(template):
    return re.sub(r"[^a-z0-9]+", "-", "%s-%s-%s-%s-n%d" % (template.cost, template.pattern,
        template.method, template.mode, template.layers))


def _prepare(ctx, out):
    if not os.path.isdir(out):
        os.makedirs(out)
    if ctx.obj["logging backend"] == "sql":
        attach_sql_log(out)


def _execute(templates, out, workers):
    """
    Run every (template, sizes) pair, rewriting results and charts after each cell
    """
    from reuploader.harness import Checkpoint, run_sweep
    from reuploader.plot import emit_svg
    from reuploader.results import emit_csv

    checkpoint = Checkpoint.at(os.path.join(out, const.CHECKPOINT_FILENAME))
    results_path = os.path.join(out, const.RESULTS_FILENAME)
    done = []
    wall_time = 0.0

    for template, sizes in templates:
        chart_path = os.path.join(out, "%s.svg" % _slug(template))

        def flush(records):
            emit_csv(done + records, results_path)
            emit_svg(records, chart_path)

        click.echo("Running %s over training sizes %s" % (template, ", ".join([str(j) for j in sizes])))
        records = run_sweep(template, sizes, checkpoint, workers, flush)
        for record in records:
            click.echo("  %s" % record)
            wall_time += record.wall_time
        done += records

    click.echo("Wrote %d records to %s, computed in %s" % (len(done), results_path, _naturaldelta(wall_time)))
    return done


@click.command("run", help="Train and score one experiment cell over a list of training sizes")
@click.option("--cost", "-c", default=const.FIDELITY, type=click.Choice(const.COSTS), help="Cost function, fidelity by default")
@click.option("--pattern", "-p", default=const.CIRCLE, type=click.Choice(const.PATTERNS), help="Decision boundary, circle by default")
@click.option("--method", "-m", default=const.LBFGS, type=click.Choice(const.METHODS), help="Minimizer, lbfgs by default")
@click.option("--mode", default=const.FIXED, type=click.Choice(const.MODES), help="Dataset mode, fixed by default")
@click.option("--layers", "-n", default=const.DEFAULT_LAYERS, type=click.IntRange(1, None), help="Number of layers, %d by default" % const.DEFAULT_LAYERS)
@click.option("--train-sizes", "-s", default=None, type=SizeList(), help="Training sizes such as 1,25,50 or 5:70:5, mode preset by default")
@click.option("--test-size", default=const.DEFAULT_TEST_SIZE, type=click.IntRange(1, None), help="Test points, %d by default" % const.DEFAULT_TEST_SIZE)
@click.option("--reps", "-r", default=None, type=click.IntRange(1, None), help="Repetitions, %d in random mode and 1 in fixed mode by default" % const.RANDOM_REPETITIONS)
@click.option("--seed", default=const.DEFAULT_MASTER_SEED, type=click.IntRange(0, None), help="Master seed, %d by default" % const.DEFAULT_MASTER_SEED)
@click.option("--out", "-o", default="out", type=click.Path(file_okay=False), help="Output directory")
@click.option("--tune-bias", is_flag=True, help="Tune the decision threshold on the training set")
@click.option("--workers", "-w", default=1, type=click.IntRange(1, None), help="Worker processes for repetitions")
@click.option("--gradient", "-g", default="fd", type=click.Choice(const.GRADIENTS), help="Gradient of lbfgs and slsqp, central differences by default")
@click.option("--max-evals", default=const.MAX_EVALS, type=click.IntRange(1, None), help="Objective evaluation budget per training run")
@click.pass_context
def reuploader_run(ctx, cost, pattern, method, mode, layers, train_sizes, test_size, reps, seed, out, tune_bias, workers, gradient, max_evals):
    from reuploader.harness import ExperimentCell
    if not train_sizes:
        train_sizes = const.FIXED_TRAIN_SIZES if mode == const.FIXED else const.RANDOM_TRAIN_SIZES
    template = ExperimentCell(cost, pattern, method, mode, layers, min(train_sizes), test_size,
        reps, seed, tune_bias, gradient, max_evals=max_evals)
    _prepare(ctx, out)
    _execute([(template, train_sizes)], out, workers)


def _preset_command(name, presets, help):
    @click.command(name, help=help)
    @click.option("--preset", default=presets[0], type=click.Choice(presets), help="Experiment preset, %s by default" % presets[0])
    @click.option("--out", "-o", default="out", type=click.Path(file_okay=False), help="Output directory")
    @click.option("--seed", default=const.DEFAULT_MASTER_SEED, type=click.IntRange(0, None), help="Master seed")
    @click.option("--test-size", default=const.DEFAULT_TEST_SIZE, type=click.IntRange(1, None), help="Test points")
    @click.option("--workers", "-w", default=1, type=click.IntRange(1, None), help="Worker processes for repetitions")
    @click.option("--max-evals", default=const.MAX_EVALS, type=click.IntRange(1, None), help="Objective evaluation budget per training run")
    @click.pass_context
    def wrapped(ctx, preset, out, seed, test_size, workers, max_evals):
        from reuploader.harness import preset as lookup
        templates = lookup(preset, seed, test_size, max_evals=max_evals)
        click.echo("Preset %s has %d cells" % (preset, len(templates)))
        _prepare(ctx, out)
        _execute(templates, out, workers)
    return wrapped


reuploader_grid = _preset_command("grid", ("fig4",),
    "Run every cost, pattern, method and dataset mode combination")
reuploader_sweep = _preset_command("sweep", ("figA1", "figA2"),
    "Run the extended training size and layer count sweeps")


@click.command("plot", help="Render accuracy curves from a results CSV")
@click.option("--in", "-i", "path", required=True, type=click.Path(dir_okay=False), help="Results CSV")
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="SVG file to write")
def reuploader_plot(path, out):
    from reuploader.plot import emit_svg
    from reuploader.results import load_results
    records = load_results(path)
    emit_svg(records, out)
    click.echo("Plotted %d records to %s" % (len(records), out))


@click.command("map", help="Train one repetition and draw its predictions over the test set")
@click.option("--cost", "-c", default=const.FIDELITY, type=click.Choice(const.COSTS))
@click.option("--pattern", "-p", default=const.CIRCLE, type=click.Choice(const.PATTERNS))
@click.option("--method", "-m", default=const.LBFGS, type=click.Choice(const.METHODS))
@click.option("--mode", default=const.FIXED, type=click.Choice(const.MODES))
@click.option("--layers", "-n", default=const.DEFAULT_LAYERS, type=click.IntRange(1, None))
@click.option("--train-size", default=50, type=click.IntRange(1, None), help="Training points, 50 by default")
@click.option("--test-size", default=const.DEFAULT_TEST_SIZE, type=click.IntRange(1, None))
@click.option("--rep", default=0, type=click.IntRange(0, None), help="Repetition index, random mode only")
@click.option("--seed", default=const.DEFAULT_MASTER_SEED, type=click.IntRange(0, None))
@click.option("--tune-bias", is_flag=True)
@click.option("--gradient", "-g", default="fd", type=click.Choice(const.GRADIENTS))
@click.option("--max-evals", default=const.MAX_EVALS, type=click.IntRange(1, None))
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="SVG file to write")
def reuploader_map(cost, pattern, method, mode, layers, train_size, test_size, rep, seed, tune_bias, gradient, max_evals, out):
    from reuploader import data
    from reuploader.harness import ExperimentCell, run_repetition
    from reuploader.plot import emit_map
    cell = ExperimentCell(cost, pattern, method, mode, layers, train_size, test_size,
        None, seed, tune_bias, gradient, max_evals=max_evals)
    result = run_repetition(cell, rep)
    test = data.generate(pattern, test_size, cell.seeds(result.rep_seed)["test"])
    emit_map(cell.shape, result.params, result.bias, test, repr(cell), out)
    click.echo("%s: train %.3f test %.3f, map written to %s" % (cell, result.train_acc, result.test_acc, out))


@click.command("compare", help="Tabulate peak test accuracies of result files")
@click.option("--in", "-i", "paths", required=True, multiple=True, type=click.Path(dir_okay=False), help="Results CSV, multiple allowed")
@click.option("--out", "-o", default=None, type=click.Path(dir_okay=False), help="Write the table as CSV")
def reuploader_compare(paths, out):
    from reuploader.results import load_results, peak_table, cost_gaps, emit_peaks
    records = []
    for path in paths:
        records += load_results(path)
    peaks = peak_table(records)
    for peak in peaks:
        click.echo("%-8s %-6s %-10s %-6s N=%d peak test %.3f at %d samples (train %.3f)" % (
            peak["cost"], peak["pattern"], peak["method"], peak["mode"], peak["layers"],
            peak["mean_test_acc"], peak["train_size"], peak["mean_train_acc"]))
    for gap in cost_gaps(peaks):
        click.echo("fidelity - trace %-6s %-10s %-6s N=%d: %+.3f" % (
            gap["pattern"], gap["method"], gap["mode"], gap["layers"], gap["gap"]))
    if out:
        emit_peaks(peaks, out)
        click.echo("Wrote %d rows to %s" % (len(peaks), out))


@click.command("validate-optimizers", help="Check every minimizer on the test function battery")
@click.option("--method", "-m", "methods", multiple=True, type=click.Choice(const.METHODS), help="Minimizer to check, all by default")
def reuploader_validate_optimizers(methods):
    from reuploader.optim.battery import run_battery
    results = run_battery(methods or const.METHODS)
    for j in results:
        click.echo("%-10s %-12s f=%.3e evals=%-6d %-8s %s" % (j.method, j.problem, j.f_best,
            j.n_evals, j.reason, "ok" if j.passed else "FAILED" if j.deterministic else "NONDETERMINISTIC"))
    failed = [j for j in results if not j.passed]
    if failed:
        raise BatteryFailure("%d of %d battery runs failed" % (len(failed), len(results)))
    click.echo("All %d battery runs passed" % len(results))


@click.group()
@click.option("--config", "config_path", default=None, type=click.Path(dir_okay=False), help="Configuration file, $%s or ./%s by default" % (const.CONFIG_ENVIRONMENT, const.CONFIG_PATH))
@click.option("--verbose", "-v", is_flag=True, help="Log debug messages")
@click.pass_context
def entry_point(ctx, config_path, verbose):
    settings = config.load(config_path)
    ctx.default_map = config.default_map(settings)
    ctx.obj = settings
    setup_logging(settings["log level"], settings["logging backend"], verbose)


entry_point.add_command(reuploader_run)
entry_point.add_command(reuploader_grid)
entry_point.add_command(reuploader_sweep)
entry_point.add_command(reuploader_plot)
entry_point.add_command(reuploader_map)
entry_point.add_command(reuploader_compare)
entry_point.add_command(reuploader_validate_optimizers)


def main(args=None):
    """
    Run the command line and translate failures into exit codes
    """
    try:
        entry_point.main(args=args, prog_name="reuploader", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except ConfigError as e:
        click.echo("Configuration error: %s" % e, err=True)
        return EXIT_USAGE
    except BatteryFailure as e:
        click.echo("Optimizer validation failed: %s" % e, err=True)
        return EXIT_BATTERY
    except (ParseError, ValidationError, OSError, sqlite3.Error) as e:
        click.echo("Error: %s" % e, err=True)
        return EXIT_IO
    except (InvalidArgument, UnsupportedOperation) as e:
        click.echo("Error: %s" % e, err=True)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
