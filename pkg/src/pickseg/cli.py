"""Command-line entry point.

Subcommands: preprocess, generate, segment, llm, eval. Exit codes are a
stable scripting contract: 0 success, 1 completed with warnings, 2
usage/input error.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import io as pio
from .config import RunConfig
from .errors import DegenerateInput, EmptyEvalSet, PickSegError
from .evaluation import (aggregate, benchmark_report, evaluate_sequence,
                         load_benchmark)
from .kinematics import enforce_sign_continuity, express_in_frame
from .llm.client import ChatCompletionClient, MockChatClient, run_inference
from .llm.formats import format_segments
from .llm.prompts import Approach, build_prompt
from .resample import (SUP_THRESHOLD, differentiate, output_grid,
                       resample_pose, sup_normalize)
from .segmenter import PrimitiveLabel, segment_and_classify
from .synthgen import MotionSpec, generate_sequence
from .evaluation import benchmark_label_sequences

EXIT_WARNINGS = 1
EXIT_ERROR = 2


def _guarded(fn):
    """Map package errors and bad files to exit code 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (PickSegError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)

    return wrapper


def _load_config(config_path, **overrides) -> RunConfig:
    cfg = RunConfig.from_file(config_path) if config_path else RunConfig()
    return cfg.with_overrides(**overrides)


@click.group()
def main():
    """Motion-primitive segmentation toolkit for fruit-picking recordings."""


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(),
              help="Velocity CSV to write.")
@click.option("--truth-out", type=click.Path(), default=None,
              help="Boundary JSON derived from the button column.")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--sigma", type=float, default=None,
              help="Kernel bandwidth in seconds.")
@click.option("--output-rate", type=float, default=None,
              help="Output grid density in Hz.")
@_guarded
def preprocess(input_file, output, truth_out, config_path, sigma, output_rate):
    """Turn a raw pose recording into a velocity CSV."""
    cfg = _load_config(config_path, sigma=sigma, output_rate=output_rate)
    series, buttons = pio.load_recording_csv(input_file)
    series = express_in_frame(enforce_sign_continuity(series),
                              series.sample(0))
    smoothed = resample_pose(enforce_sign_continuity(series),
                             cfg.kernel_config())
    velocity = differentiate(smoothed)
    pio.write_velocity_csv(output, velocity)
    if buttons and truth_out is None:
        truth_out = str(Path(output).with_suffix("")) + ".truth.json"
    if buttons and truth_out:
        t0 = series.t[0]
        boundaries = sorted(
            int(round((bt - t0) * cfg.output_rate)) for bt in buttons)
        pio.write_boundaries_json(truth_out, boundaries, len(velocity),
                                  cfg.output_rate)
        click.echo(f"wrote {truth_out}")
    click.echo(f"wrote {output} ({len(velocity)} samples)")
    if (velocity.sup_translational <= SUP_THRESHOLD
            and velocity.sup_angular <= SUP_THRESHOLD):
        click.echo("warning: recording is motionless; velocity cannot be "
                   "normalized", err=True)
        sys.exit(EXIT_WARNINGS)


def _write_generated(rec, out_dir, name, output_rate, rate):
    """Write recording CSV + truth JSON (indices on the output-rate grid)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    junction_times = [rec.velocity.t[s.start] for s in rec.truth.segments[1:]]
    pio.write_recording_csv(out_dir / f"{name}.csv", rec.pose, junction_times)
    n_out = len(output_grid(rec.pose.duration, output_rate))
    starts = [0] + [int(round(bt * output_rate)) for bt in junction_times]
    segments = []
    from .segmenter import Segment, SegmentationResult
    for i, seg in enumerate(rec.truth.segments):
        end = (starts[i + 1] - 1) if i + 1 < len(starts) else n_out - 1
        segments.append(Segment(seg.label, starts[i], end))
    truth = SegmentationResult(tuple(segments), n_out)
    pio.write_segmentation_json(out_dir / f"{name}.truth.json", truth,
                                rate=output_rate)


@main.command()
@click.option("--seq", default=None,
              help="Comma-separated primitive labels, e.g. twist,tilt,pull.")
@click.option("--dur", default="3",
              help="Segment duration(s) in seconds (single value or list).")
@click.option("--noise", type=float, default=0.0,
              help="Relative velocity noise level.")
@click.option("--seed", type=int, default=None)
@click.option("--rate", type=float, default=500.0,
              help="Recording sample rate in Hz.")
@click.option("--output-rate", type=float, default=None,
              help="Grid the truth indices refer to (default from config).")
@click.option("--amp-trans", type=float, default=None)
@click.option("--amp-ang", type=float, default=None)
@click.option("--name", default="recording")
@click.option("-o", "--out-dir", type=click.Path(), default=".")
@click.option("--benchmark", is_flag=True,
              help="Generate the full 20-sequence benchmark suite.")
@click.option("--velocity-out", type=click.Path(), default=None,
              help="Also dump the designed velocity CSV (generation grid).")
@click.option("--config", "config_path", type=click.Path(exists=True))
@_guarded
def generate(seq, dur, noise, seed, rate, output_rate, amp_trans, amp_ang,
             name, out_dir, benchmark, velocity_out, config_path):
    """Create synthetic labeled recordings."""
    cfg = _load_config(config_path, seed=seed, output_rate=output_rate)
    out_rate = cfg.output_rate
    amplitudes = {}
    if amp_trans is not None:
        amplitudes["amplitude_translational"] = amp_trans
    if amp_ang is not None:
        amplitudes["amplitude_angular"] = amp_ang
    if benchmark:
        rng = np.random.default_rng(cfg.seed)
        for i, labels in enumerate(benchmark_label_sequences(), start=1):
            steps = rng.integers(int(2 * out_rate), int(5 * out_rate) + 1,
                                 size=len(labels))
            durations = tuple(float(s) / out_rate for s in steps)
            spec = MotionSpec(labels=tuple(labels), durations=durations,
                              noise_std=noise, seed=cfg.seed + i, rate=rate,
                              **amplitudes)
            rec = generate_sequence(spec)
            _write_generated(rec, out_dir, f"seq{i:02d}", out_rate, rate)
        click.echo(f"wrote 20 benchmark sequences to {out_dir}")
        return
    if not seq:
        raise click.UsageError("--seq is required unless --benchmark is set")
    labels = tuple(PrimitiveLabel.parse(s) for s in seq.split(","))
    durations = tuple(float(d) for d in dur.split(","))
    if len(durations) == 1:
        durations = durations * len(labels)
    spec = MotionSpec(labels=labels, durations=durations, noise_std=noise,
                      seed=cfg.seed, rate=rate, **amplitudes)
    rec = generate_sequence(spec)
    _write_generated(rec, out_dir, name, out_rate, rate)
    if velocity_out:
        pio.write_velocity_csv(velocity_out, rec.velocity)
    click.echo(f"wrote {Path(out_dir) / name}.csv "
               f"({len(rec.pose)} samples, {len(labels)} segments)")


@main.command()
@click.argument("velocity_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Segmentation JSON to write.")
@click.option("--text", "text_out", type=click.Path(), default=None,
              help="Also write the human-readable segment list.")
@click.option("--emit-plot-data", type=click.Path(), default=None,
              help="Dump the sup-normalized per-axis series as CSV.")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--theta", type=float, default=None)
@click.option("--min-len", "min_segment_len", type=int, default=None)
@click.option("--lam", type=float, default=None)
@click.option("--grammar", is_flag=True, default=None,
              help="Force the final segment to pull or slide.")
@_guarded
def segment(velocity_file, output, text_out, emit_plot_data, config_path,
            theta, min_segment_len, lam, grammar):
    """Run the deterministic rule engine on a velocity CSV."""
    cfg = _load_config(config_path, theta=theta,
                       min_segment_len=min_segment_len, lam=lam,
                       grammar=grammar or None)
    series = pio.load_velocity_csv(velocity_file)
    result = segment_and_classify(series, cfg.detection_config())
    line = format_segments(result)
    click.echo(line)
    if output:
        pio.write_segmentation_json(output, result, rate=series.rate)
    if text_out:
        Path(text_out).write_text(line + "\n")
    if emit_plot_data:
        pio.write_velocity_csv(emit_plot_data, sup_normalize(series))


def _load_examples(examples_dir):
    """Velocity CSVs named <label>_<k>.csv grouped into (label, series)."""
    training = []
    for path in sorted(Path(examples_dir).glob("*.csv")):
        word = path.stem.split("_")[0].split("-")[0]
        label = PrimitiveLabel.parse(word)
        training.append((label, pio.load_velocity_csv(path)))
    return training


@main.command()
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--approach", type=click.Choice(["a", "b", "c"]), required=True)
@click.option("--examples-dir", type=click.Path(exists=True, file_okay=False),
              default=None)
@click.option("--feedback", "feedback_file",
              type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON list of corrective feedback notes.")
@click.option("--mock", "mock_file",
              type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON list of canned replies (no network).")
@click.option("--audit-log", type=click.Path(), default=None)
@click.option("-o", "--out-dir", type=click.Path(), default=".")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--endpoint", default=None)
@click.option("--model", default=None)
@_guarded
def llm(inputs, approach, examples_dir, feedback_file, mock_file, audit_log,
        out_dir, config_path, endpoint, model):
    """Segment velocity series through a chat-completion model."""
    cfg = _load_config(config_path, endpoint=endpoint, model=model)
    notes = ()
    if feedback_file:
        notes = tuple(json.loads(Path(feedback_file).read_text()))
    spec = Approach(approach.upper(), with_feedback=bool(notes))
    training = _load_examples(examples_dir) if examples_dir else ()
    if mock_file:
        client = MockChatClient(json.loads(Path(mock_file).read_text()))
    else:
        client = ChatCompletionClient(cfg.client_config())
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for path in inputs:
        path = Path(path)
        series = pio.load_velocity_csv(path)
        bundle = build_prompt(spec, training, series, notes)
        result = run_inference(bundle, client, audit_log=audit_log,
                               sequence_id=path.stem, approach=spec.kind)
        out_path = out_dir / f"{path.stem}.segments.json"
        pio.write_segmentation_json(out_path, result, rate=series.rate)
        click.echo(f"{path.stem}: {format_segments(result)}")


def _pair_files(truth_dir, pred_dir):
    pairs = []
    for tpath in sorted(Path(truth_dir).glob("*.json")):
        stem = tpath.stem
        if stem.endswith(".truth"):
            stem = stem[:-len(".truth")]
        for candidate in (f"{stem}.segments.json", f"{stem}.json"):
            ppath = Path(pred_dir) / candidate
            if ppath.exists():
                pairs.append((stem, tpath, ppath))
                break
    return pairs


@main.command("eval")
@click.option("--truth-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--pred-dir", type=click.Path(exists=True, file_okay=False))
@click.option("--marks", "marks_file", default=None,
              help="Score a recorded benchmark marks grid instead of files "
                   "('builtin' or a JSON path).")
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Report JSON to write.")
@click.option("--offsets-csv", type=click.Path(), default=None,
              help="Dump signed boundary offsets for external plotting.")
@click.option("--exclude", default="",
              help="Comma-separated sequence names to exclude from scoring.")
@_guarded
def eval_cmd(truth_dir, pred_dir, marks_file, output, offsets_csv, exclude):
    """Score predictions against ground truth."""
    if marks_file:
        benchmark = load_benchmark() if marks_file == "builtin" \
            else json.loads(Path(marks_file).read_text())
        report = {}
        for name in benchmark["approaches"]:
            stats = benchmark_report(name, benchmark)
            report[name] = stats.as_dict()
            click.echo(f"Approach {name}: {stats.correct} / {stats.total} "
                       f"({int(100 * stats.accuracy)}%)")
        if output:
            Path(output).write_text(
                json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    if not truth_dir or not pred_dir:
        raise click.UsageError("need --truth-dir and --pred-dir (or --marks)")
    excluded = {s.strip() for s in exclude.split(",") if s.strip()}
    pairs = _pair_files(truth_dir, pred_dir)
    if not pairs:
        raise EmptyEvalSet(f"no matching truth/prediction pairs under "
                           f"{truth_dir} and {pred_dir}")
    evals = []
    detail = []
    rate = None
    for i, (stem, tpath, ppath) in enumerate(pairs):
        if stem in excluded:
            continue
        truth, t_rate = pio.load_segmentation_json(tpath)
        predicted, _ = pio.load_segmentation_json(ppath)
        rate = rate or t_rate
        ev = evaluate_sequence(i, truth, predicted, rate=t_rate)
        evals.append(ev)
        marks = " ".join(
            f"{seg.label}:{'ok' if ok else 'X'}"
            for seg, ok in zip(truth.segments, ev.matches))
        detail.append({"sequence": stem, "matches": list(ev.matches),
                       "offsets": list(ev.offsets)})
        click.echo(f"{stem}: {marks}")
    if not evals:
        raise EmptyEvalSet("every sequence was excluded")
    report = aggregate(evals, rate=rate)
    click.echo(f"accuracy: {report.correct} / {report.total} "
               f"({100 * report.accuracy:.1f}%)")
    if output:
        payload = report.as_dict()
        payload["sequences"] = detail
        Path(output).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if offsets_csv:
        offsets = [o for e in evals for o in e.offsets]
        lines = ["offset_samples"] + [str(o) for o in offsets]
        Path(offsets_csv).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
