"""Prompt construction for the three priming regimes.

Approach A primes the model with the linguistic axis rules only, Approach B
with example recordings only (five per primitive), and Approach C with both.
Corrective feedback notes, when present, are appended to the system text.
The wording lives in editable template files (``templates/`` package data or
a user-supplied directory), so prompts can be tuned without code changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from string import Template

from ..errors import MissingExamplesForApproach, WrongExampleCount
from ..resample import VelocitySeries
from ..segmenter import LABELS, PrimitiveLabel
from . import formats
from .formats import serialize_series

EXAMPLES_PER_LABEL = 5

RULE_PHRASES = {
    PrimitiveLabel.PULL: "Translation along x-axis, without significant rotation",
    PrimitiveLabel.SLIDE: "Translation on the y-z plane, without significant rotation",
    PrimitiveLabel.SWING: "Translation along the y-axis and rotation around the z-axis",
    PrimitiveLabel.TILT: "Minimal translation z-axis and rotation around y-axis",
    PrimitiveLabel.TWIST: "No translation, but rotation around x-axis",
}


@dataclass(frozen=True)
class Approach:
    """Priming regime: rules only (A), examples only (B), or both (C)."""

    kind: str
    with_feedback: bool = False

    def __post_init__(self):
        kind = str(self.kind).upper()
        if kind not in ("A", "B", "C"):
            raise ValueError(f"unknown approach kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @property
    def uses_rules(self):
        return self.kind in ("A", "C")

    @property
    def uses_examples(self):
        return self.kind in ("B", "C")


@dataclass(frozen=True)
class PromptBundle:
    """Everything needed for one inference call."""

    system_text: str
    example_attachments: tuple  # of (PrimitiveLabel, VelocitySeries)
    query_series: VelocitySeries
    feedback_notes: tuple = ()


def load_template(name, template_dir=None) -> str:
    if template_dir is not None:
        return (Path(template_dir) / f"{name}.txt").read_text()
    return resources.files("pickseg.templates").joinpath(f"{name}.txt").read_text()


def _check_examples(approach: Approach, training_set):
    training_set = tuple(training_set or ())
    if not approach.uses_examples:
        if training_set:
            raise WrongExampleCount(
                f"approach {approach.kind} takes no examples, got "
                f"{len(training_set)}")
        return training_set
    if not training_set:
        raise MissingExamplesForApproach(
            f"approach {approach.kind} needs {EXAMPLES_PER_LABEL} examples "
            "per primitive")
    counts = {label: 0 for label in LABELS}
    for label, _series in training_set:
        counts[label] = counts.get(label, 0) + 1
    if any(c != EXAMPLES_PER_LABEL for c in counts.values()):
        detail = ", ".join(f"{l.value}={c}" for l, c in counts.items())
        raise WrongExampleCount(
            f"need exactly {EXAMPLES_PER_LABEL} examples per primitive, "
            f"got {detail}")
    return training_set


def build_prompt(approach: Approach, training_set=(), query=None,
                 feedback=(), template_dir=None) -> PromptBundle:
    """Deterministically assemble the bundle for one query series."""
    attachments = _check_examples(approach, training_set)
    feedback = tuple(feedback or ())
    if feedback and not approach.with_feedback:
        raise ValueError("feedback notes supplied without with_feedback set")
    rules = load_template("rules", template_dir).strip() \
        if approach.uses_rules else ""
    feedback_block = ""
    if feedback:
        feedback_block = "Corrections from earlier evaluation runs:\n" + \
            "\n".join(f"- {note}" for note in feedback)
    system_text = Template(load_template("task", template_dir)).substitute(
        rules=("\n" + rules + "\n") if rules else "",
        feedback=("\n" + feedback_block) if feedback_block else "")
    return PromptBundle(system_text=system_text.strip() + "\n",
                        example_attachments=attachments,
                        query_series=query,
                        feedback_notes=feedback)


def bundle_messages(bundle: PromptBundle, max_rows=formats.DEFAULT_MAX_ROWS):
    """Materialize the chat messages for a bundle."""
    messages = [{"role": "system", "content": bundle.system_text}]
    for label, series in bundle.example_attachments:
        table = serialize_series(series, max_rows)
        messages.append({
            "role": "user",
            "content": f"Example recording of the primitive '{label}':\n"
                       f"```\n{table}\n```",
        })
    if bundle.query_series is not None:
        table = serialize_series(bundle.query_series, max_rows)
        messages.append({
            "role": "user",
            "content": "Classify and segment this velocity series:\n"
                       f"```\n{table}\n```",
        })
    return messages


def build_feedback_notes(validation):
    """Corrective notes from (sequence_id, truth, predicted) triples.

    One note per truth segment the prediction got wrong; empty when every
    segment matched.
    """
    from ..evaluation import match_primitives  # local import avoids a cycle

    notes = []
    for sequence_id, truth, predicted in validation:
        matches = match_primitives(truth, predicted)
        for k, (seg, ok) in enumerate(zip(truth.segments, matches)):
            if ok:
                continue
            correct = (f"{seg.label} (Index {seg.start}{formats.EN_DASH}"
                       f"{seg.end})")
            if k < len(predicted.segments):
                wrong = predicted.segments[k]
                produced = (f"predicted {wrong.label} (Index {wrong.start}"
                            f"{formats.EN_DASH}{wrong.end})")
            else:
                produced = "produced no segment at this position"
            notes.append(f"Sequence {sequence_id}, segment {k + 1}: "
                         f"{produced}; the correct primitive is {correct}.")
    return notes
