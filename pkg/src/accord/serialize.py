"""JSON views of reports, diagnoses, questions, and profiles.

One stable-keyed schema shared by the CLI's ``--format json`` output and
the HTTP service; exact rationals become floats here, at the boundary.
"""

from __future__ import annotations

from dataclasses import asdict
from typing import Any

from .corrector import (
    AggregateResult,
    CorrectionReport,
    Decision,
    GroupAnalysis,
    Question,
    Step,
    TreeDiagnosis,
)
from .deptree import DepTree, serialize_treebank
from .heuristics import ConfidenceVector
from .profile import Profile, ProfileError


def profile_json(profile: Profile) -> dict[str, Any]:
    return asdict(profile)


def profile_from_json(data: Any) -> Profile:
    if not isinstance(data, dict):
        raise ProfileError("profile must be a JSON object")
    fields = {
        "k_majority": float,
        "k_phonetics": float,
        "k_omission": float,
        "k_governor": float,
        "t": float,
        "t_floor": float,
        "eta": float,
        "delta": float,
        "strategy": str,
        "update_count": int,
    }
    kwargs = {}
    for name, cast in fields.items():
        if name not in data:
            raise ProfileError(f"missing profile field {name!r}")
        try:
            kwargs[name] = cast(data[name])
        except (TypeError, ValueError) as exc:
            raise ProfileError(f"bad value for {name!r}: {data[name]!r}") from exc
    unknown = set(data) - set(fields)
    if unknown:
        raise ProfileError(f"unknown profile fields: {sorted(unknown)}")
    profile = Profile(**kwargs)
    profile.validate()
    return profile


def vector_json(vector: ConfidenceVector) -> dict[str, Any]:
    return {
        "value": vector.value,
        "scores": {name: float(score) for name, score in vector.scores.items()},
        "total": float(vector.total),
        "percentage": float(vector.percentage),
    }


def aggregate_json(agg: AggregateResult | None) -> dict[str, Any] | None:
    if agg is None:
        return None
    return {
        "strategy": agg.strategy,
        "totals": {value: float(total) for value, total in agg.totals.items()},
        "winner": agg.winner,
        "tie": agg.tie,
        "margin": float(agg.margin),
    }


def question_json(question: Question | None) -> dict[str, Any] | None:
    if question is None:
        return None
    return {
        "id": question.id,
        "variable": question.variable,
        "sentence_text": question.sentence_text,
        "highlighted_text": question.highlighted_text,
        "members": list(question.members),
        "pivot": question.pivot,
        "prompt": question.prompt,
        "options": [
            {
                "value": o.value,
                "phrase": o.phrase,
                "label": o.label,
                "text": o.text,
                "percentage": float(o.percentage),
            }
            for o in question.options
        ],
    }


def decision_json(decision: Decision) -> dict[str, Any]:
    return {
        "kind": decision.kind,
        "value": decision.value,
        "question": question_json(decision.question),
        "vectors": [vector_json(v) for v in decision.vectors],
        "subgroups": [
            {
                "members": list(sub.members),
                "governor": sub.governor,
                "vectors": [vector_json(v) for v in vectors],
            }
            for sub, vectors in zip(decision.subgroups, decision.subgroup_vectors)
        ],
        "aggregate": aggregate_json(decision.aggregate),
    }


def step_json(step: Step) -> dict[str, Any]:
    return {
        "pass": step.pass_no,
        "variable": step.variable,
        "members": list(step.members),
        "surfaces": list(step.surfaces),
        "governor": step.governor,
        "decision": decision_json(step.decision),
        "applied_value": step.applied_value,
        "asked": step.asked,
        "threshold_before": step.threshold_before,
        "threshold_after": step.threshold_after,
        "weight_deltas": step.weight_deltas,
    }


def report_json(report: CorrectionReport) -> dict[str, Any]:
    return {
        "sentence_id": report.original.sentence_id,
        "original_text": report.original.render_text(),
        "corrected_text": report.final.render_text(),
        "treebank": serialize_treebank([report.final]),
        "converged": report.converged,
        "passes": report.passes,
        "steps": [step_json(s) for s in report.steps],
        "pending_question": question_json(report.pending),
        "pending_decision": (
            decision_json(report.pending_decision)
            if report.pending_decision is not None
            else None
        ),
        "unresolved": [
            {"variable": variable, "members": list(members)}
            for variable, members in report.unresolved
        ],
        "profile_before": profile_json(report.profile_before),
        "profile_after": profile_json(report.profile_after),
    }


def analysis_json(tree: DepTree, analysis: GroupAnalysis) -> dict[str, Any]:
    group = analysis.group
    return {
        "variable": group.variable,
        "members": list(group.members),
        "surfaces": [tree.node(m).surface for m in group.members],
        "governor": group.governor,
        "consistent": analysis.check.consistent,
        "values": sorted(analysis.check.values) if analysis.check.values else None,
        "candidates": [c.value for c in analysis.candidates],
        "decision": decision_json(analysis.decision),
    }


def diagnosis_json(diagnosis: TreeDiagnosis) -> dict[str, Any]:
    return {
        "sentence_id": diagnosis.tree.sentence_id,
        "text": diagnosis.tree.render_text(),
        "error_count": diagnosis.error_count,
        "best_margin": float(diagnosis.best_margin),
        "groups": [analysis_json(diagnosis.tree, a) for a in diagnosis.analyses],
    }
