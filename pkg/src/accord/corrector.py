"""Candidate generation, aggregation, decisions, and the correction loop.

An inconsistent group is repaired in four stages: generate one candidate
per feasible target value (regenerating every word that must change), score
each candidate per sub-group, aggregate the sub-group verdicts under the
profile's strategy, and decide: apply automatically when the winning margin
clears the threshold (or when only one value is feasible at all), otherwise
ask the user a question phrased around the pivot word the sub-groups share.
Applied answers feed the profile's weight learning.  After every applied
correction the whole tree is re-checked, so corrections that surface new
errors are caught on the next pass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from .agreement import GroupCheck, RuleInstance, check_group, rule_instances
from .deptree import DepNode, DepTree
from .errors import AccordError
from .features import GENDER, NUMBER, VALUE_ORDER, VARIABLES, value_label
from .heuristics import Candidate, ConfidenceVector, confidence_vector
from .lexicon import AmbiguousForm, LexEntry, Lexicon, NoSuchForm, phonetic_alteration
from .partition import (
    LEVEL_SUB,
    AgreementGroup,
    partition,
    pivot_nodes,
    subpartition,
)
from .profile import Profile, update_weights

MAX_PASSES = 10

# Article table for question rendering of French noun phrases.
_ARTICLE_BY_GENDER = {"mas": "un", "fem": "une"}
_ARTICLE_PLURAL = "des"


class QuestionPending(AccordError):
    """Raised by the strict answer policy when interaction would be needed."""

    def __init__(self, question: "Question"):
        self.question = question
        super().__init__(f"question {question.id} requires a user answer")


@dataclass(frozen=True)
class AggregateResult:
    strategy: str
    totals: Mapping[str, Fraction]
    winner: str | None
    tie: bool
    margin: Fraction


@dataclass(frozen=True)
class QuestionOption:
    value: str
    phrase: str
    label: str
    percentage: Fraction

    @property
    def text(self) -> str:
        return f"{self.phrase} ({self.label})"


@dataclass(frozen=True)
class Question:
    id: str
    variable: str
    sentence_text: str
    highlighted_text: str
    members: tuple[int, ...]
    pivot: int
    options: tuple[QuestionOption, ...]

    @property
    def prompt(self) -> str:
        choices = " or ".join(o.text for o in self.options)
        return f"Did you want to say {choices}?"


@dataclass(frozen=True)
class Decision:
    kind: str  # already_consistent | auto_correct | ask_user | unresolvable
    value: str | None = None
    question: Question | None = None
    vectors: tuple[ConfidenceVector, ...] = ()
    subgroup_vectors: tuple[tuple[ConfidenceVector, ...], ...] = ()
    subgroups: tuple[AgreementGroup, ...] = ()
    aggregate: AggregateResult | None = None


@dataclass(frozen=True)
class Step:
    pass_no: int
    variable: str
    members: tuple[int, ...]
    surfaces: tuple[str, ...]
    governor: int
    decision: Decision
    applied_value: str | None
    asked: bool
    threshold_before: float
    threshold_after: float
    weight_deltas: Mapping[str, Mapping[str, float]] | None


@dataclass
class CorrectionReport:
    original: DepTree
    final: DepTree
    steps: list[Step]
    converged: bool
    passes: int
    pending: Question | None
    pending_decision: Decision | None
    unresolved: list[tuple[str, tuple[int, ...]]]
    profile_before: Profile
    profile_after: Profile


# An answer source maps (question, decision evidence) to a chosen value,
# or None to suspend the loop with the question pending.
AnswerSource = Callable[[Question, Decision], "str | None"]


def auto_answers(question: Question, decision: Decision) -> str:
    """Scripted policy: pick the aggregation winner.

    A tied aggregation falls through the remaining strategies in a fixed
    order; a tie under all three picks the first option.
    """
    agg = decision.aggregate
    if agg is not None and agg.winner is not None:
        return agg.winner
    if decision.subgroup_vectors:
        tried = agg.strategy if agg is not None else None
        for strategy in ("weighted_proportional", "proportional", "simple"):
            if strategy == tried:
                continue
            fallback = aggregate(decision.subgroup_vectors, strategy)
            if fallback.winner is not None:
                return fallback.winner
    return question.options[0].value


def strict_answers(question: Question, decision: Decision) -> str:
    """Scripted policy for non-interactive contexts: abort on any question."""
    raise QuestionPending(question)


def replay_answers(answers: Sequence[tuple[str, str]]) -> AnswerSource:
    """Replay recorded (question id, value) pairs in order, then suspend."""
    queue = list(answers)

    def source(question: Question, decision: Decision) -> str | None:
        if not queue:
            return None
        qid, value = queue[0]
        if qid != question.id:
            raise AccordError(
                f"recorded answer for {qid!r} does not match question {question.id!r}"
            )
        queue.pop(0)
        return value

    return source


def _ambient_value(
    tree: DepTree, instances: list[RuleInstance], node: DepNode, variable: str
) -> str | None:
    """Resolve an ambiguous non-target variable through the word's own group."""
    own = node.features[variable]
    for group in partition(tree, instances, variable):
        if node.id in group.members:
            result = check_group(tree, group.members, variable)
            if result.consistent:
                intersection = own & result.values
                if len(intersection) == 1:
                    return next(iter(intersection))
            break
    return None


def candidates(
    tree: DepTree,
    group: AgreementGroup,
    lexicon: Lexicon,
    instances: list[RuleInstance] | None = None,
) -> list[Candidate]:
    """One candidate per feasible target value of the group's variable.

    A value is feasible when every member that must change has a form for
    it; inflection preserves each word's other variables, resolving
    ambiguous ones through the word's own agreement group where possible.
    For an already-consistent group the candidates reflect the current
    value(s) only.
    """
    if instances is None:
        instances = rule_instances(tree)
    variable = group.variable
    check = check_group(tree, group.members, variable)
    if check.consistent:
        values = [v for v in VALUE_ORDER[variable] if v in check.values]
    else:
        values = list(VALUE_ORDER[variable])

    out = []
    for value in values:
        corrected: list[int] = []
        kept: list[int] = []
        new_forms: dict[int, LexEntry] = {}
        old_forms: dict[int, LexEntry] = {}
        alterations: dict[int, int] = {}
        feasible = True
        for member_id in group.members:
            node = tree.node(member_id)
            if value in node.values(variable):
                kept.append(member_id)
                continue
            corrected.append(member_id)
            old = lexicon.entry_for(node.surface, node.category, node.features)
            target = {variable: value}
            for other in node.features:
                if other == variable:
                    continue
                values_of_other = node.features[other]
                if len(values_of_other) == 1:
                    target[other] = next(iter(values_of_other))
                else:
                    resolved = _ambient_value(tree, instances, node, other)
                    if resolved is not None:
                        target[other] = resolved
            try:
                new = lexicon.inflect(node.lemma, node.category, target, source=old)
            except (NoSuchForm, AmbiguousForm):
                feasible = False
                break
            new_forms[member_id] = new
            old_forms[member_id] = old
            alterations[member_id] = phonetic_alteration(old, new)
        if not feasible:
            continue
        out.append(
            Candidate(
                variable=variable,
                value=value,
                corrected=tuple(corrected),
                kept=tuple(kept),
                new_forms=new_forms,
                old_forms=old_forms,
                alterations=alterations,
            )
        )
    return out


def aggregate(
    subgroup_vectors: Sequence[Sequence[ConfidenceVector]], strategy: str
) -> AggregateResult:
    """Combine sub-group verdicts into a whole-group verdict.

    simple                 one vote per sub-group for its best value
    proportional           sum of raw confidence totals per value
    weighted_proportional  sum of per-sub-group percentages per value
    """
    if not subgroup_vectors:
        raise ValueError("aggregate needs at least one sub-group")
    values = [v.value for v in subgroup_vectors[0]]
    for vectors in subgroup_vectors:
        if [v.value for v in vectors] != values:
            raise ValueError("sub-groups must share the candidate value set")
    totals: dict[str, Fraction] = {value: Fraction(0) for value in values}
    if strategy == "simple":
        for vectors in subgroup_vectors:
            best = max(v.total for v in vectors)
            winners = [v.value for v in vectors if v.total == best]
            if len(winners) == 1:
                totals[winners[0]] += 1
    elif strategy == "proportional":
        for vectors in subgroup_vectors:
            for v in vectors:
                totals[v.value] += v.total
    elif strategy == "weighted_proportional":
        for vectors in subgroup_vectors:
            for v in vectors:
                totals[v.value] += v.percentage
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], values.index(kv[0])))
    if len(ranked) == 1:
        return AggregateResult(strategy, totals, ranked[0][0], False, ranked[0][1])
    tie = ranked[0][1] == ranked[1][1]
    winner = None if tie else ranked[0][0]
    margin = ranked[0][1] - ranked[1][1]
    return AggregateResult(strategy, totals, winner, tie, margin)


def combine_vectors(
    subgroup_vectors: Sequence[Sequence[ConfidenceVector]],
) -> tuple[ConfidenceVector, ...]:
    """Per-value criterion scores summed across sub-groups."""
    values = [v.value for v in subgroup_vectors[0]]
    sums: dict[str, dict[str, Fraction]] = {
        value: {c: Fraction(0) for c in subgroup_vectors[0][0].scores} for value in values
    }
    for vectors in subgroup_vectors:
        for v in vectors:
            for criterion, score in v.scores.items():
                sums[v.value][criterion] += score
    totals = {value: sum(sums[value].values(), Fraction(0)) for value in values}
    grand = sum(totals.values(), Fraction(0))
    combined = []
    for value in values:
        pct = Fraction(100, len(values)) if grand == 0 else Fraction(100) * totals[value] / grand
        combined.append(
            ConfidenceVector(value=value, scores=sums[value], total=totals[value], percentage=pct)
        )
    return tuple(combined)


def _render_with_markers(tree: DepTree, members: set[int]) -> str:
    parts: list[str] = []
    for n in tree.nodes:
        word = f"[{n.surface}]" if n.id in members else n.surface
        parts.append(word)
        parts.append("" if n.surface.endswith("'") else " ")
    return "".join(parts).strip()


def _pivot_gender(
    tree: DepTree, instances: list[RuleInstance], pivot: DepNode
) -> str | None:
    genders = pivot.features.get(GENDER)
    if genders is None:
        return None
    if len(genders) == 1:
        return next(iter(genders))
    return _ambient_value(tree, instances, pivot, GENDER)


def make_question(
    tree: DepTree,
    group: AgreementGroup,
    subgroups: Sequence[AgreementGroup],
    group_candidates: Sequence[Candidate],
    agg: AggregateResult,
    lexicon: Lexicon,
    question_id: str,
    instances: list[RuleInstance] | None = None,
) -> Question:
    """Phrase the choice around the pivot word shared by the sub-groups."""
    if instances is None:
        instances = rule_instances(tree)
    pivots = pivot_nodes(list(subgroups))
    pivot_id = pivots[0] if pivots else group.governor
    pivot = tree.node(pivot_id)
    grand = sum(agg.totals.values(), Fraction(0))
    options = []
    for candidate in group_candidates:
        if pivot_id in candidate.new_forms:
            form = candidate.new_forms[pivot_id].surface
        else:
            form = pivot.surface
        article = None
        if group.variable == NUMBER:
            if candidate.value == "plu":
                article = _ARTICLE_PLURAL
            else:
                article = _ARTICLE_BY_GENDER.get(
                    _pivot_gender(tree, instances, pivot) or "mas"
                )
        elif group.variable == GENDER:
            article = _ARTICLE_BY_GENDER[candidate.value]
        phrase = f"{article} {form}" if article else form
        share = (
            Fraction(100, len(group_candidates))
            if grand == 0
            else Fraction(100) * agg.totals[candidate.value] / grand
        )
        options.append(
            QuestionOption(
                value=candidate.value,
                phrase=phrase,
                label=value_label(candidate.value),
                percentage=share,
            )
        )
    return Question(
        id=question_id,
        variable=group.variable,
        sentence_text=tree.render_text(),
        highlighted_text=_render_with_markers(tree, set(group.members)),
        members=group.members,
        pivot=pivot_id,
        options=tuple(options),
    )


def decide(
    check: GroupCheck,
    group_candidates: Sequence[Candidate],
    agg: AggregateResult | None,
    subgroup_vectors: Sequence[Sequence[ConfidenceVector]],
    subgroups: Sequence[AgreementGroup],
    profile: Profile,
    question_builder: Callable[[], Question] | None = None,
) -> Decision:
    """Threshold-gated decision for one group.

    Consistent groups need nothing; a single feasible candidate is applied
    without a threshold test; otherwise the aggregation margin must clear
    the profile threshold or the user is asked.
    """
    if check.consistent:
        return Decision(kind="already_consistent")
    if not group_candidates:
        return Decision(kind="unresolvable")
    combined = combine_vectors(subgroup_vectors) if subgroup_vectors else ()
    evidence = dict(
        vectors=combined,
        subgroup_vectors=tuple(tuple(v) for v in subgroup_vectors),
        subgroups=tuple(subgroups),
        aggregate=agg,
    )
    if len(group_candidates) == 1:
        return Decision(kind="auto_correct", value=group_candidates[0].value, **evidence)
    if agg is not None and agg.winner is not None and agg.margin > profile.t:
        return Decision(kind="auto_correct", value=agg.winner, **evidence)
    question = question_builder() if question_builder is not None else None
    return Decision(kind="ask_user", question=question, **evidence)


def apply_correction(
    tree: DepTree,
    group: AgreementGroup,
    value: str,
    lexicon: Lexicon,
    instances: list[RuleInstance] | None = None,
    candidate: Candidate | None = None,
) -> DepTree:
    """New tree with every member that excludes ``value`` regenerated.

    Idempotent per (group, value): reapplying changes nothing.
    """
    if candidate is None or candidate.value != value:
        matches = [
            c
            for c in candidates(tree, group, lexicon, instances)
            if c.value == value
        ]
        if not matches:
            raise NoSuchForm("<group>", group.variable, {group.variable: value})
        candidate = matches[0]
    new_nodes = {}
    for member_id in candidate.corrected:
        node = tree.node(member_id)
        entry = candidate.new_forms[member_id]
        new_nodes[member_id] = replace(
            node, surface=entry.surface, features=dict(entry.features)
        )
    return tree.with_nodes(new_nodes)


@dataclass
class GroupAnalysis:
    """Everything computed for one top-level group in one pass."""

    group: AgreementGroup
    check: GroupCheck
    candidates: list[Candidate]
    subgroups: list[AgreementGroup]
    subgroup_vectors: list[list[ConfidenceVector]]
    aggregate: AggregateResult | None
    decision: Decision


def analyze_group(
    tree: DepTree,
    group: AgreementGroup,
    lexicon: Lexicon,
    profile: Profile,
    instances: list[RuleInstance],
    question_id: "str | Callable[[], str]" = "q0",
) -> GroupAnalysis:
    """Score and decide one group without applying anything."""
    check = check_group(tree, group.members, group.variable)
    if check.consistent:
        return GroupAnalysis(group, check, [], [], [], None, Decision("already_consistent"))
    cands = candidates(tree, group, lexicon, instances)
    if not cands:
        return GroupAnalysis(group, check, [], [], [], None, Decision("unresolvable"))
    subgroups = subpartition(tree, group, instances)
    if not subgroups:
        subgroups = [replace(group, level=LEVEL_SUB)]
    sub_cands = [[c.restricted_to(sub.members) for c in cands] for sub in subgroups]
    sub_vectors = [
        confidence_vector(tree, sub, cs, profile)
        for sub, cs in zip(subgroups, sub_cands)
    ]
    agg = aggregate(sub_vectors, profile.strategy)

    def build_question() -> Question:
        qid = question_id() if callable(question_id) else question_id
        return make_question(
            tree, group, subgroups, cands, agg, lexicon, qid, instances
        )

    decision = decide(
        check, cands, agg, sub_vectors, subgroups, profile,
        question_builder=build_question,
    )
    return GroupAnalysis(group, check, cands, subgroups, sub_vectors, agg, decision)


def _weight_deltas(before: Profile, after: Profile) -> dict[str, dict[str, float]]:
    deltas = {}
    for criterion in ("majority", "phonetics", "omission", "governor"):
        b = before.weight(criterion)
        a = after.weight(criterion)
        direction = "up" if a > b else ("down" if a < b else "same")
        deltas[criterion] = {"before": b, "after": a, "direction": direction}
    return deltas


def correct_tree(
    tree: DepTree,
    lexicon: Lexicon,
    profile: Profile,
    answer_source: AnswerSource,
    question_ids: Iterator[str] | None = None,
) -> CorrectionReport:
    """Run the full verification-correction loop on one tree.

    Each pass re-extracts rule instances, partitions per variable in fixed
    order, and resolves the first actionable inconsistent group; the tree
    is then fully re-checked.  Answered questions update the profile.  The
    loop ends when no actionable inconsistency remains or after a fixed
    pass cap (an oscillation guard).
    """
    if question_ids is None:
        question_ids = (f"q{i}" for i in itertools.count(1))
    current = tree
    prof = profile
    steps: list[Step] = []
    unresolved: dict[tuple[str, tuple[int, ...]], AgreementGroup] = {}
    pending: Question | None = None
    passes = 0

    while passes < MAX_PASSES:
        passes += 1
        progressed = False
        actionable = False
        for variable in VARIABLES:
            instances = rule_instances(current)
            for group in partition(current, instances, variable):
                signature = (variable, group.members)
                if signature in unresolved:
                    continue
                analysis = analyze_group(
                    current, group, lexicon, prof, instances,
                    lambda: next(question_ids),
                )
                decision = analysis.decision
                if decision.kind == "already_consistent":
                    continue
                actionable = True
                surfaces = tuple(current.node(m).surface for m in group.members)
                if decision.kind == "unresolvable":
                    unresolved[signature] = group
                    steps.append(
                        Step(
                            pass_no=passes,
                            variable=variable,
                            members=group.members,
                            surfaces=surfaces,
                            governor=group.governor,
                            decision=decision,
                            applied_value=None,
                            asked=False,
                            threshold_before=prof.t,
                            threshold_after=prof.t,
                            weight_deltas=None,
                        )
                    )
                    continue
                if decision.kind == "auto_correct":
                    chosen = decision.value
                    asked = False
                    deltas = None
                    t_before = prof.t
                else:  # ask_user
                    question = decision.question
                    answer = answer_source(question, decision)
                    if answer is None:
                        pending = question
                        return CorrectionReport(
                            original=tree,
                            final=current,
                            steps=steps,
                            converged=False,
                            passes=passes,
                            pending=pending,
                            pending_decision=decision,
                            unresolved=sorted(unresolved),
                            profile_before=profile,
                            profile_after=prof,
                        )
                    values = [c.value for c in analysis.candidates]
                    if answer not in values:
                        raise AccordError(
                            f"answer {answer!r} is not a candidate value {values}"
                        )
                    chosen = answer
                    asked = True
                    t_before = prof.t
                    new_prof = update_weights(prof, decision.vectors, chosen)
                    deltas = _weight_deltas(prof, new_prof)
                    prof = new_prof
                matching = [c for c in analysis.candidates if c.value == chosen]
                current = apply_correction(
                    current, group, chosen, lexicon, instances, matching[0]
                )
                steps.append(
                    Step(
                        pass_no=passes,
                        variable=variable,
                        members=group.members,
                        surfaces=surfaces,
                        governor=group.governor,
                        decision=decision,
                        applied_value=chosen,
                        asked=asked,
                        threshold_before=t_before,
                        threshold_after=prof.t,
                        weight_deltas=deltas,
                    )
                )
                progressed = True
                break
            if progressed:
                break
        if not actionable or not progressed:
            break

    converged = _all_consistent(current)
    return CorrectionReport(
        original=tree,
        final=current,
        steps=steps,
        converged=converged,
        passes=passes,
        pending=pending,
        pending_decision=None,
        unresolved=sorted(unresolved),
        profile_before=profile,
        profile_after=prof,
    )


def _all_consistent(tree: DepTree) -> bool:
    instances = rule_instances(tree)
    for variable in VARIABLES:
        for group in partition(tree, instances, variable):
            if not check_group(tree, group.members, variable).consistent:
                return False
    return True


@dataclass
class TreeDiagnosis:
    """One-pass analysis of a tree, nothing applied."""

    tree: DepTree
    analyses: list[GroupAnalysis]
    error_count: int
    best_margin: Fraction


def diagnose(tree: DepTree, lexicon: Lexicon, profile: Profile) -> TreeDiagnosis:
    instances = rule_instances(tree)
    analyses: list[GroupAnalysis] = []
    errors = 0
    best = Fraction(0)
    counter = itertools.count(1)
    for variable in VARIABLES:
        for group in partition(tree, instances, variable):
            analysis = analyze_group(
                tree, group, lexicon, profile, instances,
                lambda: f"q{next(counter)}",
            )
            analyses.append(analysis)
            if not analysis.check.consistent:
                errors += 1
                if analysis.aggregate is not None:
                    best = max(best, analysis.aggregate.margin)
    return TreeDiagnosis(tree=tree, analyses=analyses, error_count=errors, best_margin=best)


def rank_forest(
    trees: Sequence[DepTree], lexicon: Lexicon, profile: Profile
) -> list[TreeDiagnosis]:
    """Check every reading of an ambiguous sentence and order them.

    Fewest agreement errors first; among equals, the reading whose best
    correction is most confident wins.  No reading is discarded.
    """
    diagnoses = [diagnose(tree, lexicon, profile) for tree in trees]
    order = sorted(
        range(len(diagnoses)),
        key=lambda i: (diagnoses[i].error_count, -diagnoses[i].best_margin, i),
    )
    return [diagnoses[i] for i in order]
