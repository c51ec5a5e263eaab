"""Agreement rule catalog, rule-instance extraction, and consistency checkers.

The catalog is a closed table of five French agreement rules:

  np_internal          determiners and adjectives agree with their noun
                       in gender and number
  subj_verb            a finite verb agrees with its subject in number
                       and person
  subj_aux             an auxiliary inside a relative clause agrees with
                       its own subject in number and person
  ppart_preceding_obj  a past participle built with *avoir* agrees in
                       gender and number with its direct object when the
                       object precedes it
  relpron_link         a relative pronoun transmits its antecedent's
                       variables, letting agreement flow through it

The main checker intersects the value sets of a whole group; the pairwise
checker walks governor-dependant pairs and serves as the independent
baseline the group checker is verified against.
"""

from __future__ import annotations

from dataclasses import dataclass

from .deptree import DepNode, DepTree, precedes
from .features import GENDER, NUMBER, PERSON

RULE_NP = "np_internal"
RULE_SUBJ_VERB = "subj_verb"
RULE_SUBJ_AUX = "subj_aux"
RULE_PPART_OBJ = "ppart_preceding_obj"
RULE_RELPRON = "relpron_link"


@dataclass(frozen=True)
class RuleInstance:
    rule_id: str
    variables: tuple[str, ...]
    members: tuple[int, ...]
    governor: int


@dataclass(frozen=True)
class GroupCheck:
    consistent: bool
    values: frozenset[str] | None

    def __bool__(self) -> bool:
        return self.consistent


def antecedent_of(tree: DepTree, node: DepNode) -> DepNode | None:
    """The noun a relative pronoun stands for.

    Climbs from the pronoun to the head of its relative clause (the node
    attached with deprel ``relcl``) and returns that node's governor.
    """
    cur = node
    while cur.head != 0:
        if cur.deprel == "relcl":
            return tree.node(cur.head)
        cur = tree.node(cur.head)
    return None


def _resolve_relpron(tree: DepTree, node: DepNode) -> DepNode:
    if node.category == "relpron":
        antecedent = antecedent_of(tree, node)
        if antecedent is not None:
            return antecedent
    return node


def rule_instances(tree: DepTree) -> list[RuleInstance]:
    """Every instance of the catalog on the tree, in positional order."""
    instances: list[RuleInstance] = []
    for node in tree.nodes:
        if node.category == "noun":
            deps = [c for c in tree.children(node.id) if c.deprel in ("det", "adj")]
            if deps:
                members = tuple(sorted([node.id] + [d.id for d in deps]))
                instances.append(
                    RuleInstance(RULE_NP, (GENDER, NUMBER), members, node.id)
                )
        if node.category == "verb":
            for child in tree.children(node.id):
                if child.deprel == "subj":
                    subject = _resolve_relpron(tree, child)
                    members = tuple(sorted({subject.id, node.id}))
                    if len(members) >= 2:
                        instances.append(
                            RuleInstance(RULE_SUBJ_VERB, (NUMBER, PERSON), members, node.id)
                        )
        if node.category == "aux":
            in_relative_clause = node.deprel == "relcl" or any(
                a.deprel == "relcl" for a in [node] + tree.ancestors(node.id)
            )
            if in_relative_clause:
                for child in tree.children(node.id):
                    if child.deprel == "subj":
                        subject = _resolve_relpron(tree, child)
                        members = tuple(sorted({subject.id, node.id}))
                        if len(members) >= 2:
                            instances.append(
                                RuleInstance(RULE_SUBJ_AUX, (NUMBER, PERSON), members, node.id)
                            )
        if node.category == "pastpart":
            if node.head != 0:
                governor = tree.node(node.head)
                if governor.category == "aux" and governor.lemma == "avoir":
                    for child in tree.children(node.id):
                        if child.deprel == "obj" and precedes(child, node):
                            obj = _resolve_relpron(tree, child)
                            members = tuple(sorted({obj.id, node.id}))
                            if len(members) >= 2:
                                instances.append(
                                    RuleInstance(
                                        RULE_PPART_OBJ, (GENDER, NUMBER), members, obj.id
                                    )
                                )
        if node.category == "relpron" and node.features:
            antecedent = antecedent_of(tree, node)
            if antecedent is not None:
                instances.append(
                    RuleInstance(
                        RULE_RELPRON,
                        tuple(v for v in (NUMBER, GENDER, PERSON) if antecedent.bears(v)),
                        tuple(sorted({node.id, antecedent.id})),
                        antecedent.id,
                    )
                )
    return instances


def check_group(tree: DepTree, members, variable: str) -> GroupCheck:
    """Intersect the members' value sets; empty intersection means an error.

    Every member must bear the variable; callers filter beforehand.
    """
    values: frozenset[str] | None = None
    for member_id in members:
        node = tree.node(member_id)
        if not node.bears(variable):
            raise ValueError(
                f"node {member_id} ({node.surface!r}) does not bear {variable!r}"
            )
        values = node.values(variable) if values is None else values & node.values(variable)
    if values is None:
        raise ValueError("empty member list")
    if values:
        return GroupCheck(consistent=True, values=values)
    return GroupCheck(consistent=False, values=None)


def check_pair(governor: DepNode, dependant: DepNode, variable: str) -> bool:
    """Pairwise baseline: true iff the two value sets intersect."""
    if not governor.bears(variable) or not dependant.bears(variable):
        raise ValueError(f"both nodes must bear {variable!r}")
    return bool(governor.values(variable) & dependant.values(variable))
