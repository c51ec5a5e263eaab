"""Linguistic partitioning of a tree into agreement groups.

For one variable, the words form a graph whose edges are co-membership in a
rule instance constraining that variable; the connected components are the
units of checking and correction.  Complex groups are further split into one
sub-group per rule instance, and the words shared by several sub-groups are
the pivots used to phrase user questions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .agreement import RuleInstance
from .deptree import DepTree

LEVEL_TOP = "top"
LEVEL_SUB = "sub"


@dataclass(frozen=True)
class AgreementGroup:
    variable: str
    members: tuple[int, ...]
    governor: int
    source_instances: tuple[int, ...]
    level: str

    def governor_values(self, tree: DepTree) -> frozenset[str] | None:
        node = tree.node(self.governor)
        return node.features.get(self.variable)


def _relevant_members(tree: DepTree, instance: RuleInstance, variable: str) -> list[int]:
    if variable not in instance.variables:
        return []
    return [m for m in instance.members if tree.node(m).bears(variable)]


def partition(
    tree: DepTree, instances: list[RuleInstance], variable: str
) -> list[AgreementGroup]:
    """Connected components of the co-membership graph for one variable.

    Components of size one are dropped: a word constrained by nothing has
    nothing to check.  Groups come out ordered by first member position.
    """
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    instance_members: dict[int, list[int]] = {}
    for idx, instance in enumerate(instances):
        members = _relevant_members(tree, instance, variable)
        if len(members) < 2:
            continue
        instance_members[idx] = members
        for m in members:
            parent.setdefault(m, m)
        first = members[0]
        for m in members[1:]:
            union(first, m)

    components: dict[int, list[int]] = {}
    for node_id in parent:
        components.setdefault(find(node_id), []).append(node_id)

    groups = []
    for root in sorted(components):
        members = tuple(sorted(components[root]))
        if len(members) < 2:
            continue
        source = tuple(
            idx for idx, ms in sorted(instance_members.items()) if ms[0] in members
        )
        groups.append(
            AgreementGroup(
                variable=variable,
                members=members,
                governor=_top_governor(tree, instances, source, members),
                source_instances=source,
                level=LEVEL_TOP,
            )
        )
    return groups


def _top_governor(
    tree: DepTree,
    instances: list[RuleInstance],
    source: tuple[int, ...],
    members: tuple[int, ...],
) -> int:
    """Governor of the instance closest to the tree root, among the members."""
    best: tuple[int, int] | None = None
    best_governor = None
    for idx in source:
        governor = instances[idx].governor
        if governor not in members:
            continue
        key = (tree.depth(governor), governor)
        if best is None or key < best:
            best = key
            best_governor = governor
    return best_governor if best_governor is not None else members[0]


def subpartition(
    tree: DepTree, group: AgreementGroup, instances: list[RuleInstance]
) -> list[AgreementGroup]:
    """One sub-group per source rule instance, at rule granularity."""
    if group.level != LEVEL_TOP:
        raise ValueError("subpartition expects a top-level group")
    subgroups = []
    for idx in group.source_instances:
        instance = instances[idx]
        members = tuple(sorted(_relevant_members(tree, instance, group.variable)))
        if len(members) < 2:
            continue
        subgroups.append(
            AgreementGroup(
                variable=group.variable,
                members=members,
                governor=instance.governor,
                source_instances=(idx,),
                level=LEVEL_SUB,
            )
        )
    return subgroups


def pivot_nodes(subgroups: list[AgreementGroup]) -> list[int]:
    """Nodes shared by several sub-groups, most-shared first, then position."""
    counts: dict[int, int] = {}
    for sub in subgroups:
        for m in sub.members:
            counts[m] = counts.get(m, 0) + 1
    shared = [node_id for node_id, c in counts.items() if c >= 2]
    return sorted(shared, key=lambda node_id: (-counts[node_id], node_id))
