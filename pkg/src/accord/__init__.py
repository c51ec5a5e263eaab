"""accord: agreement-error detection and correction for dependency-parsed sentences.

The pipeline: a full-form lexicon answers analysis and generation requests;
agreement rule instances are extracted from a dependency tree; per variable,
the tree is partitioned into connected agreement groups; inconsistent groups
are scored by weighted correction criteria, sub-group verdicts are
aggregated, and the result is either applied automatically or turned into a
question for the user, whose answer adapts the criterion weights.
"""

from .agreement import check_group, check_pair, rule_instances
from .corrector import (
    aggregate,
    apply_correction,
    auto_answers,
    candidates,
    correct_tree,
    decide,
    diagnose,
    make_question,
    rank_forest,
    replay_answers,
    strict_answers,
)
from .deptree import DepNode, DepTree, parse_treebank, precedes, serialize_treebank
from .errors import AccordError
from .heuristics import confidence_vector
from .lexicon import LexEntry, Lexicon, load_lexicon, phonetic_alteration
from .partition import partition, pivot_nodes, subpartition
from .profile import (
    Profile,
    decay_threshold,
    default_profile,
    load_profile,
    save_profile,
    update_weights,
)

__version__ = "0.1.0"
