from .elimtree import (
    END,
    HEAD,
    MATE,
    DecompositionError,
    EliminationTree,
    exact_mtd,
    exact_td,
    forbidden_mtd3_free,
    lift_td_to_mtd,
    matched_roles,
    roles_are_valid,
    smallest_maximal_matching_size,
    verify_elim_tree,
    verify_matched_elim_tree,
)
from .minors import is_induced_minor, treewidth_upper_bound
from .textio import dump_elimtree, dump_treedecomp, parse_elimtree, parse_treedecomp
from .treedecomp import (
    TreeDecomposition,
    WorkLimitExceeded,
    attach_certificates,
    exact_mtw,
    exact_tw,
    lift_tw_to_mtw,
    make_td,
    matched_certificate,
    matched_td_from_mtd_tree,
    mtw_at_most,
    verify_matched_td,
    verify_td,
)
