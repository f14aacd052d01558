"""Braid and link-diagram invariants, slice-torus bounds and positivity obstructions.

Set ``KNOTPOS_NUMBA=0`` to run the pure numpy kernels instead of the numba ones.
"""
from .braid import (
    BraidWord,
    braid_closure,
    braid_linking_matrix,
    braid_profile,
    embed_quasipositive,
    key_lemma_identity,
    parse_braid,
    sub_braid,
)
from .catalog import (
    CatalogEntry,
    analyze_entry,
    builtin_example,
    load_catalog,
    render_table,
)
from .diagram import (
    LinkDiagram,
    delete_components,
    diagram_profile,
    mirror,
    parse_pd,
    seifert_analysis,
)
from .errors import ConsistencyError, InputError, KnotposError, PreconditionError
from .invariants import NuInterval, bennequin_chain, nu_bounds, positive_unlinking, slc_pure
from .linking import ComponentPartition, LinkingMatrix
from .obstruct import (
    LinkData,
    Verdict,
    check_concordance_qp,
    check_positive,
    check_positive_braid,
    check_qp,
    classify_alt_pure,
    classify_small_unlinking,
    recheck,
)

__version__ = "0.1.0"

__all__ = [
    "BraidWord", "parse_braid", "braid_profile", "sub_braid", "braid_linking_matrix",
    "key_lemma_identity", "embed_quasipositive", "braid_closure",
    "LinkDiagram", "parse_pd", "diagram_profile", "delete_components", "mirror", "seifert_analysis",
    "LinkingMatrix", "ComponentPartition",
    "NuInterval", "nu_bounds", "bennequin_chain", "slc_pure", "positive_unlinking",
    "LinkData", "Verdict", "check_concordance_qp", "check_qp", "check_positive", "check_positive_braid",
    "classify_alt_pure", "classify_small_unlinking", "recheck",
    "CatalogEntry", "load_catalog", "analyze_entry", "render_table", "builtin_example",
    "KnotposError", "InputError", "PreconditionError", "ConsistencyError",
]
