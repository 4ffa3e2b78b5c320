"""Exact root-system folding, twining characters and twisted fusion rings."""

from .rootcore import (
    RootDatum,
    RootSystemError,
    build_root_datum,
    irreducible_character,
)
from .folding import (
    DiagramAutomorphism,
    FoldingContext,
    FoldingError,
    automorphism_by_name,
    fold,
    list_automorphisms,
)
from .twining import (
    TorusPoint,
    adjoint_oracle,
    inner_product,
    jantzen_eval,
    twining_character,
)
from .alcove import fold_to_alcove, fundamental_alcove, stabilizer_datum
from .fusion import fusion_table, level_data, ring_product

__version__ = "0.1.0"

__all__ = [
    "RootDatum",
    "RootSystemError",
    "build_root_datum",
    "irreducible_character",
    "DiagramAutomorphism",
    "FoldingContext",
    "FoldingError",
    "automorphism_by_name",
    "fold",
    "list_automorphisms",
    "TorusPoint",
    "adjoint_oracle",
    "inner_product",
    "jantzen_eval",
    "twining_character",
    "fold_to_alcove",
    "fundamental_alcove",
    "stabilizer_datum",
    "fusion_table",
    "level_data",
    "ring_product",
    "__version__",
]
