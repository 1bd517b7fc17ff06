"""Regular elements of variants of the full transformation semigroup,
their normal categories, cross-connection and biorder structure."""
from .transform import (SetPartition, Subset, Transformation, analyze, compose, parse_partition,
                        parse_subset, parse_transformation, preimage_partition)
from .variant import VariantContext, reg_elements, variant_product

__version__ = "0.1.0"

__all__ = [
    "Transformation", "Subset", "SetPartition", "VariantContext",
    "parse_transformation", "parse_subset", "parse_partition",
    "compose", "analyze", "preimage_partition", "variant_product", "reg_elements",
]
