"""Workbench for finite Boolean frames: congruences, subalgebras, CEP, unary clones."""

from .core import (
    AtomPermutation,
    BooleanFrame,
    KripkeFrame,
    additive_extension,
    all_frames,
    builtin_frame,
    complex_algebra,
    cycle_frame,
    dump_frame,
    frame_from_dict,
    frame_to_dict,
    is_isomorphic,
    load_frame,
    make_frame,
    permute_frame,
    product,
    random_frame,
    trivial_frame,
    wheel,
)

__version__ = "0.1.0"

__all__ = [
    "AtomPermutation",
    "BooleanFrame",
    "KripkeFrame",
    "additive_extension",
    "all_frames",
    "builtin_frame",
    "complex_algebra",
    "cycle_frame",
    "dump_frame",
    "frame_from_dict",
    "frame_to_dict",
    "is_isomorphic",
    "load_frame",
    "make_frame",
    "permute_frame",
    "product",
    "random_frame",
    "trivial_frame",
    "wheel",
]
