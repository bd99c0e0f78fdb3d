"""Type isomorphisms for sums, products and exponentials, and the arithmetic
identities they mirror."""

from .expr import Equation, parse_equation, parse_expr, render_expr
from .hsi import check_derivation
from .prover import normalize, prove_hsi
from .semantics import check_equation, eval_expr
from .types import interpret
from .witness import check_roundtrip, compile_witness

__all__ = [
    "Equation", "check_derivation", "check_equation", "check_roundtrip", "compile_witness", "eval_expr",
    "interpret", "normalize", "parse_equation", "parse_expr", "prove_hsi", "render_expr",
]
