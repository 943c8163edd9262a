"""Exact linear algebra over the binary field."""

from ._kernels import BACKEND, HAVE_NUMBA
from .matrix import (
    Gf2Matrix,
    Gf2Vector,
    ParameterError,
    SolutionSet,
    add,
    down_shift,
    hstack,
    kernel_dim,
    mat_bits,
    matmul,
    matrix_power,
    matvec,
    rank,
    rank_bits,
    rank_reference,
    rref_bits,
    shift_channel_matrix,
    solve_all,
    solve_bits,
    vstack,
)

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "Gf2Matrix",
    "Gf2Vector",
    "ParameterError",
    "SolutionSet",
    "add",
    "down_shift",
    "hstack",
    "kernel_dim",
    "mat_bits",
    "matmul",
    "matrix_power",
    "matvec",
    "rank",
    "rank_bits",
    "rank_reference",
    "rref_bits",
    "shift_channel_matrix",
    "solve_all",
    "solve_bits",
    "vstack",
]
