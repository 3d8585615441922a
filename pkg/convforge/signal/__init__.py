from .matrices import ConvMatrix, big_toeplitz, matrix_chain_product, toeplitz
from .sequences import FiniteSequence, convolve, delta, fold_convolve, l1_norm

__all__ = [
    "ConvMatrix",
    "FiniteSequence",
    "big_toeplitz",
    "convolve",
    "delta",
    "fold_convolve",
    "l1_norm",
    "matrix_chain_product",
    "toeplitz",
]
