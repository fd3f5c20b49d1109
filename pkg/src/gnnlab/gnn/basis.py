"""The 15 linear permutation-equivariant maps R^{n x n} -> R^{n x n}.

Applied channel-wise to arrays shaped (..., n, n, c). With d = diag(H),
r_i = sum_k H_ik (row sums), s_j = sum_k H_kj (column sums), tr = trace and
tot = total sum, the fixed enumeration order is:

   0  H_ij                 5  delta_ij r_i          10  s_j
   1  H_ji                 6  delta_ij s_i          11  delta_ij tr
   2  delta_ij d_i         7  r_i                   12  tr
   3  d_i                  8  r_j                   13  delta_ij tot
   4  d_j                  9  s_i                   14  tot

The order is part of the checkpoint format (LGNN weights index it).
"""

from __future__ import annotations

import numpy as np

NUM_BASIS = 15

# adjoint of map i is map ADJOINT[i]
ADJOINT = (0, 1, 2, 5, 6, 3, 4, 7, 9, 8, 10, 11, 13, 12, 14)


def _diag(H: np.ndarray) -> np.ndarray:
    return np.moveaxis(np.diagonal(H, axis1=-3, axis2=-2), -1, -2)


def _diag_embed(v: np.ndarray) -> np.ndarray:
    n = v.shape[-2]
    out = np.zeros(v.shape[:-1] + (n, v.shape[-1]))
    idx = np.arange(n)
    out[..., idx, idx, :] = v
    return out


def _rows(v: np.ndarray) -> np.ndarray:
    n = v.shape[-2]
    return np.broadcast_to(v[..., :, None, :], v.shape[:-1] + (n, v.shape[-1])).copy()


def _cols(v: np.ndarray) -> np.ndarray:
    n = v.shape[-2]
    return np.broadcast_to(v[..., None, :, :], v.shape[:-2] + (n, n, v.shape[-1])).copy()


def _everywhere(s: np.ndarray, n: int) -> np.ndarray:
    return np.broadcast_to(s[..., None, None, :], s.shape[:-1] + (n, n, s.shape[-1])).copy()


def _delta(s: np.ndarray, n: int) -> np.ndarray:
    return _diag_embed(np.broadcast_to(s[..., None, :], s.shape[:-1] + (n, s.shape[-1])))


def lin_eq_basis2(H: np.ndarray) -> list[np.ndarray]:
    """All 15 basis outputs for H shaped (..., n, n, c), in the enumeration order above."""
    n = H.shape[-2]
    d = _diag(H)
    r = H.sum(axis=-2)
    s = H.sum(axis=-3)
    tr = d.sum(axis=-2)
    tot = H.sum(axis=(-3, -2))
    return [
        np.array(H),
        np.swapaxes(H, -3, -2).copy(),
        _diag_embed(d),
        _rows(d),
        _cols(d),
        _diag_embed(r),
        _diag_embed(s),
        _rows(r),
        _cols(r),
        _rows(s),
        _cols(s),
        _delta(tr, n),
        _everywhere(tr, n),
        _delta(tot, n),
        _everywhere(tot, n),
    ]


def basis_stack(H: np.ndarray) -> np.ndarray:
    """(..., n, n, c) -> (..., n, n, c, 15)."""
    return np.stack(lin_eq_basis2(H), axis=-1)


def basis_stack_adjoint(G: np.ndarray) -> np.ndarray:
    """Adjoint of `basis_stack`: (..., n, n, c, 15) -> (..., n, n, c)."""
    out = np.zeros(G.shape[:-1])
    for i in range(NUM_BASIS):
        out += lin_eq_basis2(G[..., i])[ADJOINT[i]]
    return out
