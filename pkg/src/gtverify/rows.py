"""numpy kernels for batches of permutations.

A batch is an (m, n) integer array whose rows are image tables (0-based).
These kernels carry the hot loops: element-table products, conjugation scans
and canonical byte keys for subgroup fingerprints.
"""

from __future__ import annotations

import numpy as np

from .perms import Perm


def row_dtype(degree: int):
    return np.uint8 if degree <= 256 else np.uint16


def rows_from_perms(perms, degree: int) -> np.ndarray:
    out = np.empty((len(perms), degree), dtype=row_dtype(degree))
    for k, p in enumerate(perms):
        out[k] = p.img
    return out


def perms_from_rows(rows: np.ndarray):
    return [Perm(row.tolist()) for row in rows]


def compose_pair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row for 'apply a then b'."""
    return b[a]


def compose_all_pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All products x*y (apply row x of a, then row y of b).

    Output row x*len(b)+y is the product of a[x] and b[y].
    """
    out = b[:, a]                      # [y, x, i] = b[y, a[x, i]]
    return np.ascontiguousarray(out.transpose(1, 0, 2).reshape(-1, a.shape[1]))


def invert_rows(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    m, n = a.shape
    cols = np.arange(n, dtype=a.dtype)
    for k in range(m):
        out[k, a[k]] = cols
    return out


def conjugate_by_rows(x_row: np.ndarray, rows: np.ndarray, rows_inv: np.ndarray) -> np.ndarray:
    """Rows of g^-1 * x * g for every row g (with rows_inv precomputed)."""
    return np.take_along_axis(rows, x_row[rows_inv], axis=1)


def pack_row(row: np.ndarray) -> bytes:
    return row.tobytes()


def pack_rows(rows: np.ndarray):
    return [rows[k].tobytes() for k in range(rows.shape[0])]


def pack_perm(p: Perm) -> bytes:
    return np.asarray(p.img, dtype=row_dtype(p.degree)).tobytes()


def unpack_key(key: bytes, degree: int) -> Perm:
    dt = row_dtype(degree)
    return Perm(np.frombuffer(key, dtype=dt).tolist())


def sorted_key_tuple(keys) -> tuple:
    return tuple(sorted(keys))
