"""NumPy fallback kernels.

Same contract as the compiled module: per-window Gram
eigendecompositions and indicator evaluation. Windows are processed in
fixed-size chunks in a fixed order, so results do not depend on the
requested thread count (BLAS may still parallelize single calls
internally).
"""

from __future__ import annotations

import numpy as np

NAME = "pure"

# windows per chunk; bounds the transient (chunk, side^2, T) copy
_CHUNK = 128


def batch_window_eigh(frames, rows, cols, side, threads=1):
    """Eigendecompose the pixel Gram matrix of each window.

    frames is (T, H, W) float64; rows/cols give window centers. Returns
    (vals, vecs) with vals (n, P) ascending and vecs (n, P, P) holding
    eigenvectors in columns, exactly as numpy.linalg.eigh lays them out.
    P = side * side. threads is accepted for interface parity.
    """
    frames = np.asarray(frames, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.intp)
    cols = np.asarray(cols, dtype=np.intp)
    T = frames.shape[0]
    P = side * side
    n = rows.shape[0]
    h = side // 2
    vals = np.empty((n, P))
    vecs = np.empty((n, P, P))
    if n == 0:
        return vals, vecs
    view = np.lib.stride_tricks.sliding_window_view(frames, (side, side), axis=(1, 2))
    for start in range(0, n, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n))
        crops = view[:, rows[sl] - h, cols[sl] - h]  # (T, m, side, side)
        a = np.ascontiguousarray(
            crops.transpose(1, 2, 3, 0).reshape(-1, P, T)
        )
        gram = a @ a.transpose(0, 2, 1)
        w, v = np.linalg.eigh(gram)
        vals[sl] = w
        vecs[sl] = v
    return vals, vecs


def batch_indicator(vecs, a, b, gsub, alpha, eps_floor, tiny, threads=1):
    """Indicator values for every (window, test point) pair.

    vecs is (n, P, P) with eigenimages in columns; a and b are (n, P)
    weights aligned with those columns; gsub is (K, P) unit test vectors.
    Returns (n, K). The denominator is floored at
    eps_floor * numerator + tiny to keep the ratio finite.
    """
    vecs = np.asarray(vecs, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    gsub = np.asarray(gsub, dtype=np.float64)
    n = vecs.shape[0]
    K = gsub.shape[0]
    out = np.empty((n, K))
    for start in range(0, n, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n))
        g = np.matmul(gsub, vecs[sl])  # (m, K, P), projections per column
        g *= g
        num = np.einsum("mkp,mp->mk", g, a[sl])
        den = np.einsum("mkp,mp->mk", g, b[sl])
        np.maximum(den, eps_floor * num + tiny, out=den)
        out[sl] = (num / den) ** (0.5 * alpha)
    return out
