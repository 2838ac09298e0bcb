"""Point-to-point map recovery from dictionaries.

Two routes: Tikhonov-regularized delta reconstruction on a single shape
(argmax over the reconstructed indicator images) and row-wise nearest
neighbor transfer between the dictionaries of two shapes with matched
samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DataError, NumericalError
from .wavelets import _DictionaryBase

_NN_BLOCK = 512


@dataclass(frozen=True)
class PointMap:
    """Dense vertex-to-vertex correspondence: targets[i] is the image of i."""

    targets: np.ndarray
    target_size: int

    def __post_init__(self):
        t = np.asarray(self.targets, dtype=np.int64)
        if t.ndim != 1:
            raise ValueError("targets must be a 1-D index array")
        if t.size and (t.min() < 0 or t.max() >= self.target_size):
            raise ValueError("target index out of range")
        t.flags.writeable = False
        object.__setattr__(self, "targets", t)

    @property
    def source_size(self) -> int:
        return self.targets.shape[0]


def identity_map(n: int) -> PointMap:
    return PointMap(targets=np.arange(n, dtype=np.int64), target_size=n)


def save_pointmap(pm: PointMap, path) -> None:
    """One 0-based target index per line; line i is the image of vertex i."""
    with open(path, "w") as fh:
        for t in pm.targets:
            fh.write(f"{t}\n")


def load_pointmap(path, target_size: int | None = None) -> PointMap:
    try:
        targets = np.loadtxt(path, dtype=np.int64, ndmin=1)
    except ValueError as exc:
        raise DataError(f"{path}: bad point-map file: {exc}") from exc
    if target_size is None:
        target_size = int(targets.max()) + 1 if targets.size else 0
    if targets.size and (targets.min() < 0 or targets.max() >= target_size):
        raise DataError(f"{path}: target index out of range [0, {target_size})")
    return PointMap(targets=targets, target_size=target_size)


@dataclass(frozen=True)
class TikhonovRegularizer:
    """Scale-major diagonal weights 1/k^2, k the scale index of each column."""

    weights: np.ndarray
    n_samples: int
    n_scales: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if (w <= 0).any() or (np.diff(w) > 0).any():
            raise ValueError("regularizer weights must be positive and non-increasing")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.weights.shape[0]


def build_gamma(n_samples: int, n_scales: int) -> TikhonovRegularizer:
    """Diagonal regularizer: the |S| columns of scale k get weight 1/k^2."""
    if n_samples < 1 or n_scales < 1:
        raise ValueError("counts must be >= 1")
    k = np.repeat(np.arange(1, n_scales + 1), n_samples)
    return TikhonovRegularizer(weights=1.0 / k.astype(np.float64) ** 2,
                               n_samples=n_samples, n_scales=n_scales)


def reconstruct_delta_map(dictionary: _DictionaryBase,
                          regularizer: TikhonovRegularizer | None,
                          block: int = _NN_BLOCK) -> PointMap:
    """Recover the location of every vertex indicator from the dictionary.

    Solves the ridge-regularized least squares min ||Psi a - I||^2 + ||G a||^2
    through its normal equations (a dense system of dictionary size), then
    maps vertex j to the argmax over rows of column j of Psi a. Ties break to
    the lowest row index. ``regularizer=None`` solves the plain normal
    equations, which is unstable for rank-deficient dictionaries and raises
    ``NumericalError`` when singular.
    """
    psi = dictionary.columns
    n, m = psi.shape
    gram = psi.T @ psi
    if regularizer is not None:
        if regularizer.size != m:
            raise ValueError(f"regularizer size {regularizer.size} does not match "
                             f"{m} dictionary columns")
        gram = gram + np.diag(regularizer.weights ** 2)
    try:
        factor = scipy.linalg.cho_factor(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"normal matrix is singular: {exc}") from exc
    targets = np.empty(n, dtype=np.int64)
    for start in range(0, n, block):
        alpha = scipy.linalg.cho_solve(factor, psi[start:start + block].T)
        recon = psi @ alpha  # (n, block): column j is the image of indicator start+j
        targets[start:start + block] = np.argmax(recon, axis=0)
    return PointMap(targets=targets, target_size=n)


def nearest_rows(queries: np.ndarray, points: np.ndarray, block: int = _NN_BLOCK) -> np.ndarray:
    """Exact nearest row of ``points`` for every row of ``queries``.

    Brute-force Euclidean search; ties break to the lowest index. Blocked so
    the distance matrix never exceeds block * len(points) entries.
    """
    pts_sq = (points * points).sum(axis=1)
    out = np.empty(queries.shape[0], dtype=np.int64)
    for start in range(0, queries.shape[0], block):
        q = queries[start:start + block]
        d2 = (q * q).sum(axis=1)[:, None] - 2.0 * (q @ points.T) + pts_sq[None, :]
        out[start:start + block] = np.argmin(d2, axis=1)
    return out


def transfer_pointmap(dict_source: _DictionaryBase, dict_target: _DictionaryBase) -> PointMap:
    """Match source vertices to target vertices through dictionary rows.

    The embedding of a vertex is the row of values taken by every dictionary
    column at that vertex; each source row is matched to its exact nearest
    target row. Requires dictionaries of the same kind with equal column
    layout (matched samples in order, same scale count).
    """
    if type(dict_source) is not type(dict_target):
        raise ValueError("source and target dictionaries must be the same kind")
    if dict_source.n_columns != dict_target.n_columns:
        raise ValueError(f"column count mismatch: {dict_source.n_columns} vs "
                         f"{dict_target.n_columns}")
    if dict_source.n_scales != dict_target.n_scales:
        raise ValueError("scale count mismatch")
    targets = nearest_rows(dict_source.columns, dict_target.columns)
    return PointMap(targets=targets, target_size=dict_target.n_vertices)
