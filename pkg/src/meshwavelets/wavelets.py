"""Multi-scale Mexican-hat wavelet dictionaries by backward-Euler diffusion.

The mother wavelet at a sample s is the Laplacian of a vertex indicator,
A^-1 W d_s. Applying n backward-Euler steps (A + tW)^-1 A yields the wavelet
at scale n; every intermediate step is kept as a dictionary column. All
samples and scales share one factorization of A + tW. A heat-kernel
dictionary (diffused raw indicators, no Laplacian) is built the same way as
a comparison baseline.
"""
from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, NumericalError
from .laplacian import LaplacianPair
from .sampling import SampleSet, explicit_samples
from .solve import SpdSystem, factorize

MAGIC = b"DWDICT01"
DEGENERATE_RANGE = 1e-14


@dataclass(frozen=True)
class _DictionaryBase:
    """Column matrix of per-vertex functions plus construction metadata.

    Layout is scale-major: columns [k*|S|, (k+1)*|S|) hold scale k+1 for all
    samples in order, k = 0 .. n_scales-1.
    """

    columns: np.ndarray   # (n_vertices, |S| * n_scales)
    samples: SampleSet
    n_scales: int
    t_max: float
    t_step: float
    rho: float
    normalized: bool = True

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=np.float64)
        if cols.shape[1] != len(self.samples) * self.n_scales:
            raise ValueError(f"expected {len(self.samples) * self.n_scales} columns, "
                             f"got {cols.shape[1]}")
        cols.flags.writeable = False
        object.__setattr__(self, "columns", cols)

    @property
    def n_vertices(self) -> int:
        return self.columns.shape[0]

    @property
    def n_columns(self) -> int:
        return self.columns.shape[1]

    def scale_columns(self, scale: int) -> np.ndarray:
        """Columns of a single scale (1-based), one per sample."""
        if not 1 <= scale <= self.n_scales:
            raise ValueError(f"scale must be in [1, {self.n_scales}]")
        k = len(self.samples)
        return self.columns[:, (scale - 1) * k: scale * k]


class WaveletDictionary(_DictionaryBase):
    """Mexican-hat wavelet dictionary (Laplacian-filtered, diffused indicators)."""


class HeatDictionary(_DictionaryBase):
    """Heat-kernel dictionary: diffused raw indicators, L1-normalized only."""


def indicator_columns(n_vertices: int, samples: SampleSet) -> np.ndarray:
    """Unit indicator matrix: column j is 1 at sample j, 0 elsewhere."""
    d = np.zeros((n_vertices, len(samples)))
    d[samples.indices, np.arange(len(samples))] = 1.0
    return d


def mother_wavelets(lap: LaplacianPair, samples: SampleSet) -> np.ndarray:
    """A^-1 W applied to the unit indicators of the samples, one column each.

    Every column has exact zero A-weighted mean (W has zero row sums) and a
    strictly positive value at its own sample vertex.
    """
    if samples.indices.max() >= lap.n:
        raise ValueError("sample index out of range for this Laplacian")
    cols = lap.stiffness[:, samples.indices].toarray()
    return cols / lap.mass[:, None]


def diffusion_step(lap: LaplacianPair, t: float, block: np.ndarray,
                   system: SpdSystem | None = None) -> np.ndarray:
    """One backward-Euler heat step: (A + tW)^-1 A applied to a column block.

    Conserves the A-weighted integral of every column. Pass a prefactorized
    ``system`` for the same (lap, t) to reuse the factorization.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if system is None:
        system = factorize(lap.mass, lap.stiffness, t)
    block = np.asarray(block, dtype=np.float64)
    rhs = lap.mass[:, None] * block if block.ndim == 2 else lap.mass * block
    return system.solve(rhs)


def compute_rho(area_n: float, area_m: float) -> float:
    """Diffusion-scale adjustment ratio sqrt(area_n / area_m), clamped to (0, 1].

    For a pair of shapes the smaller (e.g. partial) shape is expected as
    ``area_n``; a ratio above 1 is clamped with a warning. With a single
    shape the ratio is 1.
    """
    if area_n <= 0 or area_m <= 0:
        raise ValueError(f"areas must be positive, got {area_n}, {area_m}")
    rho = float(np.sqrt(area_n / area_m))
    if rho > 1.0:
        warnings.warn(f"area ratio {rho:.4g} exceeds 1 (expected the smaller shape "
                      "first); clamping rho to 1", stacklevel=2)
        rho = 1.0
    return rho


def pair_rhos(area_source: float, area_target: float) -> tuple[float, float]:
    """Per-shape rho values for a matching pair, from original (pre-normalization) areas.

    The larger shape's diffusion times are shrunk by sqrt(smaller/larger); the
    smaller shape keeps rho = 1. For equal areas both are 1.
    """
    if area_source >= area_target:
        return compute_rho(area_target, area_source), 1.0
    return 1.0, compute_rho(area_source, area_target)


def _diffuse_scales(lap, first_block, n_scales, t, method, zero_mean=False):
    system = factorize(lap.mass, lap.stiffness, t, method=method)
    scales = []
    block = first_block
    for _ in range(n_scales):
        block = diffusion_step(lap, t, block, system=system)
        if zero_mean:
            # wavelet columns have exactly zero A-weighted mean in exact
            # arithmetic (W has zero row sums); project out the roundoff
            # drift so deeply diffused scales keep the invariant
            block -= lap.mass @ block / lap.total_area
        scales.append(block)
    return np.hstack(scales)


def _normalize_columns(columns, mass, samples, apply_range):
    """In-place Algorithm-style normalization: A-weighted L1 norm, then range."""
    n_samp = len(samples)
    l1 = mass @ np.abs(columns)
    _check_degenerate(l1, n_samp, samples, "A-weighted L1 norm")
    columns /= l1
    if apply_range:
        spread = columns.max(axis=0) - columns.min(axis=0)
        _check_degenerate(spread, n_samp, samples, "range")
        columns /= spread
    return columns


def _check_degenerate(values, n_samp, samples, what):
    bad = np.flatnonzero(values < DEGENERATE_RANGE)
    if bad.size:
        pairs = [(int(samples.indices[j % n_samp]), j // n_samp + 1) for j in bad]
        raise NumericalError(f"degenerate column {what} for (sample, scale) pairs: {pairs}")


def build_dictionary(lap: LaplacianPair, samples: SampleSet, n_scales: int = 25,
                     t_max: float = 1.0, rho: float = 1.0, normalize: bool = True,
                     method: str = "direct") -> WaveletDictionary:
    """Build the multi-scale wavelet dictionary for a sample set.

    The per-step diffusion time is t = rho * t_max / (n_scales * sqrt(area)),
    with the mesh expected in unit-area normalization. Mother wavelets
    (scale 0) seed the recursion but are not part of the dictionary; scales
    1..n_scales are produced by successive backward-Euler steps sharing a
    single factorization. Each column is then normalized by its A-weighted
    L1 norm and by its range, so that max(c) - min(c) = 1.

    ``normalize=False`` returns the raw diffused columns (diagnostics).
    """
    t = _time_step(lap, n_scales, t_max, rho)
    cols = _diffuse_scales(lap, mother_wavelets(lap, samples), n_scales, t, method,
                           zero_mean=True)
    if normalize:
        cols = _normalize_columns(cols, lap.mass, samples, apply_range=True)
    return WaveletDictionary(columns=cols, samples=samples, n_scales=n_scales,
                             t_max=t_max, t_step=t, rho=rho, normalized=normalize)


def build_heat_dictionary(lap: LaplacianPair, samples: SampleSet, n_scales: int = 25,
                          t_max: float = 1.0, rho: float = 1.0, normalize: bool = True,
                          method: str = "direct") -> HeatDictionary:
    """Heat-kernel baseline: diffuse raw indicators, skip the range normalization."""
    t = _time_step(lap, n_scales, t_max, rho)
    cols = _diffuse_scales(lap, indicator_columns(lap.n, samples), n_scales, t, method)
    if normalize:
        cols = _normalize_columns(cols, lap.mass, samples, apply_range=False)
    return HeatDictionary(columns=cols, samples=samples, n_scales=n_scales,
                          t_max=t_max, t_step=t, rho=rho, normalized=normalize)


def _time_step(lap, n_scales, t_max, rho):
    if n_scales < 1:
        raise ValueError(f"n_scales must be >= 1, got {n_scales}")
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if not 0 < rho <= 1:
        raise ValueError(f"rho must be in (0, 1], got {rho}")
    return rho * t_max / (n_scales * np.sqrt(lap.total_area))


def save_dictionary(d: _DictionaryBase, path) -> None:
    """Serialize a dictionary to the DWDICT01 binary format plus a .meta sidecar.

    Binary layout: magic, little-endian u64 n_vertices / n_columns / n_scales /
    n_samples, f64 t_max / rho / t_step, u64 sample indices, then the column
    matrix as column-major f64. The sidecar (same stem, .meta suffix) repeats
    the metadata as key=value lines.
    """
    if not d.normalized:
        raise ValueError("refusing to serialize an unnormalized dictionary")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<4Q", d.n_vertices, d.n_columns, d.n_scales, len(d.samples)))
        fh.write(struct.pack("<3d", d.t_max, d.rho, d.t_step))
        fh.write(d.samples.indices.astype("<u8").tobytes())
        fh.write(np.asfortranarray(d.columns).astype("<f8").tobytes(order="F"))
    kind = "heat" if isinstance(d, HeatDictionary) else "wavelet"
    meta = {
        "kind": kind,
        "n_vertices": d.n_vertices,
        "n_columns": d.n_columns,
        "n_scales": d.n_scales,
        "n_samples": len(d.samples),
        "t_max": repr(float(d.t_max)),
        "rho": repr(float(d.rho)),
        "t_step": repr(float(d.t_step)),
        "samples": ",".join(str(i) for i in d.samples.indices),
        "strategy": d.samples.strategy,
        "seed": d.samples.seed,
    }
    with open(path.with_suffix(".meta"), "w") as fh:
        for key, value in meta.items():
            fh.write(f"{key}={value}\n")


def load_dictionary(path) -> _DictionaryBase:
    """Read a DWDICT01 file back; the sidecar, when present, restores the kind
    and sampling provenance (otherwise samples are marked explicit)."""
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise DataError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        try:
            n_vertices, n_columns, n_scales, n_samples = struct.unpack("<4Q", fh.read(32))
            t_max, rho, t_step = struct.unpack("<3d", fh.read(24))
            idx = np.frombuffer(fh.read(8 * n_samples), dtype="<u8").astype(np.int64)
            data = np.frombuffer(fh.read(8 * n_vertices * n_columns), dtype="<f8")
        except (struct.error, ValueError) as exc:
            raise DataError(f"{path}: truncated dictionary file") from exc
    if idx.size != n_samples or data.size != n_vertices * n_columns:
        raise DataError(f"{path}: truncated dictionary file")
    columns = data.reshape((n_vertices, n_columns), order="F")

    kind, strategy, seed = "wavelet", "explicit", 0
    meta_path = path.with_suffix(".meta")
    if meta_path.exists():
        meta = dict(line.split("=", 1) for line in meta_path.read_text().splitlines() if "=" in line)
        kind = meta.get("kind", kind)
        strategy = meta.get("strategy", strategy)
        seed = int(meta.get("seed", seed))
    if strategy == "explicit":
        samples = explicit_samples(idx)
    else:
        samples = SampleSet(indices=idx, strategy=strategy, seed=seed)
    cls = HeatDictionary if kind == "heat" else WaveletDictionary
    return cls(columns=columns, samples=samples, n_scales=int(n_scales),
               t_max=t_max, rho=rho, t_step=t_step)
