"""Experiment drivers: seeded end-to-end runs writing CSV curves and summaries.

Configs are plain key=value files with a strict key set per experiment kind;
unknown keys are rejected. Every CSV starts with a versioned schema tag line
so golden-file comparisons stay stable.
"""
from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from .errors import DataError
from .evaluation import curve, geodesic_errors
from .laplacian import build_laplacian
from .matching import (build_gamma, identity_map, load_pointmap,
                       reconstruct_delta_map, save_pointmap, transfer_pointmap)
from .mesh import load_mesh, normalize_unit_area
from .sampling import explicit_samples, perturb_samples, sample
from .solve import DEFAULT_EIG_CAP, generalized_eigs
from .spectral import (dictionary_error, eigenbasis_selfmatch_map,
                       fmap_to_pointmap, ground_truth_wavelets,
                       gt_functional_map)
from .wavelets import build_dictionary, build_heat_dictionary, pair_rhos

_COMMON_KEYS = {"experiment", "out_dir", "seed"}

_SCHEMAS = {
    "selfmatch": {"mesh": str, "samples": int, "scales": int, "tmax": float,
                  "strategy": str, "baseline": str, "n_thresholds": int,
                  "max_threshold": float},
    "pairmatch": {"mesh_source": str, "mesh_target": str, "landmarks_source": str,
                  "landmarks_target": str, "gt_map": str, "samples": int,
                  "scales": int, "tmax": float, "rho": str, "dictionary": str,
                  "baseline": str, "n_thresholds": int, "max_threshold": float},
    "wavelets": {"mesh": str, "samples": int, "scales": int, "tmax": float,
                 "truncation": int, "time_mode": str, "strategy": str},
    "timing": {"mesh": str, "samples": int, "scales": int, "tmax": float,
               "eigenpairs": int, "eig_cap": int},
    "sampling": {"mesh": str, "sample_counts": list, "strategies": list,
                 "scales": int, "tmax": float},
    "noise": {"mesh": str, "mesh_target": str, "samples": int,
              "displace_counts": list, "noise_radii": list, "scales_list": list,
              "tmax": float},
    "tmax": {"mesh": str, "mesh_target": str, "tmax_values": list,
             "samples": int, "scales": int, "strategy": str},
}

_DEFAULTS = {
    "seed": 0,
    "samples": 6,
    "scales": 25,
    "tmax": 1.0,
    "strategy": "fps-euclidean",
    "n_thresholds": 100,
    "max_threshold": 0.5,
    "landmarks_source": "",
    "landmarks_target": "",
    "gt_map": "",
    "rho": "auto",
    "dictionary": "wavelet",
    "baseline": "lbo",
    "truncation": 300,
    "time_mode": "linear",
    "eigenpairs": 300,
    "eig_cap": 20000,
    "sample_counts": [2, 4, 6],
    "strategies": ["fps-euclidean", "fps-geodesic", "random"],
    "mesh_target": "",
    "displace_counts": [1, 2, 3, 5],
    "noise_radii": [0.01, 0.0325, 0.055, 0.0775, 0.1],
    "scales_list": [1, 2, 3, 5, 25, 50],
    "tmax_values": [0.25, 0.5, 1.0, 2.0, 4.0],
}

# kind-specific defaults that differ from the shared table
_KIND_DEFAULTS = {
    "noise": {"samples": 10, "displace_counts": [1, 2, 3, 5, 10]},
    "wavelets": {"samples": 10},
    "timing": {"samples": 10},
}


def parse_config(path) -> dict:
    """Parse a key=value config file, applying defaults and strict key checks."""
    raw = {}
    for num, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise DataError(f"{path}:{num}: expected key=value, got {text!r}")
        key, value = (part.strip() for part in text.split("=", 1))
        if key in raw:
            raise DataError(f"{path}:{num}: duplicate key {key!r}")
        raw[key] = value
    return resolve_config(raw, source=str(path))


def resolve_config(raw: dict, source: str = "<config>") -> dict:
    kind = raw.get("experiment")
    if kind not in _SCHEMAS:
        raise DataError(f"{source}: missing or unknown experiment kind "
                        f"{kind!r}; expected one of {sorted(_SCHEMAS)}")
    schema = _SCHEMAS[kind]
    unknown = set(raw) - set(schema) - _COMMON_KEYS
    if unknown:
        raise DataError(f"{source}: unknown config keys: {sorted(unknown)}")
    if "out_dir" not in raw:
        raise DataError(f"{source}: missing required key 'out_dir'")

    config = {"experiment": kind, "out_dir": str(raw["out_dir"]),
              "seed": _convert("seed", raw.get("seed", _DEFAULTS["seed"]), int, source)}
    defaults = {**_DEFAULTS, **_KIND_DEFAULTS.get(kind, {})}
    for key, typ in schema.items():
        if key in raw:
            config[key] = _convert(key, raw[key], typ, source)
        elif key in defaults:
            config[key] = defaults[key]
        else:
            raise DataError(f"{source}: missing required key {key!r}")
    return config


def _convert(key, value, typ, source):
    if isinstance(value, str):
        try:
            if typ is list:
                items = [v.strip() for v in value.split(",") if v.strip()]
                return [_number(v) for v in items] if items and _is_number(items[0]) else items
            if typ is int:
                return int(value)
            if typ is float:
                return float(value)
        except ValueError:
            raise DataError(f"{source}: bad value for {key!r}: {value!r}") from None
        return value
    if typ is list and isinstance(value, (list, tuple)):
        return list(value)
    return typ(value)


def _is_number(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def _number(text):
    value = float(text)
    return int(value) if value == int(value) and "." not in text and "e" not in text.lower() else value


def run_experiment(config) -> dict:
    """Run the experiment described by a config path or pre-parsed dict.

    Writes CSV and summary files into ``out_dir`` and returns the summary
    values (plus output paths) as a dict.
    """
    if not isinstance(config, dict):
        config = parse_config(config)
    out_dir = Path(config["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    runner = {
        "selfmatch": _run_selfmatch,
        "pairmatch": _run_pairmatch,
        "wavelets": _run_wavelets,
        "timing": _run_timing,
        "sampling": _run_sampling,
        "noise": _run_noise,
        "tmax": _run_tmax,
    }[config["experiment"]]
    start = time.perf_counter()
    summary = runner(config, out_dir)
    summary["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    _write_summary(out_dir / "summary.txt", config, summary)
    summary["out_dir"] = str(out_dir)
    return summary


def _load_unit_mesh(path):
    if not Path(path).exists():
        raise DataError(f"mesh file not found: {path}")
    mesh = load_mesh(path)
    unit, area = normalize_unit_area(mesh)
    return unit, area


def _write_csv(path, schema, header, rows):
    with open(path, "w") as fh:
        fh.write(f"# schema={schema}/1\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_summary(path, config, summary):
    with open(path, "w") as fh:
        for key, value in config.items():
            fh.write(f"config.{key}={value}\n")
        for key, value in summary.items():
            fh.write(f"{key}={value}\n")


def _curve_csv(out_dir, evalcurve):
    path = out_dir / "curve.csv"
    _write_csv(path, "curve", ["threshold", "fraction"],
               zip(evalcurve.thresholds.tolist(), evalcurve.fractions.tolist()))
    return path


def _run_selfmatch(config, out_dir):
    mesh, _ = _load_unit_mesh(config["mesh"])
    lap = build_laplacian(mesh)
    samples = sample(mesh, config["samples"], strategy=config["strategy"],
                     seed=config["seed"])
    dictionary = build_dictionary(lap, samples, n_scales=config["scales"],
                                  t_max=config["tmax"])
    pm = reconstruct_delta_map(dictionary, build_gamma(len(samples), config["scales"]))
    gt = identity_map(mesh.n_vertices)
    errors = geodesic_errors(pm, gt, mesh)
    ec = curve(errors, n_thresholds=config["n_thresholds"],
               max_threshold=config["max_threshold"])
    _curve_csv(out_dir, ec)
    save_pointmap(pm, out_dir / "map.txt")
    summary = {"mean_error": ec.mean_error, "auc_025": ec.auc_025,
               "samples": ",".join(map(str, samples.indices))}
    # eigenbasis baseline at the same budget: |S| + 1 basis functions
    if config["baseline"] == "lbo" and lap.n <= DEFAULT_EIG_CAP:
        k = len(samples) + 1
        spectrum = generalized_eigs(lap.mass, lap.stiffness, k=k)
        base_errors = geodesic_errors(eigenbasis_selfmatch_map(spectrum, k), gt, mesh)
        base = curve(base_errors, n_thresholds=config["n_thresholds"],
                     max_threshold=config["max_threshold"])
        summary["baseline_mean_error"] = base.mean_error
        summary["baseline_auc_025"] = base.auc_025
    elif config["baseline"] == "lbo":
        summary["baseline"] = "skipped-over-eigensolver-cap"
    return summary


def _resolve_pair_samples(config, mesh_src, mesh_dst):
    if config["landmarks_source"]:
        src = explicit_samples(np.loadtxt(config["landmarks_source"], dtype=np.int64, ndmin=1))
        dst = explicit_samples(np.loadtxt(config["landmarks_target"], dtype=np.int64, ndmin=1))
        if len(src) != len(dst):
            raise DataError("landmark files have different lengths")
        return src, dst
    # FPS on the source; identical indices on the target (meshes in
    # vertex-to-vertex correspondence, e.g. synthetic pairs)
    if mesh_dst.n_vertices != mesh_src.n_vertices:
        raise DataError("landmark files are required when the meshes are not "
                        "in vertex-to-vertex correspondence")
    src = sample(mesh_src, config["samples"], seed=config["seed"])
    return src, src


def _pair_dictionaries(config, kind, lap_src, lap_dst, area_src, area_dst,
                       samples_src, samples_dst):
    if config["rho"] == "auto":
        rho_src, rho_dst = pair_rhos(area_src, area_dst)
    else:
        rho_src = rho_dst = float(config["rho"])
    build = build_dictionary if kind == "wavelet" else build_heat_dictionary
    d_src = build(lap_src, samples_src, n_scales=config["scales"],
                  t_max=config["tmax"], rho=rho_src)
    d_dst = build(lap_dst, samples_dst, n_scales=config["scales"],
                  t_max=config["tmax"], rho=rho_dst)
    return d_src, d_dst, rho_src, rho_dst


def _run_pairmatch(config, out_dir):
    if not config["mesh_source"] or not config["mesh_target"]:
        raise DataError("pairmatch requires both mesh_source and mesh_target")
    mesh_src, area_src = _load_unit_mesh(config["mesh_source"])
    mesh_dst, area_dst = _load_unit_mesh(config["mesh_target"])
    lap_src, lap_dst = build_laplacian(mesh_src), build_laplacian(mesh_dst)
    samples_src, samples_dst = _resolve_pair_samples(config, mesh_src, mesh_dst)
    d_src, d_dst, rho_src, rho_dst = _pair_dictionaries(
        config, config["dictionary"], lap_src, lap_dst, area_src, area_dst,
        samples_src, samples_dst)
    pm = transfer_pointmap(d_src, d_dst)
    if config["gt_map"]:
        gt = load_pointmap(config["gt_map"], target_size=mesh_dst.n_vertices)
        if gt.source_size != mesh_src.n_vertices:
            raise DataError("gt_map length does not match the source mesh")
    else:
        if mesh_dst.n_vertices != mesh_src.n_vertices:
            raise DataError("gt_map is required when the meshes differ in size")
        gt = identity_map(mesh_src.n_vertices)
    errors = geodesic_errors(pm, gt, mesh_dst)
    ec = curve(errors, n_thresholds=config["n_thresholds"],
               max_threshold=config["max_threshold"])
    _curve_csv(out_dir, ec)
    save_pointmap(pm, out_dir / "map.txt")
    summary = {"mean_error": ec.mean_error, "auc_025": ec.auc_025,
               "rho_source": rho_src, "rho_target": rho_dst}
    # eigenbasis baseline: ground-truth functional map over |S| + 1 basis
    # functions, converted to a point map by nearest neighbors
    if config["baseline"] == "lbo" and max(lap_src.n, lap_dst.n) <= DEFAULT_EIG_CAP:
        k = len(samples_src) + 1
        spec_src = generalized_eigs(lap_src.mass, lap_src.stiffness, k=k)
        spec_dst = generalized_eigs(lap_dst.mass, lap_dst.stiffness, k=k)
        fmap = gt_functional_map(spec_src, spec_dst, lap_dst.mass, gt, k=k)
        pm_base = fmap_to_pointmap(fmap, spec_src, spec_dst)
        base = curve(geodesic_errors(pm_base, gt, mesh_dst),
                     n_thresholds=config["n_thresholds"],
                     max_threshold=config["max_threshold"])
        summary["baseline_mean_error"] = base.mean_error
        summary["baseline_auc_025"] = base.auc_025
    elif config["baseline"] == "lbo":
        summary["baseline"] = "skipped-over-eigensolver-cap"
    return summary


def _run_wavelets(config, out_dir):
    mesh, _ = _load_unit_mesh(config["mesh"])
    lap = build_laplacian(mesh)
    samples = sample(mesh, config["samples"], strategy=config["strategy"],
                     seed=config["seed"])

    t0 = time.perf_counter()
    ours = build_dictionary(lap, samples, n_scales=config["scales"], t_max=config["tmax"])
    t_ours = time.perf_counter() - t0

    t0 = time.perf_counter()
    heat = build_heat_dictionary(lap, samples, n_scales=config["scales"],
                                 t_max=config["tmax"])
    t_heat = time.perf_counter() - t0

    spectrum = generalized_eigs(lap.mass, lap.stiffness, k="all")
    reference = ground_truth_wavelets(spectrum, lap, ours.t_step, config["scales"],
                                      samples, mode=config["time_mode"])

    t0 = time.perf_counter()
    trunc_spectrum = generalized_eigs(lap.mass, lap.stiffness,
                                      k=min(config["truncation"], lap.n))
    truncated = ground_truth_wavelets(trunc_spectrum, lap, ours.t_step,
                                      config["scales"], samples,
                                      mode=config["time_mode"],
                                      truncation=config["truncation"])
    t_truncated = time.perf_counter() - t0

    err_ours = dictionary_error(ours, reference, lap.mass)
    err_trunc = dictionary_error(truncated, reference, lap.mass)
    err_heat = dictionary_error(heat, reference, lap.mass)

    rows = []
    for i, scale in enumerate(reference.scales):
        rows.append([scale, reference.times[i],
                     err_ours.l2_per_scale[i], err_ours.linf_per_scale[i],
                     err_trunc.l2_per_scale[i], err_trunc.linf_per_scale[i],
                     err_heat.l2_per_scale[i], err_heat.linf_per_scale[i]])
    _write_csv(out_dir / "wavelet_errors.csv", "wavelet-errors",
               ["scale", "time", "l2_ours", "linf_ours", "l2_truncated",
                "linf_truncated", "l2_heat", "linf_heat"], rows)
    return {"l2_ours": err_ours.l2_average, "linf_ours": err_ours.linf_average,
            "l2_truncated": err_trunc.l2_average, "linf_truncated": err_trunc.linf_average,
            "l2_heat": err_heat.l2_average, "linf_heat": err_heat.linf_average,
            "seconds_ours": round(t_ours, 4), "seconds_heat": round(t_heat, 4),
            "seconds_truncated": round(t_truncated, 4)}


def _run_timing(config, out_dir):
    mesh, _ = _load_unit_mesh(config["mesh"])
    lap = build_laplacian(mesh)
    samples = sample(mesh, config["samples"], seed=config["seed"])

    t0 = time.perf_counter()
    ours = build_dictionary(lap, samples, n_scales=config["scales"], t_max=config["tmax"])
    t_ours = time.perf_counter() - t0

    # truncated-spectral baseline: restricted eigensolve plus evaluation of
    # the spectral Mexican hats at the same times
    t0 = time.perf_counter()
    spectrum = generalized_eigs(lap.mass, lap.stiffness,
                                k=min(config["eigenpairs"], lap.n),
                                max_n=config["eig_cap"])
    ground_truth_wavelets(spectrum, lap, ours.t_step, config["scales"], samples,
                          mode="linear", truncation=config["eigenpairs"])
    t_baseline = time.perf_counter() - t0

    speedup = t_baseline / t_ours
    _write_csv(out_dir / "timing.csv", "timing",
               ["method", "seconds"],
               [["ours", round(t_ours, 4)], ["truncated-spectral", round(t_baseline, 4)]])
    return {"n_vertices": mesh.n_vertices, "seconds_ours": round(t_ours, 4),
            "seconds_baseline": round(t_baseline, 4), "speedup": round(speedup, 2)}


def _run_sampling(config, out_dir):
    mesh, _ = _load_unit_mesh(config["mesh"])
    lap = build_laplacian(mesh)
    gamma_cache = {}
    rows = []
    for strategy in config["strategies"]:
        for n_samp in config["sample_counts"]:
            samples = sample(mesh, int(n_samp), strategy=strategy, seed=config["seed"])
            dictionary = build_dictionary(lap, samples, n_scales=config["scales"],
                                          t_max=config["tmax"])
            gamma = gamma_cache.setdefault(len(samples),
                                           build_gamma(len(samples), config["scales"]))
            pm = reconstruct_delta_map(dictionary, gamma)
            errors = geodesic_errors(pm, identity_map(mesh.n_vertices), mesh)
            ec = curve(errors)
            rows.append([strategy, int(n_samp), ec.mean_error, ec.auc_025])
    _write_csv(out_dir / "sampling.csv", "sampling",
               ["strategy", "n_samples", "mean_error", "auc_025"], rows)
    return {"rows": len(rows)}


def _transfer_errors(lap_src, lap_dst, mesh_dst, samples_src, samples_dst,
                     scales, tmax):
    d_src = build_dictionary(lap_src, samples_src, n_scales=scales, t_max=tmax)
    d_dst = build_dictionary(lap_dst, samples_dst, n_scales=scales, t_max=tmax)
    pm = transfer_pointmap(d_src, d_dst)
    return geodesic_errors(pm, identity_map(mesh_dst.n_vertices), mesh_dst)


def _run_noise(config, out_dir):
    mesh_src, _ = _load_unit_mesh(config["mesh"])
    if config["mesh_target"]:
        mesh_dst, _ = _load_unit_mesh(config["mesh_target"])
        if mesh_dst.n_vertices != mesh_src.n_vertices:
            raise DataError("noise experiment needs meshes in vertex correspondence")
    else:
        mesh_dst = mesh_src
    lap_src, lap_dst = build_laplacian(mesh_src), build_laplacian(mesh_dst)
    base = sample(mesh_src, config["samples"], seed=config["seed"])
    rows = []
    for n_scales in config["scales_list"]:
        for n_disp in config["displace_counts"]:
            for radius in config["noise_radii"]:
                noisy = perturb_samples(mesh_src, base, float(radius), int(n_disp),
                                        seed=config["seed"])
                errors = _transfer_errors(lap_src, lap_dst, mesh_dst, noisy, base,
                                          int(n_scales), config["tmax"])
                ec = curve(errors)
                rows.append([int(n_scales), int(n_disp), float(radius),
                             ec.mean_error, ec.auc_025])
    _write_csv(out_dir / "noise.csv", "noise",
               ["n_scales", "n_displaced", "noise_radius", "mean_error", "auc_025"],
               rows)
    # radii are relative to the largest geodesic distance from each displaced
    # sample (per-sample maxima, not an all-pairs diameter)
    return {"rows": len(rows), "radius_reference": "per-sample geodesic maximum"}


def _run_tmax(config, out_dir):
    mesh_src, _ = _load_unit_mesh(config["mesh"])
    lap_src = build_laplacian(mesh_src)
    samples = sample(mesh_src, config["samples"], strategy=config["strategy"],
                     seed=config["seed"])
    pair = bool(config["mesh_target"])
    if pair:
        mesh_dst, _ = _load_unit_mesh(config["mesh_target"])
        if mesh_dst.n_vertices != mesh_src.n_vertices:
            raise DataError("tmax experiment needs meshes in vertex correspondence")
        lap_dst = build_laplacian(mesh_dst)
    rows = []
    best = (None, np.inf)
    for tmax in config["tmax_values"]:
        if pair:
            errors = _transfer_errors(lap_src, lap_dst, mesh_dst, samples, samples,
                                      config["scales"], float(tmax))
        else:
            dictionary = build_dictionary(lap_src, samples, n_scales=config["scales"],
                                          t_max=float(tmax))
            pm = reconstruct_delta_map(dictionary,
                                       build_gamma(len(samples), config["scales"]))
            errors = geodesic_errors(pm, identity_map(mesh_src.n_vertices), mesh_src)
        ec = curve(errors)
        rows.append([float(tmax), ec.mean_error, ec.auc_025])
        if ec.mean_error < best[1]:
            best = (float(tmax), ec.mean_error)
    _write_csv(out_dir / "tmax.csv", "tmax",
               ["tmax", "mean_error", "auc_025"], rows)
    return {"best_tmax": best[0], "best_mean_error": best[1]}
