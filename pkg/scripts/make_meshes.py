#!/usr/bin/env python3
"""Write a set of synthetic test meshes (OFF) for playing with the CLI.

Usage: python scripts/make_meshes.py [out_dir]
"""
import sys
from pathlib import Path

from meshwavelets import write_off
from meshwavelets.synthetic import (bumpy_icosphere, icosphere,
                                    jittered_icosphere, stretched_icosphere,
                                    triangulated_grid)

out = Path(sys.argv[1] if len(sys.argv) > 1 else "meshes")
out.mkdir(parents=True, exist_ok=True)

meshes = {
    "icosphere_642.off": icosphere(3),
    "icosphere_2562.off": icosphere(4),
    "jittered_642.off": jittered_icosphere(3, seed=42),
    "stretched_642.off": stretched_icosphere(3, seed=42),
    "bumpy_642.off": bumpy_icosphere(3),
    "grid_patch.off": triangulated_grid(12, 12),
}
for name, mesh in meshes.items():
    write_off(mesh, out / name)
    print(f"wrote {out / name} ({mesh.n_vertices} vertices, {mesh.n_faces} faces)")
