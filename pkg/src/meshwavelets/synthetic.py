"""Synthetic test meshes: icospheres, jittered and deformed variants, grids."""
from __future__ import annotations

import numpy as np

from .mesh import TriangleMesh


def icosahedron() -> TriangleMesh:
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    v = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=np.float64)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    f = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ], dtype=np.int64)
    return TriangleMesh(vertices=v, faces=f)


def _subdivide(v: np.ndarray, f: np.ndarray):
    verts = list(map(tuple, v))
    midpoint = {}

    def mid(a, b):
        key = (a, b) if a < b else (b, a)
        if key not in midpoint:
            verts.append(tuple((np.asarray(verts[a]) + np.asarray(verts[b])) / 2.0))
            midpoint[key] = len(verts) - 1
        return midpoint[key]

    faces = []
    for a, b, c in f:
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
    return np.array(verts), np.array(faces, dtype=np.int64)


def icosphere(subdivisions: int = 3) -> TriangleMesh:
    """Unit-radius icosphere; vertex counts are 12, 42, 162, 642, 2562, 10242, ..."""
    mesh = icosahedron()
    v, f = mesh.vertices, mesh.faces
    for _ in range(subdivisions):
        v, f = _subdivide(v, f)
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
    return TriangleMesh(vertices=v, faces=f)


def jittered_icosphere(subdivisions: int = 3, seed: int = 0,
                       radial: float = 0.01, tangential: float = 0.002) -> TriangleMesh:
    """Icosphere with small random radial and tangential vertex noise.

    The jitter breaks the icosahedral symmetry and the eigenvalue
    multiplicities, giving a generic mesh (simple spectrum, no vertex pair
    related by an isometry fixing a sample set).
    """
    base = icosphere(subdivisions)
    rng = np.random.default_rng(seed)
    v = base.vertices * (1.0 + radial * rng.standard_normal((base.n_vertices, 1)))
    v = v + tangential * rng.standard_normal(v.shape)
    return TriangleMesh(vertices=v, faces=base.faces)


def stretched_icosphere(subdivisions: int = 3, seed: int = 0,
                        stretch: float = 1.8, shear: float = 0.4) -> TriangleMesh:
    """Smoothly deformed icosphere sharing the jittered icosphere's connectivity.

    Stretches the z axis and bends the x axis with a smooth tanh profile; the
    vertex order matches ``jittered_icosphere(subdivisions, seed)``, so the
    identity is the ground-truth correspondence of the pair.
    """
    base = jittered_icosphere(subdivisions, seed=seed)
    v = np.array(base.vertices)
    v[:, 0] *= 1.0 + shear * np.tanh(2.0 * v[:, 2])
    v[:, 2] *= stretch
    return TriangleMesh(vertices=v, faces=base.faces)


def bumpy_icosphere(subdivisions: int = 3, amplitude: float = 0.2,
                    width: float = 0.15) -> TriangleMesh:
    """Icosphere with a few smooth radial bumps (a mild near-isometry)."""
    base = icosphere(subdivisions)
    v = base.vertices
    centers = np.array([[0, 0, 1.0], [1.0, 0, 0], [0, -1.0, 0], [-0.7, 0.7, 0]])
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    amp = np.zeros(base.n_vertices)
    for c in centers:
        amp += amplitude * np.exp(-((v - c) ** 2).sum(axis=1) / width)
    return TriangleMesh(vertices=v * (1.0 + amp)[:, None], faces=base.faces)


def triangulated_grid(nx: int = 8, ny: int = 8, width: float = 1.0,
                      height: float = 1.0) -> TriangleMesh:
    """Planar rectangle triangulation, (nx+1)*(ny+1) vertices; has a boundary."""
    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    v = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)])
    faces = []
    for i in range(nx):
        for j in range(ny):
            a = i * (ny + 1) + j
            b = (i + 1) * (ny + 1) + j
            faces += [[a, b, a + 1], [b, b + 1, a + 1]]
    return TriangleMesh(vertices=v, faces=np.array(faces, dtype=np.int64))


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a (not necessarily unit) axis."""
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    K = np.array([[0, -axis[2], axis[1]],
                  [axis[2], 0, -axis[0]],
                  [-axis[1], axis[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)


def rigid_transform(mesh: TriangleMesh, rotation: np.ndarray | None = None,
                    translation=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Apply a rotation and translation to the vertex coordinates."""
    v = mesh.vertices
    if rotation is not None:
        v = v @ np.asarray(rotation).T
    return TriangleMesh(vertices=v + np.asarray(translation, dtype=np.float64),
                        faces=mesh.faces)
