"""File formats: JSON for geometry, CSV for samples and timing tables.

All writers go through text builders so that a file and a stream carry
byte-identical content.  Floats are serialized with repr, the shortest
form that parses back to the same double.  Line endings are always a
single newline character.
"""

import json
import math

import numpy as np

from .geometry import Polytope, Simplex, float_factorial
from .triangulate import Decomposition
from .samplers import SampleBatch
from .vertices import VertexSet


def _fmt(x: float) -> str:
    return repr(float(x))


def _matrix(rows) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.asarray(rows)]


# ---------------------------------------------------------------- geometry


def polytope_json_text(P: Polytope) -> str:
    obj = {"n": P.n, "A": _matrix(P.A), "b": [float(v) for v in P.b]}
    return json.dumps(obj, indent=2) + "\n"


def vertices_json_text(V: VertexSet) -> str:
    obj = {"n": V.n, "vertices": _matrix(V.vertices)}
    return json.dumps(obj, indent=2) + "\n"


def load_polytope(path):
    """Read a geometry file: H-rep gives a Polytope, V-rep a VertexSet.

    H-rep: {"n": int, "A": [[...]], "b": [...]}
    V-rep: {"n": int, "vertices": [[...]]}
    """
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValueError(f"{path}: expected a JSON object with an 'n' field")
    n = int(obj["n"])
    if "A" in obj and "b" in obj:
        P = Polytope(np.asarray(obj["A"], dtype=np.float64),
                     np.asarray(obj["b"], dtype=np.float64))
        if P.n != n:
            raise ValueError(f"{path}: 'n' is {n} but A has {P.n} columns")
        return P
    if "vertices" in obj:
        verts = np.asarray(obj["vertices"], dtype=np.float64)
        if verts.ndim != 2 or verts.shape[1] != n:
            raise ValueError(f"{path}: vertices must be rows of length {n}")
        return VertexSet(verts, dedup_eps=0.0)
    raise ValueError(f"{path}: need either 'A' and 'b' or 'vertices'")


def save_polytope(P: Polytope, path) -> None:
    write_text(path, polytope_json_text(P))


def save_vertices(V: VertexSet, path) -> None:
    write_text(path, vertices_json_text(V))


# ----------------------------------------------------------- decomposition


def decomposition_json_text(D: Decomposition) -> str:
    obj = {
        "n": D.n,
        "total_volume": float(D.total_volume),
        "dropped_slivers": int(D.dropped_slivers),
        "simplices": [_matrix(S.vertices) for S in D.simplices],
        "vertex_indices": [[int(i) for i in row] for row in D.vertex_indices],
        "volumes": [float(v) for v in D.volumes],
        "weights": [float(w) for w in D.weights],
    }
    return json.dumps(obj, indent=2) + "\n"


def save_decomposition(D: Decomposition, path) -> None:
    write_text(path, decomposition_json_text(D))


def load_decomposition(path) -> Decomposition:
    """Rebuild a decomposition from its vertex lists.

    Volumes and weights are recomputed from the geometry and must match
    the stored values to 1e-9 relative, else the file is rejected.
    """
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    for key in ("n", "simplices", "volumes", "weights", "total_volume"):
        if key not in obj:
            raise ValueError(f"{path}: missing field {key!r}")
    n = int(obj["n"])
    sim_verts = np.asarray(obj["simplices"], dtype=np.float64)
    if sim_verts.ndim != 3 or sim_verts.shape[1:] != (n + 1, n):
        raise ValueError(f"{path}: simplices must have shape (K, {n + 1}, {n})")
    K = sim_verts.shape[0]
    idx = np.asarray(obj.get("vertex_indices", [[-1] * (n + 1)] * K), dtype=np.int64)
    simplices = tuple(Simplex(sim_verts[k]) for k in range(K))
    volumes = np.array([S.abs_det for S in simplices]) / float_factorial(n)
    total = math.fsum(volumes)
    stored_total = float(obj["total_volume"])
    if abs(total - stored_total) > 1e-9 * max(abs(total), abs(stored_total)):
        raise ValueError(
            f"{path}: stored total volume {stored_total} does not match "
            f"the geometry ({total})"
        )
    edges = np.ascontiguousarray(
        np.swapaxes(sim_verts[:, 1:, :] - sim_verts[:, :1, :], 1, 2)
    )
    return Decomposition(
        simplices=simplices,
        volumes=volumes,
        weights=volumes / total,
        total_volume=total,
        dropped_slivers=int(obj.get("dropped_slivers", 0)),
        vertex_indices=idx,
        origin_stack=np.ascontiguousarray(sim_verts[:, 0, :]),
        edge_stack=edges,
    )


# ----------------------------------------------------------------- samples


def samples_csv_text(batch: SampleBatch) -> str:
    n = batch.n
    lines = [",".join([f"x{i + 1}" for i in range(n)] + ["simplex_index"])]
    for row, k in zip(batch.points, batch.simplex_index):
        lines.append(",".join([_fmt(v) for v in row] + [str(int(k))]))
    return "\n".join(lines) + "\n"


def save_samples(batch: SampleBatch, path) -> None:
    write_text(path, samples_csv_text(batch))


def load_samples(path):
    """Read a samples CSV back into (points, simplex_index)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh.read().split("\n") if ln]
    if not lines:
        raise ValueError(f"{path}: empty samples file")
    header = lines[0].split(",")
    if header[-1] != "simplex_index" or len(header) < 2:
        raise ValueError(f"{path}: unexpected samples header {lines[0]!r}")
    n = len(header) - 1
    if header[:n] != [f"x{i + 1}" for i in range(n)]:
        raise ValueError(f"{path}: unexpected samples header {lines[0]!r}")
    pts = np.empty((len(lines) - 1, n))
    idx = np.empty(len(lines) - 1, dtype=np.int64)
    for i, ln in enumerate(lines[1:]):
        cells = ln.split(",")
        if len(cells) != n + 1:
            raise ValueError(f"{path}: row {i + 2} has {len(cells)} fields")
        pts[i] = [float(c) for c in cells[:n]]
        idx[i] = int(cells[n])
    return pts, idx


# ------------------------------------------------------------- flat tables


def csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if v is None:
                cells.append("")
            elif isinstance(v, bool):
                cells.append(str(v).lower())
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            elif isinstance(v, float):
                cells.append(_fmt(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def save_csv(header: list[str], rows: list[list], path) -> None:
    write_text(path, csv_text(header, rows))


def load_csv(path):
    """Read a flat CSV into (header, rows of strings)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh.read().split("\n") if ln]
    if not lines:
        raise ValueError(f"{path}: empty CSV")
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
