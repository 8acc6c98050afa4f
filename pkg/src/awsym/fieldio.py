"""File formats: field manifests, raw binaries, CSV export, and the JSON
mini-formats for Gaussian-sum functions and operator descriptions.

A sampled field on disk is a pair of files: a JSON manifest

    {"dim": d, "N": n, "L": l, "layout": "row-major",
     "dtype": "complex128-le", "data": "<relative path>"}

and a raw binary of interleaved little-endian IEEE-754 doubles (re, im) in
row-major node order.  Dense kernels use the same scheme plus a "shape"
entry [N^n, N^n] and kind tag.  Analytic objects (Gaussian sums, coherent
combinations) are stored as explicit JSON rather than opaque binaries, so
run inputs stay reviewable.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .core import Grid, SampledField, make_grid
from .gaussians import AnalyticGaussianSum, GaussFactor
from .quantize import (AntiWickFromSymbol, CoherentCombo, DenseKernel,
                       OperatorRep)

__all__ = [
    "save_field", "load_field", "export_csv",
    "save_kernel", "load_kernel",
    "combo_to_obj", "combo_from_obj",
    "gaussian_to_obj", "gaussian_from_obj",
    "operator_from_obj", "grid_from_obj", "grid_to_obj",
    "sha256_file", "write_json",
]

_FIELD_DTYPE = "complex128-le"


def write_json(path: Path, obj) -> None:
    """Deterministic JSON: sorted keys, no whitespace drift, newline-terminated."""
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def grid_to_obj(grid: Grid) -> dict:
    return {"dim": grid.dim, "N": grid.npoints, "L": grid.half_extent}


def grid_from_obj(obj: dict) -> Grid:
    return make_grid(int(obj["dim"]), int(obj["N"]), float(obj["L"]))


def _write_binary(path: Path, values: np.ndarray) -> None:
    Path(path).write_bytes(np.ascontiguousarray(values,
                                                dtype="<c16").tobytes())


def _read_binary(path: Path, count: int) -> np.ndarray:
    raw = np.frombuffer(Path(path).read_bytes(), dtype="<c16")
    if raw.size != count:
        raise ValueError(
            f"{path}: expected {count} complex samples, found {raw.size}")
    return raw.astype(complex)


def save_field(f: SampledField, manifest_path) -> dict:
    """Write manifest + binary next to each other; returns the manifest."""
    manifest_path = Path(manifest_path)
    data_name = manifest_path.stem + ".bin"
    manifest = {
        "dim": f.grid.dim,
        "N": f.grid.npoints,
        "L": f.grid.half_extent,
        "layout": "row-major",
        "dtype": _FIELD_DTYPE,
        "data": data_name,
    }
    _write_binary(manifest_path.parent / data_name, f.values)
    write_json(manifest_path, manifest)
    return manifest


def load_field(manifest_path) -> SampledField:
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("dtype") != _FIELD_DTYPE:
        raise ValueError(f"unsupported dtype {manifest.get('dtype')!r}")
    if manifest.get("layout") != "row-major":
        raise ValueError(f"unsupported layout {manifest.get('layout')!r}")
    grid = make_grid(int(manifest["dim"]), int(manifest["N"]),
                     float(manifest["L"]))
    values = _read_binary(manifest_path.parent / manifest["data"], grid.size)
    return SampledField(grid, values.reshape(grid.shape))


def export_csv(f: SampledField, path) -> None:
    """Node coordinates + re + im, for dim <= 2 only."""
    if f.grid.dim > 2:
        raise ValueError("CSV export is limited to dim <= 2")
    path = Path(path)
    nodes = [float(x) for x in f.grid.axis_nodes()]
    lines = []
    if f.grid.dim == 1:
        lines.append("x,re,im")
        for x, v in zip(nodes, f.values):
            lines.append(f"{x!r},{float(v.real)!r},{float(v.imag)!r}")
    else:
        lines.append("x1,x2,re,im")
        for i, x1 in enumerate(nodes):
            for j, x2 in enumerate(nodes):
                v = f.values[i, j]
                lines.append(
                    f"{x1!r},{x2!r},{float(v.real)!r},{float(v.imag)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_kernel(k: DenseKernel, manifest_path) -> dict:
    manifest_path = Path(manifest_path)
    data_name = manifest_path.stem + ".bin"
    manifest = {
        "kind": "dense-kernel",
        "dim": k.grid.dim,
        "N": k.grid.npoints,
        "L": k.grid.half_extent,
        "shape": list(k.matrix.shape),
        "layout": "row-major",
        "dtype": _FIELD_DTYPE,
        "data": data_name,
    }
    _write_binary(manifest_path.parent / data_name, k.matrix)
    write_json(manifest_path, manifest)
    return manifest


def load_kernel(manifest_path) -> DenseKernel:
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("kind") != "dense-kernel":
        raise ValueError("manifest does not describe a dense kernel")
    grid = Grid(int(manifest["dim"]), int(manifest["N"]),
                float(manifest["L"]))
    m = grid.size
    values = _read_binary(manifest_path.parent / manifest["data"], m * m)
    return DenseKernel(grid, values.reshape(m, m))


# -- analytic objects --------------------------------------------------------

def gaussian_to_obj(u: AnalyticGaussianSum) -> dict:
    return {
        "dim": u.dim,
        "terms": [
            {"factors": [
                {"coeff_re": f.coeff.real, "coeff_im": f.coeff.imag,
                 "power": f.power, "width": f.width, "center": f.center}
                for f in term]}
            for term in u.terms],
    }


def gaussian_from_obj(obj: dict) -> AnalyticGaussianSum:
    dim = int(obj["dim"])
    terms = []
    for term in obj["terms"]:
        factors = tuple(
            GaussFactor(complex(float(f.get("coeff_re", 1.0)),
                                float(f.get("coeff_im", 0.0))),
                        int(f.get("power", 0)),
                        float(f["width"]),
                        float(f.get("center", 0.0)))
            for f in term["factors"])
        terms.append(factors)
    return AnalyticGaussianSum(dim, tuple(terms))


def combo_to_obj(combo: CoherentCombo) -> list:
    return [{"c_re": complex(c).real, "c_im": complex(c).imag,
             "X": list(x), "Y": list(y)} for c, x, y in combo.terms]


def combo_from_obj(obj: list) -> CoherentCombo:
    terms = tuple(
        (complex(float(t.get("c_re", 1.0)), float(t.get("c_im", 0.0))),
         tuple(float(v) for v in t["X"]),
         tuple(float(v) for v in t["Y"]))
        for t in obj)
    return CoherentCombo(terms)


def operator_from_obj(obj: dict, base_dir: Path) -> OperatorRep:
    """Operator description used by the CLI.

    Recognized "type" values:
      * "antiwick-symbol":   {"symbol": <gaussian obj>, "grid": {...}}
                             or {"field": "<manifest path>"}
      * "coherent-combo":    {"terms": [{c_re, c_im, X, Y}, ...]}
      * "dense-kernel":      {"manifest": "<manifest path>"}
    """
    from .core import sample  # local import to avoid cycle at module load

    kind = obj.get("type")
    if kind == "antiwick-symbol":
        if "field" in obj:
            return AntiWickFromSymbol(load_field(base_dir / obj["field"]))
        grid = grid_from_obj(obj["grid"])
        symbol = gaussian_from_obj(obj["symbol"])
        return AntiWickFromSymbol(sample(symbol, grid))
    if kind == "coherent-combo":
        return combo_from_obj(obj["terms"])
    if kind == "dense-kernel":
        return load_kernel(base_dir / obj["manifest"])
    raise ValueError(f"unknown operator type {kind!r}")
