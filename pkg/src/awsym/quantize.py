"""Coherent states, anti-Wick operator assembly, and the kernel <-> Weyl
symbol transforms.

Conventions
-----------
Phase grids are 2n-dimensional with axes ordered (x_1..x_n, xi_1..xi_n).
The coherent states are

    Psi_X(u) = 2^{n/4} exp(-pi |u - x|^2) exp(2 i pi (u - x/2) . xi),

unit L^2 norm, X = (x, xi).  An anti-Wick operator with symbol F acts as
the phase-space superposition of the rank-one projectors |Psi_X><Psi_X|
weighted by F(X); with this normalization F == 1 assembles to the
identity, consistent with the smoothing relation between the anti-Wick
and Weyl symbols (no extra (2 pi)^{-n} factor; see the package README).

Half-step geometry
------------------
The Weyl transforms exchange K(x + t/2, x - t/2) with the symbol, so
kernels destined for them live on a grid with twice the resolution of the
phase-space position axis: midpoints land on even refined nodes and t/2
offsets land on refined nodes exactly, never interpolated.  Constructors
simply build on the grid they are given; pass ``phase_grid_position_axis
.refined()`` when the kernel will be transformed.  The transforms also
require the phase grid to be self-dual (N = 4 L^2, so the frequency nodes
coincide with the position nodes); that is what makes the t-slice
transform land exactly on the xi axis of the same grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product as iter_product
from typing import Sequence, Union

import numpy as np

from .core import Grid, GridMismatchError, SampledField, inner

__all__ = [
    "CoherentCombo",
    "DenseKernel",
    "AntiWickFromSymbol",
    "OperatorRep",
    "coherent_state",
    "kernel_from_coherent",
    "assemble_antiwick",
    "weyl_from_kernel",
    "kernel_from_weyl",
    "apply_operator",
    "apply",
    "identity_kernel",
    "position_grid_of",
    "require_self_dual",
]

PI = math.pi


# ---------------------------------------------------------------------------
# operator representations
# ---------------------------------------------------------------------------

@dataclass
class DenseKernel:
    """Sampled distribution kernel; entry (u, v) is K(x_u, x_v).

    The operator action is the quadrature (Af)(x_u) = sum_v M[u,v] f(x_v) h^n
    with h the kernel grid's own spacing, so the identity operator carries
    the matrix I / h^n.
    """

    grid: Grid
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        m = self.grid.size
        if self.matrix.shape != (m, m):
            raise ValueError(
                f"kernel matrix must be {m} x {m} for this grid, "
                f"got {self.matrix.shape}")


@dataclass(frozen=True)
class CoherentCombo:
    """Finite combination sum_j c_j |Psi_{X_j}><Psi_{Y_j}|."""

    terms: tuple[tuple[complex, tuple[float, ...], tuple[float, ...]], ...]

    def __post_init__(self):
        for c, x, y in self.terms:
            if len(x) != len(y) or len(x) % 2 != 0:
                raise ValueError(
                    "phase points need matching even lengths (x, xi)")

    @property
    def position_dim(self) -> int:
        if not self.terms:
            raise ValueError("empty combination carries no dimension")
        return len(self.terms[0][1]) // 2


@dataclass
class AntiWickFromSymbol:
    """Operator given by its anti-Wick symbol F sampled on a phase grid."""

    symbol: SampledField

    def __post_init__(self):
        if self.symbol.grid.dim % 2 != 0:
            raise ValueError("anti-Wick symbols live on 2n-dimensional grids")

    @property
    def position_dim(self) -> int:
        return self.symbol.grid.dim // 2


OperatorRep = Union[DenseKernel, CoherentCombo, AntiWickFromSymbol]


def position_grid_of(phase_grid: Grid) -> Grid:
    """Position-space grid with the same per-axis layout as a phase grid."""
    if phase_grid.dim % 2 != 0:
        raise ValueError("phase grids have even dimension")
    return Grid(phase_grid.dim // 2, phase_grid.npoints,
                phase_grid.half_extent)


def require_self_dual(grid: Grid, who: str) -> None:
    if not grid.is_self_dual():
        raise GridMismatchError(
            f"{who} needs a self-dual grid (spacing == 1/(2L), i.e. "
            f"N == 4 L^2); got N={grid.npoints}, L={grid.half_extent}")


# ---------------------------------------------------------------------------
# coherent states
# ---------------------------------------------------------------------------

def coherent_state(point: Sequence[float], g: Grid) -> SampledField:
    """Sample Psi_X on a position grid; unit norm up to truncation."""
    point = np.asarray(point, dtype=float)
    if point.shape != (2 * g.dim,):
        raise ValueError(
            f"phase point needs {2 * g.dim} coordinates for a dim-{g.dim} grid")
    xs, xis = point[:g.dim], point[g.dim:]
    nodes = g.axis_nodes()
    axis_vals = []
    for j in range(g.dim):
        u = nodes - xs[j]
        axis_vals.append(2.0 ** 0.25 * np.exp(-PI * u * u)
                         * np.exp(2j * PI * (u + xs[j] / 2.0) * xis[j]))
    vals = reduce(np.multiply.outer, axis_vals) if g.dim > 1 else axis_vals[0]
    return SampledField(g, vals)


def kernel_from_coherent(combo: CoherentCombo, pos_grid: Grid) -> DenseKernel:
    """Densify sum_j c_j Psi_{X_j}(x_u) conj(Psi_{Y_j}(x_v))."""
    m = pos_grid.size
    mat = np.zeros((m, m), dtype=complex)
    for c, x, y in combo.terms:
        left = coherent_state(x, pos_grid).values.ravel()
        right = coherent_state(y, pos_grid).values.ravel()
        mat += c * np.outer(left, np.conj(right))
    return DenseKernel(pos_grid, mat)


def identity_kernel(pos_grid: Grid) -> DenseKernel:
    return DenseKernel(pos_grid,
                       np.eye(pos_grid.size) / pos_grid.cell_volume)


# ---------------------------------------------------------------------------
# anti-Wick assembly
# ---------------------------------------------------------------------------

def assemble_antiwick(op: AntiWickFromSymbol, pos_grid: Grid) -> DenseKernel:
    """Quadrature of the anti-Wick superposition into a dense kernel.

    M[u, v] = sum_X F(X) Psi_X(x_u) conj(Psi_X(x_v)) dX  over the phase
    grid carrying F.  The xi sum is a Fourier sum in the difference
    x_u - x_v only, so it is evaluated once per difference and the
    remaining x sum is contracted diagonal by diagonal; rows therefore
    reduce deterministically.
    """
    phase = op.symbol.grid
    n = op.position_dim
    if pos_grid.dim != n:
        raise GridMismatchError(
            f"position grid dim {pos_grid.dim} incompatible with the "
            f"dim-{phase.dim} phase grid of the symbol")

    np_axis = phase.npoints
    hx_phase = phase.spacing
    hxi = phase.spacing
    pos_nodes = pos_grid.axis_nodes()
    phase_nodes = phase.axis_nodes()
    npos = pos_grid.npoints

    fvals = op.symbol.values.reshape((np_axis,) * (2 * n))

    # xi sums: G[x_vec, m_vec] with t = m * h_pos, m = -(N-1) .. N-1
    diffs = np.arange(-(npos - 1), npos) * pos_grid.spacing
    phase_mat = np.exp(2j * PI * np.outer(phase_nodes, diffs)) * hxi
    g_tab = fvals
    for _ in range(n):
        # contract the leading xi axis (axis n of the remaining block)
        g_tab = np.tensordot(g_tab, phase_mat, axes=([n], [0]))
    # g_tab axes: (x_1..x_n, m_1..m_n)

    w_mat = np.exp(-PI * (pos_nodes[:, None] - phase_nodes[None, :]) ** 2)
    scale = 2.0 ** (n / 2.0) * hx_phase**n

    mat = np.zeros((pos_grid.size, pos_grid.size), dtype=complex)
    ndiff = 2 * npos - 1
    for m_vec in iter_product(range(ndiff), repeat=n):
        offsets = [m - (npos - 1) for m in m_vec]
        block = g_tab[(slice(None),) * n + tuple(m_vec)]
        idx_ranges = []
        for j, off in enumerate(offsets):
            lo = max(0, -off)
            hi = npos - max(0, off)
            vs = np.arange(lo, hi)
            idx_ranges.append(vs)
            pair = w_mat[vs + off, :] * w_mat[vs, :]
            block = np.moveaxis(
                np.tensordot(pair, block, axes=([1], [j])), 0, j)
        vals = scale * block
        umesh = np.meshgrid(*[vs + off for vs, off in zip(idx_ranges, offsets)],
                            indexing="ij")
        vmesh = np.meshgrid(*idx_ranges, indexing="ij")
        rows = np.ravel_multi_index([m.ravel() for m in umesh],
                                    (npos,) * n) if n > 1 \
            else umesh[0].ravel()
        cols = np.ravel_multi_index([m.ravel() for m in vmesh],
                                    (npos,) * n) if n > 1 \
            else vmesh[0].ravel()
        mat[rows, cols] = vals.ravel()
    return DenseKernel(pos_grid, mat)


# ---------------------------------------------------------------------------
# Weyl transforms
# ---------------------------------------------------------------------------

def _centered_fft_lastaxes(vals: np.ndarray, n: int, spacing: float,
                           inverse: bool = False) -> np.ndarray:
    """Continuous-convention transform along the trailing n axes."""
    axes = tuple(range(vals.ndim - n, vals.ndim))
    shifted = np.fft.ifftshift(vals, axes=axes)
    if inverse:
        out = np.fft.ifftn(shifted, axes=axes)
        weight = (spacing * vals.shape[-1]) ** n   # (2 Lf)^n
    else:
        out = np.fft.fftn(shifted, axes=axes)
        weight = spacing**n
    return np.fft.fftshift(out, axes=axes) * weight


def weyl_from_kernel(kernel: DenseKernel) -> SampledField:
    """Weyl symbol of a kernel by transforming the midpoint slices.

    The kernel grid must be the 2x refinement of the phase-space position
    axis so x + t/2 and x - t/2 are exact node reads (out-of-box reads are
    zero: kernels are taken as literal samples, not periodized), and the
    induced phase grid must be self-dual so the t transform lands on the
    xi nodes.
    """
    gk = kernel.grid
    n = gk.dim
    if gk.npoints % 2 != 0:
        raise GridMismatchError("kernel grid must have an even point count")
    np_axis = gk.npoints // 2
    phase = Grid(2 * n, np_axis, gk.half_extent)
    require_self_dual(Grid(1, np_axis, gk.half_extent), "weyl_from_kernel")

    karr = kernel.matrix.reshape((gk.npoints,) * (2 * n))
    js = np.arange(np_axis)
    offs = np.arange(np_axis) - np_axis // 2

    # gather K(x + t/2, x - t/2): per axis, refined indices 2j +- o
    idx_u = []
    idx_v = []
    valid = np.ones((np_axis,) * (2 * n), dtype=bool)
    for j_axis in range(n):
        shape = [1] * (2 * n)
        shape[j_axis] = np_axis
        jj = js.reshape(shape)
        shape = [1] * (2 * n)
        shape[n + j_axis] = np_axis
        oo = offs.reshape(shape)
        up = 2 * jj + oo
        vp = 2 * jj - oo
        valid = valid & (up >= 0) & (up < gk.npoints) \
            & (vp >= 0) & (vp < gk.npoints)
        idx_u.append(np.clip(up, 0, gk.npoints - 1))
        idx_v.append(np.clip(vp, 0, gk.npoints - 1))
    slices = karr[tuple(np.broadcast_arrays(*(idx_u + idx_v)))]
    slices = np.where(valid, slices, 0.0)

    t_spacing = phase.spacing
    sigma = _centered_fft_lastaxes(slices, n, t_spacing)
    return SampledField(phase, sigma)


def kernel_from_weyl(symbol: SampledField) -> DenseKernel:
    """Kernel on the refined grid from a Weyl symbol (exact right inverse).

    Writes K(x + t/2, x - t/2) = (inverse transform over xi of the symbol
    slice at midpoint x) for every refined node pair, the midpoint values
    coming from the trigonometric interpolation of the symbol along x
    (exact at the sample nodes, spectrally accurate between them).
    Differences beyond |t| > L are outside what the xi grid can encode and
    are set to zero, matching the zero-extension read of the forward map.
    Only position dimension one is supported.
    """
    phase = symbol.grid
    if phase.dim != 2:
        raise NotImplementedError(
            "kernel_from_weyl is implemented for 1-d position space "
            "(2-d phase space) only")
    np_axis = phase.npoints
    length = phase.half_extent
    require_self_dual(Grid(1, np_axis, length), "kernel_from_weyl")

    nk = 2 * np_axis
    hk = length / np_axis           # refined spacing = h_phase / 2
    nodes = phase.axis_nodes()      # also the xi and eta nodes (self-dual)
    hxi = phase.spacing

    # trig coefficients along x: sigma(x_j, xi_k) = sum_r C[r,k] e^{2 i pi x_j eta_r}
    coeff = np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(symbol.values, axes=0), axis=0),
        axes=0) / np_axis

    deltas = np.arange(-(nk - 1), nk)             # t = delta * hk
    e_t = np.exp(2j * PI * np.outer(nodes, deltas * hk)) * hxi
    r_tab = coeff @ e_t                            # R[eta, delta]
    mids = -length + 0.5 * hk * np.arange(2 * nk - 1)
    p_tab = np.exp(2j * PI * np.outer(mids, nodes))  # P[s, r]
    t_tab = p_tab @ r_tab                             # T[s, delta]

    uu = np.arange(nk)[:, None]
    vv = np.arange(nk)[None, :]
    mat = t_tab[uu + vv, uu - vv + (nk - 1)]
    mat[np.abs(uu - vv) > np_axis] = 0.0
    return DenseKernel(Grid(1, nk, length), mat)


# ---------------------------------------------------------------------------
# operator application
# ---------------------------------------------------------------------------

def apply_operator(op: OperatorRep, f: SampledField) -> SampledField:
    """Apply any representation to a sampled function.

    Coherent combinations act through inner products without ever being
    densified; symbols are assembled on the field's grid first.
    """
    if isinstance(op, DenseKernel):
        if op.grid != f.grid:
            raise GridMismatchError(
                f"kernel grid {op.grid} does not match field grid {f.grid}")
        out = op.matrix @ f.values.ravel() * op.grid.cell_volume
        return SampledField(f.grid, out.reshape(f.grid.shape))
    if isinstance(op, CoherentCombo):
        out = np.zeros(f.grid.shape, dtype=complex)
        for c, x, y in op.terms:
            weight = inner(f, coherent_state(y, f.grid))
            out += c * weight * coherent_state(x, f.grid).values
        return SampledField(f.grid, out)
    if isinstance(op, AntiWickFromSymbol):
        return apply_operator(assemble_antiwick(op, f.grid), f)
    raise TypeError(f"not an operator representation: {type(op)!r}")


apply = apply_operator
