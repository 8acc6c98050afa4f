"""The Gaussian smoothing semigroup at the fixed time 1/(8 pi), and its
two numerical inverses.

``smooth`` is the Fourier multiplier exp(-pi |xi|^2 / 2); under the
package's transform convention this is identical to the convolution
2^{d/2} (f ∗ exp(-2 pi |.|^2)), the dimension-d form of the phase-space
smoothing that links anti-Wick and Weyl symbols.

Desmoothing is ill-posed in general, and both inverses make that visible
instead of hiding it:

* ``desmooth_fourier`` divides by the multiplier on frequencies where the
  spectrum is above a relative threshold and zeroes the rest.  The report
  carries the residual  sup |smooth(result) - input|  recomputed from the
  returned field, so noise amplification shows up as a large residual
  rather than as silent garbage.

* ``desmooth_complex`` implements the constructive inverse for entire
  inputs with Gaussian strip decay: the strip integral

      kappa(xi) = 2^{d/2} \\int u(x+iy) exp(-2 pi (|y|^2 + i x.xi)) dx dy

  over |y| <= strip_halfwidth, followed by an inverse transform.  Strip
  evaluations fold the exp(-2 pi y^2) weight into each term's exponent
  before exponentiating, so e^{a y^2} growth never overflows on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np

from .core import Grid, SampledField, fourier, inverse_fourier, sample
from .gaussians import AnalyticGaussianSum, OverflowGuardError
from .gsnorm import e_space_divergent

__all__ = [
    "DesmoothReport",
    "ESpaceDivergenceError",
    "smooth",
    "smooth_by_convolution",
    "desmooth_fourier",
    "desmooth_complex",
]

TWO_PI = 2.0 * math.pi


class ESpaceDivergenceError(ValueError):
    """The strip integrand of the input grows; the construction diverges."""


@dataclass
class DesmoothReport:
    """Outcome of a heat-inverse run; the residual is recomputed, never
    estimated, so ill-posedness is visible in the report itself."""

    result: SampledField
    method: str
    residual: float
    cutoff_frequency: Optional[float] = None
    rel_threshold: Optional[float] = None
    strip_halfwidth: Optional[float] = None
    y_nodes: Optional[int] = None


def _multiplier(grid: Grid, sign: float) -> np.ndarray:
    """exp(sign * pi |xi|^2 / 2) on the frequency grid nodes."""
    nodes = grid.axis_nodes()
    sq = reduce(np.add.outer, [nodes**2] * grid.dim) if grid.dim > 1 \
        else nodes**2
    return np.exp(sign * 0.5 * math.pi * sq)


def smooth(f: SampledField) -> SampledField:
    """Heat smoothing as the frequency multiplier exp(-pi |xi|^2 / 2)."""
    spec = fourier(f)
    spec.values *= _multiplier(spec.grid, -1.0)
    return inverse_fourier(spec)


def smooth_by_convolution(f: SampledField) -> SampledField:
    """Direct quadrature of 2^{d/2} (f ∗ exp(-2 pi |.|^2)).

    Separable, so the dense Gaussian kernel is applied one axis at a time;
    this is the independent cross-check for the multiplier form.
    """
    nodes = f.grid.axis_nodes()
    diff = nodes[:, None] - nodes[None, :]
    kernel = math.sqrt(2.0) * np.exp(-TWO_PI * diff * diff) * f.grid.spacing
    out = f.values
    for axis in range(f.grid.dim):
        out = np.moveaxis(np.tensordot(kernel, out, axes=([1], [axis])),
                          0, axis)
    return SampledField(f.grid, out)


def desmooth_fourier(u: SampledField,
                     rel_threshold: float = 1e-12) -> DesmoothReport:
    """Regularized spectral division by the heat multiplier.

    Frequencies where |Fu| falls below rel_threshold * max|Fu| are zeroed;
    everything kept is divided by exp(-pi |xi|^2 / 2).  No attempt is made
    to decide well-posedness for the caller: the recomputed residual in
    the report is the verdict.
    """
    if not 0.0 < rel_threshold < 1.0:
        raise ValueError("rel_threshold must lie in (0, 1)")
    spec = fourier(u)
    mag = np.abs(spec.values)
    mask = mag >= rel_threshold * float(mag.max())

    nodes = spec.grid.axis_nodes()
    sq = reduce(np.add.outer, [nodes**2] * spec.grid.dim) \
        if spec.grid.dim > 1 else nodes**2
    with np.errstate(divide="ignore"):
        log_gain = np.where(mag > 0.0, np.log(mag), -np.inf) \
            + 0.5 * math.pi * sq
    peak = float(np.max(log_gain[mask])) if mask.any() else -math.inf
    if peak > 700.0:
        raise OverflowGuardError(
            f"regularized division overflows double precision "
            f"(max log magnitude {peak:.1f}); raise rel_threshold or "
            "shrink the frequency box")

    # exp() may overflow on frequencies the mask discards; the guard above
    # already vetted every kept node, so those lanes are dropped unseen.
    with np.errstate(over="ignore", invalid="ignore"):
        lifted = np.where(mask, spec.values * np.exp(0.5 * math.pi * sq), 0.0)
    phi = inverse_fourier(SampledField(spec.grid, lifted))

    axis_abs = np.abs(nodes)
    kept_cut = 0.0
    if mask.any():
        profile = reduce(np.maximum.outer, [axis_abs] * spec.grid.dim) \
            if spec.grid.dim > 1 else axis_abs
        kept_cut = float(np.max(profile[mask]))
    residual = float(np.max(np.abs(smooth(phi).values - u.values)))
    return DesmoothReport(phi, "fourier-regularized", residual,
                          cutoff_frequency=kept_cut,
                          rel_threshold=rel_threshold)


def desmooth_complex(u: AnalyticGaussianSum, g: Grid,
                     strip_halfwidth: float = 3.0,
                     y_nodes: int = 64) -> DesmoothReport:
    """Constructive heat inverse through the complex strip integral.

    The input must be numerically in the strip-integrable class: every
    axis width below 2 pi (checked before any evaluation; divergent inputs
    raise :class:`ESpaceDivergenceError`).  For each trapezoid node y the
    x-transform of u(. + iy) is taken with the strip weight folded in, the
    weighted slices are summed into kappa, and the result is the inverse
    transform of kappa.  Tensor-product terms factor axis by axis, so the
    cost stays one-dimensional per axis.
    """
    if u.dim != g.dim:
        raise ValueError(f"function dimension {u.dim} != grid dimension {g.dim}")
    if strip_halfwidth <= 0.0 or y_nodes < 4:
        raise ValueError("need a positive strip and at least 4 y nodes")
    u.require_gaussian_decay("complex-shift desmoothing")
    if e_space_divergent(u):
        raise ESpaceDivergenceError(
            "strip integrand grows (some axis width >= 2 pi); the "
            "complex-shift construction diverges for this input")

    ys = np.linspace(-strip_halfwidth, strip_halfwidth, y_nodes)
    wy = np.full(y_nodes, ys[1] - ys[0])
    wy[0] *= 0.5
    wy[-1] *= 0.5
    g1 = Grid(1, g.npoints, g.half_extent)
    xs = g1.axis_nodes()

    phi_vals = np.zeros(g.shape, dtype=complex)
    for term in u.terms:
        axis_phis = []
        for factor in term:
            kappa = np.zeros(g.npoints, dtype=complex)
            for y, w in zip(ys, wy):
                slab = factor.shifted_values(xs, y, -TWO_PI * y * y)
                kappa += (w * math.sqrt(2.0)) \
                    * fourier(SampledField(g1, slab)).values
            axis_phis.append(
                inverse_fourier(SampledField(g1.freq, kappa)).values)
        phi_vals += reduce(np.multiply.outer, axis_phis) \
            if g.dim > 1 else axis_phis[0]

    phi = SampledField(g, phi_vals)
    reference = sample(u, g, None)
    residual = float(np.max(np.abs(smooth(phi).values - reference.values)))
    return DesmoothReport(phi, "complex-shift", residual,
                          strip_halfwidth=strip_halfwidth, y_nodes=y_nodes)
