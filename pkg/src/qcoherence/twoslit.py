"""Two-slit interference on a periodic lattice.

A wave packet sits on both slits of the first screen; the slit observable
has two eigenprojectors (left half and right half of the grid). Evolving
the state and its Lüders state freely and reading off position
probabilities gives the fringe pattern and the fringe-free sum of
single-slit patterns. With opposite polarization tags on the two slits the
two patterns coincide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources

import numpy as np

from .numlin import ValidationError
from .qobj import DensityMatrix, DiscreteObservable, luders_state, pure_state

MIN_GRID = 16


def default_config() -> dict:
    """Default demo parameters, read from the packaged ``twoslit.json``."""
    return json.loads(resources.files("qcoherence").joinpath("data/twoslit.json").read_text())


def kinetic_hamiltonian(N: int, mass: float = 1.0) -> np.ndarray:
    """``-(1/2m)`` times the periodic second-difference Laplacian (unit spacing, hbar = 1)."""
    eye = np.eye(N)
    lap = -2 * eye + np.roll(eye, 1, axis=0) + np.roll(eye, -1, axis=0)
    return -lap / (2 * mass)


def evolution(N: int, mass: float, time: float) -> np.ndarray:
    """``exp(-i H t)`` through the eigendecomposition of the lattice Hamiltonian."""
    vals, vecs = np.linalg.eigh(kinetic_hamiltonian(N, mass))
    return (vecs * np.exp(-1j * vals * time)) @ vecs.conj().T


def _bump(N: int, center: float, width: float) -> np.ndarray:
    x = np.arange(N)
    f = np.where(np.abs(x - center) < width / 2, np.cos(np.pi * (x - center) / width) ** 2, 0.0)
    return f / np.linalg.norm(f)


@dataclass(frozen=True, eq=False)
class TwoSlitModel:
    grid: int
    slit_separation: float
    slit_width: float
    mass: float
    time: float
    polarizers: bool
    slits: DiscreteObservable
    rho: DensityMatrix
    left: np.ndarray
    right: np.ndarray

    @property
    def tag_dim(self) -> int:
        return 2 if self.polarizers else 1

    @cached_property
    def spatial_evolution(self) -> np.ndarray:
        return evolution(self.grid, self.mass, self.time)

    @cached_property
    def evolution(self) -> np.ndarray:
        return np.kron(self.spatial_evolution, np.eye(self.tag_dim))

    def reduce(self, X) -> np.ndarray:
        """Trace out the polarization tag."""
        X = np.asarray(X)
        t = self.tag_dim
        return np.einsum("isjs->ij", X.reshape(self.grid, t, self.grid, t))

    @property
    def spatial_state(self) -> np.ndarray:
        return self.reduce(self.rho.matrix)

    @property
    def spatial_slits(self) -> DiscreteObservable:
        h = self.grid // 2
        P = np.diag([1.0] * h + [0.0] * (self.grid - h))
        return DiscreteObservable((-1.0, 1.0), (P, np.eye(self.grid) - P))


def build_model(
    grid: int = 64,
    slit_separation: float | None = None,
    slit_width: float | None = None,
    mass: float = 1.0,
    time: float = 16.0,
    polarizers: bool = False,
    seed: int | None = None,
) -> TwoSlitModel:
    """Symmetric two-slit wave packet on a ``grid``-cell ring.

    Slit centres sit at ``grid/2 -/+ slit_separation/2``; each packet is a
    cos^2 bump of full width ``slit_width``. With ``seed`` the right packet
    gets a random relative phase. With ``polarizers`` each slit attaches an
    orthogonal tag state to its packet.
    """
    if grid < MIN_GRID:
        raise ValidationError(f"grid must have at least {MIN_GRID} cells, got {grid}")
    sep = grid / 4 if slit_separation is None else float(slit_separation)
    width = grid / 16 if slit_width is None else float(slit_width)
    if width <= 1:
        raise ValidationError("slit width must exceed one cell")
    if sep < width:
        raise ValidationError("slits overlap")
    c = grid / 2
    cl, cr = c - sep / 2, c + sep / 2
    if cl - width / 2 < 0 or cr + width / 2 > grid - 1:
        raise ValidationError("slits do not fit inside the grid")

    left = _bump(grid, cl, width)
    right = _bump(grid, cr, width)
    phase = 1.0 if seed is None else np.exp(2j * np.pi * np.random.default_rng(seed).random())
    if polarizers:
        h, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        psi = np.kron(left, h) + phase * np.kron(right, v)
    else:
        psi = left + phase * right
    t = 2 if polarizers else 1
    h = grid // 2
    P = np.kron(np.diag([1.0] * h + [0.0] * (grid - h)), np.eye(t))
    slits = DiscreteObservable((-1.0, 1.0), (P, np.eye(grid * t) - P))
    return TwoSlitModel(grid, sep, width, mass, time, polarizers, slits, pure_state(psi), left, right)


def screen_pattern(model: TwoSlitModel, source: str = "coherent") -> np.ndarray:
    """Position probabilities on the grid after evolution.

    ``source`` is ``"coherent"`` (the slit state itself) or ``"luders"``
    (its Lüders state under the slit observable).
    """
    if source == "coherent":
        X = model.rho.matrix
    elif source == "luders":
        X = luders_state(model.slits, model.rho).matrix
    else:
        raise ValueError(f"source must be 'coherent' or 'luders', got {source!r}")
    U = model.evolution
    out = np.real(np.diag(model.reduce(U @ X @ U.conj().T)))
    return np.clip(out, 0.0, None)


def fringe_contrast(coherent, luders, frequency_bin: int | None = None) -> tuple[float, float]:
    """``(l1_gap, modulation)`` between two screen patterns.

    ``modulation`` is the magnitude of the discrete Fourier component of
    ``coherent - luders`` divided by the total intensity of ``coherent``.
    The component is ``frequency_bin`` if given, else the strongest non-DC
    one.
    """
    coherent = np.asarray(coherent, dtype=float)
    diff = coherent - np.asarray(luders, dtype=float)
    spec = np.abs(np.fft.rfft(diff))
    total = coherent.sum()
    if frequency_bin is None:
        amp = spec[1:].max() if len(spec) > 1 else 0.0
    else:
        amp = spec[frequency_bin]
    return float(np.abs(diff).sum()), float(amp / total)
