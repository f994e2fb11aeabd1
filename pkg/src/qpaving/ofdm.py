"""Lattice OFDM with Gaussian pulses over a doubly dispersive channel.

Symbols ``c_mu`` ride on atoms ``g_mu = pi(mu) phi`` for ``mu`` in a
transmission lattice of density below one.  The receiver correlates with
``f_nu = pi(nu) gamma / vol(L°)``, where ``gamma`` is the canonical dual
window of the (dense) adjoint lattice ``L°``; biorthogonality then gives
``<g_mu, f_nu> = delta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainTruncationError, ParseError
from .formats import _load_json, lattice_from_dict, lattice_to_dict
from .gabor.dual import solve_dual_window
from .gabor.functions import SampledFunction, gaussian_func, make_grid
from .lattice import Lattice, adjoint_lattice, hexagonal_lattice
from .theta import DEFAULT_POLICY, TruncationPolicy

PULSE_MARGIN = 7.0
MAX_SYMBOLS = 2_500


@dataclass(frozen=True)
class Tap:
    delay: float
    doppler: float
    gain: complex


@dataclass(frozen=True)
class ChannelModel:
    """Delay-Doppler tap sum ``H s = sum gain * M_doppler T_delay s``."""

    taps: tuple[Tap, ...]

    def __post_init__(self):
        if not self.taps:
            raise ValueError("channel needs at least one tap")
        for t in self.taps:
            if not all(math.isfinite(v) for v in (t.delay, t.doppler, abs(t.gain))):
                raise ValueError("tap parameters must be finite")

    @classmethod
    def from_taps(cls, taps, normalize: bool = True) -> "ChannelModel":
        taps = [t if isinstance(t, Tap) else Tap(float(t[0]), float(t[1]), complex(t[2]))
                for t in taps]
        if normalize:
            e = math.sqrt(sum(abs(t.gain) ** 2 for t in taps))
            if e == 0:
                raise ValueError("channel gains are all zero")
            taps = [Tap(t.delay, t.doppler, t.gain / e) for t in taps]
        return cls(tuple(taps))

    @property
    def energy(self) -> float:
        return sum(abs(t.gain) ** 2 for t in self.taps)

    @property
    def spread(self) -> tuple[float, float]:
        return (max(abs(t.delay) for t in self.taps), max(abs(t.doppler) for t in self.taps))


def identity_channel() -> ChannelModel:
    return ChannelModel((Tap(0.0, 0.0, 1.0),))


def gaussian_spread_channel(max_delay: float = 0.3, max_doppler: float = 0.3, n: int = 5,
                            width: float = 0.5) -> ChannelModel:
    """``n x n`` taps on a symmetric delay-Doppler grid with Gaussian gains.

    ``width`` is the Gaussian standard deviation relative to the spread.
    """
    if n < 1:
        raise ValueError("n must be positive")
    d = np.linspace(-max_delay, max_delay, n) if n > 1 else np.zeros(1)
    v = np.linspace(-max_doppler, max_doppler, n) if n > 1 else np.zeros(1)
    taps = []
    for tau in d:
        for nu in v:
            r2 = ((tau / max_delay) ** 2 if max_delay else 0) + ((nu / max_doppler) ** 2 if max_doppler else 0)
            taps.append(Tap(float(tau), float(nu), complex(math.exp(-r2 / (2 * width ** 2)))))
    return ChannelModel.from_taps(taps)


@dataclass(frozen=True, eq=False)
class OFDMConfig:
    lattice: Lattice
    K: int = 4
    step: float = 1.0 / 32

    def __post_init__(self):
        if self.lattice.dim != 2:
            raise ValueError("OFDM lattices are 2-D")
        if not self.lattice.density < 1:
            raise ValueError(f"transmission lattice needs density < 1, got {self.lattice.density:g}")
        if self.K < 2:
            raise ValueError("K must be >= 2")
        if (2 * self.K + 1) ** 2 > MAX_SYMBOLS:
            from .errors import ResourceCapError
            raise ResourceCapError(f"K={self.K} gives more than {MAX_SYMBOLS} symbols",
                                   cap=MAX_SYMBOLS, needed=(2 * self.K + 1) ** 2)

    @property
    def indices(self) -> np.ndarray:
        r = np.arange(-self.K, self.K + 1)
        k, l = np.meshgrid(r, r, indexing="ij")
        return np.column_stack([k.ravel(), l.ravel()])

    @property
    def points(self) -> np.ndarray:
        return self.indices @ self.lattice.basis.T

    @property
    def interior(self) -> np.ndarray:
        idx = self.indices
        return np.all(np.abs(idx) <= self.K - 1, axis=1)

    def grid(self) -> np.ndarray:
        P = self.points
        extent = float(np.max(np.abs(P[:, 0]))) + PULSE_MARGIN
        t = make_grid(self.step, extent)
        nyquist = 0.5 / self.step
        if float(np.max(np.abs(P[:, 1]))) + 4.0 > nyquist:
            raise DomainTruncationError("frequency extent of the symbols exceeds the grid's Nyquist rate")
        return t


def rectangular_config(K: int = 4, density: float = 0.5, aspect: float = 1.0) -> OFDMConfig:
    B = np.diag([math.sqrt(aspect / density), math.sqrt(1 / (aspect * density))])
    return OFDMConfig(Lattice(B, f"rectangular({aspect:g})"), K)


def hexagonal_config(K: int = 4, density: float = 0.5) -> OFDMConfig:
    return OFDMConfig(hexagonal_lattice(density), K)


def atoms(points: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Rows ``pi(mu) phi`` sampled on ``t``."""
    return (np.exp(2j * math.pi * np.outer(points[:, 1], t))
            * gaussian_func(t[None, :] - points[:, 0:1]))


def synthesize(cfg: OFDMConfig, data, t: np.ndarray | None = None) -> SampledFunction:
    """``s = sum c_mu pi(mu) phi`` on the sample grid."""
    t = cfg.grid() if t is None else t
    c = np.asarray(data, dtype=complex).ravel()
    if c.shape != (len(cfg.indices),):
        raise ValueError(f"data must have {(2 * cfg.K + 1) ** 2} entries")
    s = c @ atoms(cfg.points, t)
    out = SampledFunction(s, t, None, "ofdm")
    out.check_decay(1e-12)
    return out


def _channel_matrix_rows(ch: ChannelModel, X: np.ndarray, t: np.ndarray) -> np.ndarray:
    h = t[1] - t[0]
    xi = np.fft.fftfreq(len(t), h)
    F = np.fft.fft(X, axis=-1)
    out = np.zeros_like(X, dtype=complex)
    for tap in ch.taps:
        shifted = np.fft.ifft(F * np.exp(-2j * math.pi * xi * tap.delay), axis=-1)
        out += tap.gain * np.exp(2j * math.pi * tap.doppler * t) * shifted
    return out


def apply_channel(ch: ChannelModel, s: SampledFunction) -> SampledFunction:
    """Delay then Doppler-modulate each tap copy of ``s`` and add them up."""
    span = s.t[-1] - s.t[0]
    if max(abs(tp.delay) for tp in ch.taps) > 0.25 * span:
        raise DomainTruncationError("tap delay is beyond the sample grid")
    return s.with_samples(_channel_matrix_rows(ch, s.samples, s.t), "received")


@dataclass(frozen=True, eq=False)
class Receiver:
    cfg: OFDMConfig
    t: np.ndarray
    filters: np.ndarray  # rows f_nu
    dual: SampledFunction
    cg_residual: float


def receiver(cfg: OFDMConfig, p: TruncationPolicy = DEFAULT_POLICY,
             cg_tol: float = 1e-10) -> Receiver:
    """Dual-window receiver filters on the configuration's grid."""
    t = cfg.grid()
    La = adjoint_lattice(cfg.lattice)
    res = solve_dual_window(La, p, cg_tol, t)
    gamma = res.window.samples
    h = t[1] - t[0]
    xi = np.fft.fftfreq(len(t), h)
    G = np.fft.fft(gamma)
    P = cfg.points
    shifted = np.fft.ifft(G[None, :] * np.exp(-2j * math.pi * np.outer(P[:, 0], xi)), axis=1)
    filt = np.exp(2j * math.pi * np.outer(P[:, 1], t)) * shifted / La.covolume
    return Receiver(cfg, t, filt, res.window, res.residual)


def equalize(rx: Receiver, r: SampledFunction) -> np.ndarray:
    """``d_nu = <r, f_nu>`` by quadrature, in the order of ``cfg.indices``."""
    h = r.h
    return h * (rx.filters.conj() @ r.samples)


@dataclass(frozen=True, eq=False)
class InterferenceReport:
    matrix: np.ndarray
    indices: np.ndarray
    interior: np.ndarray
    diagonal_power: float
    offdiag_power: float
    sir_db: float
    lattice_id: str = ""
    cg_residual: float = math.nan

    def rows(self) -> list[dict]:
        out = []
        idx = self.indices
        for i in np.flatnonzero(self.interior):
            for j in range(len(idx)):
                v = self.matrix[i, j]
                out.append({"mu_k": int(idx[j, 0]), "mu_l": int(idx[j, 1]),
                            "nu_k": int(idx[i, 0]), "nu_l": int(idx[i, 1]),
                            "re": float(v.real), "im": float(v.imag)})
        return out


def interference_report(cfg: OFDMConfig, ch: ChannelModel, rx: Receiver | None = None,
                        p: TruncationPolicy = DEFAULT_POLICY) -> InterferenceReport:
    """Matrix ``<H g_mu, f_nu>`` (rows nu, columns mu) and its SIR over interior rows."""
    rx = rx if rx is not None else receiver(cfg, p)
    t = rx.t
    h = t[1] - t[0]
    G = atoms(cfg.points, t)
    HG = _channel_matrix_rows(ch, G, t)
    M = h * (rx.filters.conj() @ HG.T)
    inner = cfg.interior
    rows = np.flatnonzero(inner)
    P2 = np.abs(M[rows]) ** 2
    on = np.zeros_like(P2, dtype=bool)
    on[np.arange(len(rows)), rows] = True
    dp = float(np.sum(P2[on]))
    op = float(np.sum(P2[~on]))
    sir = math.inf if op == 0 else 10 * math.log10(dp / op)
    return InterferenceReport(M, cfg.indices, inner, dp, op, sir, cfg.lattice.name, rx.cg_residual)


# ---------------------------------------------------------------------------
# scenarios

@dataclass
class Scenario:
    cfg: OFDMConfig
    channel: ChannelModel
    name: str = ""
    extra: dict = field(default_factory=dict)


def _scenario_lattice(obj, path):
    lat = obj.get("lattice")
    density = obj.get("density", 0.5)
    if isinstance(lat, str):
        key = lat.lower()
        if key in ("hexagonal", "hex"):
            return hexagonal_lattice(density)
        if key in ("rectangular", "square", "rect"):
            aspect = float(obj.get("aspect", 1.0))
            return rectangular_config(2, density, aspect).lattice
        raise ParseError(f"unknown lattice name {lat!r}", path)
    if isinstance(lat, dict):
        return lattice_from_dict(lat, path)
    raise ParseError("scenario needs a 'lattice' name or descriptor", path)


def parse_scenario(text: str, path=None) -> Scenario:
    """JSON ``{"lattice": ..., "K": int, "taps": [[delay, doppler, re, im], ...]}``.

    ``"taps": "gaussian"`` (optionally with ``"spread": [max_delay, max_doppler]``)
    selects the default Gaussian-spread channel.
    """
    obj = _load_json(text, path)
    if not isinstance(obj, dict):
        raise ParseError("scenario must be a JSON object", path)
    L = _scenario_lattice(obj, path)
    K = obj.get("K", 4)
    if not isinstance(K, int) or isinstance(K, bool):
        raise ParseError("'K' must be an integer", path)
    taps = obj.get("taps", "gaussian")
    if taps == "gaussian":
        spread = obj.get("spread", [0.3, 0.3])
        ch = gaussian_spread_channel(float(spread[0]), float(spread[1]))
    elif isinstance(taps, list) and taps:
        parsed = []
        for i, tp in enumerate(taps):
            if not (isinstance(tp, list) and len(tp) in (3, 4)
                    and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in tp)):
                raise ParseError(f"tap {i} must be [delay, doppler, re] or [delay, doppler, re, im]",
                                 path)
            g = complex(tp[2], tp[3] if len(tp) == 4 else 0.0)
            parsed.append(Tap(float(tp[0]), float(tp[1]), g))
        ch = ChannelModel.from_taps(parsed, normalize=bool(obj.get("normalize", True)))
    else:
        raise ParseError("'taps' must be a non-empty list or \"gaussian\"", path)
    try:
        cfg = OFDMConfig(L, K)
    except ValueError as exc:
        raise ParseError(str(exc), path) from exc
    return Scenario(cfg, ch, str(obj.get("name", "")))


def read_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text(), str(path))


def scenario_to_json(sc: Scenario) -> str:
    return json.dumps({
        "name": sc.name, "lattice": lattice_to_dict(sc.cfg.lattice), "K": sc.cfg.K,
        "taps": [[t.delay, t.doppler, t.gain.real, t.gain.imag] for t in sc.channel.taps],
        "normalize": False}, indent=2) + "\n"


def compare_geometries(ch: ChannelModel, K: int = 4, density: float = 0.5,
                       p: TruncationPolicy = DEFAULT_POLICY) -> dict[str, InterferenceReport]:
    """SIR of the rectangular (square) and hexagonal transmission lattices."""
    out = {}
    for cfg in (rectangular_config(K, density), hexagonal_config(K, density)):
        out[cfg.lattice.name] = interference_report(cfg, ch, p=p)
    return out
