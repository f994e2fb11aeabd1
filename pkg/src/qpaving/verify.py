"""Identity suite behind ``qpaving verify``.

Each check returns a :class:`Check` with the observed residual and the
threshold it must stay under.  Random inputs come from a fixed seed so the
suite is deterministic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .lattice import Lattice, square_lattice
from .theta import GaussWidth, TruncationPolicy, symplectic_psf_check


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float
    method: str
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)

    def as_row(self) -> dict:
        return {"check": self.name, "residual": self.residual, "threshold": self.threshold,
                "method": self.method, "error_bound": self.threshold,
                "status": "pass" if self.passed else "FAIL", "seconds": round(self.seconds, 3)}


COLUMNS = ("check", "residual", "threshold", "method", "error_bound", "status", "seconds")


def random_lattice(rng, density: float, name: str = "random") -> Lattice:
    """Random 2-D lattice with a well-conditioned basis, rescaled to ``density``."""
    while True:
        B = rng.normal(size=(2, 2))
        if abs(np.linalg.det(B)) > 0.3 and np.linalg.cond(B) < 6:
            return Lattice(B, name).with_density(density)


def square_oracle(n_terms: int = 6) -> tuple[float, float]:
    """Published bounds of the square lattice at density 2 from 1-D sums.

    The adjoint lattice is sqrt(2) Z^2, so ``Fhat`` factorises into 1-D sums
    of ``exp(-2 pi n^2)``; the minimum sits at the alternating-sign point.
    """
    n = range(-n_terms, n_terms + 1)
    th = math.fsum(math.exp(-2 * math.pi * k * k) for k in n)
    alt = math.fsum((-1) ** k * math.exp(-2 * math.pi * k * k) for k in n)
    return 2 * alt * alt, 2 * th * th


def check_oracle(seed: int = 0) -> Check:
    from .gabor import ambiguity_gauss, gaussian, stft_many

    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    Z = rng.uniform(-3, 3, size=(100, 2))
    phi = gaussian()
    dev = float(np.max(np.abs(stft_many(phi, phi, Z) - ambiguity_gauss(Z))))
    return Check("ambiguity_vs_quadrature", dev, 1e-10, "quadrature", time.perf_counter() - t0)


def check_gram_phase(seed: int = 1) -> Check:
    from .gabor import gaussian, gram_entries, stft_many, tf_shifted_gaussian

    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    P = rng.uniform(-2, 2, size=(10, 2))
    Q = rng.uniform(-2, 2, size=(10, 2))
    phi = gaussian()
    G = gram_entries(P, Q)
    worst = 0.0
    for i in range(10):
        # <pi(Q_i) phi, pi(P_i) phi> = V_phi(pi(Q_i) phi)(P_i)
        q = stft_many(tf_shifted_gaussian(Q[i]), phi, P[i:i + 1])[0]
        worst = max(worst, abs(G[i, i] - q))
    return Check("gram_phase_vs_quadrature", worst, 1e-10, "quadrature", time.perf_counter() - t0)


def check_psf(tol: float = 1e-9, seed: int = 2) -> Check:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    p = TruncationPolicy(min(tol / 10, 1e-12))
    worst = 0.0
    for _ in range(10):
        L = random_lattice(rng, rng.uniform(1.5, 4))
        z = rng.uniform(-1, 1, size=2)
        for a in (0.5, 1.0, 2.0):
            worst = max(worst, symplectic_psf_check(L, z, GaussWidth(a), p))
    return Check("symplectic_poisson", worst, tol, "theta", time.perf_counter() - t0)


def check_figa(seed: int = 3) -> Check:
    from .gabor import figa_residual, gaussian, hermite

    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    phi, h1 = gaussian(), hermite(1)
    worst = figa_residual(phi, phi, phi, phi, square_lattice(1.0))
    for _ in range(5):
        L = random_lattice(rng, 2.0)
        worst = max(worst, figa_residual(h1, phi, phi, phi, L),
                    figa_residual(h1, h1, phi, h1, L))
    return Check("figa", worst, 1e-8, "quadrature", time.perf_counter() - t0)


def check_moyal() -> Check:
    from .gabor import gaussian, hermite, moyal_wigner_check

    t0 = time.perf_counter()
    phi, h1 = gaussian(), hermite(1)
    a = moyal_wigner_check(phi, phi)
    b = moyal_wigner_check(h1, phi, phi, phi)
    worst = max(a.residual, a.norm_residual, b.residual)
    return Check("moyal", worst, 1e-8, "quadrature", time.perf_counter() - t0)


def check_square_bounds(tol: float = 1e-12) -> Check:
    from .gabor import janssen_frame_bounds

    t0 = time.perf_counter()
    fb = janssen_frame_bounds(square_lattice(2.0), TruncationPolicy(tol))
    A, B = square_oracle()
    dev = max(abs(fb.A - A), abs(fb.B - B))
    return Check("square_bounds_vs_1d_sums", dev, 1e-9, fb.method, time.perf_counter() - t0)


def check_leech(max_norm: int = 6) -> Check:
    from .catalog import leech_theta_series
    from .golay import leech_shell_count

    t0 = time.perf_counter()
    t = leech_theta_series()
    bad = sum(abs(leech_shell_count(n) - t.count_at(float(n))) for n in range(0, max_norm + 1, 2))
    return Check("leech_table_vs_golay", float(bad), 0.0, "exact", time.perf_counter() - t0)


def run_suite(tol: float = 1e-9) -> list[Check]:
    return [check_oracle(), check_gram_phase(), check_psf(tol), check_figa(), check_moyal(),
            check_square_bounds(), check_leech()]
