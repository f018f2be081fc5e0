"""
Spectra of the collapsed walk operators and the arc diagnostics.

The perturbed operator has exactly two eigenvalues with real part above
``1 - 2/(3n)``: a conjugate pair ``exp(+-i w0)`` whose eigenvectors are
close to ``(psi0 +- i psi1)/sqrt2``.  :func:`spectral_summary` measures
``w0``, the overlaps ``p0``/``p1`` and the phase ``eta`` and compares them
against the analytic bounds.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionError, SolverError, StructuralError
from .fixtures import load_fixture
from .statevec_collapsed import (
    DENSE_MAX_N,
    build_collapsed_unitary,
    collapsed_initial_state,
    log_binomial,
    psi1_state,
)

__all__ = [
    "EigenPair",
    "SpectralSummary",
    "eigendecompose",
    "arc_threshold",
    "arc_members",
    "unperturbed_eigenvalue",
    "spectral_summary",
    "spectrum_csv",
    "p0_bound",
    "p1_bound",
    "predicted_angle",
    "angle_scale",
]

TOL_EIG = 1e-9
ORTHOGONALITY_TOL = 1e-10
ETA_FLAG = 0.2


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: NDArray[np.complex128] = field(repr=False)
    residual: float

    @property
    def angle(self) -> float:
        return _angle(self.value)


def _angle(z: complex) -> float:
    """Argument in (-pi, pi]."""
    a = math.atan2(z.imag, z.real)
    # -1 computed with a tiny negative imaginary part belongs at +pi
    return a + 2.0 * math.pi if a <= -math.pi + 1e-9 else a


def eigendecompose(m: NDArray[np.float64], tol_eig: float = TOL_EIG, n: Optional[int] = None) -> list[EigenPair]:
    """
    Eigenpairs of a real orthogonal matrix, sorted by angle in (-pi, pi]
    (ties broken by the sign of the imaginary part).

    Raises :class:`SolverError` when the input is not orthogonal, when
    LAPACK fails to converge, or when any pair misses the residual /
    unit-modulus / conjugate-closure contract.
    """
    m = np.asarray(m, dtype=float)
    label = f"{m.shape[0]}x{m.shape[1]} matrix" + (f" (n={n})" if n is not None else "")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    defect = float(np.max(np.abs(m.T @ m - np.eye(m.shape[0])))) if m.size else 0.0
    if defect > ORTHOGONALITY_TOL:
        raise SolverError(f"{label} is not orthogonal (max |M^T M - I| = {defect:.3g})")
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver did not converge for {label}: {exc}") from exc

    pairs = []
    for k in range(len(values)):
        v = vectors[:, k].astype(np.complex128)
        v = v / np.linalg.norm(v)
        lam = complex(values[k])
        residual = float(np.linalg.norm(m @ v - lam * v))
        if residual > tol_eig or abs(abs(lam) - 1.0) > tol_eig:
            raise SolverError(
                f"eigenpair {lam:.6g} of {label} violates tolerance {tol_eig:g} "
                f"(residual {residual:.3g}, |value|-1 = {abs(lam) - 1:.3g})"
            )
        pairs.append(EigenPair(lam, v, residual))

    for p in pairs:
        if min(abs(q.value - p.value.conjugate()) for q in pairs) > tol_eig:
            raise SolverError(f"spectrum of {label} is not closed under conjugation at {p.value:.6g}")

    pairs.sort(key=lambda p: (round(p.angle, 12), math.copysign(1.0, p.value.imag)))
    return pairs


def arc_threshold(n: int) -> float:
    return 1.0 - 2.0 / (3.0 * n)


def arc_members(spectrum: Sequence[EigenPair], n: int) -> list[EigenPair]:
    """Eigenpairs with real part above ``1 - 2/(3n)``, order preserved."""
    threshold = arc_threshold(n)
    return [p for p in spectrum if p.value.real > threshold]


def unperturbed_eigenvalue(n: int, k: int) -> tuple[complex, complex]:
    """The pair ``1 - 2k/n +- (2i/n) sqrt(k(n-k))``."""
    if not 0 <= k <= n:
        raise DimensionError(f"k must lie in [0, {n}], got {k}")
    re = 1.0 - 2.0 * k / n
    im = (2.0 / n) * math.sqrt(k * (n - k))
    return complex(re, im), complex(re, -im)


def p0_bound(n: int) -> float:
    return 0.5 - 3.0 * n / 2.0 ** (n + 1)


def p1_bound(n: int, c: float) -> float:
    return 0.5 - 3.0 * n / (8.0 * c * c * math.exp(log_binomial(n - 1, n // 2)))


def predicted_angle(n: int, c: float) -> float:
    """Leading-order rotation angle ``1 / (c sqrt(2^(n-1)))``."""
    return 1.0 / (c * 2.0 ** ((n - 1) / 2))


def angle_scale(n: int) -> float:
    """``n^(3/2) / 2^n``, the order of the angle error."""
    return n**1.5 / 2.0**n


@dataclass
class SpectralSummary:
    n: int
    omega0: float
    p0: float
    p1: float
    eta: complex
    c: float
    arc_count: int
    residual_mass: float
    p0_slack: float
    p1_slack: float
    delta: float
    angle_error: float
    angle_cap: float
    degenerate: bool = False
    bounds_ok: dict = field(default_factory=dict)

    @property
    def eta_angle(self) -> float:
        return _angle(self.eta)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["eta"] = [self.eta.real, self.eta.imag]
        data["eta_angle"] = self.eta_angle
        data["predicted_omega0"] = predicted_angle(self.n, self.c)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def spectral_summary(n: int, tol_eig: float = TOL_EIG, angle_cap: Optional[float] = None) -> SpectralSummary:
    """
    Decompose the collapsed ``U'`` for even ``n`` and evaluate the arc pair.

    ``eta`` is read from the eigenvector with negative angle (the one whose
    psi1 overlap is close to ``+i`` once its psi0 overlap is made real and
    positive).  ``angle_cap`` defaults to the committed fixture constant.
    """
    if n % 2 or not 4 <= n <= DENSE_MAX_N:
        raise DimensionError(f"spectral summary needs even n in [4, {DENSE_MAX_N}], got {n}")
    if angle_cap is None:
        angle_cap = load_fixture("angle_error_cap")["value"]

    op = build_collapsed_unitary(n, perturbed=True)
    spectrum = eigendecompose(op.matrix, tol_eig, n=n)
    arc = arc_members(spectrum, n)
    if len(arc) != 2:
        raise StructuralError(f"expected 2 eigenvalues on the arc for n={n}, found {len(arc)}")

    psi0 = collapsed_initial_state(n).amps
    psi1_s, c = psi1_state(n)
    psi1 = psi1_s.amps

    degenerate = abs(arc[0].angle) <= tol_eig and abs(arc[1].angle) <= tol_eig
    if degenerate:
        # real combinations of the two vectors; not expected for n >= 4
        basis = np.stack([arc[0].vector, arc[1].vector], axis=1)
        q, _ = np.linalg.qr(basis)
        vec = q @ (q.conj().T @ psi0)
        vec = (vec + 1j * (q @ (q.conj().T @ psi1))) / math.sqrt(2.0)
        vec /= np.linalg.norm(vec)
        omega0 = 0.0
    else:
        neg = min(arc, key=lambda p: p.angle)
        vec = neg.vector
        omega0 = abs(neg.angle)

    a0 = np.vdot(psi0, vec)
    vec = vec * (abs(a0) / a0)  # gauge: <psi0|w0> real positive
    a0 = np.vdot(psi0, vec)
    a1 = np.vdot(psi1, vec)
    p0 = float(abs(a0) ** 2)
    p1 = float(abs(a1) ** 2)
    eta = complex(a1 / abs(a1))

    b0 = p0_bound(n)
    b1 = p1_bound(n, c)
    delta = abs(eta - 1j)
    angle_error = abs(omega0 - predicted_angle(n, c))
    cap = angle_cap * angle_scale(n)
    bounds_ok = {
        "a_p0": p0 >= b0,
        "b_p1": p1 >= b1,
        "c_eta": delta <= ETA_FLAG,
        "d_angle": angle_error <= cap,
    }
    return SpectralSummary(
        n=n,
        omega0=omega0,
        p0=p0,
        p1=p1,
        eta=eta,
        c=c,
        arc_count=len(arc),
        residual_mass=max(0.0, 1.0 - p0 - p1),
        p0_slack=p0 - b0,
        p1_slack=p1 - b1,
        delta=delta,
        angle_error=angle_error,
        angle_cap=cap,
        degenerate=degenerate,
        bounds_ok=bounds_ok,
    )


def spectrum_csv(n: int, spectrum: Sequence[EigenPair], operator: Optional[str] = None, header: bool = True) -> str:
    """
    CSV rows ``n,re,im,residual,on_arc`` (with an ``operator`` column when
    given).  A ``#schema=`` comment line precedes the header.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    threshold = arc_threshold(n)
    cols = ["n"] + (["operator"] if operator is not None else []) + ["re", "im", "residual", "on_arc"]
    if header:
        buf.write("#schema=qwalk.spectrum/1\n")
        writer.writerow(cols)
    for p in spectrum:
        row = [n] + ([operator] if operator is not None else [])
        row += [repr(p.value.real), repr(p.value.imag), repr(p.residual), str(p.value.real > threshold).lower()]
        writer.writerow(row)
    return buf.getvalue()
