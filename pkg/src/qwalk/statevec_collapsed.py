"""
The walk restricted to the bit-swap symmetric subspace.

Symmetric states are spanned by ``2n`` vectors ``|R,x>`` (coin points at a
zero bit of a weight-``x`` node, i.e. away from node 0) and ``|L,x>``
(coin points at a one bit).  They are stored interleaved::

    [R0, L1, R1, L2, ..., R(n-1), Ln]     R,x -> 2x     L,x -> 2x - 1

With this layout the collapsed ``U`` only couples indices at distance 1
or 2, so it is kept as a 5-diagonal band for large ``n``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln

from .errors import DimensionError, NormalizationError
from .statevec_full import FullState

__all__ = [
    "DENSE_MAX_N",
    "CollapsedState",
    "CollapsedOperator",
    "r_index",
    "l_index",
    "log_binomial",
    "collapsed_initial_state",
    "psi1_state",
    "psi1_normalization_sq",
    "build_collapsed_unitary",
    "collapsed_step",
    "collapsed_evolve",
    "collapse",
    "marked_probability",
    "symmetric_eigenvector",
]

DENSE_MAX_N = 64
_BAND = 2  # both lower and upper bandwidth


def r_index(x: int) -> int:
    return 2 * x


def l_index(x: int) -> int:
    return 2 * x - 1


def log_binomial(n, k):
    """``log C(n, k)`` via log-gamma; finite for large arguments."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


@dataclass(frozen=True)
class CollapsedState:
    n: int
    amps: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DimensionError(f"dimension must be a positive integer, got {self.n!r}")
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2 * self.n:
            raise DimensionError(f"expected {2 * self.n} amplitudes for n={self.n}, got {amps.shape[0]}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "amps", amps)

    def r(self, x: int) -> complex:
        return complex(self.amps[r_index(x)])

    def l(self, x: int) -> complex:
        return complex(self.amps[l_index(x)])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def vdot(self, other: "CollapsedState") -> complex:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        return complex(np.vdot(self.amps, other.amps))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "layout": "R0,L1,R1,...,R(n-1),Ln",
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CollapsedState":
        pairs = np.asarray(data["amps"], dtype=float).reshape(-1, 2)
        return cls(int(data["n"]), pairs[:, 0] + 1j * pairs[:, 1])

    @classmethod
    def from_json(cls, text: str) -> "CollapsedState":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CollapsedOperator:
    """
    Collapsed ``U`` or ``U'`` as a real ``2n x 2n`` matrix.

    Exactly one of ``dense`` / ``band`` is set.  ``band`` uses the LAPACK
    general-band layout with two sub- and two super-diagonals:
    ``band[2 + i - j, j] == M[i, j]``.
    """

    n: int
    perturbed: bool
    dense: Optional[NDArray[np.float64]] = field(default=None, repr=False)
    band: Optional[NDArray[np.float64]] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def is_banded(self) -> bool:
        return self.band is not None

    @property
    def matrix(self) -> NDArray[np.float64]:
        """Dense copy of the operator regardless of storage."""
        if self.dense is not None:
            return self.dense
        return _band_to_dense(self.band)

    def matvec(self, v: NDArray) -> NDArray:
        if v.shape[0] != self.dim:
            raise DimensionError(f"operator is {self.dim}x{self.dim}, vector has length {v.shape[0]}")
        if self.dense is not None:
            return self.dense @ v
        return _band_matvec(self.band, v)

    def orthogonality_defect(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.T @ m - np.eye(self.dim))))

    def to_dict(self) -> dict:
        return {"n": self.n, "perturbed": self.perturbed, "matrix": self.matrix.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        """Nonzero entries as ``row,col,value`` lines."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        buf.write("#schema=qwalk.collapsed_operator/1\n")
        writer.writerow(["row", "col", "value"])
        m = self.matrix
        rows, cols = np.nonzero(m)
        for i, j in zip(rows.tolist(), cols.tolist()):
            writer.writerow([i, j, repr(float(m[i, j]))])
        return buf.getvalue()


def _band_to_dense(band: NDArray[np.float64]) -> NDArray[np.float64]:
    dim = band.shape[1]
    m = np.zeros((dim, dim))
    for offset in range(-_BAND, _BAND + 1):
        # offset = j - i
        diag = band[_BAND - offset]
        if offset >= 0:
            idx = np.arange(dim - offset)
            m[idx, idx + offset] = diag[offset:]
        else:
            idx = np.arange(-offset, dim)
            m[idx, idx + offset] = diag[: dim + offset]
    return m


def _band_matvec(band: NDArray[np.float64], v: NDArray) -> NDArray:
    dim = band.shape[1]
    out = np.zeros(dim, dtype=np.result_type(band, v))
    for offset in range(-_BAND, _BAND + 1):
        diag = band[_BAND - offset]
        if offset >= 0:
            out[: dim - offset] += diag[offset:] * v[offset:]
        else:
            out[-offset:] += diag[: dim + offset] * v[: dim + offset]
    return out


def _coin_angles(n: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    x = np.arange(n + 1)
    cos = 1.0 - 2.0 * x / n
    sin = (2.0 / n) * np.sqrt(x * (n - x))
    return cos, sin


def _unitary_entries(n: int, perturbed: bool) -> list[tuple[int, int, float]]:
    cos, sin = _coin_angles(n)
    entries = []
    # U|R,x> = cos w_x |L,x+1> + sin w_x |R,x-1>
    for x in range(n):
        entries.append((l_index(x + 1), r_index(x), cos[x]))
        if x >= 1:
            entries.append((r_index(x - 1), r_index(x), sin[x]))
    # U|L,x> = sin w_x |L,x+1> - cos w_x |R,x-1>
    for x in range(1, n + 1):
        if x + 1 <= n:
            entries.append((l_index(x + 1), l_index(x), sin[x]))
        entries.append((r_index(x - 1), l_index(x), -cos[x]))
    if perturbed:
        # marking coin -I at node 0 flips the sign of <L,1|U|R,0>
        entries = [
            (i, j, -v if (i, j) == (l_index(1), r_index(0)) else v) for i, j, v in entries
        ]
    return entries


def build_collapsed_unitary(
    n: int, perturbed: bool = True, banded: Optional[bool] = None
) -> CollapsedOperator:
    """
    Collapsed walk operator.  Dense storage for ``n <= 64`` unless
    ``banded`` forces a choice.
    """
    if n < 2:
        raise DimensionError(f"collapsed walk requires n >= 2, got {n}")
    if banded is None:
        banded = n > DENSE_MAX_N
    dim = 2 * n
    entries = _unitary_entries(n, perturbed)
    if banded:
        band = np.zeros((2 * _BAND + 1, dim))
        for i, j, v in entries:
            band[_BAND + i - j, j] = v
        return CollapsedOperator(n, perturbed, band=band)
    dense = np.zeros((dim, dim))
    for i, j, v in entries:
        dense[i, j] = v
    return CollapsedOperator(n, perturbed, dense=dense)


def collapsed_initial_state(n: int) -> CollapsedState:
    """Equal superposition expressed in the symmetric basis."""
    if n < 2:
        raise DimensionError(f"collapsed walk requires n >= 2, got {n}")
    amps = np.zeros(2 * n)
    log_norm = n * np.log(2.0)
    x = np.arange(n)
    # R,x carries C(n-1, x); L,x+1 carries C(n-1, x)
    weights = np.exp(0.5 * (log_binomial(n - 1, x) - log_norm))
    amps[2 * x] = weights
    amps[2 * x + 1] = weights
    return CollapsedState(n, amps)


def psi1_normalization_sq(n: int) -> float:
    """``c**2 = sum_{x < n/2} 1 / C(n-1, x)``."""
    _require_even(n)
    x = np.arange(n // 2)
    return float(np.sum(np.exp(-log_binomial(n - 1, x))))


def psi1_state(n: int) -> tuple[CollapsedState, float]:
    """
    Companion state concentrated near the marked node; returns ``(state, c)``.
    Defined for even ``n >= 4`` only.
    """
    _require_even(n)
    c = np.sqrt(psi1_normalization_sq(n))
    x = np.arange(n // 2)
    coeff = np.exp(-0.5 * (np.log(2.0) + log_binomial(n - 1, x))) / c
    amps = np.zeros(2 * n)
    amps[2 * x] = coeff
    amps[2 * x + 1] = -coeff
    return CollapsedState(n, amps), float(c)


def _require_even(n: int) -> None:
    if n < 4 or n % 2:
        raise DimensionError(f"psi1 is defined for even n >= 4 only, got n={n}")


def collapsed_step(s: CollapsedState, op: CollapsedOperator) -> CollapsedState:
    if s.n != op.n:
        raise DimensionError(f"state has n={s.n} but operator has n={op.n}")
    return CollapsedState(s.n, op.matvec(s.amps))


def collapsed_evolve(s: CollapsedState, op: CollapsedOperator, t: int) -> CollapsedState:
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    amps = s.amps
    for _ in range(t):
        amps = op.matvec(amps)
    return CollapsedState(s.n, amps)


def collapse(s: FullState) -> CollapsedState:
    """
    Project a full state onto the symmetric basis (node 0 is the marked node).
    Norm is preserved only for bit-swap symmetric input.
    """
    n = s.n
    nodes = np.arange(s.num_nodes)
    weight = np.zeros(s.num_nodes, dtype=np.int64)
    for d in range(n):
        weight += (nodes >> d) & 1
    bits = ((nodes[None, :] >> np.arange(n)[:, None]) & 1).astype(bool)
    blocks = s.blocks()
    zero_sum = np.where(bits, 0.0, blocks).sum(axis=0)
    one_sum = np.where(bits, blocks, 0.0).sum(axis=0)
    r_tot = np.bincount(weight, zero_sum.real, n + 1) + 1j * np.bincount(weight, zero_sum.imag, n + 1)
    l_tot = np.bincount(weight, one_sum.real, n + 1) + 1j * np.bincount(weight, one_sum.imag, n + 1)

    amps = np.zeros(2 * n, dtype=np.complex128)
    x = np.arange(n)
    amps[2 * x] = r_tot[:n] * np.exp(-0.5 * (np.log(n - x) + log_binomial(n, x)))
    x = np.arange(1, n + 1)
    amps[2 * x - 1] = l_tot[1:] * np.exp(-0.5 * (np.log(x) + log_binomial(n, x)))
    return CollapsedState(n, amps)


def marked_probability(s: CollapsedState, tol: float = 1e-9) -> float:
    """Probability of measuring node 0; only ``|R,0>`` touches it."""
    norm = s.norm()
    if abs(norm - 1.0) > tol:
        raise NormalizationError(f"state norm is {norm!r}, expected 1 within {tol}")
    return float(abs(s.amps[0]) ** 2)


def symmetric_eigenvector(n: int, k: int, sign: int = +1) -> CollapsedState:
    """
    Collapsed image of the equal superposition of the unperturbed Fourier
    eigenvectors with ``|k| = k``; eigenvalue ``exp(sign * i * w_k)``.

    Per node of weight ``x`` the Fourier sum over ``|k| = k`` splits into
    coin directions on zero bits and on one bits, which gives closed forms
    in terms of Krawtchouk-type sums.  For moderate ``n`` we evaluate them
    by direct summation.
    """
    if not 0 <= k <= n:
        raise DimensionError(f"k must lie in [0, {n}], got {k}")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    amps = np.zeros(2 * n, dtype=np.complex128)
    # amplitude of |v_k> on |d,x>: (-1)^{k.x} 2^{-n/2}/sqrt2 * a(k_d)
    a_one = 1.0 / np.sqrt(k) if k > 0 else 0.0
    a_zero = (-1j * sign) / np.sqrt(n - k) if k < n else 0.0
    logc = lambda a, b: log_binomial(a, b) if 0 <= b <= a else -np.inf  # noqa: E731
    for x in range(n + 1):
        # fix a node of weight x and a direction d; sum over k-vectors of weight k
        # of (-1)^{k.x} a(k_d).  Split by j = |k & x| and k_d.
        for on_one_bit in (False, True):
            if on_one_bit and x == 0 or not on_one_bit and x == n:
                continue
            total = 0.0 + 0.0j
            ones_other = x - 1 if on_one_bit else x
            zeros_other = n - 1 - ones_other
            for kd in (0, 1):
                rest = k - kd
                if rest < 0:
                    continue
                coeff = a_one if kd else a_zero
                sign_d = -1.0 if (kd and on_one_bit) else 1.0
                for j in range(0, min(rest, ones_other) + 1):
                    m = rest - j
                    if m > zeros_other:
                        continue
                    count = np.exp(logc(ones_other, j) + logc(zeros_other, m))
                    total += sign_d * (-1.0) ** j * count * coeff
            # collapsed amplitude: <R,x| or <L,x| times the superposition
            n_dirs = x if on_one_bit else n - x
            log_basis = -0.5 * (np.log(n_dirs) + log_binomial(n, x))
            per_node = total * 2.0 ** (-n / 2) / np.sqrt(2.0) / np.exp(0.5 * log_binomial(n, k))
            value = per_node * n_dirs * np.exp(log_binomial(n, x) + log_basis)
            idx = l_index(x) if on_one_bit else r_index(x)
            amps[idx] = value
    norm = np.linalg.norm(amps)
    return CollapsedState(n, amps / norm)
