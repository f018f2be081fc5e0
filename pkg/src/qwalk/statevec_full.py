"""
Full state-vector simulation of the coined walk on the n-cube.

The Hilbert space is coin (n directions) times nodes (2**n bit strings).
Amplitudes are stored flat with index ``d * 2**n + x``; internally the
array is viewed as an ``(n, 2**n)`` block so that the coin acts on
columns and the shift acts on rows.

One step of the walk is ``U = S . C``:

- ``C`` applies the Grover diffusion coin ``G = 2/n J - I`` at every node
  (or the marking coin at the target node for the perturbed walk),
- ``S`` moves amplitude ``|d, x>`` to ``|d, x ^ (1 << d)>``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .errors import CapacityError, DimensionError, NormalizationError

__all__ = [
    "DEFAULT_MAX_N",
    "FullState",
    "WalkConfig",
    "max_dimension",
    "grover_coin",
    "uniform_state",
    "basis_state",
    "random_state",
    "apply_shift",
    "apply_coin",
    "step",
    "evolve",
    "node_distribution",
    "sample_measurement",
    "apply_bit_swap",
    "translate_target",
    "fourier_eigenvector",
]

DEFAULT_MAX_N = 20
NORM_TOL = 1e-9


def max_dimension() -> int:
    """Largest n allowed for full-space states (env ``QWALK_MAX_N`` overrides)."""
    raw = os.environ.get("QWALK_MAX_N")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError as exc:
        raise DimensionError(f"QWALK_MAX_N must be an integer, got {raw!r}") from exc
    if value < 2:
        raise DimensionError(f"QWALK_MAX_N must be >= 2, got {value}")
    return value


def _check_capacity(n: int, max_n: Optional[int] = None) -> None:
    cap = max_dimension() if max_n is None else max_n
    if n > cap:
        size_mb = n * (2**n) * 16 / 2**20
        raise CapacityError(
            f"full state for n={n} needs {n}*2^{n} amplitudes (~{size_mb:.0f} MiB); "
            f"cap is n<={cap} (set QWALK_MAX_N to raise it)"
        )


@dataclass(frozen=True)
class FullState:
    """Amplitude vector over ``|d, x>``, flat index ``d * 2**n + x``."""

    n: int
    amps: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DimensionError(f"dimension must be a positive integer, got {self.n!r}")
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.n * (1 << self.n):
            raise DimensionError(
                f"expected {self.n * (1 << self.n)} amplitudes for n={self.n}, got {amps.shape[0]}"
            )
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "amps", amps)

    @property
    def num_nodes(self) -> int:
        return 1 << self.n

    def blocks(self) -> NDArray[np.complex128]:
        """View of the amplitudes as an ``(n, 2**n)`` array (direction, node)."""
        return self.amps.reshape(self.n, self.num_nodes)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def vdot(self, other: "FullState") -> complex:
        """Inner product ``<self|other>``."""
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        return complex(np.vdot(self.amps, other.amps))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "FullState":
        pairs = np.asarray(data["amps"], dtype=float).reshape(-1, 2)
        return cls(int(data["n"]), pairs[:, 0] + 1j * pairs[:, 1])

    @classmethod
    def from_json(cls, text: str) -> "FullState":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class WalkConfig:
    """
    Parameters of one search instance.

    ``marking_coin=None`` selects the ``-I`` marking coin; otherwise an
    ``n x n`` unitary matrix is applied at the target node.
    """

    n: int
    target: int = 0
    marking_coin: Optional[NDArray[np.complex128]] = field(default=None, repr=False)
    tol: float = NORM_TOL
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise DimensionError(f"walk dimension must be an integer >= 2, got {self.n!r}")
        if not 0 <= self.target < (1 << self.n):
            raise DimensionError(f"target {self.target} outside [0, 2^{self.n})")
        if self.tol < 0:
            raise ValueError(f"tolerance must be nonnegative, got {self.tol}")
        if self.marking_coin is not None:
            coin = np.asarray(self.marking_coin, dtype=np.complex128)
            if coin.shape != (self.n, self.n):
                raise DimensionError(
                    f"marking coin must be {self.n}x{self.n}, got shape {coin.shape}"
                )
            defect = np.max(np.abs(coin.conj().T @ coin - np.eye(self.n)))
            if defect > self.tol:
                raise ValueError(f"marking coin is not unitary (max |M^H M - I| = {defect:.3g})")
            object.__setattr__(self, "marking_coin", coin)

    @property
    def minus_identity(self) -> bool:
        return self.marking_coin is None


def grover_coin(n: int) -> NDArray[np.float64]:
    """Grover diffusion coin: entries ``2/n - delta_ij``."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DimensionError(f"Grover coin requires n >= 1, got {n!r}")
    return np.full((n, n), 2.0 / n) - np.eye(n)


def uniform_state(n: int, max_n: Optional[int] = None) -> FullState:
    """Equal superposition over all ``n * 2**n`` basis states."""
    if n < 2:
        raise DimensionError(f"uniform state requires n >= 2, got {n}")
    _check_capacity(n, max_n)
    dim = n * (1 << n)
    return FullState(n, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def basis_state(n: int, d: int, x: int) -> FullState:
    if not 0 <= d < n or not 0 <= x < (1 << n):
        raise DimensionError(f"basis index (d={d}, x={x}) out of range for n={n}")
    _check_capacity(n)
    amps = np.zeros(n * (1 << n), dtype=np.complex128)
    amps[d * (1 << n) + x] = 1.0
    return FullState(n, amps)


def random_state(n: int, rng: np.random.Generator) -> FullState:
    """Normalized complex Gaussian state (for property checks)."""
    _check_capacity(n)
    dim = n * (1 << n)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return FullState(n, v / np.linalg.norm(v))


def apply_shift(s: FullState) -> FullState:
    """Move amplitude at ``(d, x)`` to ``(d, x ^ 2**d)``."""
    src = s.blocks()
    out = np.empty_like(src)
    for d in range(s.n):
        # flipping bit d == reversing the length-2 axis of this reshape
        row = src[d].reshape(-1, 2, 1 << d)
        out[d] = row[:, ::-1, :].reshape(-1)
    return FullState(s.n, out.reshape(-1))


def _check_config(s: FullState, cfg: WalkConfig) -> None:
    if cfg.n != s.n:
        raise DimensionError(f"config is for n={cfg.n} but state has n={s.n}")


def apply_coin(s: FullState, cfg: WalkConfig, perturbed: bool = True) -> FullState:
    """
    Apply ``G`` at every node, or the marking coin at ``cfg.target`` when
    ``perturbed`` is set.  ``G v = (2/n) sum(v) - v`` is used column-wise.
    """
    _check_config(s, cfg)
    blocks = s.blocks()
    out = (2.0 / s.n) * blocks.sum(axis=0, keepdims=True) - blocks
    if perturbed:
        column = blocks[:, cfg.target]
        if cfg.marking_coin is None:
            out[:, cfg.target] = -column
        else:
            out[:, cfg.target] = cfg.marking_coin @ column
    return FullState(s.n, out.reshape(-1))


def step(s: FullState, cfg: WalkConfig, perturbed: bool = True) -> FullState:
    """One application of ``U = S C`` (``U' = S C'`` when perturbed)."""
    return apply_shift(apply_coin(s, cfg, perturbed))


def evolve(s: FullState, cfg: WalkConfig, t: int, perturbed: bool = True) -> FullState:
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    for _ in range(t):
        s = step(s, cfg, perturbed)
    return s


def _require_normalized(s: FullState, tol: float) -> None:
    norm = s.norm()
    if abs(norm - 1.0) > tol:
        raise NormalizationError(f"state norm is {norm!r}, expected 1 within {tol}")


def node_distribution(s: FullState, tol: float = NORM_TOL) -> NDArray[np.float64]:
    """Probability of each node, marginalized over the coin register."""
    _require_normalized(s, tol)
    return np.sum(np.abs(s.blocks()) ** 2, axis=0)


def sample_measurement(
    s: FullState, seed: int, trials: int, tol: float = NORM_TOL
) -> list[tuple[int, int]]:
    """
    Draw ``trials`` i.i.d. outcomes ``(d, x)`` from ``|amps|**2``.

    Inverse-CDF sampling on a seeded ``numpy.random.Generator``; the same
    seed and state always give the same sequence.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    _require_normalized(s, tol)
    flat = _sample_indices(np.abs(s.amps) ** 2, seed, trials)
    d, x = np.divmod(flat, s.num_nodes)
    return list(zip(d.tolist(), x.tolist()))


def _sample_indices(probs: NDArray[np.float64], seed: int, trials: int) -> NDArray[np.int64]:
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(trials), side="right")
    return np.minimum(idx, len(probs) - 1)


def _swap_bits(x: NDArray[np.int64], i: int, j: int) -> NDArray[np.int64]:
    differ = ((x >> i) ^ (x >> j)) & 1
    return x ^ ((differ << i) | (differ << j))


def apply_bit_swap(s: FullState, i: int, j: int) -> FullState:
    """Swap node bits ``i`` and ``j`` together with directions ``i`` and ``j``."""
    if not (0 <= i < s.n and 0 <= j < s.n):
        raise DimensionError(f"bit indices ({i}, {j}) out of range for n={s.n}")
    if i == j:
        return s
    blocks = s.blocks()
    dirs = np.arange(s.n)
    dirs[i], dirs[j] = j, i
    nodes = _swap_bits(np.arange(s.num_nodes), i, j)
    # both permutations are involutions, so gather == scatter
    out = blocks[dirs][:, nodes]
    return FullState(s.n, out.reshape(-1))


def translate_target(s: FullState, target: int) -> FullState:
    """Relabel nodes by ``x -> x ^ target`` (self-inverse)."""
    if not 0 <= target < s.num_nodes:
        raise DimensionError(f"target {target} outside [0, 2^{s.n})")
    nodes = np.arange(s.num_nodes) ^ target
    return FullState(s.n, s.blocks()[:, nodes].reshape(-1))


def fourier_eigenvector(n: int, k: int, sign: int = +1) -> FullState:
    """
    Unperturbed eigenvector for the Fourier label ``k`` (a node bit string)
    with eigenvalue ``1 - 2|k|/n + sign * (2i/n) sqrt(|k|(n-|k|))``.

    For ``|k|`` equal to 0 or n only one coin branch survives and the
    vector is renormalized.
    """
    if not 0 <= k < (1 << n):
        raise DimensionError(f"Fourier label {k} outside [0, 2^{n})")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    _check_capacity(n)
    weight = bin(k).count("1")
    nodes = np.arange(1 << n)
    parity = np.zeros(1 << n, dtype=np.int64)
    for d in range(n):
        parity ^= (nodes >> d) & (k >> d) & 1
    phase = 1.0 - 2.0 * parity
    coin = np.empty(n, dtype=np.complex128)
    for d in range(n):
        if (k >> d) & 1:
            coin[d] = 1.0 / np.sqrt(weight)
        else:
            coin[d] = -1j * sign / np.sqrt(n - weight)
    amps = (coin[:, None] * phase[None, :]).reshape(-1) * 2.0 ** (-n / 2) / np.sqrt(2.0)
    return FullState(n, amps / np.linalg.norm(amps))
