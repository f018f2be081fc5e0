"""
Independent reference constructions used as test oracles.

Nothing here imports the simulator paths under test: operators are built
as dense matrices straight from their definitions, binomial expressions
are evaluated with exact rationals, and symmetric basis vectors are
enumerated node by node.
"""

from fractions import Fraction
from itertools import product
from math import comb

import numpy as np


def index(n, d, x):
    return d * 2**n + x


def dense_shift(n):
    dim = n * 2**n
    s = np.zeros((dim, dim))
    for d in range(n):
        for x in range(2**n):
            s[index(n, d, x ^ (1 << d)), index(n, d, x)] = 1.0
    return s


def dense_coin(n, target=None, marking=None):
    """``G (x) I`` with the target node block replaced by ``marking`` (default -I)."""
    g = 2.0 / n * np.ones((n, n)) - np.eye(n)
    proj = np.zeros((2**n, 2**n))
    coin = np.kron(g, np.eye(2**n)).astype(complex)
    if target is not None:
        proj[target, target] = 1.0
        m = -np.eye(n) if marking is None else np.asarray(marking)
        coin = coin + np.kron(m - g, proj)
    return coin


def dense_walk(n, perturbed=True, target=0, marking=None):
    return dense_shift(n) @ dense_coin(n, target if perturbed else None, marking)


def dense_bit_swap(n, i, j):
    dim = n * 2**n
    p = np.zeros((dim, dim))
    for d in range(n):
        dd = j if d == i else i if d == j else d
        for x in range(2**n):
            bi, bj = (x >> i) & 1, (x >> j) & 1
            y = x & ~((1 << i) | (1 << j)) | (bi << j) | (bj << i)
            p[index(n, dd, y), index(n, d, x)] = 1.0
    return p


def symmetric_basis(n):
    """Columns ``|R,0>, |L,1>, |R,1>, ..., |L,n>`` enumerated in the full space."""
    cols = []
    for pos in range(2 * n):
        is_r = pos % 2 == 0
        w = pos // 2 if is_r else (pos + 1) // 2
        v = np.zeros(n * 2**n)
        for bits in product((0, 1), repeat=n):
            if sum(bits) != w:
                continue
            x = sum(b << k for k, b in enumerate(bits))
            for d in range(n):
                if bits[d] == (0 if is_r else 1):
                    v[index(n, d, x)] = 1.0
        cols.append(v / np.linalg.norm(v))
    return np.stack(cols, axis=1)


def exact_initial_squares(n):
    """Squared collapsed psi0 amplitudes as exact fractions, layout R0, L1, R1, ..."""
    out = []
    for pos in range(2 * n):
        if pos % 2 == 0:
            x = pos // 2
            out.append(Fraction(comb(n - 1, x), 2**n))
        else:
            x = (pos + 1) // 2
            out.append(Fraction(comb(n - 1, x - 1), 2**n))
    return out


def exact_c_squared(n):
    return sum(Fraction(1, comb(n - 1, x)) for x in range(n // 2))


def exact_psi1_expectation(n):
    """``1 - 1 / (2 c^2 C(n-1, n/2))`` as a fraction."""
    return 1 - 1 / (2 * exact_c_squared(n) * comb(n - 1, n // 2))
