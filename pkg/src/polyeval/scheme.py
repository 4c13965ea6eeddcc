"""
Structure of the reduced-cost scheme ``z(A)``.

With ``m = 4s + p``, ``p = t*s + r``::

    y0 = A^s * Q(A)                        Q(x) = sum_{i=1..s} q_i x^i
    y1 = (y0 + L(A)) (y0 + R(A)) [+ e0 y0] + F(A)
    z  = (...((y1 A^s + block) A^s + block) ... ) A^r + sum_{j<r} a_j A^j

Three variants fix which powers ``L`` and ``R`` carry:

========  ===================  ===================  =====
variant   L                    R                    e0
========  ===================  ===================  =====
1         d_1..d_s             e_2..e_s             yes
2         g_0..g_s             e_2..e_s             no
3         d_1..d_s             e_1..e_s             no
========  ===================  ===================  =====

Inner coefficient vectors always have ``4s+1`` entries, stored highest power
first inside each block::

    1: [q_s..q_1 | d_s..d_1 | e_s..e_2 | e0 | f_s..f_0]
    2: [q_s..q_1 | g_s..g_0 | e_s..e_2 | f_s..f_0]
    3: [q_s..q_1 | d_s..d_1 | e_s..e_1 | f_s..f_0]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .psm import ps_cost

__all__ = [
    "CoefficientSet",
    "RecommendPSError",
    "SchemeParameterError",
    "SchemeSpec",
    "block_sizes",
    "convolve",
    "join_layout",
    "reconstruct",
    "reconstruct_inner",
    "scheme_cost",
    "select_params",
    "split_layout",
]

VARIANTS = (1, 2, 3)


class RecommendPSError(ValueError):
    """The degree admits no one-product saving; plain PS should be used."""


class SchemeParameterError(ValueError):
    """Block size outside ``2 <= s`` and ``4s <= m``."""


@dataclass(frozen=True)
class SchemeSpec:
    m: int
    s: int
    variant: int = 1
    sign: int = 1

    def __post_init__(self):
        if self.s < 2 or 4 * self.s > self.m:
            raise SchemeParameterError(f"s={self.s} violates 2 <= s <= m/4 for m={self.m}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be 1, 2 or 3, got {self.variant}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def p(self) -> int:
        return self.m - 4 * self.s

    @property
    def t(self) -> int:
        return self.p // self.s

    @property
    def r(self) -> int:
        return self.p % self.s

    @property
    def cost(self) -> int:
        return scheme_cost(self.s, self.p)

    @property
    def savings(self) -> int:
        return ps_cost(self.m).cost - self.cost


@dataclass(frozen=True)
class CoefficientSet:
    """One solution of the inner matching system.

    ``inner`` holds ``4s+1`` mpf (real sets) or mpc values in the variant
    layout; ``tail`` holds ``sign * b_j`` for ``j < p``.
    """

    inner: tuple
    tail: tuple = ()
    is_real: bool = True
    variant: int = 1
    residual: object = None
    meta: dict = field(default_factory=dict, compare=False)

    def with_inner(self, inner):
        return replace(self, inner=tuple(inner))


def scheme_cost(s: int, p: int) -> int:
    """Matrix products of the nested scheme: ``s + 1 + ceil(p/s)``."""
    if s < 2 or p < 0:
        raise ValueError("need s >= 2 and p >= 0")
    return s + 1 + math.ceil(p / s)


def check_degree(m: int) -> None:
    if m < 8 or m in (9, 11):
        raise RecommendPSError(f"degree {m} gains nothing over Paterson-Stockmeyer; use PS")


def select_params(m: int, s: int | None = None) -> tuple[int, int]:
    """Return ``(s, p)``.

    Without an override this is the smallest ``s`` whose cost beats the
    optimal PS cost by exactly one product.
    """
    check_degree(m)
    if s is not None:
        if s < 2 or 4 * s > m:
            raise SchemeParameterError(f"s={s} violates 2 <= s <= m/4 for m={m}")
        return s, m - 4 * s
    target = ps_cost(m).cost - 1
    for cand in range(2, m // 4 + 1):
        if scheme_cost(cand, m - 4 * cand) == target:
            return cand, m - 4 * cand
    raise RecommendPSError(f"no block size saves a product for m={m}")


def block_sizes(variant: int, s: int) -> list[tuple[str, int]]:
    if variant == 1:
        return [("q", s), ("d", s), ("e", s - 1), ("e0", 1), ("f", s + 1)]
    if variant == 2:
        return [("q", s), ("g", s + 1), ("e", s - 1), ("f", s + 1)]
    if variant == 3:
        return [("q", s), ("d", s), ("e", s), ("f", s + 1)]
    raise ValueError(f"unknown variant {variant}")


def split_layout(variant: int, s: int, coeffs) -> dict:
    """Split an inner vector into blocks, each returned lowest power first.

    ``"e0"`` is returned as a scalar.
    """
    coeffs = list(coeffs)
    out, pos = {}, 0
    for name, size in block_sizes(variant, s):
        chunk = coeffs[pos : pos + size]
        pos += size
        out[name] = chunk[0] if name == "e0" else chunk[::-1]
    if pos != len(coeffs):
        raise ValueError(f"variant {variant} with s={s} needs {pos} coefficients, got {len(coeffs)}")
    return out


def join_layout(variant: int, s: int, blocks: dict) -> list:
    out = []
    for name, size in block_sizes(variant, s):
        if name == "e0":
            out.append(blocks["e0"])
        else:
            chunk = list(blocks[name])
            if len(chunk) != size:
                raise ValueError(f"block {name} needs {size} entries")
            out.extend(chunk[::-1])
    return out


def convolve(a, b):
    """Product of two coefficient lists (lowest degree first)."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padded(coeffs, lo, length):
    return [0] * lo + list(coeffs) + [0] * (length - lo - len(coeffs))


def reconstruct_inner(variant: int, s: int, coeffs) -> list:
    """Coefficients ``y_0 .. y_{4s}`` of the scalar polynomial ``y1(x)``."""
    blk = split_layout(variant, s, coeffs)
    n = 4 * s + 1
    Y = _padded(blk["q"], s + 1, 2 * s + 1)  # x^s Q(x)
    if variant == 1:
        L, R = _padded(blk["d"], 1, s + 1), _padded(blk["e"], 2, s + 1)
    elif variant == 2:
        L, R = list(blk["g"]), _padded(blk["e"], 2, s + 1)
    else:
        L, R = _padded(blk["d"], 1, s + 1), _padded(blk["e"], 1, s + 1)
    left = [y + l for y, l in zip(Y, L + [0] * s)]
    right = [y + r for y, r in zip(Y, R + [0] * s)]
    out = convolve(left, right)
    out += [0] * (n - len(out))
    if variant == 1:
        out = [o + blk["e0"] * y for o, y in zip(out, Y + [0] * (2 * s))]
    for k, f in enumerate(blk["f"]):
        out[k] += f
    return out[:n]


def reconstruct(spec: SchemeSpec, cset: CoefficientSet) -> list:
    """Coefficients ``b_hat_0 .. b_hat_m`` of ``sign * P`` generated by a set.

    Computed with exact convolutions at the current mpmath precision.
    """
    if len(cset.inner) != 4 * spec.s + 1:
        raise ValueError("coefficient set does not match the scheme's block size")
    inner = reconstruct_inner(spec.variant, spec.s, cset.inner)
    tail = list(cset.tail)
    if len(tail) != spec.p:
        raise ValueError(f"expected {spec.p} tail coefficients, got {len(tail)}")
    return tail + inner
