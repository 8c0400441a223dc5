"""
Generalized Cantor sets with exactly represented endpoints.

At depth k the set is 2^k intervals of common length c_k. Interval j is
addressed by its binary path b_1..b_k (b_i = 1 means the right child at
level i), and its left end sits at a + shift + sum_i b_i (c_{i-1} - c_i).
Differences of positions are evaluated as signed sums scaled by their
largest term, so lengths such as e^{-65536} keep full relative precision.

Classes:
    CantorSpec: Length rule and base interval
    CantorLevel: One depth of the construction as a measured set

Constants:
    CENTER_CHUNK: Center rows processed per vectorized block
    MAX_DEPTH: Deepest level build_cantor materializes
"""

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Final, override

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.errors import ParamError, SeparationError
from obslab.fractal.base import BallProfile, MeasuredSet
from obslab.gauge import Gauge, LogNum

logger = structlog.get_logger(__name__)

CENTER_CHUNK: Final = 128
MAX_DEPTH: Final = 20
LN2: Final = math.log(2.0)


@dataclass(frozen=True)
class CantorSpec:
    """
    Length rule c_k and base interval [a, b].

    Exactly one rule is used: explicit ln c_k values, or the gauge rule
    g(c_k) = scale * 2^{-k}.

    Attributes:
        base: the interval [a, b]
        ln_lengths: explicit ln c_1, ln c_2, ...
        gauge: gauge driving the implicit rule
        scale: multiplier s in g(c_k) = s * 2^{-k}
    """

    base: tuple[float, float] = (0.0, 1.0)
    ln_lengths: tuple[float, ...] | None = None
    gauge: Gauge | None = None
    scale: float = 1.0

    def __post_init__(self) -> None:
        a, b = self.base
        if not b > a:
            msg = f"base interval [{a}, {b}] is empty"
            raise ParamError(msg)
        if (self.ln_lengths is None) == (self.gauge is None):
            msg = "CantorSpec needs exactly one of ln_lengths or gauge"
            raise ParamError(msg)

    def ln_length(self, k: int) -> float:
        """ln c_k, with c_0 = b - a."""
        if k == 0:
            return math.log(self.base[1] - self.base[0])
        if self.ln_lengths is not None:
            if k > len(self.ln_lengths):
                msg = f"explicit rule defines {len(self.ln_lengths)} levels, asked {k}"
                raise ParamError(msg)
            return float(self.ln_lengths[k - 1])
        assert self.gauge is not None
        target = LogNum(1, math.log(self.scale) - k * LN2)
        return self.gauge.inverse(target).ln_mag

    def ln_lengths_to(self, depth: int) -> NDArray[np.float64]:
        """ln c_0..ln c_depth, checking 2c_{k+1} < c_k."""
        ln_c = np.array([self.ln_length(k) for k in range(depth + 1)])
        for k in range(depth):
            if LN2 + ln_c[k + 1] >= ln_c[k]:
                msg = f"2c_{k + 1} >= c_{k} (ln c = {ln_c[k + 1]:.6g}, {ln_c[k]:.6g})"
                raise SeparationError(msg)
        return ln_c

    def shifted(self, offset: float) -> "CantorSpec":
        a, b = self.base
        return CantorSpec(
            base=(a + offset, b + offset),
            ln_lengths=self.ln_lengths,
            gauge=self.gauge,
            scale=self.scale,
        )


def _signed_scaled_sum(
    signs: NDArray[np.float64], lns: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Sign and ln|.| of sum(signs * exp(lns)) along the last axis."""
    present = (signs != 0) & np.isfinite(lns)
    scale = np.max(np.where(present, lns, -np.inf), axis=-1)
    safe = np.where(np.isfinite(scale), scale, 0.0)
    scaled = np.exp(np.where(present, lns, 0.0) - safe[..., None])
    terms = np.where(present, signs * scaled, 0.0)
    total = terms.sum(axis=-1)
    with np.errstate(divide="ignore"):
        ln_abs = np.where(total != 0, safe + np.log(np.abs(total)), -np.inf)
    return np.sign(total), ln_abs


@dataclass(frozen=True, eq=False)
class CantorLevel(MeasuredSet):
    """
    Depth-k family of Cantor intervals, possibly tiled by integer shifts.

    Attributes:
        spec: the construction rule
        depth: k
        ln_c: ln c_0..ln c_k
        bits: (atoms, k) binary paths, rows sorted by position
        shifts: integer translation of each atom's copy
        weights: measure of each atom
    """

    spec: CantorSpec
    depth: int
    ln_c: NDArray[np.float64]
    bits: NDArray[np.int8]
    shifts: NDArray[np.float64]
    weights: NDArray[np.float64]
    ln_steps: NDArray[np.float64] = field(init=False)

    def __post_init__(self) -> None:
        steps = self.ln_c[:-1] + np.log1p(-np.exp(self.ln_c[1:] - self.ln_c[:-1]))
        object.__setattr__(self, "ln_steps", steps)

    @property
    def ln_length(self) -> float:
        return float(self.ln_c[-1])

    @property
    @override
    def atom_count(self) -> int:
        return int(self.bits.shape[0])

    @property
    @override
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @override
    def atom_ln_lengths(self) -> NDArray[np.float64]:
        return np.full(self.atom_count, self.ln_length)

    @override
    def cover_sum(self, gauge: Gauge) -> LogNum:
        if self.atom_count == 0:
            return LogNum.zero()
        return LogNum(1, math.log(self.atom_count) + gauge.eval_ln(self.ln_length))

    def ln_left_offsets(self) -> NDArray[np.float64]:
        """ln of each left endpoint's offset from a + shift (-inf for offset 0)."""
        if self.depth == 0:
            return np.full(self.atom_count, -np.inf)
        masked = np.where(self.bits.astype(bool), self.ln_steps, -np.inf)
        return np.logaddexp.reduce(masked, axis=1)

    def left_floats(self) -> NDArray[np.float64]:
        offsets = self.bits.astype(float) @ np.exp(self.ln_steps) if self.depth else 0.0
        return self.spec.base[0] + self.shifts + offsets

    def intervals(self) -> list[tuple[float, float]]:
        """Float endpoints; distinct only while c_k is resolvable next to a."""
        lefts = self.left_floats()
        c_k = math.exp(self.ln_length)
        return [(float(x), float(x + c_k)) for x in lefts]

    @override
    def sample_points(self) -> NDArray[np.float64]:
        lefts = self.left_floats()
        c_k = math.exp(self.ln_length)
        return np.unique(np.concatenate([lefts, lefts + c_k / 2, lefts + c_k]))

    def select(self, mask: NDArray[np.bool_]) -> "CantorLevel":
        return CantorLevel(
            spec=self.spec,
            depth=self.depth,
            ln_c=self.ln_c,
            bits=self.bits[mask],
            shifts=self.shifts[mask],
            weights=self.weights[mask],
        )

    def tiled(self, shifts: Sequence[float]) -> "CantorLevel":
        """Union of copies translated by the given integers, kept in order."""
        count = len(shifts)
        return CantorLevel(
            spec=self.spec,
            depth=self.depth,
            ln_c=self.ln_c,
            bits=np.tile(self.bits, (count, 1)),
            shifts=np.repeat(np.asarray(shifts, dtype=float), self.atom_count)
            + np.tile(self.shifts, count),
            weights=np.tile(self.weights, count),
        )

    def _differences(
        self,
        p_shift: NDArray[np.float64],
        p_bits: NDArray[np.int8],
        p_ln_offset: NDArray[np.float64],
        a_shift: NDArray[np.float64],
        a_bits: NDArray[np.int8],
        extra_ln: float,
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Signed ln of left(atom) + e^extra_ln - point, point broadcast vs atom."""
        shift_diff = a_shift - p_shift
        offset_sign = np.where(np.isfinite(p_ln_offset), -1.0, 0.0)
        bit_diff = (a_bits.astype(np.int16) - p_bits.astype(np.int16)).astype(float)
        shape = np.broadcast_shapes(shift_diff.shape, bit_diff.shape[:-1])
        with np.errstate(divide="ignore"):
            shift_ln = np.log(np.abs(shift_diff))
        signs = np.concatenate(
            [
                np.broadcast_to(np.sign(shift_diff), shape)[..., None],
                np.broadcast_to(bit_diff, (*shape, self.depth)),
                np.full((*shape, 1), 1.0 if math.isfinite(extra_ln) else 0.0),
                np.broadcast_to(offset_sign, shape)[..., None],
            ],
            axis=-1,
        )
        lns = np.concatenate(
            [
                np.broadcast_to(shift_ln, shape)[..., None],
                np.broadcast_to(self.ln_steps, (*shape, self.depth)),
                np.full((*shape, 1), extra_ln),
                np.broadcast_to(p_ln_offset, shape)[..., None],
            ],
            axis=-1,
        )
        return _signed_scaled_sum(signs, lns)

    def _centers(
        self,
    ) -> tuple[NDArray[np.float64], NDArray[np.int8], NDArray[np.float64]]:
        """Atom endpoints plus midpoints of the gaps between consecutive atoms."""
        n = self.atom_count
        shifts = [self.shifts, self.shifts]
        bits = [self.bits, self.bits]
        offsets = [np.full(n, -np.inf), np.full(n, self.ln_length)]
        if n > 1:
            sign, ln_gap = self._differences(
                self.shifts[:-1],
                self.bits[:-1],
                np.full(n - 1, self.ln_length),
                self.shifts[1:],
                self.bits[1:],
                -np.inf,
            )
            keep = sign > 0
            shifts.append(self.shifts[:-1][keep])
            bits.append(self.bits[:-1][keep])
            offsets.append(np.logaddexp(self.ln_length, ln_gap[keep] - LN2))
        return np.concatenate(shifts), np.concatenate(bits), np.concatenate(offsets)

    def atom_distances(
        self,
        p_shift: NDArray[np.float64],
        p_bits: NDArray[np.int8],
        p_ln_offset: NDArray[np.float64],
    ) -> NDArray[np.float64]:
        """ln distance from each point (rows) to each atom (columns); -inf inside."""
        args = (p_shift[:, None], p_bits[:, None, :], p_ln_offset[:, None])
        s_left, ln_left = self._differences(
            *args, self.shifts[None, :], self.bits[None, :, :], -np.inf
        )
        s_right, ln_right = self._differences(
            *args, self.shifts[None, :], self.bits[None, :, :], self.ln_length
        )
        inside = (s_left <= 0) & (s_right >= 0)
        outside = np.where(s_left > 0, ln_left, ln_right)
        return np.where(inside, -np.inf, outside)

    @override
    def ball_profiles(self) -> Iterator[BallProfile]:
        c_shift, c_bits, c_offset = self._centers()
        base_a = self.spec.base[0]
        for start in range(0, c_shift.size, CENTER_CHUNK):
            rows = slice(start, start + CENTER_CHUNK)
            ln_dist = self.atom_distances(c_shift[rows], c_bits[rows], c_offset[rows])
            for i in range(ln_dist.shape[0]):
                order = np.argsort(ln_dist[i], kind="stable")
                sorted_ln = ln_dist[i][order]
                last = np.searchsorted(sorted_ln, sorted_ln, side="right") - 1
                masses = np.cumsum(self.weights[order])[last]
                ln_diam = np.maximum(sorted_ln + LN2, self.ln_length)
                row = start + i
                offset_bits = (
                    c_bits[row].astype(float) @ np.exp(self.ln_steps)
                    if self.depth
                    else 0.0
                )
                center = base_a + c_shift[row] + offset_bits + math.exp(c_offset[row])
                yield BallProfile(
                    center=float(center), ln_diameters=ln_diam, masses=masses
                )


def build_cantor(spec: CantorSpec, depth: int) -> CantorLevel:
    """Keep the two end subintervals of length c_k inside every depth-(k-1) interval."""
    if not 0 <= depth <= MAX_DEPTH:
        msg = f"depth must lie in [0, {MAX_DEPTH}], got {depth}"
        raise ParamError(msg)
    ln_c = spec.ln_lengths_to(depth)
    codes = np.arange(2**depth, dtype=">u4").view(np.uint8).reshape(-1, 4)
    bits = np.unpackbits(codes, axis=1)[:, 32 - depth :].astype(np.int8)
    level = CantorLevel(
        spec=spec,
        depth=depth,
        ln_c=ln_c,
        bits=bits.reshape(2**depth, depth),
        shifts=np.zeros(2**depth),
        weights=np.full(2**depth, 2.0**-depth),
    )
    logger.debug("cantor_built", depth=depth, ln_length=level.ln_length)
    return level
