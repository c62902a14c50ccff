"""
Random reversible hashing of hosts into the cube.

A host address is mangled by a modular multiplication, the low ``u`` bits of the
result select a frame and the remaining ``32 - u`` bits (the left bit set) are
cut into ``r`` overlapping ``c``-bit windows starting every ``s`` bits, wrapping
around. Bits covered by more than one window let the restore step reject column
tuples that do not come from a single host.

Bit position p of the left bit set is bit p of ``mangled >> u``.
"""
# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal, Sequence

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import InvalidParamsError
from superpoint.hashing import MASK32, bh, derive_seed


MangleMode = Literal["odd", "prime"]

SALT_MULTIPLIER = 0xA5
SALT_PEER = 0xB7

# Smallest prime above 2^32 - 1.
DEFAULT_PRIME = 4294967311
MAX_PRIME_GAP = 1 << 20


@dataclass(frozen=True, slots=True)
class Geometry:
    """
    Column window geometry derived from (c, r, s, u).

    Args:
        lbits: Width of the left bit set, 32 - u.
        offsets: Start position of every row's window.
        row_masks: Left-bit-set positions covered by each row, as bit masks.
        coverage: For every position, the (row, offset) pairs covering it.
    """

    lbits: int
    offsets: tuple[int, ...]
    row_masks: tuple[int, ...]
    coverage: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def duplicate_positions(self) -> frozenset[int]:
        return frozenset(
            p for p, cover in enumerate(self.coverage)
            if len({row for row, _ in cover}) >= 2
        )


@lru_cache(maxsize=64)
def window_geometry(c: int, r: int, s: int, u: int) -> Geometry:
    """
    Precompute window placement and coverage.

    Args:
        c: Column index width in bits.
        r: Number of rows.
        s: Stride in bits.
        u: Frame index width in bits.

    Returns:
        Geometry
    """
    lbits = 32 - u
    offsets = tuple((s * i) % lbits for i in range(r))

    coverage: list[list[tuple[int, int]]] = [[] for _ in range(lbits)]
    row_masks: list[int] = []

    for row, start in enumerate(offsets):
        mask = 0
        for j in range(c):
            pos = (start + j) % lbits
            coverage[pos].append((row, j))
            mask |= 1 << pos
        row_masks.append(mask)

    return Geometry(
        lbits=lbits,
        offsets=offsets,
        row_masks=tuple(row_masks),
        coverage=tuple(tuple(cover) for cover in coverage),
    )


@dataclass(frozen=True, slots=True)
class RRHParams:
    """
    Reversible hash parameters.

    Args:
        c: Column index width in bits.
        r: Number of rows.
        s: Stride between row windows in bits.
        u: Frame index width in bits.
        a: Mangling multiplier.
        a_inv: Inverse of ``a`` modulo 2^32 (or modulo ``prime``).
        bh_seed: Key of the peer hash.
        mode: "odd" for multiplication mod 2^32, "prime" for mod ``prime``.
        prime: Modulus of the "prime" mode.
    """

    c: int
    r: int
    s: int
    u: int
    a: int = 1
    a_inv: int = 1
    bh_seed: int = 0
    mode: MangleMode = "odd"
    prime: int | None = None

    @classmethod
    def from_seed(
        cls,
        *,
        c: int,
        r: int,
        s: int,
        u: int,
        seed: int,
        mode: MangleMode = "odd",
        prime: int | None = None,
        multiplier: int | None = None,
    ) -> "RRHParams":
        """
        Derive the multiplier and the peer-hash key from one master seed.

        Args:
            c, r, s, u: Geometry.
            seed: Master seed.
            mode: Mangling mode.
            prime: Modulus for the "prime" mode (defaults to the smallest prime above 2^32 - 1).
            multiplier: Explicit multiplier, overriding the derived one.

        Returns:
            RRHParams
        """
        bh_seed = derive_seed(seed, SALT_PEER)

        if mode == "odd":
            a = multiplier if multiplier is not None else (derive_seed(seed, SALT_MULTIPLIER) & MASK32) | 1
            a_inv = pow(a, -1, 1 << 32) if a % 2 == 1 else 0
            return cls(c=c, r=r, s=s, u=u, a=a, a_inv=a_inv, bh_seed=bh_seed)

        p = prime if prime is not None else DEFAULT_PRIME
        a = multiplier if multiplier is not None else derive_seed(seed, SALT_MULTIPLIER) % (p - 1) + 1
        a_inv = pow(a, -1, p) if math.gcd(a, p) == 1 else 0
        return cls(c=c, r=r, s=s, u=u, a=a, a_inv=a_inv, bh_seed=bh_seed, mode="prime", prime=p)


    @property
    def geometry(self) -> Geometry:
        return window_geometry(self.c, self.r, self.s, self.u)


    @property
    def lbits(self) -> int:
        return 32 - self.u


    @property
    def frames(self) -> int:
        return 1 << self.u


    @property
    def columns(self) -> int:
        return 1 << self.c


@dataclass(frozen=True, slots=True)
class RRHDigest:
    """
    Position of a host in the cube.

    Args:
        frame: Frame index, the low u bits of the mangled address.
        columns: One column index per row.
    """

    frame: int
    columns: tuple[int, ...] = field(default_factory=tuple)


# ---------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------

def validate_params(params: RRHParams) -> list[str]:
    """
    Check completeness, redundancy and the mangling bijection.

    Args:
        params: RRHParams

    Returns:
        Violated attributes; empty when the parameters are usable.
    """
    violations: list[str] = []

    if not 0 <= params.u <= 31:
        return [f"u must be in [0, 31], got {params.u}"]
    if params.c < 1:
        violations.append(f"c must be >= 1, got {params.c}")
    if params.r < 1:
        violations.append(f"r must be >= 1, got {params.r}")
    if not 1 <= params.s <= max(params.c, 1):
        violations.append(f"s must be in [1, c={params.c}], got {params.s}")
    if params.c > params.lbits:
        violations.append(f"c must be <= 32-u={params.lbits}, got {params.c}")

    violations.extend(_mangle_violations(params))

    if violations:
        return violations

    geo = params.geometry
    reach = params.c + params.s * (params.r - 1)
    uncovered = [p for p, cover in enumerate(geo.coverage) if not cover]

    if reach < params.lbits or uncovered:
        violations.append(
            f"completeness: c+s*(r-1)={reach} must be >= 32-u={params.lbits} "
            f"and cover every position (uncovered: {uncovered})"
        )

    if not geo.duplicate_positions:
        violations.append("redundancy: no position is covered by two or more rows")

    return violations


def require_valid(params: RRHParams) -> RRHParams:
    """
    Raise when ``validate_params`` reports any violation.

    Args:
        params: RRHParams

    Returns:
        params (unchanged)

    Raises:
        InvalidParamsError
    """
    violations = validate_params(params)
    if violations:
        raise InvalidParamsError(violations=violations)
    return params


def _mangle_violations(params: RRHParams) -> list[str]:
    if params.mode == "odd":
        out: list[str] = []
        if params.a % 2 == 0:
            out.append(f"multiplier must be odd, got {params.a}")
        elif (params.a * params.a_inv) & MASK32 != 1:
            out.append("a_inv is not the inverse of a modulo 2^32")
        return out

    p = params.prime
    if p is None or p <= MASK32:
        return [f"prime modulus must exceed 2^32-1, got {p}"]
    if p - MASK32 > MAX_PRIME_GAP:
        return [f"prime modulus must be within {MAX_PRIME_GAP} of 2^32, got {p}"]
    if math.gcd(params.a, p) != 1 or (params.a * params.a_inv) % p != 1:
        return [f"multiplier {params.a} is not invertible modulo {p}"]

    # Residues above 32 bits come from the preimages of [2^32, p); they must
    # all lie outside the 32-bit range for the map to stay within 32 bits.
    escaping = [
        y for y in range(MASK32 + 1, p)
        if (params.a_inv * y) % p <= MASK32
    ]
    if escaping:
        return [f"mangled residues exceed 32 bits for {len(escaping)} addresses"]
    return []


# ---------------------------------------------------------------------
# Mangling
# ---------------------------------------------------------------------

def mangle(ip: int, params: RRHParams) -> int:
    """
    Bijective scrambling of a 32-bit address.

    Args:
        ip: Address as an int.
        params: RRHParams

    Returns:
        Mangled 32-bit value.
    """
    if params.mode == "prime":
        return (params.a * (ip & MASK32)) % params.prime
    return (params.a * ip) & MASK32


def unmangle(h: int, params: RRHParams) -> int:
    """
    Inverse of ``mangle``.

    Args:
        h: Mangled value.
        params: RRHParams

    Returns:
        Original 32-bit address.
    """
    if params.mode == "prime":
        return (params.a_inv * h) % params.prime
    return (params.a_inv * h) & MASK32


def mangle_array(ips: np.ndarray, params: RRHParams) -> np.ndarray:
    """
    Vectorized ``mangle``; products of two 32-bit values fit in uint64.
    """
    values = np.asarray(ips).astype(np.uint64) & np.uint64(MASK32)
    with np.errstate(over="ignore"):
        product = values * np.uint64(params.a)
    if params.mode == "prime":
        return product % np.uint64(params.prime)
    return product & np.uint64(MASK32)


# ---------------------------------------------------------------------
# Digest and restore
# ---------------------------------------------------------------------

def digest(ip: int, params: RRHParams) -> RRHDigest:
    """
    Frame and column indices of a host.

    Args:
        ip: Host address.
        params: RRHParams

    Returns:
        RRHDigest
    """
    h = mangle(ip, params)
    lbs = h >> params.u
    geo = params.geometry
    col_mask = (1 << params.c) - 1

    columns = tuple(
        _rotr(lbs, offset, geo.lbits) & col_mask
        for offset in geo.offsets
    )
    return RRHDigest(frame=h & ((1 << params.u) - 1), columns=columns)


def digest_array(ips: np.ndarray, params: RRHParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorized ``digest``.

    Args:
        ips: Host addresses.
        params: RRHParams

    Returns:
        (frames, columns) with frames shaped (n,) and columns shaped (r, n), int64.
    """
    h = mangle_array(ips, params)
    u = np.uint64(params.u)
    lbs = h >> u
    geo = params.geometry
    lbits = geo.lbits
    lmask = np.uint64((1 << lbits) - 1)
    col_mask = np.uint64((1 << params.c) - 1)

    columns = np.empty((params.r, lbs.shape[0]), dtype=np.int64)
    for row, offset in enumerate(geo.offsets):
        if offset == 0:
            rotated = lbs
        else:
            rotated = ((lbs >> np.uint64(offset)) | (lbs << np.uint64(lbits - offset))) & lmask
        columns[row] = (rotated & col_mask).astype(np.int64)

    frames = (h & np.uint64((1 << params.u) - 1)).astype(np.int64)
    return frames, columns


def restore_lbs(columns: Sequence[int], params: RRHParams) -> int | None:
    """
    Rebuild the left bit set from one column index per row.

    Args:
        columns: r column indices.
        params: RRHParams

    Returns:
        The left bit set, or None when the duplicate positions disagree.
    """
    geo = params.geometry
    bits = 0
    seen = 0

    for row, x in enumerate(columns):
        placed = _rotl(x, geo.offsets[row], geo.lbits)
        overlap = seen & geo.row_masks[row]
        if (bits ^ placed) & overlap:
            return None
        bits |= placed
        seen |= geo.row_masks[row]

    return bits


def restore_ip(lbs: int, frame: int, params: RRHParams) -> int:
    """
    Host address from its left bit set and frame.

    Args:
        lbs: Left bit set, 32 - u bits.
        frame: Frame index.
        params: RRHParams

    Returns:
        The original address.
    """
    return unmangle((lbs << params.u) | frame, params)


def consistent_tuples(
    super_columns: Sequence[Iterable[int]],
    params: RRHParams,
) -> list[int]:
    """
    Left bit sets of every consistent tuple drawn from per-row candidates.

    Rows are fixed one at a time and a partial tuple is dropped as soon as its
    duplicate positions disagree, which visits far fewer tuples than the full
    Cartesian product while producing the same survivors.

    Args:
        super_columns: Candidate column indices, one collection per row.
        params: RRHParams

    Returns:
        Left bit sets, in row-major candidate order.
    """
    geo = params.geometry
    per_row = [
        [(_rotl(int(x), geo.offsets[row], geo.lbits), geo.row_masks[row]) for x in sorted(cols)]
        for row, cols in enumerate(super_columns)
    ]

    partial: list[tuple[int, int]] = [(0, 0)]
    for candidates in per_row:
        extended: list[tuple[int, int]] = []
        for bits, seen in partial:
            for placed, mask in candidates:
                if (bits ^ placed) & seen & mask:
                    continue
                extended.append((bits | placed, seen | mask))
        partial = extended
        if not partial:
            break

    return [bits for bits, _ in partial]


def peer_index(bip: int, g: int, params: RRHParams) -> int:
    """
    Counter index of a peer, ``bh`` keyed with the parameters' seed.
    """
    return bh(bip, g, params.bh_seed)


def _rotr(x: int, n: int, width: int) -> int:
    if n == 0:
        return x
    mask = (1 << width) - 1
    return ((x >> n) | (x << (width - n))) & mask


def _rotl(x: int, n: int, width: int) -> int:
    if n == 0:
        return x
    mask = (1 << width) - 1
    return ((x << n) | (x >> (width - n))) & mask
