# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
import numpy as np

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.domain.events import PairEvent
from superpoint.domain.synthetic import BackgroundSpec, BoundarySpec, SyntheticSpec
from superpoint.exceptions import SpecError


ADDRESS_SPACE = 1 << 32
MAX_CARDINALITY = ADDRESS_SPACE - 1


def distinct_addresses(
    rng: np.random.Generator,
    n: int,
    exclude: np.ndarray | None = None,
) -> np.ndarray:
    """
    Draw ``n`` distinct 32-bit addresses in random order.

    Args:
        rng: Generator
        n: Addresses wanted.
        exclude: Addresses that must not be drawn.

    Returns:
        uint64 array of length n.
    """
    if n > MAX_CARDINALITY:
        raise SpecError(f"cannot draw {n} distinct addresses from a 32-bit space")
    if n == 0:
        return np.empty(0, dtype=np.uint64)

    banned = np.unique(np.asarray(exclude, dtype=np.uint64)) if exclude is not None else None
    pool = np.empty(0, dtype=np.uint64)

    while pool.size < n:
        want = n - pool.size
        draw = rng.integers(0, ADDRESS_SPACE, size=want + want // 8 + 16, dtype=np.uint64)
        pool = np.union1d(pool, draw)
        if banned is not None and banned.size:
            pool = np.setdiff1d(pool, banned, assume_unique=True)

    return rng.permutation(pool)[:n]


def _assemble(parts: list[tuple[np.ndarray, np.ndarray, np.ndarray]]) -> list[PairEvent]:
    if not parts:
        return []

    slices = np.concatenate([p[0] for p in parts])
    aips = np.concatenate([p[1] for p in parts])
    bips = np.concatenate([p[2] for p in parts])

    order = np.argsort(slices, kind="stable")
    return [
        PairEvent(slice=int(s), aip=int(a), bip=int(b))
        for s, a, b in zip(slices[order], aips[order], bips[order])
    ]


def _host_events(
    rng: np.random.Generator,
    ip: int,
    peers: np.ndarray,
    start: int,
    end: int,
    repeat_rate: float = 0.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    slices = rng.integers(start, end, size=peers.size)
    bips = peers

    repeats = int(round(peers.size * repeat_rate))
    if repeats and peers.size:
        again = peers[rng.integers(0, peers.size, size=repeats)]
        bips = np.concatenate([bips, again])
        slices = np.concatenate([slices, rng.integers(start, end, size=repeats)])

    aips = np.full(bips.size, ip, dtype=np.uint64)
    return slices.astype(np.int64), aips, bips.astype(np.uint64)


def _degrees(rng: np.random.Generator, spec: BackgroundSpec) -> np.ndarray:
    if spec.distribution == "pareto":
        raw = spec.min_degree * (1.0 + rng.pareto(spec.pareto_shape, size=spec.hosts))
        return np.minimum(np.floor(raw), spec.max_degree).astype(np.int64)
    return rng.integers(spec.min_degree, spec.max_degree + 1, size=spec.hosts)


def _background(
    rng: np.random.Generator,
    spec: BackgroundSpec,
    slices: int,
    reserved: np.ndarray,
    repeat_rate: float,
) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    if spec.hosts == 0:
        return []

    hosts = distinct_addresses(rng, spec.hosts, exclude=reserved)
    degrees = _degrees(rng, spec)
    span = min(spec.span, slices)

    parts = []
    for ip, degree in zip(hosts, degrees):
        start = int(rng.integers(0, slices - span + 1))
        peers = distinct_addresses(rng, int(degree))
        parts.append(_host_events(rng, int(ip), peers, start, start + span, repeat_rate))
    return parts


def generate_synthetic(spec: SyntheticSpec) -> list[PairEvent]:
    """
    Synthetic trace with planted super points.

    Every planted host contacts exactly its cardinality of distinct peers within
    its span. The output depends on the trace spec alone.

    Args:
        spec: SyntheticSpec

    Returns:
        Events sorted by slice.

    Raises:
        SpecError: when a planted cardinality exceeds the address space.
    """
    for host in spec.planted:
        if host.cardinality > MAX_CARDINALITY:
            raise SpecError(f"planted host {host.ip} asks for {host.cardinality} peers")

    rng = np.random.default_rng(spec.seed)
    planted_ips = np.array([int(h.ip) for h in spec.planted], dtype=np.uint64)

    parts = []
    for host in spec.planted:
        peers = distinct_addresses(rng, host.cardinality)
        parts.append(_host_events(rng, int(host.ip), peers, host.start, host.end, spec.repeat_rate))

    parts.extend(_background(rng, spec.background, spec.slices, planted_ips, spec.repeat_rate))
    return _assemble(parts)


def boundary_spanner(spec: BoundarySpec) -> list[PairEvent]:
    """
    A host whose peers are split across one slice boundary.

    ``per_side`` peers fall in [boundary - burst, boundary) and ``per_side`` fresh
    peers in [boundary, boundary + burst).

    Args:
        spec: BoundarySpec

    Returns:
        Events sorted by slice.
    """
    rng = np.random.default_rng(spec.seed)
    ip = int(spec.ip)

    peers = distinct_addresses(rng, 2 * spec.per_side)
    parts = [
        _host_events(rng, ip, peers[: spec.per_side], spec.boundary - spec.burst, spec.boundary),
        _host_events(rng, ip, peers[spec.per_side:], spec.boundary, spec.boundary + spec.burst),
    ]

    parts.extend(_background(rng, spec.background, spec.slices, np.array([ip], dtype=np.uint64), 0.0))
    return _assemble(parts)
